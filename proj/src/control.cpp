#include "spinrestore/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "spinrestore/diagnostics.hpp"
#include "spinrestore/parallel.hpp"
#include "spinrestore/random.hpp"

namespace spinrestore {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_phi(std::span<const double> phi, int n_er) {
    if (n_er < 1) throw std::invalid_argument(fmt::format("extended receiver size must be positive, got {}", n_er));
    const auto expected = static_cast<std::size_t>(n_er) * static_cast<std::size_t>(n_er - 1);
    if (phi.size() != expected)
        throw std::invalid_argument(fmt::format("control needs {} angles for N_ER={}, got {}", expected, n_er, phi.size()));
}

// Right-multiplies `rows` by each factor exp(i phi_j A_j) in canonical order.
// Column operations act row by row, so any subset of rows of U1 can be built.
void apply_factors(Eigen::MatrixXcd& rows, std::span<const double> phi, int n_er) {
    std::size_t j = 0;
    for (int p = 0; p < n_er; ++p) {
        for (int q = p + 1; q < n_er; ++q) {
            {
                // exp(i phi sigma_x) = [[c, i s], [i s, c]]
                const double c = std::cos(phi[j]), s = std::sin(phi[j]);
                ++j;
                const Eigen::VectorXcd cp = rows.col(p), cq = rows.col(q);
                rows.col(p) = c * cp + cplx(0, s) * cq;
                rows.col(q) = cplx(0, s) * cp + c * cq;
            }
            {
                // exp(i phi sigma_y) = [[c, s], [-s, c]]
                const double c = std::cos(phi[j]), s = std::sin(phi[j]);
                ++j;
                const Eigen::VectorXcd cp = rows.col(p), cq = rows.col(q);
                rows.col(p) = c * cp - s * cq;
                rows.col(q) = s * cp + c * cq;
            }
        }
    }
}

ScaleFactors extract_scale(const TransferSlice& slice) {
    const auto& b = slice.b;
    ScaleFactors out;
    out.lambda1 = b.diagonal();
    out.lambda0 = out.lambda1 * out.lambda1.adjoint();
    double off = 0.0;
    for (Eigen::Index n = 0; n < b.rows(); ++n)
        for (Eigen::Index m = 0; m < b.cols(); ++m)
            if (n != m) off += std::norm(b(n, m));
    out.approximate = std::sqrt(off) > slice_diagonal_tol;
    return out;
}

double wrap_angle(double x) {
    double w = std::fmod(x, two_pi);
    if (w < 0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

} // namespace

std::vector<GeneratorIndex> generator_basis(int n_er) {
    std::vector<GeneratorIndex> out;
    for (int p = 0; p < n_er; ++p)
        for (int q = p + 1; q < n_er; ++q) {
            out.push_back({p, q, GeneratorKind::symmetric_real});
            out.push_back({p, q, GeneratorKind::antisymmetric_imaginary});
        }
    return out;
}

Eigen::MatrixXcd generator_matrix(const GeneratorIndex& g, int n_er) {
    if (g.p < 0 || g.q <= g.p || g.q >= n_er) throw std::invalid_argument("generator index out of range");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_er, n_er);
    if (g.kind == GeneratorKind::symmetric_real) {
        a(g.p, g.q) = 1.0;
        a(g.q, g.p) = 1.0;
    } else {
        a(g.p, g.q) = cplx(0, -1);
        a(g.q, g.p) = cplx(0, 1);
    }
    return a;
}

Eigen::MatrixXcd control_unitary(std::span<const double> phi, int n_er) {
    check_phi(phi, n_er);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n_er, n_er);
    apply_factors(u, phi, n_er);
    return u;
}

CompositeTransform composite_transform(const Propagator& v1, const Eigen::MatrixXcd& u1, const Layout& layout) {
    const auto n = v1.v1.rows();
    if (v1.v1.cols() != n || n != layout.n)
        throw std::invalid_argument(fmt::format("propagator is {}x{}, layout has N={}", v1.v1.rows(), v1.v1.cols(), layout.n));
    if (u1.rows() != layout.n_er || u1.cols() != layout.n_er)
        throw std::invalid_argument(fmt::format("control unitary is {}x{}, layout has N_ER={}", u1.rows(), u1.cols(), layout.n_er));
    CompositeTransform w{v1.tau, v1.v1};
    w.w1.bottomRows(layout.n_er) = u1 * v1.v1.bottomRows(layout.n_er);
    return w;
}

TransferSlice transfer_slice(const CompositeTransform& w, const Layout& layout) {
    return {w.w1.bottomRows(layout.n_r).leftCols(layout.n_s)};
}

ScaleFactors scale_factors(const TransferSlice& slice) {
    auto out = extract_scale(slice);
    if (out.approximate) warn("slice not diagonal; lambda approximate");
    return out;
}

RestoringProblem::RestoringProblem(const Layout& layout, const Propagator& v1)
    : layout_(layout), tau_(v1.tau), v1_(v1.v1) {
    layout_.validate();
    if (v1_.rows() != layout_.n || v1_.cols() != layout_.n)
        throw std::invalid_argument(fmt::format("propagator is {}x{}, layout has N={}", v1_.rows(), v1_.cols(), layout_.n));
    er_from_sender_ = v1_.bottomRows(layout_.n_er).leftCols(layout_.n_s);
}

TransferSlice RestoringProblem::slice(std::span<const double> phi) const {
    check_phi(phi, layout_.n_er);
    Eigen::MatrixXcd rows = Eigen::MatrixXcd::Identity(layout_.n_er, layout_.n_er).bottomRows(layout_.n_r);
    apply_factors(rows, phi, layout_.n_er);
    return {rows * er_from_sender_};
}

Eigen::VectorXd RestoringProblem::residual(std::span<const double> phi) const {
    const auto b = slice(phi).b;
    Eigen::VectorXd r(residual_count());
    Eigen::Index k = 0;
    for (Eigen::Index n = 0; n < b.rows(); ++n)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (n != j) {
                r(k++) = b(n, j).real();
                r(k++) = b(n, j).imag();
            }
    return r;
}

CompositeTransform RestoringProblem::transform(std::span<const double> phi) const {
    return composite_transform(Propagator{tau_, v1_}, control_unitary(phi, layout_.n_er), layout_);
}

Eigen::VectorXd restore_residual(std::span<const double> phi, double tau, const Layout& layout) {
    layout.validate();
    return RestoringProblem(layout, ChainDynamics(layout.n).at(tau)).residual(phi);
}

std::vector<double> initial_angles(int count, std::uint64_t seed, int start_index) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(start_index));
    std::vector<double> phi(static_cast<std::size_t>(count));
    for (auto& x : phi) x = two_pi * uniform01(rng);
    return phi;
}

SolveResult solve_from(const RestoringProblem& problem, std::vector<double> phi0, const SolverOptions& options) {
    const int n_par = problem.parameter_count();
    const int n_res = problem.residual_count();
    if (static_cast<int>(phi0.size()) != n_par)
        throw std::invalid_argument(fmt::format("start has {} angles, problem needs {}", phi0.size(), n_par));

    SolveResult out;
    out.tau = problem.tau();
    std::vector<double> x = std::move(phi0);
    Eigen::VectorXd r = problem.residual(x);
    double cost = r.squaredNorm();

    if (n_res > 0) {
        Eigen::MatrixXd jac(n_res, n_par);
        std::vector<double> probe = x;
        double mu = -1.0;
        double nu = 2.0;
        int iter = 0;
        for (; iter < options.max_iterations; ++iter) {
            if (std::sqrt(cost) < options.converge_tol) break;
            for (int k = 0; k < n_par; ++k) {
                probe = x;
                probe[k] = x[k] + options.fd_step;
                const Eigen::VectorXd up = problem.residual(probe);
                probe[k] = x[k] - options.fd_step;
                jac.col(k) = (up - problem.residual(probe)) / (2.0 * options.fd_step);
            }
            // Fewer equations than angles: solve the small n_res x n_res normal
            // system (J J^T + mu I) y = r and step along -J^T y.
            const Eigen::MatrixXd jjt = jac * jac.transpose();
            if (mu < 0) mu = 1e-3 * std::max(jjt.diagonal().maxCoeff(), 1e-12);
            bool stepped = false;
            while (!stepped) {
                Eigen::MatrixXd lhs = jjt;
                lhs.diagonal().array() += mu;
                const Eigen::VectorXd y = lhs.ldlt().solve(r);
                const Eigen::VectorXd dx = -jac.transpose() * y;
                if (dx.norm() < 1e-15 * (1.0 + Eigen::Map<const Eigen::VectorXd>(x.data(), n_par).norm())) break;
                std::vector<double> trial(x);
                for (int k = 0; k < n_par; ++k) trial[k] += dx(k);
                const Eigen::VectorXd r_trial = problem.residual(trial);
                const double cost_trial = r_trial.squaredNorm();
                const double predicted = cost - (r + jac * dx).squaredNorm();
                const double gain = predicted > 0 ? (cost - cost_trial) / predicted : -1.0;
                if (gain > 0 && cost_trial < cost) {
                    x = std::move(trial);
                    r = r_trial;
                    cost = cost_trial;
                    mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * gain - 1.0, 3));
                    nu = 2.0;
                    stepped = true;
                } else {
                    mu *= nu;
                    nu *= 2.0;
                    if (mu > 1e16) break;
                }
            }
            if (!stepped) break;
        }
        out.iterations = iter;
    }

    for (auto& v : x) v = wrap_angle(v);
    r = problem.residual(x);
    out.residual_norm = r.norm();
    out.converged = out.residual_norm < options.accept_tol;
    out.scale = extract_scale(problem.slice(x));
    out.phi = std::move(x);
    return out;
}

std::vector<SolveResult> solve_restoring(const RestoringProblem& problem, int starts, std::uint64_t seed,
                                         const SolverOptions& options, int threads) {
    if (starts < 1) throw std::invalid_argument(fmt::format("need at least one start, got {}", starts));
    std::vector<SolveResult> results(static_cast<std::size_t>(starts));
    parallel_for(results.size(), threads, [&](std::size_t i) {
        const int start = static_cast<int>(i);
        auto res = solve_from(problem, initial_angles(problem.parameter_count(), seed, start), options);
        res.start_index = start;
        res.seed = seed;
        results[i] = std::move(res);
    });
    std::stable_sort(results.begin(), results.end(), [](const SolveResult& a, const SolveResult& b) {
        if (a.residual_norm != b.residual_norm) return a.residual_norm < b.residual_norm;
        return a.start_index < b.start_index;
    });
    return results;
}

std::vector<SolveResult> solve_restoring(double tau, const Layout& layout, int starts, std::uint64_t seed,
                                         const SolverOptions& options, int threads) {
    layout.validate();
    return solve_restoring(RestoringProblem(layout, ChainDynamics(layout.n).at(tau)), starts, seed, options, threads);
}

} // namespace spinrestore

#include "spinrestore/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "spinrestore/diagnostics.hpp"

namespace spinrestore {

namespace {

constexpr double imaginary_residue_tol = 1e-10;
constexpr double rank_tol_factor = 64 * std::numeric_limits<double>::epsilon();

void validate_two_qubit(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument(fmt::format("two-qubit density matrix must be 4x4, got {}x{}", rho.rows(), rho.cols()));
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol)
        throw std::invalid_argument("two-qubit matrix is not Hermitian");
    if (std::abs(rho.trace() - 1.0) > trace_tol) throw std::invalid_argument("two-qubit matrix does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol) throw std::invalid_argument("two-qubit matrix is not positive semidefinite");
}

Eigen::Matrix4cd spin_flip() {
    // sigma_y (x) sigma_y
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

} // namespace

std::array<double, 4> wootters_spectrum(const Eigen::MatrixXcd& rho2) {
    validate_two_qubit(rho2);
    const Eigen::Matrix4cd rho = rho2;
    const Eigen::Matrix4cd yy = spin_flip();

    // rho = A A^dagger with eigenvalues below the numerical rank threshold dropped, so
    // null directions do not pick up sqrt(roundoff). The R eigenvalues are then the
    // singular values of the complex symmetric M = A^T (sy x sy) A.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const double rank_tol = rank_tol_factor * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::Vector4d roots;
    for (int k = 0; k < 4; ++k) roots(k) = es.eigenvalues()(k) > rank_tol ? std::sqrt(es.eigenvalues()(k)) : 0.0;
    const Eigen::Matrix4cd a = es.eigenvectors() * roots.cast<cplx>().asDiagonal();
    const Eigen::Matrix4cd m = a.transpose() * yy * a;

    const double residue = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (residue > imaginary_residue_tol) warn(fmt::format("Wootters form has imaginary residue {:.3e}", residue));

    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) out[k] = svd.singularValues()(k);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double wootters_concurrence(const Eigen::MatrixXcd& rho2) {
    const auto l = wootters_spectrum(rho2);
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

PairConcurrence pair_concurrence(const ExcitationState& state, int i, int j) {
    if (i == j) throw std::invalid_argument(fmt::format("concurrence needs two distinct spins, got {} twice", i));
    const std::array keep{i, j};
    const auto reduced = partial_trace(state, keep);
    return {i, j, std::min(1.0, 2.0 * std::abs(reduced(1, 2)))};
}

double concurrence_ratio(const ExcitationState& sender, const ExcitationState& receiver, int i, int j) {
    const double cs = pair_concurrence(sender, i, j).value;
    if (cs <= 1e-15) throw UndefinedRatio(fmt::format("sender pair ({}, {}) has zero concurrence", i, j));
    return pair_concurrence(receiver, i, j).value / cs;
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int qubit_count, std::size_t mask) {
    const auto size = static_cast<Eigen::Index>(std::size_t{1} << qubit_count);
    if (rho.rows() != size || rho.cols() != size)
        throw std::invalid_argument(fmt::format("expected a {0}x{0} matrix for {1} qubits", size, qubit_count));
    Eigen::MatrixXcd out(size, size);
    for (Eigen::Index x = 0; x < size; ++x)
        for (Eigen::Index y = 0; y < size; ++y) {
            const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
            const auto swapped = (ux ^ uy) & mask;
            out(static_cast<Eigen::Index>(ux ^ swapped), static_cast<Eigen::Index>(uy ^ swapped)) = rho(x, y);
        }
    return out;
}

NegativityReport double_negativity_full(const Eigen::MatrixXcd& rho, int n_s, int n_r) {
    if (n_s < 1 || n_r < 1) throw std::invalid_argument("both parties need at least one spin");
    const int n = n_s + n_r;
    const std::size_t sender_mask = (std::size_t{1} << n_s) - 1;
    const Eigen::MatrixXcd pt = partial_transpose(rho, n, sender_mask);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    NegativityReport report;
    double sum = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double ev = es.eigenvalues()(k);
        if (ev < -negativity_cutoff) {
            report.negative_eigenvalues.push_back(ev);
            sum += -ev;
        }
    }
    report.value = 2.0 * sum;
    return report;
}

NegativityReport double_negativity(const ExcitationState& rho_sr, int n_s, int n_r) {
    if (rho_sr.dim() != n_s + n_r)
        throw std::invalid_argument(fmt::format("state covers {} spins, split is {} + {}", rho_sr.dim(), n_s, n_r));
    return double_negativity_full(embed_computational(rho_sr, rho_sr.dim()), n_s, n_r);
}

} // namespace spinrestore

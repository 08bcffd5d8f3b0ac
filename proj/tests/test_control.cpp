#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "spinrestore/control.hpp"
#include "spinrestore/diagnostics.hpp"
#include "spinrestore/protocols.hpp"
#include "support.hpp"

using namespace spinrestore;
namespace t = spinrestore::testing;

namespace {

double unitarity_defect(const Eigen::MatrixXcd& u) {
    return (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff();
}

std::vector<double> random_phi(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    std::vector<double> phi(count);
    for (auto& x : phi) x = u(rng);
    return phi;
}

struct CapturedWarnings {
    std::vector<std::string> messages;
    WarningSink previous;
    CapturedWarnings() {
        previous = set_warning_sink([this](std::string_view m) { messages.emplace_back(m); });
    }
    ~CapturedWarnings() { set_warning_sink(std::move(previous)); }
};

} // namespace

TEST_CASE("generator basis") {
    for (int n = 2; n <= 6; ++n) {
        const auto gens = generator_basis(n);
        REQUIRE(static_cast<int>(gens.size()) == n * (n - 1));
        // Real-vectorize each generator; full rank means linear independence.
        Eigen::MatrixXd stacked(2 * n * n, gens.size());
        for (std::size_t k = 0; k < gens.size(); ++k) {
            const auto a = generator_matrix(gens[k], n);
            CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
            CHECK((a.array() != cplx(0.0)).count() == 2);
            Eigen::Map<const Eigen::VectorXcd> flat(a.data(), n * n);
            stacked.col(static_cast<Eigen::Index>(k)) << flat.real(), flat.imag();
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
        CHECK(lu.rank() == n * (n - 1));
    }
    const auto g3 = generator_basis(3);
    CHECK(g3[0].p == 0);
    CHECK(g3[0].q == 1);
    CHECK(g3[0].kind == GeneratorKind::symmetric_real);
    CHECK(g3[1].kind == GeneratorKind::antisymmetric_imaginary);
    CHECK(g3[2].q == 2);
}

TEST_CASE("control unitary") {
    SUBCASE("zero angles give the identity") {
        const std::vector<double> phi(12, 0.0);
        CHECK((control_unitary(phi, 4) - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("single symmetric factor on (1,2)") {
        std::vector<double> phi(6, 0.0);
        const double a = 0.83;
        phi[0] = a;
        const auto u = control_unitary(phi, 3);
        CHECK(std::abs(u(0, 0) - std::cos(a)) < 1e-15);
        CHECK(std::abs(u(0, 1) - cplx(0, std::sin(a))) < 1e-15);
        CHECK(std::abs(u(1, 0) - cplx(0, std::sin(a))) < 1e-15);
        CHECK(std::abs(u(1, 1) - std::cos(a)) < 1e-15);
        CHECK(std::abs(u(2, 2) - 1.0) < 1e-15);
    }
    SUBCASE("ordered product of generator exponentials") {
        auto rng = t::rng_for(12);
        const int n = 4;
        const auto phi = random_phi(rng, n * (n - 1));
        const auto gens = generator_basis(n);
        Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Identity(n, n);
        for (std::size_t k = 0; k < gens.size(); ++k) {
            const Eigen::MatrixXcd a = cplx(0, phi[k]) * generator_matrix(gens[k], n);
            oracle = (oracle * a.exp()).eval();
        }
        CHECK((control_unitary(phi, n) - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("unitary for random angles") {
        auto rng = t::rng_for(13);
        for (int n = 2; n <= 6; ++n) CHECK(unitarity_defect(control_unitary(random_phi(rng, n * (n - 1)), n)) < 1e-12);
    }
    SUBCASE("wrong length") {
        const std::vector<double> phi(5, 0.0);
        CHECK_THROWS_AS(control_unitary(phi, 3), std::invalid_argument);
    }
}

TEST_CASE("composite transform and transfer slice") {
    const Layout layout{10, 2, 2, 3};
    const ChainDynamics dyn(10);
    auto rng = t::rng_for(14);

    SUBCASE("identity control leaves the propagator") {
        const auto v = dyn.at(4.0);
        const auto w = composite_transform(v, Eigen::MatrixXcd::Identity(3, 3), layout);
        CHECK((w.w1 - v.v1).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("at tau = 0 the control sits in the lower-right block") {
        const auto u = t::random_unitary(rng, 3);
        const auto w = composite_transform(dyn.at(0.0), u, layout);
        CHECK((w.w1.bottomRightCorner(3, 3) - u).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((w.w1.topLeftCorner(7, 7) - Eigen::MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-15);
        const std::vector<double> zero(6, 0.0);
        const RestoringProblem problem(layout, dyn.at(0.0));
        CHECK(problem.slice(zero).b.cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("unitary for random inputs") {
        for (int k = 0; k < 5; ++k) {
            const auto w = composite_transform(dyn.at(3.0 * k), t::random_unitary(rng, 3), layout);
            CHECK(unitarity_defect(w.w1) < 1e-12);
        }
    }
    SUBCASE("size mismatches") {
        CHECK_THROWS_AS(composite_transform(dyn.at(1.0), Eigen::MatrixXcd::Identity(4, 4), layout), std::invalid_argument);
        CHECK_THROWS_AS(composite_transform(ChainDynamics(9).at(1.0), Eigen::MatrixXcd::Identity(3, 3), layout),
                        std::invalid_argument);
    }
    SUBCASE("two-node slice is W(2,1)") {
        const Layout tiny{2, 1, 1, 1};
        const auto w = composite_transform(ChainDynamics(2).at(1.3), Eigen::MatrixXcd::Identity(1, 1), tiny);
        const auto b = transfer_slice(w, tiny).b;
        REQUIRE(b.rows() == 1);
        CHECK(b(0, 0) == w.w1(1, 0));
    }
    SUBCASE("fast slice equals the explicit composite") {
        const auto phi = random_phi(rng, 6);
        const RestoringProblem problem(layout, dyn.at(12.5));
        const auto direct = transfer_slice(composite_transform(dyn.at(12.5), control_unitary(phi, 3), layout), layout).b;
        CHECK((problem.slice(phi).b - direct).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(problem.slice(phi).b.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("restoring residual") {
    SUBCASE("one sender spin has nothing to solve") {
        const std::vector<double> phi(2, 0.3);
        CHECK(restore_residual(phi, 5.0, Layout{6, 1, 1, 2}).size() == 0);
    }
    SUBCASE("zero angles expose the bare corner of V1") {
        const Layout layout{10, 2, 2, 3};
        const std::vector<double> zero(6, 0.0);
        const auto r = restore_residual(zero, 7.5, layout);
        const auto v = ChainDynamics(10).at(7.5).v1;
        REQUIRE(r.size() == 4);
        CHECK(r(0) == doctest::Approx(v(8, 1).real()));
        CHECK(r(1) == doctest::Approx(v(8, 1).imag()));
        CHECK(r(2) == doctest::Approx(v(9, 0).real()));
        CHECK(r(3) == doctest::Approx(v(9, 0).imag()));
    }
}

TEST_CASE("scale factors") {
    SUBCASE("product of displayed magnitudes") {
        TransferSlice s{Eigen::MatrixXcd::Zero(2, 2)};
        s.b(0, 0) = std::polar(0.655, -0.094);
        s.b(1, 1) = std::polar(0.584, 1.783);
        const auto f = scale_factors(s);
        CHECK(std::abs(f.lambda0(0, 1)) == doctest::Approx(0.655 * 0.584));
        CHECK(std::abs(f.lambda0(0, 1)) == doctest::Approx(0.382).epsilon(0.002));
        CHECK(f.lambda0(0, 0).real() == doctest::Approx(0.655 * 0.655));
        CHECK(!f.approximate);
    }
    SUBCASE("unit factors") {
        TransferSlice s{Eigen::MatrixXcd::Identity(3, 3)};
        const auto f = scale_factors(s);
        CHECK((f.lambda0 - Eigen::MatrixXcd::Ones(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("rank one and diagonal for random diagonal slices") {
        auto rng = t::rng_for(15);
        for (int k = 0; k < 10; ++k) {
            TransferSlice s{Eigen::MatrixXcd::Zero(3, 3)};
            for (int n = 0; n < 3; ++n) s.b(n, n) = 0.5 * t::gaussian_c(rng);
            const auto f = scale_factors(s);
            for (int n = 0; n < 3; ++n) CHECK(f.lambda0(n, n).real() == doctest::Approx(std::norm(s.b(n, n))));
            CHECK((f.lambda0 - f.lambda0.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(f.lambda0);
            CHECK(lu.rank() == 1);
        }
    }
    SUBCASE("off-diagonal mass warns") {
        CapturedWarnings captured;
        TransferSlice s{Eigen::MatrixXcd::Identity(2, 2)};
        s.b(0, 1) = 1e-3;
        const auto f = scale_factors(s);
        CHECK(f.approximate);
        REQUIRE(captured.messages.size() == 1);
        CHECK(captured.messages[0] == "slice not diagonal; lambda approximate");
    }
}

TEST_CASE("solver") {
    const Layout layout{10, 2, 2, 3};

    SUBCASE("N=10, N_S=2, N_ER=3, tau=12.5 finds diagonal slices") {
        const auto results = solve_restoring(12.5, layout, 100, 7);
        REQUIRE(results.size() == 100);
        CHECK(results.front().residual_norm < 1e-8);
        for (std::size_t k = 1; k < results.size(); ++k) {
            const auto& a = results[k - 1];
            const auto& b = results[k];
            CHECK((a.residual_norm < b.residual_norm || (a.residual_norm == b.residual_norm && a.start_index < b.start_index)));
        }
        const RestoringProblem problem(layout, ChainDynamics(10).at(12.5));
        for (const auto& r : results) {
            CHECK(r.converged == (r.residual_norm < 1e-8));
            CHECK(r.phi.size() == 6);
            for (double x : r.phi) CHECK((x >= 0.0 && x < 2 * std::numbers::pi));
            if (!r.converged) continue;
            const auto b = problem.slice(r.phi).b;
            CHECK(std::abs(b(0, 1)) < 1e-8);
            CHECK(std::abs(b(1, 0)) < 1e-8);
            CHECK(problem.residual(r.phi).norm() < 1e-8);
            CHECK(std::abs(r.scale.lambda1(0) - b(0, 0)) < 1e-15);
            CHECK(r.scale.min_abs() <= 1.0);
        }
    }
    SUBCASE("one sender spin converges trivially") {
        const Layout single{6, 1, 1, 2};
        const auto results = solve_restoring(5.0, single, 8, 3);
        const RestoringProblem problem(single, ChainDynamics(6).at(5.0));
        for (const auto& r : results) {
            CHECK(r.converged);
            CHECK(r.residual_norm == 0.0);
            CHECK(r.iterations == 0);
            CHECK(r.scale.lambda1(0) == problem.slice(r.phi).b(0, 0));
        }
    }
    SUBCASE("deterministic for a fixed seed and independent of thread count") {
        const auto a = solve_restoring(9.0, layout, 20, 42);
        const auto b = solve_restoring(9.0, layout, 20, 42, {}, 4);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].start_index == b[k].start_index);
            CHECK(a[k].phi == b[k].phi);
            CHECK(a[k].residual_norm == b[k].residual_norm);
        }
        const auto c = solve_restoring(9.0, layout, 20, 43);
        CHECK(c.front().phi != a.front().phi);
    }
    SUBCASE("initial angles depend only on (seed, start)") {
        CHECK(initial_angles(6, 1, 3) == initial_angles(6, 1, 3));
        CHECK(initial_angles(6, 1, 3) != initial_angles(6, 1, 4));
        for (double x : initial_angles(50, 9, 0)) CHECK((x >= 0.0 && x < 2 * std::numbers::pi));
    }
    SUBCASE("bound violation is a configuration error") {
        CHECK_THROWS_AS(solve_restoring(1.0, Layout{10, 3, 3, 3}, 1, 0), ConfigError);
        CHECK_THROWS_AS(solve_restoring(1.0, layout, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("restored receiver state for arbitrary senders") {
    const Layout layout{10, 2, 2, 3};
    const RestoringProblem problem(layout, ChainDynamics(10).at(12.5));
    const auto results = solve_restoring(problem, 30, 5);
    const auto best = best_by_min_lambda(results);
    REQUIRE(best.has_value());
    const auto w = problem.transform(best->phi);
    const auto& lam = best->scale.lambda1;

    auto rng = t::rng_for(100);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = t::random_state(rng, 2);
        const auto r = receiver_state(s, w, layout);
        for (int n = 1; n <= 2; ++n) {
            const cplx expected = std::conj(lam(n - 1)) * s(0, n);
            CHECK(std::abs(r(0, n) - expected) <= 1e-6 * std::abs(expected));
            // lambda recovered from the evolved state does not depend on the sender.
            CHECK(std::abs(std::conj(r(0, n) / s(0, n)) - lam(n - 1)) < 1e-6);
            for (int m = 1; m <= 2; ++m) {
                const cplx e = lam(n - 1) * std::conj(lam(m - 1)) * s(n, m);
                CHECK(std::abs(r(n, m) - e) <= 1e-6 * std::abs(e));
            }
        }
        double r00 = s(0, 0).real();
        for (int n = 1; n <= 2; ++n) r00 += (1.0 - std::norm(lam(n - 1))) * s(n, n).real();
        CHECK(std::abs(r(0, 0).real() - r00) < 1e-10);
    }
}

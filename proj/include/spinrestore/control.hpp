#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinrestore/chain.hpp"
#include "spinrestore/excitation.hpp"

namespace spinrestore {

enum class GeneratorKind {
    symmetric_real,          // |p><q| + |q><p|
    antisymmetric_imaginary, // -i|p><q| + i|q><p|
};

/// One factor exp(i phi_j A_j) of the extended-receiver unitary; p < q, 0-based.
struct GeneratorIndex {
    int p = 0;
    int q = 0;
    GeneratorKind kind = GeneratorKind::symmetric_real;
};

/// Canonical factor order: pairs (p,q) lexicographically, symmetric-real before
/// antisymmetric-imaginary within a pair. n_er(n_er-1) entries.
std::vector<GeneratorIndex> generator_basis(int n_er);

/// Hermitian unit generator A_j for phi_j = 1.
Eigen::MatrixXcd generator_matrix(const GeneratorIndex& g, int n_er);

/// U1(phi) = prod_j exp(i phi_j A_j), leftmost factor j = 1.
Eigen::MatrixXcd control_unitary(std::span<const double> phi, int n_er);

/// W1 = diag(I, U1) V1: the control acts on the last n_er excitation coordinates.
struct CompositeTransform {
    double tau = 0.0;
    Eigen::MatrixXcd w1;
};

CompositeTransform composite_transform(const Propagator& v1, const Eigen::MatrixXcd& u1, const Layout& layout);

/// Receiver rows x sender columns of W1 (n_r x n_s).
struct TransferSlice {
    Eigen::MatrixXcd b;
};

TransferSlice transfer_slice(const CompositeTransform& w, const Layout& layout);

struct ScaleFactors {
    Eigen::VectorXcd lambda1; // B(n,n)
    Eigen::MatrixXcd lambda0; // lambda1 lambda1^dagger
    bool approximate = false; // slice had off-diagonal mass above 1e-6

    double min_abs() const { return lambda1.size() ? lambda1.cwiseAbs().minCoeff() : 0.0; }
};

inline constexpr double slice_diagonal_tol = 1e-6;

/// Warns through the diagnostics sink when the slice is not diagonal.
ScaleFactors scale_factors(const TransferSlice& slice);

/// Restoring residual for a fixed chain and time. Only the receiver rows of U1
/// enter the transfer slice, so evaluation costs O(n_r n_er^2).
class RestoringProblem {
public:
    RestoringProblem(const Layout& layout, const Propagator& v1);

    const Layout& layout() const { return layout_; }
    double tau() const { return tau_; }
    int parameter_count() const { return layout_.control_dim(); }
    int residual_count() const { return layout_.equation_count(); }

    TransferSlice slice(std::span<const double> phi) const;
    /// Real then imaginary part of each off-diagonal B(n,j), n != j, row-major.
    Eigen::VectorXd residual(std::span<const double> phi) const;
    CompositeTransform transform(std::span<const double> phi) const;

private:
    Layout layout_;
    double tau_;
    Eigen::MatrixXcd v1_;
    Eigen::MatrixXcd er_from_sender_; // V1 rows of the extended receiver, sender columns
};

Eigen::VectorXd restore_residual(std::span<const double> phi, double tau, const Layout& layout);

struct SolverOptions {
    double fd_step = 1e-7;
    int max_iterations = 500;
    double converge_tol = 1e-10;
    double accept_tol = 1e-8;
};

struct SolveResult {
    std::vector<double> phi;
    double residual_norm = 0.0;
    ScaleFactors scale;
    double tau = 0.0;
    int start_index = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged = false;
};

/// Initial angles for one start: uniform on [0, 2pi) from stream (seed, start_index).
std::vector<double> initial_angles(int count, std::uint64_t seed, int start_index);

/// Damped least squares from a single start.
SolveResult solve_from(const RestoringProblem& problem, std::vector<double> phi0, const SolverOptions& options = {});

/// `starts` independent minimizations, sorted by (residual_norm, start_index).
std::vector<SolveResult> solve_restoring(const RestoringProblem& problem, int starts, std::uint64_t seed,
                                         const SolverOptions& options = {}, int threads = 1);
std::vector<SolveResult> solve_restoring(double tau, const Layout& layout, int starts, std::uint64_t seed,
                                         const SolverOptions& options = {}, int threads = 1);

} // namespace spinrestore

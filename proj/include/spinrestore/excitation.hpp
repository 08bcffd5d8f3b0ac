#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinrestore {

using cplx = std::complex<double>;

inline constexpr double hermiticity_tol = 1e-12;
inline constexpr double trace_tol = 1e-12;
inline constexpr double psd_tol = 1e-10;

/// Density matrix restricted to the (0,1)-excitation sector of an n-spin system.
///
/// Basis index 0 is the vacuum |00...0>; index k >= 1 is the state with only
/// spin k excited. The constructor rejects matrices that are not Hermitian,
/// not unit-trace, or not positive semidefinite (within the tolerances above).
class ExcitationState {
public:
    explicit ExcitationState(Eigen::MatrixXcd matrix);

    static ExcitationState vacuum(int n);
    /// |psi><psi| for a normalized amplitude vector of length n+1.
    static ExcitationState pure(const Eigen::VectorXcd& amplitudes);

    int dim() const { return static_cast<int>(m_.rows()) - 1; }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    cplx operator()(int row, int col) const { return m_(row, col); }

    /// Probability that some spin is excited.
    double excitation_probability() const;

private:
    Eigen::MatrixXcd m_;
};

/// Entries of an ExcitationState belonging to one coherence order, stored at
/// their original positions in an (n+1)x(n+1) matrix that is zero elsewhere.
///
/// Order +1 is row 0 without the corner, order -1 is column 0 without the
/// corner, order 0 is the corner entry plus the n x n excitation block.
struct CoherenceBlock {
    int order = 0;
    Eigen::MatrixXcd entries;
};

CoherenceBlock coherence_block(const ExcitationState& state, int order);

/// Sum of blocks; inverse of splitting a state into orders -1, 0, +1.
Eigen::MatrixXcd assemble(std::span<const CoherenceBlock> blocks);

/// Index of basis state |k> in the 2^n computational basis: spin k is bit k-1.
inline std::size_t computational_index(int k) { return k == 0 ? 0 : std::size_t{1} << (k - 1); }

Eigen::MatrixXcd embed_computational(const ExcitationState& state, int qubit_count);

/// Reads the (0,1)-sector entries back out of a 2^n x 2^n matrix.
Eigen::MatrixXcd restrict_to_excitation_sector(const Eigen::MatrixXcd& full, int qubit_count);

/// Reduced state over the spins in `keep` (1-based, distinct). Spin keep[i]
/// becomes spin i+1 of the result.
ExcitationState partial_trace(const ExcitationState& state, std::span<const int> keep);

/// Sender state on nodes 1..sender.dim() of an n-node chain whose remaining
/// nodes are in the vacuum.
ExcitationState sender_embed(const ExcitationState& sender, int n);

/// W rho W^dagger with W = diag(1, w1).
ExcitationState evolve(const ExcitationState& state, const Eigen::MatrixXcd& w1);

} // namespace spinrestore

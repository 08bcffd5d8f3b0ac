#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spinrestore/excitation.hpp"

namespace spinrestore {

class UndefinedRatio : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PairConcurrence {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

struct NegativityReport {
    double value = 0.0;
    std::vector<double> negative_eigenvalues;
};

inline constexpr double negativity_cutoff = 1e-12;

/// Descending eigenvalues of R = sqrt(rho (sy x sy) rho* (sy x sy)) for a
/// two-qubit density matrix. With rho = A A^dagger these are the singular
/// values of A^T (sy x sy) A, whose squares are the eigenvalues of rho rho~.
std::array<double, 4> wootters_spectrum(const Eigen::MatrixXcd& rho2);

/// max(0, l1 - l2 - l3 - l4) over wootters_spectrum.
double wootters_concurrence(const Eigen::MatrixXcd& rho2);

/// Concurrence of spins i and j (1-based, i != j): 2|s_ij| of the reduced state.
PairConcurrence pair_concurrence(const ExcitationState& state, int i, int j);

/// C(receiver)_ij / C(sender)_ij. Throws UndefinedRatio when the sender pair
/// carries no concurrence.
double concurrence_ratio(const ExcitationState& sender, const ExcitationState& receiver, int i, int j);

/// Transposes the qubits whose bits are set in `mask` of a 2^n x 2^n matrix.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int qubit_count, std::size_t mask);

/// Twice the absolute sum of negative eigenvalues of rho^{T_S}, with the
/// sender on spins 1..n_s and the receiver on spins n_s+1..n_s+n_r.
NegativityReport double_negativity(const ExcitationState& rho_sr, int n_s, int n_r);

/// Same quantity for an arbitrary 2^(n_s+n_r) density matrix.
NegativityReport double_negativity_full(const Eigen::MatrixXcd& rho, int n_s, int n_r);

} // namespace spinrestore

#pragma once

// Test-only generators and brute-force oracles over the full 2^N Hilbert space.
// Nothing here calls the closed-form paths it is used to check.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "spinrestore/excitation.hpp"

namespace spinrestore::testing {

using cplx = std::complex<double>;

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cplx gaussian_c(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

/// Random mixed (0,1) state of rank `rank` (full rank when 0).
inline ExcitationState random_state(std::mt19937_64& rng, int n, int rank = 0) {
    const int r = rank > 0 ? rank : n + 1;
    Eigen::MatrixXcd g(n + 1, r);
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k < r; ++k) g(i, k) = gaussian_c(rng);
    Eigen::MatrixXcd m = g * g.adjoint();
    m /= m.trace().real();
    m = (0.5 * (m + m.adjoint())).eval();
    return ExcitationState(m);
}

inline Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, int size) {
    Eigen::VectorXcd v(size);
    for (int k = 0; k < size; ++k) v(k) = gaussian_c(rng);
    return v / v.norm();
}

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) g(i, k) = gaussian_c(rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

/// Single-spin operator acting on spin k (1-based, bit k-1) of an n-spin register.
inline Eigen::MatrixXcd embed_spin_operator(const Eigen::Matrix2cd& op, int k, int n) {
    const std::size_t size = std::size_t{1} << n;
    const std::size_t bit = std::size_t{1} << (k - 1);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size, size);
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if (((x ^ y) & ~bit) == 0) out(x, y) = op((x & bit) ? 1 : 0, (y & bit) ? 1 : 0);
    return out;
}

/// H = sum_{j>i} D_ij (I_ix I_jx + I_iy I_jy) with I = sigma/2 and D_ij = |i-j|^-3,
/// built from spin operators in the full 2^n space.
inline Eigen::MatrixXcd full_xx_hamiltonian(int n) {
    Eigen::Matrix2cd ix, iy;
    ix << 0, 0.5, 0.5, 0;
    iy << 0, cplx(0, -0.5), cplx(0, 0.5), 0;
    const std::size_t size = std::size_t{1} << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const double d = 1.0 / std::pow(j - i, 3);
            h += d * (embed_spin_operator(ix, i, n) * embed_spin_operator(ix, j, n) +
                      embed_spin_operator(iy, i, n) * embed_spin_operator(iy, j, n));
        }
    return h;
}

inline Eigen::MatrixXcd full_propagator(int n, double tau) {
    const Eigen::MatrixXcd a = cplx(0, -tau) * full_xx_hamiltonian(n);
    return a.exp();
}

/// Brute-force partial trace of a 2^n matrix; keep[i] becomes bit i of the result.
inline Eigen::MatrixXcd full_partial_trace(const Eigen::MatrixXcd& rho, int n, const std::vector<int>& keep) {
    const int m = static_cast<int>(keep.size());
    const std::size_t out_size = std::size_t{1} << m;
    std::size_t keep_mask = 0;
    for (int k : keep) keep_mask |= std::size_t{1} << (k - 1);
    auto project = [&](std::size_t x) {
        std::size_t r = 0;
        for (int i = 0; i < m; ++i)
            if (x & (std::size_t{1} << (keep[i] - 1))) r |= std::size_t{1} << i;
        return r;
    };
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_size, out_size);
    const std::size_t size = std::size_t{1} << n;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if ((x & ~keep_mask) == (y & ~keep_mask)) out(project(x), project(y)) += rho(x, y);
    return out;
}

} // namespace spinrestore::testing

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinrestore/chain.hpp"
#include "spinrestore/control.hpp"
#include "spinrestore/excitation.hpp"

namespace spinrestore {

/// Sender, receiver and extended-receiver sizes shared by every chain length of a scan.
struct LayoutTemplate {
    int n_s = 2;
    int n_r = 2;
    int n_er = 3;

    Layout with_n(int n) const { return {n, n_s, n_r, n_er}; }
};

struct ScanConfig {
    std::vector<int> n_range;
    double tau_max_factor = 1.5;
    double tau_step = 0.25;
    int starts = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LambdaCurvePoint {
    int n = 0;
    double lambda_n = 0.0;
    double tau_n = 0.0;
    int best_start = -1;
    bool found = false;
};

/// {0, step, 2 step, ...} up to tau_max inclusive (with 1e-9 slack).
std::vector<double> tau_grid(double tau_max, double step);

/// Converged solution with the largest min_n |lambda1_n|; ties go to the lower start index.
std::optional<SolveResult> best_by_min_lambda(std::span<const SolveResult> results);

std::vector<LambdaCurvePoint> lambda_scan(const ScanConfig& config, const LayoutTemplate& layout, int threads = 1);

struct RatioRow {
    int i = 0; // 1-based sender spins, i < j
    int j = 0;
    double tau = 0.0;
    double ratio = 0.0;    // |lambda0_ij| = C(r)/C(s)
    double ratio_x2 = 0.0; // 2 |lambda0_ij|
    int start_index = -1;
    bool found = false;
};

/// Maximizes |lambda1_i lambda1_j| for every sender pair over the converged
/// solutions in `solutions`; ties go to smaller tau, then smaller start index.
std::vector<RatioRow> ratio_table(int n_s, std::span<const SolveResult> solutions);

std::vector<RatioRow> ratio_optimize(const Layout& layout, std::span<const double> taus, int starts, std::uint64_t seed,
                                     int threads = 1);

struct RatioSample {
    int start_index = 0;
    double ratio = 0.0;
    double ratio_x2 = 0.0;
};

/// Pair (i, j) ratio of every converged start at a single time, in start order.
std::vector<RatioSample> ratio_distribution(const Layout& layout, double tau, int i, int j, int starts, std::uint64_t seed,
                                            int threads = 1);

struct PureSenderSample {
    Eigen::VectorXcd amplitudes;
    std::vector<double> psi;
    std::vector<double> phi;

    ExcitationState state() const { return ExcitationState::pure(amplitudes); }
};

/// Hyperspherical amplitudes: a_0 = prod_k cos psi_k,
/// a_m = sin psi_m prod_{k>m} cos psi_k e^{i phi_m}.
PureSenderSample pure_sender_from_angles(std::span<const double> psi, std::span<const double> phi);

/// psi_k uniform on [0, pi/2], phi_k uniform on [0, 2 pi).
PureSenderSample sample_pure_sender(std::mt19937_64& rng, int n_s);

/// Stream used for the k-th sender sample of a run; disjoint from the solver start streams.
std::mt19937_64 sender_stream(std::uint64_t seed, int sample_index);

/// Sender-receiver state at time tau for a sender evolved through the control-augmented chain.
ExcitationState sender_receiver_state(const ExcitationState& sender, const CompositeTransform& w, const Layout& layout);
ExcitationState receiver_state(const ExcitationState& sender, const CompositeTransform& w, const Layout& layout);

struct NegativityPoint {
    double tau = 0.0;
    double mean_nsr = 0.0;
    int n_states = 0;
    double lambda_min = 0.0;
    int best_start = -1;
    bool found = false;
};

std::vector<NegativityPoint> negativity_profile(const Layout& layout, std::span<const double> taus, int starts,
                                                int n_states, std::uint64_t seed, int threads = 1);

/// Per-state double negativity at one time, using the best solution by min |lambda1|.
/// Empty when no start converges.
std::vector<double> negativity_samples(const Layout& layout, double tau, int starts, int n_states, std::uint64_t seed);

} // namespace spinrestore

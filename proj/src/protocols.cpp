#include "spinrestore/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "spinrestore/diagnostics.hpp"
#include "spinrestore/entanglement.hpp"
#include "spinrestore/parallel.hpp"
#include "spinrestore/random.hpp"

namespace spinrestore {

namespace {

// Sender samples draw from streams above every plausible start index.
constexpr std::uint64_t sender_stream_base = std::uint64_t{1} << 40;

bool better_min_lambda(const SolveResult& a, const SolveResult& b) {
    const double la = a.scale.min_abs(), lb = b.scale.min_abs();
    if (la != lb) return la > lb;
    return a.start_index < b.start_index;
}

std::vector<int> sender_receiver_spins(const Layout& layout) {
    std::vector<int> keep;
    for (int k = 1; k <= layout.n_s; ++k) keep.push_back(k);
    for (int k = layout.n - layout.n_r + 1; k <= layout.n; ++k) keep.push_back(k);
    return keep;
}

} // namespace

void ScanConfig::validate() const {
    if (n_range.empty()) throw ConfigError("scan needs at least one chain length");
    if (!(tau_step > 0)) throw ConfigError(fmt::format("tau_step must be positive, got {}", tau_step));
    if (!(tau_max_factor >= 0)) throw ConfigError(fmt::format("tau_max_factor must be non-negative, got {}", tau_max_factor));
    if (starts < 1) throw ConfigError(fmt::format("starts must be at least 1, got {}", starts));
}

std::vector<double> tau_grid(double tau_max, double step) {
    if (!(step > 0)) throw std::invalid_argument(fmt::format("tau step must be positive, got {}", step));
    if (tau_max < 0) throw std::invalid_argument(fmt::format("tau_max must be non-negative, got {}", tau_max));
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double tau = static_cast<double>(k) * step;
        if (tau > tau_max + 1e-9) break;
        out.push_back(tau);
    }
    return out;
}

std::optional<SolveResult> best_by_min_lambda(std::span<const SolveResult> results) {
    const SolveResult* best = nullptr;
    for (const auto& r : results) {
        if (!r.converged) continue;
        if (!best || better_min_lambda(r, *best)) best = &r;
    }
    if (!best) return std::nullopt;
    return *best;
}

std::vector<LambdaCurvePoint> lambda_scan(const ScanConfig& config, const LayoutTemplate& tmpl, int threads) {
    config.validate();
    std::vector<LambdaCurvePoint> curve;
    for (int n : config.n_range) {
        const Layout layout = tmpl.with_n(n);
        layout.validate();
        const ChainDynamics dynamics(n);
        const auto taus = tau_grid(config.tau_max_factor * n, config.tau_step);

        std::vector<std::optional<SolveResult>> per_tau(taus.size());
        parallel_for(taus.size(), threads, [&](std::size_t k) {
            const RestoringProblem problem(layout, dynamics.at(taus[k]));
            per_tau[k] = best_by_min_lambda(solve_restoring(problem, config.starts, config.seed));
        });

        // Strict improvement in grid order keeps the smaller tau on ties.
        LambdaCurvePoint point{n};
        for (const auto& best : per_tau) {
            if (!best) continue;
            const double lam = best->scale.min_abs();
            if (!point.found || lam > point.lambda_n) {
                point = {n, lam, best->tau, best->start_index, true};
            }
        }
        if (!point.found) warn(fmt::format("N={}: no converged restoring solution on the tau grid", n));
        curve.push_back(point);
    }
    return curve;
}

std::vector<RatioRow> ratio_table(int n_s, std::span<const SolveResult> solutions) {
    std::vector<RatioRow> rows;
    for (int i = 1; i <= n_s; ++i)
        for (int j = i + 1; j <= n_s; ++j) {
            RatioRow row{i, j};
            for (const auto& s : solutions) {
                if (!s.converged) continue;
                const double ratio = std::abs(s.scale.lambda1(i - 1)) * std::abs(s.scale.lambda1(j - 1));
                const bool better = !row.found || ratio > row.ratio ||
                                    (ratio == row.ratio && (s.tau < row.tau || (s.tau == row.tau && s.start_index < row.start_index)));
                if (better) row = {i, j, s.tau, ratio, 2.0 * ratio, s.start_index, true};
            }
            rows.push_back(row);
        }
    return rows;
}

std::vector<RatioRow> ratio_optimize(const Layout& layout, std::span<const double> taus, int starts, std::uint64_t seed,
                                     int threads) {
    layout.validate();
    if (layout.n_s < 2) throw ConfigError("ratio table needs N_S >= 2");
    const ChainDynamics dynamics(layout.n);
    std::vector<std::vector<RatioRow>> per_tau(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t k) {
        const auto results = solve_restoring(RestoringProblem(layout, dynamics.at(taus[k])), starts, seed);
        per_tau[k] = ratio_table(layout.n_s, results);
    });

    std::vector<RatioRow> merged;
    for (const auto& rows : per_tau) {
        if (merged.empty()) {
            merged = rows;
            continue;
        }
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const auto& r = rows[p];
            if (r.found && (!merged[p].found || r.ratio > merged[p].ratio)) merged[p] = r;
        }
    }
    for (const auto& r : merged)
        if (!r.found) warn(fmt::format("pair ({}, {}): no converged restoring solution on the tau grid", r.i, r.j));
    return merged;
}

std::vector<RatioSample> ratio_distribution(const Layout& layout, double tau, int i, int j, int starts,
                                            std::uint64_t seed, int threads) {
    layout.validate();
    if (i < 1 || j < 1 || i > layout.n_s || j > layout.n_s || i == j)
        throw std::invalid_argument(fmt::format("pair ({}, {}) is not a pair of distinct sender spins", i, j));
    auto results = solve_restoring(tau, layout, starts, seed, {}, threads);
    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.start_index < b.start_index; });
    std::vector<RatioSample> out;
    for (const auto& r : results) {
        if (!r.converged) continue;
        const double ratio = std::abs(r.scale.lambda0(i - 1, j - 1));
        out.push_back({r.start_index, ratio, 2.0 * ratio});
    }
    return out;
}

PureSenderSample pure_sender_from_angles(std::span<const double> psi, std::span<const double> phi) {
    if (psi.empty() || psi.size() != phi.size())
        throw std::invalid_argument("need one psi and one phi angle per sender spin");
    const auto n = static_cast<Eigen::Index>(psi.size());
    PureSenderSample out;
    out.psi.assign(psi.begin(), psi.end());
    out.phi.assign(phi.begin(), phi.end());
    out.amplitudes.resize(n + 1);
    // tail(m) = prod_{k > m} cos psi_k, building from the last spin down.
    double tail = 1.0;
    for (Eigen::Index m = n; m >= 1; --m) {
        out.amplitudes(m) = std::polar(std::sin(psi[m - 1]) * tail, phi[m - 1]);
        tail *= std::cos(psi[m - 1]);
    }
    out.amplitudes(0) = tail;
    return out;
}

PureSenderSample sample_pure_sender(std::mt19937_64& rng, int n_s) {
    if (n_s < 1) throw std::invalid_argument(fmt::format("sender needs at least one spin, got {}", n_s));
    std::vector<double> psi(n_s), phi(n_s);
    for (int k = 0; k < n_s; ++k) {
        psi[k] = 0.5 * std::numbers::pi * uniform01(rng);
        phi[k] = 2.0 * std::numbers::pi * uniform01(rng);
    }
    return pure_sender_from_angles(psi, phi);
}

std::mt19937_64 sender_stream(std::uint64_t seed, int sample_index) {
    return make_stream(seed, sender_stream_base + static_cast<std::uint64_t>(sample_index));
}

ExcitationState sender_receiver_state(const ExcitationState& sender, const CompositeTransform& w, const Layout& layout) {
    const auto evolved = evolve(sender_embed(sender, layout.n), w.w1);
    const auto keep = sender_receiver_spins(layout);
    return partial_trace(evolved, keep);
}

ExcitationState receiver_state(const ExcitationState& sender, const CompositeTransform& w, const Layout& layout) {
    const auto evolved = evolve(sender_embed(sender, layout.n), w.w1);
    std::vector<int> keep;
    for (int k = layout.n - layout.n_r + 1; k <= layout.n; ++k) keep.push_back(k);
    return partial_trace(evolved, keep);
}

namespace {

std::vector<ExcitationState> draw_senders(std::uint64_t seed, int n_states, int n_s) {
    std::vector<ExcitationState> senders;
    senders.reserve(n_states);
    for (int k = 0; k < n_states; ++k) {
        auto rng = sender_stream(seed, k);
        senders.push_back(sample_pure_sender(rng, n_s).state());
    }
    return senders;
}

std::vector<double> negativities(const std::vector<ExcitationState>& senders, const CompositeTransform& w, const Layout& layout) {
    std::vector<double> out;
    out.reserve(senders.size());
    for (const auto& s : senders)
        out.push_back(double_negativity(sender_receiver_state(s, w, layout), layout.n_s, layout.n_r).value);
    return out;
}

} // namespace

std::vector<NegativityPoint> negativity_profile(const Layout& layout, std::span<const double> taus, int starts,
                                                int n_states, std::uint64_t seed, int threads) {
    layout.validate();
    if (n_states < 1) throw ConfigError(fmt::format("n_states must be at least 1, got {}", n_states));
    const ChainDynamics dynamics(layout.n);
    // The same sender ensemble is reused at every tau.
    const auto senders = draw_senders(seed, n_states, layout.n_s);

    std::vector<NegativityPoint> profile(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t k) {
        const RestoringProblem problem(layout, dynamics.at(taus[k]));
        const auto best = best_by_min_lambda(solve_restoring(problem, starts, seed));
        NegativityPoint point{taus[k]};
        if (best) {
            const auto values = negativities(senders, problem.transform(best->phi), layout);
            point.mean_nsr = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
            point.n_states = n_states;
            point.lambda_min = best->scale.min_abs();
            point.best_start = best->start_index;
            point.found = true;
        }
        profile[k] = point;
    });
    for (const auto& p : profile)
        if (!p.found) warn(fmt::format("tau={}: no converged restoring solution, point skipped", p.tau));
    return profile;
}

std::vector<double> negativity_samples(const Layout& layout, double tau, int starts, int n_states, std::uint64_t seed) {
    layout.validate();
    const RestoringProblem problem(layout, ChainDynamics(layout.n).at(tau));
    const auto best = best_by_min_lambda(solve_restoring(problem, starts, seed));
    if (!best) return {};
    return negativities(draw_senders(seed, n_states, layout.n_s), problem.transform(best->phi), layout);
}

} // namespace spinrestore

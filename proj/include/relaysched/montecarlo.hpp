#pragma once

#include "relaysched/flow.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relaysched::mc {

enum class Policy { RoundRobin, ProportionalFair, IncentivizedPF };

std::string_view to_string(Policy p) noexcept;
Policy parse_policy(std::string_view name);

struct McConfig {
    long long slots = 1'000'000;
    double ewma_epsilon = 1e-3;
    std::uint64_t seed = 1;
    RelayPhaseConfig config;
    std::vector<FlowSpec> flows;
    /// Record theta_bar every `trace_every` slots; 0 disables the trace.
    long long trace_every = 0;
};

struct TracePoint {
    long long slot;
    std::vector<double> theta_bar;
};

struct McResult {
    /// Final EWMA state theta_bar.
    ThroughputVector empirical_theta;
    /// Time average of credited gain per slot, after the burn-in window.
    ThroughputVector mean_theta;
    /// One entry per flow plus a trailing idle bucket; sums to `slots`.
    std::vector<long long> win_counts;
    std::vector<long long> relay_phase_wins;
    std::vector<long long> access_phase_wins;
    long long relay_phase_slots = 0;
    long long burn_in_slots = 0;
    std::vector<TracePoint> trace;
    std::vector<std::string> warnings;

    long long idle_slots() const { return win_counts.back(); }
};

/// Slot-level scheduling run with relay-phase gating. Per slot: draw gains for
/// the eligible flows (all flows in the relay phase, direct flows in the
/// access phase), pick arg max b_i h_i / theta_bar_i (lowest index on ties) or
/// rotate for round robin, then apply the EWMA update to every flow.
McResult run_mc(const McConfig& cfg, Policy policy);

struct WinnerEstimate {
    double mean;
    double std_error;
};

/// Monte-Carlo estimate of E[h_i 1{i wins}] in a single relay-phase
/// competition, using lambda_r and incentives.
WinnerEstimate estimate_winner_expectation(std::size_t i, std::span<const FlowSpec> flows,
                                           const ThroughputVector& theta, long long samples,
                                           std::uint64_t seed);

} // namespace relaysched::mc

#include "relaysched/montecarlo.hpp"

#include "relaysched/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relaysched::mc {

std::string_view to_string(Policy p) noexcept
{
    switch (p) {
    case Policy::RoundRobin:
        return "rr";
    case Policy::ProportionalFair:
        return "pf";
    case Policy::IncentivizedPF:
        return "incentivized_pf";
    }
    return "?";
}

Policy parse_policy(std::string_view name)
{
    if (name == "rr")
        return Policy::RoundRobin;
    if (name == "pf")
        return Policy::ProportionalFair;
    if (name == "incentivized_pf")
        return Policy::IncentivizedPF;
    throw std::invalid_argument("unknown scheduling policy '" + std::string(name) + "'");
}

McResult run_mc(const McConfig& cfg, Policy policy)
{
    const auto& flows = cfg.flows;
    const auto& phase = cfg.config;
    if (flows.empty())
        throw std::domain_error("flow list is empty");
    validate_flows(flows);
    if (cfg.slots <= 0)
        throw std::invalid_argument("slot count must be positive");
    if (!(cfg.ewma_epsilon > 0.0 && cfg.ewma_epsilon < 1.0))
        throw std::invalid_argument("ewma_epsilon must lie in (0, 1)");
    if (!phase.has_frame_timing())
        throw std::invalid_argument("Monte-Carlo runs need subframe counts tau_r/tau_a");
    const bool any_direct = std::any_of(flows.begin(), flows.end(), [](const FlowSpec& f) { return f.is_direct(); });
    if (!any_direct && phase.alpha() < 1.0)
        throw std::domain_error("an all-relayed population leaves access-phase slots without eligible flows");

    const std::size_t n = flows.size();
    const double eps = cfg.ewma_epsilon;
    const double alpha = phase.alpha();

    McResult out;
    out.win_counts.assign(n + 1, 0);
    out.relay_phase_wins.assign(n, 0);
    out.access_phase_wins.assign(n, 0);

    const auto min_slots = static_cast<long long>(std::ceil(10.0 / eps));
    if (cfg.slots < min_slots) {
        out.warnings.push_back("slots < 10/ewma_epsilon; averages have not settled");
        out.burn_in_slots = 0;
    } else {
        out.burn_in_slots = min_slots;
    }

    std::vector<RandomStream> streams;
    streams.reserve(n);
    for (const auto& f : flows)
        streams.emplace_back(cfg.seed, static_cast<std::uint64_t>(f.id));

    std::vector<double> theta_bar(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& f = flows[k];
        theta_bar[k] = alpha / f.lambda_r + (f.is_direct() ? (1.0 - alpha) / f.access_rate() : 0.0);
    }

    std::vector<double> gain(n, 0.0);
    std::vector<char> eligible(n, 0);
    std::vector<double> credited(n, 0.0);
    std::size_t rr_last = n - 1;

    for (long long t = 0; t < cfg.slots; ++t) {
        const bool relay_slot = phase.is_relay_slot(t);
        if (relay_slot)
            ++out.relay_phase_slots;

        for (std::size_t k = 0; k < n; ++k) {
            const auto& f = flows[k];
            eligible[k] = relay_slot || f.is_direct();
            gain[k] = eligible[k] ? streams[k].exponential(relay_slot ? f.lambda_r : f.access_rate()) : 0.0;
        }

        std::size_t winner = n;
        if (policy == Policy::RoundRobin) {
            for (std::size_t step = 1; step <= n; ++step) {
                const std::size_t k = (rr_last + step) % n;
                if (eligible[k]) {
                    winner = k;
                    break;
                }
            }
            if (winner < n)
                rr_last = winner;
        } else {
            double best = -1.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (!eligible[k])
                    continue;
                const double b = policy == Policy::IncentivizedPF ? flows[k].incentive : 1.0;
                const double metric = b * gain[k] / theta_bar[k];
                if (metric > best) {
                    best = metric;
                    winner = k;
                }
            }
        }

        for (std::size_t k = 0; k < n; ++k)
            theta_bar[k] *= (1.0 - eps);

        if (winner == n) {
            ++out.win_counts[n];
        } else {
            theta_bar[winner] += eps * gain[winner];
            ++out.win_counts[winner];
            ++(relay_slot ? out.relay_phase_wins : out.access_phase_wins)[winner];
            if (t >= out.burn_in_slots)
                credited[winner] += gain[winner];
        }

        if (cfg.trace_every > 0 && t % cfg.trace_every == 0)
            out.trace.push_back({t, theta_bar});
    }

    const auto measured = static_cast<double>(cfg.slots - out.burn_in_slots);
    out.empirical_theta = ThroughputVector(theta_bar);
    for (double& c : credited)
        c /= measured;
    out.mean_theta = ThroughputVector(std::move(credited));
    return out;
}

WinnerEstimate estimate_winner_expectation(std::size_t i, std::span<const FlowSpec> flows,
                                           const ThroughputVector& theta, long long samples,
                                           std::uint64_t seed)
{
    if (samples < 10'000)
        throw std::invalid_argument("winner-expectation estimates need at least 10^4 samples");
    if (i >= flows.size() || theta.size() != flows.size())
        throw std::invalid_argument("flow index or throughput vector out of range");
    validate_flows(flows);
    for (double t : theta.theta)
        if (!(t > 0.0))
            throw std::domain_error("winner expectation needs strictly positive throughputs");

    std::vector<RandomStream> streams;
    streams.reserve(flows.size());
    for (const auto& f : flows)
        streams.emplace_back(seed, static_cast<std::uint64_t>(f.id));

    double mean = 0.0;
    double m2 = 0.0;
    std::vector<double> h(flows.size());
    for (long long s = 0; s < samples; ++s) {
        std::size_t winner = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < flows.size(); ++k) {
            h[k] = streams[k].exponential(flows[k].lambda_r);
            const double metric = flows[k].incentive * h[k] / theta[k];
            if (metric > best) {
                best = metric;
                winner = k;
            }
        }
        const double x = winner == i ? h[i] : 0.0;
        const double delta = x - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (x - mean);
    }
    const double var = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(samples))};
}

} // namespace relaysched::mc

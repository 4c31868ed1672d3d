#include "relaysched/flow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaysched {

std::string_view to_string(FlowClass cls) noexcept
{
    return cls == FlowClass::Direct ? "direct" : "relayed";
}

FlowSpec FlowSpec::direct(int id, double lambda_r, std::optional<double> lambda_a)
{
    FlowSpec f;
    f.id = id;
    f.cls = FlowClass::Direct;
    f.lambda_r = lambda_r;
    f.lambda_a = lambda_a;
    f.incentive = 1.0;
    return f;
}

FlowSpec FlowSpec::relayed(int id, double lambda_r, double beta)
{
    FlowSpec f;
    f.id = id;
    f.cls = FlowClass::Relayed;
    f.lambda_r = lambda_r;
    f.incentive = beta;
    return f;
}

void validate_flows(std::span<const FlowSpec> flows)
{
    for (const auto& f : flows) {
        const std::string who = "flow " + std::to_string(f.id);
        if (!(f.lambda_r > 0.0) || !std::isfinite(f.lambda_r))
            throw std::invalid_argument(who + ": lambda_r must be positive and finite");
        if (!(f.incentive > 0.0) || !std::isfinite(f.incentive))
            throw std::invalid_argument(who + ": incentive must be positive and finite");
        if (f.is_direct()) {
            if (f.lambda_a && (!(*f.lambda_a > 0.0) || !std::isfinite(*f.lambda_a)))
                throw std::invalid_argument(who + ": lambda_a must be positive and finite");
            if (f.incentive != 1.0)
                throw std::invalid_argument(who + ": direct flows carry incentive 1");
        } else if (f.lambda_a) {
            throw std::invalid_argument(who + ": relayed flows have no access-phase rate");
        }
    }
}

RelayPhaseConfig RelayPhaseConfig::from_subframes(int tau_r, int tau_a, double beta)
{
    if (tau_r <= 0)
        throw std::invalid_argument("tau_r must be a positive subframe count");
    if (tau_a < 0)
        throw std::invalid_argument("tau_a must be non-negative");
    if (!(beta >= 1.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be a finite value >= 1");
    RelayPhaseConfig c;
    c.tau_r_ = tau_r;
    c.tau_a_ = tau_a;
    c.alpha_ = static_cast<double>(tau_r) / static_cast<double>(tau_r + tau_a);
    c.beta_ = beta;
    return c;
}

RelayPhaseConfig RelayPhaseConfig::from_alpha(double alpha, double beta)
{
    // alpha = 0 is accepted as the degenerate "direct flows only" limit.
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!(beta >= 1.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be a finite value >= 1");
    RelayPhaseConfig c;
    c.tau_r_ = 0;
    c.tau_a_ = 0;
    c.alpha_ = alpha;
    c.beta_ = beta;
    return c;
}

RelayPhaseConfig RelayPhaseConfig::with_beta(double beta) const
{
    if (!(beta >= 1.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be a finite value >= 1");
    RelayPhaseConfig c = *this;
    c.beta_ = beta;
    return c;
}

bool RelayPhaseConfig::is_relay_slot(long long t) const
{
    if (!has_frame_timing())
        throw std::logic_error("phase config built from alpha has no frame timing");
    return t % period() < tau_r_;
}

std::vector<FlowSpec> with_relay_incentive(std::span<const FlowSpec> flows, double beta)
{
    std::vector<FlowSpec> out(flows.begin(), flows.end());
    for (auto& f : out)
        if (!f.is_direct())
            f.incentive = beta;
    return out;
}

} // namespace relaysched

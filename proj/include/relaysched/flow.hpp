#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace relaysched {

enum class FlowClass { Direct, Relayed };

std::string_view to_string(FlowClass cls) noexcept;

/// One schedulable downlink flow at the donor.
///
/// Channel gains are exponential with rate `lambda_r` in the relay phase and
/// `lambda_a` in the access phase, so the mean gain is 1/lambda. Relayed flows
/// are never schedulable by the donor in the access phase and carry no
/// `lambda_a`.
struct FlowSpec {
    int id = 0;
    FlowClass cls = FlowClass::Direct;
    double lambda_r = 1.0;
    std::optional<double> lambda_a;
    double incentive = 1.0;

    static FlowSpec direct(int id, double lambda_r, std::optional<double> lambda_a = std::nullopt);
    static FlowSpec relayed(int id, double lambda_r, double beta = 1.0);

    /// Access-phase rate; falls back to `lambda_r` when unset.
    double access_rate() const noexcept { return lambda_a.value_or(lambda_r); }
    bool is_direct() const noexcept { return cls == FlowClass::Direct; }
};

/// Throws std::invalid_argument if any flow breaks its invariants.
void validate_flows(std::span<const FlowSpec> flows);

/// Half-duplex frame split between the relay phase (donor may serve backhaul)
/// and the access phase (relays transmit, donor serves direct flows only).
///
/// Built either from whole subframe counts, in which case `alpha` is exactly
/// tau_r/(tau_r+tau_a), or from a fluid fraction for analytic sweeps, in which
/// case both counts are zero and no frame timing is available.
class RelayPhaseConfig {
public:
    RelayPhaseConfig() = default;

    static RelayPhaseConfig from_subframes(int tau_r, int tau_a, double beta = 1.0);
    static RelayPhaseConfig from_alpha(double alpha, double beta = 1.0);

    int tau_r() const noexcept { return tau_r_; }
    int tau_a() const noexcept { return tau_a_; }
    int period() const noexcept { return tau_r_ + tau_a_; }
    bool has_frame_timing() const noexcept { return period() > 0; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

    RelayPhaseConfig with_beta(double beta) const;

    /// True when slot `t` falls in the relay phase of its period.
    bool is_relay_slot(long long t) const;

private:
    int tau_r_ = 1;
    int tau_a_ = 0;
    double alpha_ = 1.0;
    double beta_ = 1.0;
};

/// Copy of `flows` with every Relayed flow's incentive set to `beta`.
std::vector<FlowSpec> with_relay_incentive(std::span<const FlowSpec> flows, double beta);

/// Stationary average throughput per flow, in mean-gain units.
struct ThroughputVector {
    std::vector<double> theta;

    ThroughputVector() = default;
    explicit ThroughputVector(std::vector<double> values) : theta(std::move(values)) {}

    std::size_t size() const noexcept { return theta.size(); }
    double operator[](std::size_t i) const { return theta[i]; }
    double& operator[](std::size_t i) { return theta[i]; }
};

struct FixedPointReport {
    ThroughputVector theta;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

} // namespace relaysched

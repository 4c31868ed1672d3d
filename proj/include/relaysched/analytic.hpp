#pragma once

#include "relaysched/flow.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace relaysched::analytic {

/// Largest population for which winner expectations are evaluated by exact
/// inclusion-exclusion (2^(n-1) subset terms per flow).
inline constexpr std::size_t kInclusionExclusionCap = 20;

/// Per-scheduled-slot mean gain 1/lambda_r for every flow.
ThroughputVector rr_closed_form(std::span<const FlowSpec> flows);

/// Round robin seen as a share of all slots: 1/(n lambda_r). This is what a
/// slot simulator measures when it divides credited gain by total slots.
ThroughputVector rr_share_of_slots(std::span<const FlowSpec> flows);

double harmonic_number(std::size_t n);

/// theta_i = (H_n / n) / lambda_i for a single-phase all-direct population.
ThroughputVector pf_closed_form_norelay(std::span<const FlowSpec> flows);

/// One competitor in a single scheduling phase.
struct Contender {
    double rate;      // exponential rate parameter of the gain
    double incentive; // b_i
    double theta;     // current average throughput
};

/// E[h_i 1{b_i h_i / theta_i > b_j h_j / theta_j for all j != i}] by
/// inclusion-exclusion over the competitors of i. Throws std::domain_error if
/// any theta is non-positive or the population exceeds `cap`.
double winner_expectation(std::size_t i, std::span<const Contender> contenders,
                          std::size_t cap = kInclusionExclusionCap);

/// P(i wins), same enumeration with the first-power kernel.
double win_probability(std::size_t i, std::span<const Contender> contenders,
                       std::size_t cap = kInclusionExclusionCap);

/// Same expectation as a one-dimensional integral over h_i, evaluated by
/// double-exponential quadrature. Valid for any population size.
double winner_expectation_quadrature(std::size_t i, std::span<const Contender> contenders);

/// Relay-phase winner expectation for flow i: every flow competes with its
/// lambda_r and incentive.
double winner_expectation(std::size_t i, std::span<const FlowSpec> flows, const ThroughputVector& theta,
                          std::size_t cap = kInclusionExclusionCap);

struct SolverOptions {
    double tolerance = 1e-10;
    int max_iter = 100000;
    double damping = 0.5;
    std::size_t inclusion_exclusion_cap = kInclusionExclusionCap;
};

/// Right-hand side of the no-relay stationary equations, theta -> F(theta).
ThroughputVector stationary_map_norelay(std::span<const FlowSpec> flows, const ThroughputVector& theta,
                                        const SolverOptions& opts = {});

/// Two-phase map: alpha E_r + (1 - alpha) E_a for direct flows, alpha E_r for
/// relayed flows. Access-phase competition is among direct flows only, with
/// their access-phase rates and no incentives.
ThroughputVector stationary_map_relay(std::span<const FlowSpec> flows, const RelayPhaseConfig& config,
                                      const ThroughputVector& theta, const SolverOptions& opts = {});

/// max_i |F_i(theta) - theta_i|.
double stationary_residual(const ThroughputVector& mapped, const ThroughputVector& theta);

FixedPointReport fixed_point_norelay(std::span<const FlowSpec> flows, const SolverOptions& opts = {});
FixedPointReport fixed_point_relay(std::span<const FlowSpec> flows, const RelayPhaseConfig& config,
                                   const SolverOptions& opts = {});

/// Large-incentive limit: two time-multiplexed PF systems, relayed flows in
/// the relay phase and direct flows in the access phase.
ThroughputVector beta_asymptote(std::span<const FlowSpec> flows, const RelayPhaseConfig& config);

/// Incentive that equalises relay-phase relayed throughput with access
/// throughput: alpha lambda_r / ((1 - alpha) lambda_a).
double recommended_beta(double alpha, double lambda_r, double lambda_a);

/// Two-hop decode-and-forward efficiency with an optimally split frame.
double end_to_end_efficiency(double rho_r, double rho_a);

/// Relay-link time fraction that balances alpha rho_r with (1 - alpha) rho_a.
double optimal_split(double rho_r, double rho_a);

enum class SweepParameter { Beta, Alpha, Gamma };

std::string_view to_string(SweepParameter p) noexcept;
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepRow {
    double value = 0.0;
    FixedPointReport report;
};

/// One fixed_point_relay solve per value. Gamma is the direct-flow mean-gain
/// ratio (access mean)/(relay-phase mean), applied as lambda_a = lambda_r / gamma.
/// Rows come back in the order of `values` regardless of `jobs`.
std::vector<SweepRow> sweep(SweepParameter parameter, std::span<const double> values,
                            std::span<const FlowSpec> flows, const RelayPhaseConfig& config,
                            const SolverOptions& opts = {}, unsigned jobs = 1);

} // namespace relaysched::analytic

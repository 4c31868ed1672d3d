#include "relaysched/analytic.hpp"

#include "relaysched/parallel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relaysched::analytic {

namespace {

void require_nonempty(std::span<const FlowSpec> flows)
{
    if (flows.empty())
        throw std::domain_error("flow list is empty");
}

// Sum over subsets S of c of (-1)^|S| * (lambda / (lambda + sum(S)))^power.
double alternating_subset_sum(std::span<const double> c, std::size_t k, double lambda, double acc,
                              int power)
{
    if (k == c.size()) {
        const double d = lambda / (lambda + acc);
        return power == 2 ? d * d : d;
    }
    return alternating_subset_sum(c, k + 1, lambda, acc, power)
           - alternating_subset_sum(c, k + 1, lambda, acc + c[k], power);
}

// c_j = lambda_j b_i theta_j / (b_j theta_i): flow j loses to i iff h_j < (c_j / lambda_j) h_i.
std::vector<double> competitor_rates(std::size_t i, std::span<const Contender> contenders)
{
    if (i >= contenders.size())
        throw std::out_of_range("contender index out of range");
    for (const auto& c : contenders)
        if (!(c.theta > 0.0))
            throw std::domain_error("winner expectation needs strictly positive throughputs");
    const auto& me = contenders[i];
    std::vector<double> c;
    c.reserve(contenders.size() - 1);
    for (std::size_t j = 0; j < contenders.size(); ++j) {
        if (j == i)
            continue;
        const auto& o = contenders[j];
        c.push_back(o.rate * me.incentive * o.theta / (o.incentive * me.theta));
    }
    return c;
}

double inclusion_exclusion(std::size_t i, std::span<const Contender> contenders, std::size_t cap,
                           int power)
{
    if (contenders.size() > cap)
        throw std::domain_error("population of " + std::to_string(contenders.size())
                                + " exceeds the inclusion-exclusion cap of " + std::to_string(cap));
    const auto c = competitor_rates(i, contenders);
    const double lambda = contenders[i].rate;
    const double s = alternating_subset_sum(c, 0, lambda, 0.0, power);
    // lambda / (lambda + x)^2 = d^2 / lambda
    return power == 2 ? s / lambda : s;
}

double phase_expectation(std::size_t i, std::span<const Contender> contenders, const SolverOptions& opts)
{
    if (contenders.size() <= opts.inclusion_exclusion_cap)
        return winner_expectation(i, contenders, opts.inclusion_exclusion_cap);
    return winner_expectation_quadrature(i, contenders);
}

FixedPointReport iterate_to_fixed_point(ThroughputVector theta, const SolverOptions& opts, auto&& map)
{
    if (!(opts.tolerance > 0.0))
        throw std::invalid_argument("solver tolerance must be positive");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw std::invalid_argument("solver damping must lie in (0, 1]");

    FixedPointReport report;
    for (int it = 0;; ++it) {
        const ThroughputVector mapped = map(theta);
        const double residual = stationary_residual(mapped, theta);
        report.iterations = it;
        report.residual = residual;
        if (residual <= opts.tolerance) {
            report.converged = true;
            break;
        }
        if (it >= opts.max_iter)
            break;
        for (std::size_t k = 0; k < theta.size(); ++k)
            theta[k] = (1.0 - opts.damping) * theta[k] + opts.damping * mapped[k];
    }
    report.theta = std::move(theta);
    return report;
}

} // namespace

ThroughputVector rr_closed_form(std::span<const FlowSpec> flows)
{
    require_nonempty(flows);
    validate_flows(flows);
    ThroughputVector out;
    for (const auto& f : flows)
        out.theta.push_back(1.0 / f.lambda_r);
    return out;
}

ThroughputVector rr_share_of_slots(std::span<const FlowSpec> flows)
{
    auto out = rr_closed_form(flows);
    const auto n = static_cast<double>(flows.size());
    for (auto& v : out.theta)
        v /= n;
    return out;
}

double harmonic_number(std::size_t n)
{
    double h = 0.0;
    for (std::size_t j = n; j >= 1; --j)
        h += 1.0 / static_cast<double>(j);
    return h;
}

ThroughputVector pf_closed_form_norelay(std::span<const FlowSpec> flows)
{
    require_nonempty(flows);
    validate_flows(flows);
    const double share = harmonic_number(flows.size()) / static_cast<double>(flows.size());
    ThroughputVector out;
    for (const auto& f : flows) {
        if (!f.is_direct() || f.incentive != 1.0)
            throw std::invalid_argument("PF closed form requires direct flows without incentives");
        out.theta.push_back(share / f.lambda_r);
    }
    return out;
}

double winner_expectation(std::size_t i, std::span<const Contender> contenders, std::size_t cap)
{
    return inclusion_exclusion(i, contenders, cap, 2);
}

double win_probability(std::size_t i, std::span<const Contender> contenders, std::size_t cap)
{
    return inclusion_exclusion(i, contenders, cap, 1);
}

double winner_expectation_quadrature(std::size_t i, std::span<const Contender> contenders)
{
    const auto c = competitor_rates(i, contenders);
    const double lambda = contenders[i].rate;
    auto integrand = [&](double x) {
        double v = x * lambda * std::exp(-lambda * x);
        for (double cj : c)
            v *= -std::expm1(-cj * x);
        return v;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

double winner_expectation(std::size_t i, std::span<const FlowSpec> flows, const ThroughputVector& theta,
                          std::size_t cap)
{
    if (theta.size() != flows.size())
        throw std::invalid_argument("throughput vector does not match the flow list");
    std::vector<Contender> contenders;
    contenders.reserve(flows.size());
    for (std::size_t k = 0; k < flows.size(); ++k)
        contenders.push_back({flows[k].lambda_r, flows[k].incentive, theta[k]});
    return winner_expectation(i, contenders, cap);
}

ThroughputVector stationary_map_norelay(std::span<const FlowSpec> flows, const ThroughputVector& theta,
                                        const SolverOptions& opts)
{
    std::vector<Contender> contenders;
    contenders.reserve(flows.size());
    for (std::size_t k = 0; k < flows.size(); ++k)
        contenders.push_back({flows[k].lambda_r, flows[k].incentive, theta[k]});
    ThroughputVector out(std::vector<double>(flows.size()));
    for (std::size_t k = 0; k < flows.size(); ++k)
        out[k] = phase_expectation(k, contenders, opts);
    return out;
}

ThroughputVector stationary_map_relay(std::span<const FlowSpec> flows, const RelayPhaseConfig& config,
                                      const ThroughputVector& theta, const SolverOptions& opts)
{
    const double alpha = config.alpha();
    ThroughputVector out(std::vector<double>(flows.size(), 0.0));

    if (alpha > 0.0) {
        std::vector<Contender> relay_phase;
        relay_phase.reserve(flows.size());
        for (std::size_t k = 0; k < flows.size(); ++k)
            relay_phase.push_back({flows[k].lambda_r, flows[k].incentive, theta[k]});
        for (std::size_t k = 0; k < flows.size(); ++k)
            out[k] += alpha * phase_expectation(k, relay_phase, opts);
    }

    if (alpha < 1.0) {
        std::vector<Contender> access_phase;
        std::vector<std::size_t> index;
        for (std::size_t k = 0; k < flows.size(); ++k) {
            if (!flows[k].is_direct())
                continue;
            access_phase.push_back({flows[k].access_rate(), 1.0, theta[k]});
            index.push_back(k);
        }
        for (std::size_t a = 0; a < index.size(); ++a)
            out[index[a]] += (1.0 - alpha) * phase_expectation(a, access_phase, opts);
    }
    return out;
}

double stationary_residual(const ThroughputVector& mapped, const ThroughputVector& theta)
{
    double r = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k)
        r = std::max(r, std::abs(mapped[k] - theta[k]));
    return r;
}

FixedPointReport fixed_point_norelay(std::span<const FlowSpec> flows, const SolverOptions& opts)
{
    require_nonempty(flows);
    validate_flows(flows);
    for (const auto& f : flows)
        if (!f.is_direct())
            throw std::invalid_argument("fixed_point_norelay requires an all-direct population");

    ThroughputVector start;
    for (const auto& f : flows)
        start.theta.push_back(1.0 / f.lambda_r);
    return iterate_to_fixed_point(std::move(start), opts,
                                  [&](const ThroughputVector& t) { return stationary_map_norelay(flows, t, opts); });
}

FixedPointReport fixed_point_relay(std::span<const FlowSpec> flows, const RelayPhaseConfig& config,
                                   const SolverOptions& opts)
{
    require_nonempty(flows);
    validate_flows(flows);
    if (std::none_of(flows.begin(), flows.end(), [](const FlowSpec& f) { return f.is_direct(); }))
        throw std::invalid_argument("fixed_point_relay needs at least one direct flow");

    const double alpha = config.alpha();
    // Phase-weighted mean gain; relayed flows start at zero only when alpha = 0,
    // and the map keeps them there.
    ThroughputVector start;
    for (const auto& f : flows) {
        double t = alpha / f.lambda_r;
        if (f.is_direct())
            t += (1.0 - alpha) / f.access_rate();
        start.theta.push_back(t);
    }
    return iterate_to_fixed_point(std::move(start), opts, [&](const ThroughputVector& t) {
        return stationary_map_relay(flows, config, t, opts);
    });
}

ThroughputVector beta_asymptote(std::span<const FlowSpec> flows, const RelayPhaseConfig& config)
{
    require_nonempty(flows);
    validate_flows(flows);
    const double alpha = config.alpha();
    const auto n_direct = static_cast<std::size_t>(
        std::count_if(flows.begin(), flows.end(), [](const FlowSpec& f) { return f.is_direct(); }));
    const std::size_t n_relayed = flows.size() - n_direct;

    const double direct_share = n_direct ? harmonic_number(n_direct) / static_cast<double>(n_direct) : 0.0;
    const double relayed_share = n_relayed ? harmonic_number(n_relayed) / static_cast<double>(n_relayed) : 0.0;

    ThroughputVector out;
    for (const auto& f : flows) {
        if (f.is_direct()) {
            double t = (1.0 - alpha) * direct_share / f.access_rate();
            // Nobody else claims the relay phase without relayed flows.
            if (n_relayed == 0)
                t += alpha * direct_share / f.lambda_r;
            out.theta.push_back(t);
        } else {
            out.theta.push_back(alpha * relayed_share / f.lambda_r);
        }
    }
    return out;
}

double recommended_beta(double alpha, double lambda_r, double lambda_a)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("recommended_beta needs 0 < alpha < 1");
    if (!(lambda_r > 0.0) || !(lambda_a > 0.0))
        throw std::domain_error("rate parameters must be positive");
    return alpha * lambda_r / ((1.0 - alpha) * lambda_a);
}

double end_to_end_efficiency(double rho_r, double rho_a)
{
    if (!(rho_r > 0.0) || !(rho_a > 0.0))
        throw std::domain_error("spectral efficiencies must be positive");
    return rho_r * rho_a / (rho_r + rho_a);
}

double optimal_split(double rho_r, double rho_a)
{
    if (!(rho_r > 0.0) || !(rho_a > 0.0))
        throw std::domain_error("spectral efficiencies must be positive");
    return rho_a / (rho_r + rho_a);
}

std::string_view to_string(SweepParameter p) noexcept
{
    switch (p) {
    case SweepParameter::Beta:
        return "beta";
    case SweepParameter::Alpha:
        return "alpha";
    case SweepParameter::Gamma:
        return "gamma";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name)
{
    if (name == "beta")
        return SweepParameter::Beta;
    if (name == "alpha")
        return SweepParameter::Alpha;
    if (name == "gamma")
        return SweepParameter::Gamma;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
}

std::vector<SweepRow> sweep(SweepParameter parameter, std::span<const double> values,
                            std::span<const FlowSpec> flows, const RelayPhaseConfig& config,
                            const SolverOptions& opts, unsigned jobs)
{
    if (values.empty())
        throw std::invalid_argument("sweep range is empty");
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]))
            throw std::invalid_argument("sweep values must be finite");
        if (k > 0 && !(values[k] > values[k - 1]))
            throw std::invalid_argument("sweep values must be strictly increasing");
    }

    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), jobs, [&](std::size_t k) {
        const double v = values[k];
        std::vector<FlowSpec> local(flows.begin(), flows.end());
        RelayPhaseConfig cfg = config;
        switch (parameter) {
        case SweepParameter::Beta:
            cfg = cfg.with_beta(v);
            local = with_relay_incentive(local, v);
            break;
        case SweepParameter::Alpha:
            cfg = RelayPhaseConfig::from_alpha(v, config.beta());
            break;
        case SweepParameter::Gamma:
            if (!(v > 0.0))
                throw std::invalid_argument("gamma values must be positive");
            for (auto& f : local)
                if (f.is_direct())
                    f.lambda_a = f.lambda_r / v;
            break;
        }
        rows[k].value = v;
        rows[k].report = fixed_point_relay(local, cfg, opts);
    });
    return rows;
}

} // namespace relaysched::analytic

// Acceptance suite: one PASS/FAIL line per check, non-zero exit on any FAIL.

#include "cli_harness.hpp"
#include "support.hpp"

#include "relaysched/analytic.hpp"
#include "relaysched/io/config.hpp"
#include "relaysched/montecarlo.hpp"
#include "relaysched/relay_sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace relaysched;
using namespace relaysched::analytic;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<FlowSpec> one_plus_one(double beta = 1.0)
{
    return {FlowSpec::direct(0, 1.0), FlowSpec::relayed(1, 1.0, beta)};
}

bool within_rel(double got, double want, double tol)
{
    return std::abs(got - want) <= tol * std::abs(want);
}

void pf_baseline(Outcome& o)
{
    const std::vector<FlowSpec> two{FlowSpec::direct(0, 1), FlowSpec::direct(1, 1)};
    const auto r = fixed_point_norelay(two);
    o.detail << "theta=(" << fmt(r.theta[0]) << ", " << fmt(r.theta[1]) << ")";
    o.require(std::abs(r.theta[0] - 0.75) <= 1e-6 && std::abs(r.theta[1] - 0.75) <= 1e-6, "two-user point");
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<FlowSpec> flows;
        for (std::size_t k = 0; k < n; ++k)
            flows.push_back(FlowSpec::direct(static_cast<int>(k), 1.7));
        const auto solved = fixed_point_norelay(flows);
        const double closed = harmonic_number(n) / static_cast<double>(n) / 1.7;
        for (double v : solved.theta.theta)
            o.require(std::abs(v - closed) <= 1e-6, "closed form n=" + std::to_string(n));
    }
}

void relay_point(Outcome& o)
{
    const auto r = fixed_point_relay(one_plus_one(), RelayPhaseConfig::from_alpha(0.5));
    o.detail << "theta=(" << fmt(r.theta[0]) << ", " << fmt(r.theta[1]) << ")";
    o.require(r.converged, "converged");
    o.require(std::abs(r.theta[0] - 0.79) <= 0.01 && std::abs(r.theta[1] - 0.44) <= 0.01, "(0.79, 0.44)");
}

void beta_limit(Outcome& o)
{
    const auto cfg = RelayPhaseConfig::from_alpha(0.5, 1e6);
    const auto r = fixed_point_relay(one_plus_one(1e6), cfg);
    const auto lim = beta_asymptote(one_plus_one(1e6), cfg);
    o.detail << "beta=1e6 theta=(" << fmt(r.theta[0]) << ", " << fmt(r.theta[1]) << ") limit=(" << fmt(lim[0])
             << ", " << fmt(lim[1]) << ")";
    for (std::size_t i = 0; i < 2; ++i) {
        o.require(std::abs(r.theta[i] - lim[i]) <= 1e-3, "asymptote");
        o.require(std::abs(lim[i] - 0.5) <= 1e-12, "limit (0.5, 0.5)");
    }
    const auto values = io::spaced_values(1.0, 1000.0, 25, true);
    const auto rows = sweep(SweepParameter::Beta, values, one_plus_one(), RelayPhaseConfig::from_alpha(0.5));
    for (std::size_t k = 1; k < rows.size(); ++k) {
        o.require(rows[k].report.theta[0] <= rows[k - 1].report.theta[0], "direct non-increasing");
        o.require(rows[k].report.theta[1] >= rows[k - 1].report.theta[1], "relayed non-decreasing");
    }
    o.require(rows.size() == 25, "25 rows");
}

void gamma_limit(Outcome& o)
{
    const std::vector<double> values{1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0};
    const auto rows = sweep(SweepParameter::Gamma, values, one_plus_one(), RelayPhaseConfig::from_alpha(0.5));
    const auto& low = rows.front().report.theta;
    o.detail << "gamma=1e-4 theta=(" << fmt(low[0]) << ", " << fmt(low[1]) << ")";
    o.require(within_rel(low[0], 0.375, 0.01) && within_rel(low[1], 0.375, 0.01), "endpoint near 0.375");
    const auto base = fixed_point_relay(one_plus_one(), RelayPhaseConfig::from_alpha(0.5));
    for (std::size_t i = 0; i < 2; ++i)
        o.require(std::abs(rows.back().report.theta[i] - base.theta[i]) <= 1e-12, "gamma=1 equals base point");
}

void alpha_limits(Outcome& o)
{
    const auto full = fixed_point_relay(one_plus_one(), RelayPhaseConfig::from_alpha(1.0));
    const auto low = fixed_point_relay(one_plus_one(), RelayPhaseConfig::from_alpha(0.05));
    o.detail << "alpha=1 (" << fmt(full.theta[0]) << ", " << fmt(full.theta[1]) << ") alpha=0.05 ("
             << fmt(low.theta[0]) << ", " << fmt(low.theta[1]) << ")";
    o.require(std::abs(full.theta[0] - 0.75) <= 1e-6 && std::abs(full.theta[1] - 0.75) <= 1e-6, "alpha=1");
    o.require(low.theta[1] < 0.05 && low.theta[0] > 0.9, "alpha=0.05 bias");
}

void oracle(Outcome& o)
{
    struct Case {
        const char* name;
        std::vector<FlowSpec> flows;
        RelayPhaseConfig cfg;
        mc::Policy policy;
        ThroughputVector expected;
    };
    const std::vector<FlowSpec> two{FlowSpec::direct(0, 1), FlowSpec::direct(1, 1)};
    std::vector<Case> cases{
        {"pf", two, RelayPhaseConfig::from_subframes(1, 0), mc::Policy::ProportionalFair, fixed_point_norelay(two).theta},
        {"relay", one_plus_one(), RelayPhaseConfig::from_subframes(1, 1), mc::Policy::IncentivizedPF,
         fixed_point_relay(one_plus_one(), RelayPhaseConfig::from_subframes(1, 1)).theta},
        {"beta10", one_plus_one(10), RelayPhaseConfig::from_subframes(1, 1, 10), mc::Policy::IncentivizedPF,
         fixed_point_relay(one_plus_one(10), RelayPhaseConfig::from_subframes(1, 1, 10)).theta},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        for (std::uint64_t seed : {11ULL, 2027ULL, 918273645ULL}) {
            mc::McConfig cfg;
            cfg.slots = 1'000'000;
            cfg.ewma_epsilon = 1e-3;
            cfg.seed = seed;
            cfg.config = c.cfg;
            cfg.flows = c.flows;
            const auto r = mc::run_mc(cfg, c.policy);
            for (std::size_t i = 0; i < c.expected.size(); ++i) {
                const double err = std::abs(r.mean_theta[i] - c.expected[i]) / c.expected[i];
                worst = std::max(worst, err);
                o.require(err <= 0.02, std::string(c.name) + " seed " + std::to_string(seed));
            }
        }
    }
    o.detail << "worst relative error " << fmt(worst);
}

void split_optimality(Outcome& o)
{
    std::mt19937_64 gen(20);
    std::uniform_real_distribution<double> u(0.1, 6.0);
    int checked = 0;
    for (int k = 0; k < 20; ++k) {
        const double rr = u(gen), ra = u(gen);
        const double a = optimal_split(rr, ra);
        const double best = std::min(a * rr, (1 - a) * ra);
        for (int g = 1; g <= 99; ++g) {
            const double alpha = g / 100.0;
            o.require(best >= std::min(alpha * rr, (1 - alpha) * ra) - 1e-15, "grid beats split");
            ++checked;
        }
        o.require(std::abs(best - end_to_end_efficiency(rr, ra)) <= 1e-12, "efficiency at split");
    }
    o.detail << checked << " grid points";
}

sim::ScenarioConfig example()
{
    return io::load_sim_job(support::load("sim_1b3d2u.json")).scenario;
}

void simulator_invariants(Outcome& o)
{
    const auto cfg = example();
    const auto run = sim::run_scenario(cfg);
    o.require(run.records.size() == 600, "600 TTIs");
    o.require(sim::count_half_duplex_violations(run.records) == 0, "half duplex");

    long long relayed_bd = 0;
    for (const auto& rec : run.records)
        if (rec.kind != sim::SubframeKind::U)
            for (const auto& link : rec.ues)
                if (cfg.is_relayed(link.ue))
                    relayed_bd += link.bytes;
    o.require(relayed_bd == 0, "relayed bytes outside U");

    for (const auto& rs : run.summary.relays)
        o.require(rs.buffer.conserved(), "buffer conservation");

    // Reference: same seed, every access subframe direct-only.
    auto all_d = cfg;
    all_d.plan = sim::SubframePlan::parse("BDDDDD");
    const auto ref = sim::run_scenario(all_d);
    long long compared = 0;
    for (std::size_t t = 0; t < run.records.size(); ++t) {
        const auto& rec = run.records[t];
        if (rec.kind != sim::SubframeKind::U)
            continue;
        bool silent = true;
        for (char c : rec.relay_transmitting)
            silent = silent && !c;
        if (!silent)
            continue;
        for (std::size_t k = 0; k < rec.ues.size(); ++k) {
            if (cfg.is_relayed(rec.ues[k].ue))
                continue;
            o.require(rec.ues[k].sinr_db == ref.records[t].ues[k].sinr_db, "silent U equals D");
            ++compared;
        }
    }
    o.require(compared > 0, "some silent U subframes");
    o.detail << "violations=0 relayed_bytes_BD=" << relayed_bd << " silent_U_samples=" << compared;
}

void mitigation(Outcome& o)
{
    const auto cfg = example();
    const auto run = sim::run_scenario(cfg);
    long long u_slots = 0;
    std::vector<long long> active(cfg.geometry.relays.size(), 0);
    for (const auto& rec : run.records) {
        if (rec.kind != sim::SubframeKind::U)
            continue;
        ++u_slots;
        for (std::size_t r = 0; r < active.size(); ++r)
            active[r] += rec.relay_transmitting[r] ? 1 : 0;
    }
    double busiest = 0.0;
    for (long long a : active)
        busiest = std::max(busiest, static_cast<double>(a) / static_cast<double>(u_slots));
    const double d = run.summary.direct_in(sim::SubframeKind::D).mean_mcs();
    const double u = run.summary.direct_in(sim::SubframeKind::U).mean_mcs();
    o.detail << "mcs D=" << fmt(d) << " U=" << fmt(u) << " busiest relay in U " << fmt(busiest);
    o.require(run.summary.relayed_bytes > 0, "relayed traffic active");
    o.require(busiest >= 0.2 ? d > u : d >= u, "D at least U");
}

void determinism(Outcome& o)
{
    const std::vector<std::pair<std::string, std::string>> commands{
        {"solve", "baseline_solve.json"}, {"sweep", "beta_sweep.json"}, {"mc", "mc_relay.json"},
        {"sim", "sim_1b3d2u.json"},       {"compare", "compare_plans.json"}, {"map", "map.json"},
    };
    for (const auto& [cmd, cfg] : commands) {
        const auto dir = harness::scratch("determinism-" + cmd);
        const std::vector<std::string> args{cmd, "--config", support::config_path(cfg), "--out", dir.string(), "--svg",
                                            "--jobs", "4"};
        const int first = harness::run(args).code;
        const auto before = harness::snapshot(dir);
        const int second = harness::run(args).code;
        const auto after = harness::snapshot(dir);
        o.require(first == 0 && second == 0, cmd + " exit code");
        o.require(before.size() >= 2 && before == after, cmd + " outputs identical");
        o.detail << cmd << ":" << before.size() << " ";
    }
}

} // namespace

int main()
{
    const std::vector<std::tuple<int, std::string, double, std::function<void(Outcome&)>>> checks{
        {1, "two-user PF baseline and n-user closed form", 1.0, pf_baseline},
        {2, "relay operating point", 1.0, relay_point},
        {3, "large-incentive asymptote and beta monotonicity", 5.0, beta_limit},
        {4, "interference limit of the gamma sweep", 5.0, gamma_limit},
        {5, "relay-fraction limits", 2.0, alpha_limits},
        {6, "Monte-Carlo oracle equivalence", 30.0, oracle},
        {7, "optimal frame split", 1.0, split_optimality},
        {8, "simulator invariants", 10.0, simulator_invariants},
        {9, "interference mitigation in D subframes", 10.0, mitigation},
        {10, "CLI determinism", 60.0, determinism},
    };

    int failures = 0;
    for (const auto& [id, name, budget, fn] : checks) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > budget) {
            o.ok = false;
            o.detail << " [over time budget " << budget << " s]";
        }
        failures += o.ok ? 0 : 1;
        std::printf("%s AC%d %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(),
                    secs);
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}

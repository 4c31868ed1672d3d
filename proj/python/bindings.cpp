#include "cli.hpp"

#include "relaysched/analytic.hpp"
#include "relaysched/io/config.hpp"
#include "relaysched/montecarlo.hpp"
#include "relaysched/radio.hpp"
#include "relaysched/relay_sim.hpp"
#include "relaysched/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace relaysched;

namespace {

py::dict report_dict(const FixedPointReport& r)
{
    py::dict d;
    d["theta"] = r.theta.theta;
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["converged"] = r.converged;
    return d;
}

py::dict kind_dict(const std::array<sim::KindStats, 3>& stats)
{
    py::dict d;
    for (auto k : {sim::SubframeKind::B, sim::SubframeKind::D, sim::SubframeKind::U}) {
        const auto& s = stats[sim::kind_index(k)];
        py::dict e;
        e["mean_cqi"] = s.mean_cqi();
        e["mean_mcs"] = s.mean_mcs();
        e["bytes"] = s.bytes;
        d[py::str(std::string(1, sim::to_char(k)))] = e;
    }
    return d;
}

py::dict summary_dict(const sim::ScenarioSummary& s)
{
    py::dict d;
    d["plan"] = s.plan;
    d["ttis"] = s.ttis;
    d["direct_bytes"] = s.direct_bytes;
    d["relayed_bytes"] = s.relayed_bytes;
    d["backhaul_bytes"] = s.backhaul_bytes;
    d["drops"] = s.drops;
    d["half_duplex_violations"] = s.half_duplex_violations;
    d["direct_throughput"] = s.direct_throughput();
    d["relayed_throughput"] = s.relayed_throughput();
    d["direct"] = kind_dict(s.direct);
    d["relayed"] = kind_dict(s.relayed);
    py::list relays;
    for (const auto& r : s.relays) {
        py::dict e;
        e["arrivals"] = r.buffer.arrivals;
        e["departures"] = r.buffer.departures;
        e["drops"] = r.buffer.drops;
        e["queued"] = r.buffer.queued;
        e["idle_access_rbs"] = r.idle_access_rbs;
        relays.append(e);
    }
    d["relays"] = relays;
    d["warnings"] = s.warnings;
    return d;
}

io::ConfigDocument parse(const std::string& text)
{
    return io::parse_config(text, "<string>");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Relay-aware downlink scheduling: analytic PF solver, Monte-Carlo oracle, relay cell simulator.";
    m.attr("__version__") = kVersion;

    py::register_exception<io::ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<FlowClass>(m, "FlowClass").value("DIRECT", FlowClass::Direct).value("RELAYED", FlowClass::Relayed);

    py::class_<FlowSpec>(m, "FlowSpec")
        .def_static("direct", &FlowSpec::direct, py::arg("id"), py::arg("lambda_r"), py::arg("lambda_a") = py::none())
        .def_static("relayed", &FlowSpec::relayed, py::arg("id"), py::arg("lambda_r"), py::arg("beta") = 1.0)
        .def_readwrite("id", &FlowSpec::id)
        .def_readwrite("cls", &FlowSpec::cls)
        .def_readwrite("lambda_r", &FlowSpec::lambda_r)
        .def_readwrite("lambda_a", &FlowSpec::lambda_a)
        .def_readwrite("incentive", &FlowSpec::incentive)
        .def("__repr__", [](const FlowSpec& f) {
            std::ostringstream os;
            os << "FlowSpec(" << f.id << ", " << to_string(f.cls) << ", lambda_r=" << f.lambda_r << ")";
            return os.str();
        });

    py::class_<RelayPhaseConfig>(m, "RelayPhaseConfig")
        .def_static("from_alpha", &RelayPhaseConfig::from_alpha, py::arg("alpha"), py::arg("beta") = 1.0)
        .def_static("from_subframes", &RelayPhaseConfig::from_subframes, py::arg("tau_r"), py::arg("tau_a"),
                    py::arg("beta") = 1.0)
        .def_property_readonly("alpha", &RelayPhaseConfig::alpha)
        .def_property_readonly("beta", &RelayPhaseConfig::beta)
        .def_property_readonly("tau_r", &RelayPhaseConfig::tau_r)
        .def_property_readonly("tau_a", &RelayPhaseConfig::tau_a);

    m.def(
        "fixed_point_norelay",
        [](const std::vector<FlowSpec>& flows, double tolerance, int max_iter) {
            analytic::SolverOptions o;
            o.tolerance = tolerance;
            o.max_iter = max_iter;
            return report_dict(analytic::fixed_point_norelay(flows, o));
        },
        py::arg("flows"), py::arg("tolerance") = 1e-10, py::arg("max_iter") = 100000,
        "Single-phase PF throughputs for an all-direct population.");

    m.def(
        "fixed_point_relay",
        [](const std::vector<FlowSpec>& flows, const RelayPhaseConfig& config, double tolerance, int max_iter) {
            analytic::SolverOptions o;
            o.tolerance = tolerance;
            o.max_iter = max_iter;
            return report_dict(analytic::fixed_point_relay(flows, config, o));
        },
        py::arg("flows"), py::arg("config"), py::arg("tolerance") = 1e-10, py::arg("max_iter") = 100000,
        "Two-phase PF throughputs with relay-phase gating.");

    m.def(
        "beta_asymptote",
        [](const std::vector<FlowSpec>& flows, const RelayPhaseConfig& c) {
            return analytic::beta_asymptote(flows, c).theta;
        },
        py::arg("flows"), py::arg("config"));
    m.def(
        "pf_closed_form_norelay",
        [](const std::vector<FlowSpec>& flows) { return analytic::pf_closed_form_norelay(flows).theta; },
        py::arg("flows"));
    m.def(
        "rr_closed_form", [](const std::vector<FlowSpec>& flows) { return analytic::rr_closed_form(flows).theta; },
        py::arg("flows"));
    m.def(
        "winner_expectation",
        [](std::size_t i, const std::vector<FlowSpec>& flows, const std::vector<double>& theta) {
            return analytic::winner_expectation(i, flows, ThroughputVector{theta});
        },
        py::arg("i"), py::arg("flows"), py::arg("theta"));
    m.def("recommended_beta", &analytic::recommended_beta, py::arg("alpha"), py::arg("lambda_r"),
          py::arg("lambda_a"));
    m.def("end_to_end_efficiency", &analytic::end_to_end_efficiency, py::arg("rho_r"), py::arg("rho_a"));
    m.def("optimal_split", &analytic::optimal_split, py::arg("rho_r"), py::arg("rho_a"));

    m.def(
        "sweep",
        [](const std::string& parameter, const std::vector<double>& values, const std::vector<FlowSpec>& flows,
           const RelayPhaseConfig& config, unsigned jobs) {
            const auto rows =
                analytic::sweep(analytic::parse_sweep_parameter(parameter), values, flows, config, {}, jobs);
            py::list out;
            for (const auto& r : rows) {
                auto d = report_dict(r.report);
                d["value"] = r.value;
                out.append(d);
            }
            return out;
        },
        py::arg("parameter"), py::arg("values"), py::arg("flows"), py::arg("config"), py::arg("jobs") = 1,
        "Solve once per value of 'beta', 'alpha' or 'gamma'.");

    m.def(
        "run_mc",
        [](const std::vector<FlowSpec>& flows, const RelayPhaseConfig& config, const std::string& policy,
           long long slots, double epsilon, std::uint64_t seed) {
            mc::McConfig c;
            c.flows = flows;
            c.config = config;
            c.slots = slots;
            c.ewma_epsilon = epsilon;
            c.seed = seed;
            mc::McResult r;
            {
                py::gil_scoped_release release;
                r = mc::run_mc(c, mc::parse_policy(policy));
            }
            py::dict d;
            d["empirical_theta"] = r.empirical_theta.theta;
            d["mean_theta"] = r.mean_theta.theta;
            d["win_counts"] = r.win_counts;
            d["relay_phase_wins"] = r.relay_phase_wins;
            d["access_phase_wins"] = r.access_phase_wins;
            d["relay_phase_slots"] = r.relay_phase_slots;
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("flows"), py::arg("config"), py::arg("policy") = "incentivized_pf", py::arg("slots") = 1'000'000,
        py::arg("epsilon") = 1e-3, py::arg("seed") = 1);

    m.def(
        "quantize_cqi", [](double sinr_db) { return radio::CqiMapping{}.quantize(sinr_db); }, py::arg("sinr_db"),
        "Default CQI quantiser.");

    m.def(
        "simulate",
        [](const std::string& config_json) {
            const auto job = io::load_sim_job(parse(config_json));
            sim::ScenarioResult r;
            {
                py::gil_scoped_release release;
                r = sim::run_scenario(job.scenario);
            }
            return summary_dict(r.summary);
        },
        py::arg("config_json"), "Run a scenario given as JSON text; returns the summary.");

    m.def(
        "compare_plans",
        [](const std::string& config_json) {
            const auto job = io::load_compare_job(parse(config_json));
            const auto c = sim::compare_plans(job.scenario, job.plan_a, job.plan_b, job.tie_tolerance);
            py::dict metrics;
            for (const auto& mm : c.metrics)
                metrics[py::str(mm.metric)] = py::make_tuple(mm.a, mm.b, mm.dominating);
            py::dict d;
            d["a"] = summary_dict(c.a);
            d["b"] = summary_dict(c.b);
            d["metrics"] = metrics;
            return d;
        },
        py::arg("config_json"));

    m.def(
        "sinr_map",
        [](const std::string& config_json, bool relays_active, unsigned jobs) {
            const auto job = io::load_map_job(parse(config_json));
            const auto g = radio::render_sinr_map(
                job.geometry, relays_active ? radio::MapScenario::RelaysActive : radio::MapScenario::RelaysSilent,
                job.raster, jobs);
            std::vector<std::vector<double>> rows(static_cast<std::size_t>(g.raster.height));
            for (int r = 0; r < g.raster.height; ++r)
                for (int c = 0; c < g.raster.width; ++c)
                    rows[static_cast<std::size_t>(r)].push_back(g.at(c, r));
            return rows;
        },
        py::arg("config_json"), py::arg("relays_active") = true, py::arg("jobs") = 1,
        "Mean SINR raster (dB), one list per row.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"relaysched"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full)
                argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}

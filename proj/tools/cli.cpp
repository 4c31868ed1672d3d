#include "cli.hpp"

#include "relaysched/analytic.hpp"
#include "relaysched/io/config.hpp"
#include "relaysched/io/output.hpp"
#include "relaysched/montecarlo.hpp"
#include "relaysched/radio.hpp"
#include "relaysched/relay_sim.hpp"
#include "relaysched/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace relaysched::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    bool svg = false;
};

// Output files are rendered in memory first so that a failing run leaves no
// partial directory behind.
struct Outputs {
    std::map<std::string, std::string> files;
    int exit_code = kExitOk;
    json resolved;
};

void write_outputs(const Options& opt, const std::string& subcommand, const Outputs& outputs)
{
    io::RunManifest manifest;
    manifest.subcommand = subcommand;
    manifest.config_path = opt.config;
    manifest.output_dir = opt.out;
    manifest.seed_override = opt.seed;
    manifest.tool_version = kVersion;
    manifest.resolved_config = outputs.resolved;

    fs::create_directories(opt.out);
    for (const auto& [name, content] : outputs.files) {
        std::ofstream f(fs::path(opt.out) / name, std::ios::binary);
        f << content;
        if (!f)
            throw std::runtime_error("cannot write " + (fs::path(opt.out) / name).string());
    }
    std::ofstream m(fs::path(opt.out) / "manifest.json", std::ios::binary);
    m << manifest.to_json().dump(2) << '\n';
    if (!m)
        throw std::runtime_error("cannot write manifest");
}

template <typename Fn>
std::string render(Fn&& fn)
{
    std::ostringstream os;
    fn(os);
    return os.str();
}

void report_warnings(std::ostream& err, const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings)
        err << "warning: " << w << '\n';
}

Outputs cmd_solve(const Options& opt, std::ostream& out, std::ostream&)
{
    const auto job = io::load_solve_job(io::load_config_file(opt.config));
    const auto& m = job.model;
    const auto report = m.phase ? analytic::fixed_point_relay(m.flows, *m.phase, m.solver)
                                : analytic::fixed_point_norelay(m.flows, m.solver);
    Outputs o;
    o.resolved = io::to_json(job);
    o.files["theta.csv"] = render([&](std::ostream& os) { io::write_theta_csv(os, m.flows, report); });
    o.files["closed_form.csv"] = render([&](std::ostream& os) { io::write_closed_form_csv(os, m.flows, !m.phase); });
    out << "solve: " << (report.converged ? "converged" : "did not converge") << " after " << report.iterations
        << " iterations, residual " << io::format_number(report.residual) << '\n';
    o.exit_code = report.converged ? kExitOk : kExitNotConverged;
    return o;
}

Outputs cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto job = io::load_sweep_job(io::load_config_file(opt.config));
    const auto& m = job.model;
    const auto rows = analytic::sweep(job.sweep.parameter, job.sweep.values, m.flows, *m.phase, m.solver, opt.jobs);
    Outputs o;
    o.resolved = io::to_json(job);
    o.files["sweep.csv"] = render([&](std::ostream& os) { io::write_sweep_csv(os, job.sweep.parameter, m.flows, rows); });
    if (opt.svg)
        o.files["sweep.svg"] = render([&](std::ostream& os) { io::write_sweep_svg(os, job.sweep.parameter, m.flows, rows); });
    long long failed = 0;
    for (const auto& row : rows) {
        if (!row.report.converged) {
            ++failed;
            err << "warning: no convergence at " << analytic::to_string(job.sweep.parameter) << " = "
                << io::format_number(row.value) << '\n';
        }
    }
    out << "sweep: " << rows.size() << " rows, " << failed << " not converged\n";
    o.exit_code = failed ? kExitNotConverged : kExitOk;
    return o;
}

Outputs cmd_mc(const Options& opt, std::ostream& out, std::ostream& err)
{
    auto job = io::load_mc_job(io::load_config_file(opt.config));
    if (opt.seed)
        job.mc.seed = *opt.seed;
    mc::McConfig cfg;
    cfg.slots = job.mc.slots;
    cfg.ewma_epsilon = job.mc.epsilon;
    cfg.seed = job.mc.seed;
    cfg.config = job.model.phase.value_or(RelayPhaseConfig::from_subframes(1, 0, job.model.beta));
    cfg.flows = job.model.flows;
    cfg.trace_every = job.mc.trace_every;
    const auto result = mc::run_mc(cfg, job.mc.policy);
    report_warnings(err, result.warnings);

    Outputs o;
    o.resolved = io::to_json(job);
    o.files["mc.csv"] = render([&](std::ostream& os) { io::write_mc_csv(os, cfg.flows, result); });
    o.files["mc_summary.csv"] = render([&](std::ostream& os) { io::write_mc_summary_csv(os, cfg.slots, result); });
    if (cfg.trace_every > 0)
        o.files["trace.csv"] = render([&](std::ostream& os) { io::write_mc_trace_csv(os, cfg.flows, result); });
    out << "mc: " << cfg.slots << " slots, policy " << mc::to_string(job.mc.policy) << '\n';
    return o;
}

Outputs cmd_sim(const Options& opt, std::ostream& out, std::ostream& err)
{
    auto job = io::load_sim_job(io::load_config_file(opt.config));
    if (opt.seed)
        job.scenario.seed = *opt.seed;
    const auto result = sim::run_scenario(job.scenario);
    report_warnings(err, result.summary.warnings);
    const auto balance = sim::buffer_balance_report(job.scenario, result.summary, job.balance_tolerance);

    Outputs o;
    o.resolved = io::to_json(job);
    o.files["trace.csv"] = render([&](std::ostream& os) { io::write_tti_trace_csv(os, result.records); });
    o.files["summary.csv"] = render([&](std::ostream& os) { io::write_summary_csv(os, result.summary); });
    o.files["balance.csv"] = render([&](std::ostream& os) { io::write_balance_csv(os, balance); });
    out << "sim: plan " << result.summary.plan << ", " << result.summary.ttis << " TTIs, direct "
        << io::format_number(result.summary.direct_throughput()) << " B/TTI, relayed "
        << io::format_number(result.summary.relayed_throughput()) << " B/TTI\n";
    return o;
}

Outputs cmd_compare(const Options& opt, std::ostream& out, std::ostream& err)
{
    auto job = io::load_compare_job(io::load_config_file(opt.config));
    if (opt.seed)
        job.scenario.seed = *opt.seed;
    const auto cmp = sim::compare_plans(job.scenario, job.plan_a, job.plan_b, job.tie_tolerance, opt.jobs);
    report_warnings(err, cmp.a.warnings);

    Outputs o;
    o.resolved = io::to_json(job);
    o.files["compare.csv"] = render([&](std::ostream& os) { io::write_comparison_csv(os, cmp); });
    o.files["summary_a.csv"] = render([&](std::ostream& os) { io::write_summary_csv(os, cmp.a); });
    o.files["summary_b.csv"] = render([&](std::ostream& os) { io::write_summary_csv(os, cmp.b); });
    out << "compare: " << cmp.a.plan << " vs " << cmp.b.plan << '\n';
    for (const auto& m : cmp.metrics)
        out << "  " << m.metric << ": " << io::format_number(m.a) << " vs " << io::format_number(m.b) << " -> "
            << m.dominating << '\n';
    return o;
}

Outputs cmd_map(const Options& opt, std::ostream& out, std::ostream&)
{
    const auto job = io::load_map_job(io::load_config_file(opt.config));
    Outputs o;
    o.resolved = io::to_json(job);
    for (auto scenario : {radio::MapScenario::RelaysActive, radio::MapScenario::RelaysSilent}) {
        const auto grid = radio::render_sinr_map(job.geometry, scenario, job.raster, opt.jobs);
        const std::string stem = "sinr_" + std::string(radio::to_string(scenario));
        o.files[stem + ".csv"] = render([&](std::ostream& os) { io::write_sinr_grid_csv(os, grid); });
        if (opt.svg)
            o.files[stem + ".svg"] = render([&](std::ostream& os) { io::write_sinr_grid_svg(os, grid); });
    }
    out << "map: " << job.raster.width << "x" << job.raster.height << " raster, " << job.geometry.relays.size()
        << " relays\n";
    return o;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Relay-aware downlink scheduling laboratory", "relaysched"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);

    using Command = std::function<Outputs(const Options&, std::ostream&, std::ostream&)>;
    const std::vector<std::tuple<std::string, std::string, Command>> commands{
        {"solve", "Solve the PF stationary equations for a flow population", cmd_solve},
        {"sweep", "Sweep beta, alpha or gamma and solve each point", cmd_sweep},
        {"mc", "Slot-level Monte-Carlo scheduling run", cmd_mc},
        {"sim", "TTI-level relay cell simulation", cmd_sim},
        {"compare", "Run one scenario under two subframe plans", cmd_compare},
        {"map", "Render mean SINR rasters with relays active and silent", cmd_map},
    };

    std::vector<Options> options(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        auto* sub = app.add_subcommand(std::get<0>(commands[k]), std::get<1>(commands[k]));
        auto& o = options[k];
        sub->add_option("--config", o.config, "JSON configuration file")->required();
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", o.seed, "Override the configured seed");
        sub->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
        sub->add_flag("--svg", o.svg, "Also write SVG plots");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    for (std::size_t k = 0; k < commands.size(); ++k) {
        if (!subs[k]->parsed())
            continue;
        const auto& name = std::get<0>(commands[k]);
        const auto& opt = options[k];
        try {
            const Outputs outputs = std::get<2>(commands[k])(opt, out, err);
            write_outputs(opt, name, outputs);
            return outputs.exit_code;
        } catch (const io::ConfigError& e) {
            err << "error: " << e.what() << '\n';
            return kExitConfigError;
        } catch (const std::exception& e) {
            err << "error: " << opt.config << ": " << e.what() << '\n';
            return kExitConfigError;
        }
    }
    return kExitConfigError;
}

} // namespace relaysched::cli

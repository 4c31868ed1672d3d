#include "relaysched/io/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace relaysched::io {

namespace {

const char* kind_name(std::size_t k)
{
    static constexpr std::array<const char*, 3> names{"B", "D", "U"};
    return names[k];
}

std::string optional_mcs(const std::optional<int>& mcs)
{
    return mcs ? std::to_string(*mcs) : std::string{};
}

struct PlotFrame {
    double left = 60, right = 20, top = 20, bottom = 50;
    double width = 640, height = 400;

    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

const std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

} // namespace

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_theta_csv(std::ostream& os, std::span<const FlowSpec> flows, const FixedPointReport& report)
{
    os << "flow_id,class,theta,residual,converged\n";
    for (std::size_t k = 0; k < flows.size(); ++k)
        os << flows[k].id << ',' << to_string(flows[k].cls) << ',' << format_number(report.theta[k]) << ','
           << format_number(report.residual) << ',' << (report.converged ? "true" : "false") << '\n';
}

void write_closed_form_csv(std::ostream& os, std::span<const FlowSpec> flows, bool single_phase)
{
    const auto rr = analytic::rr_closed_form(flows);
    const auto share = analytic::rr_share_of_slots(flows);
    const bool pf_applies = single_phase && std::all_of(flows.begin(), flows.end(), [](const FlowSpec& f) {
                                return f.is_direct();
                            });
    ThroughputVector pf;
    if (pf_applies)
        pf = analytic::pf_closed_form_norelay(flows);
    os << "flow_id,class,rr_per_scheduled_slot,rr_share_of_slots,pf_closed_form\n";
    for (std::size_t k = 0; k < flows.size(); ++k)
        os << flows[k].id << ',' << to_string(flows[k].cls) << ',' << format_number(rr[k]) << ','
           << format_number(share[k]) << ',' << (pf_applies ? format_number(pf[k]) : std::string{}) << '\n';
}

void write_sweep_csv(std::ostream& os, analytic::SweepParameter parameter, std::span<const FlowSpec> flows,
                     std::span<const analytic::SweepRow> rows)
{
    os << analytic::to_string(parameter);
    for (const auto& f : flows)
        os << ",theta_" << f.id;
    os << ",residual,iterations,converged\n";
    for (const auto& row : rows) {
        os << format_number(row.value);
        for (std::size_t k = 0; k < flows.size(); ++k)
            os << ',' << format_number(row.report.theta[k]);
        os << ',' << format_number(row.report.residual) << ',' << row.report.iterations << ','
           << (row.report.converged ? "true" : "false") << '\n';
    }
}

void write_mc_csv(std::ostream& os, std::span<const FlowSpec> flows, const mc::McResult& result)
{
    os << "flow_id,class,theta_ewma,theta_mean,wins,relay_phase_wins,access_phase_wins\n";
    for (std::size_t k = 0; k < flows.size(); ++k)
        os << flows[k].id << ',' << to_string(flows[k].cls) << ',' << format_number(result.empirical_theta[k]) << ','
           << format_number(result.mean_theta[k]) << ',' << result.win_counts[k] << ',' << result.relay_phase_wins[k]
           << ',' << result.access_phase_wins[k] << '\n';
}

void write_mc_summary_csv(std::ostream& os, long long slots, const mc::McResult& result)
{
    os << "slots,relay_phase_slots,idle_slots,burn_in_slots\n";
    os << slots << ',' << result.relay_phase_slots << ',' << result.idle_slots() << ',' << result.burn_in_slots
       << '\n';
}

void write_mc_trace_csv(std::ostream& os, std::span<const FlowSpec> flows, const mc::McResult& result)
{
    os << "slot,flow_id,theta_bar\n";
    for (const auto& point : result.trace)
        for (std::size_t k = 0; k < flows.size(); ++k)
            os << point.slot << ',' << flows[k].id << ',' << format_number(point.theta_bar[k]) << '\n';
}

void write_tti_trace_csv(std::ostream& os, const std::vector<sim::TtiRecord>& records)
{
    os << "tti,kind,node,ue,cqi,mcs,bytes\n";
    for (const auto& rec : records) {
        const char kind = sim::to_char(rec.kind);
        for (const auto& bh : rec.backhaul)
            os << rec.tti << ',' << kind << ",donor>rn" << bh.relay << ',' << bh.ue << ',' << bh.cqi << ','
               << optional_mcs(bh.mcs) << ',' << bh.bytes << '\n';
        for (const auto& ue : rec.ues)
            os << rec.tti << ',' << kind << ',' << ue.serving.label() << ',' << ue.ue << ',' << ue.cqi << ','
               << optional_mcs(ue.mcs) << ',' << ue.bytes << '\n';
    }
}

void write_summary_csv(std::ostream& os, const sim::ScenarioSummary& s)
{
    os << "metric,value\n";
    os << "plan," << s.plan << '\n';
    os << "ttis," << s.ttis << '\n';
    os << "direct_bytes," << s.direct_bytes << '\n';
    os << "relayed_bytes," << s.relayed_bytes << '\n';
    os << "backhaul_bytes," << s.backhaul_bytes << '\n';
    os << "direct_throughput," << format_number(s.direct_throughput()) << '\n';
    os << "relayed_throughput," << format_number(s.relayed_throughput()) << '\n';
    os << "drops," << s.drops << '\n';
    os << "half_duplex_violations," << s.half_duplex_violations << '\n';
    for (std::size_t k = 0; k < 3; ++k) {
        os << "direct_mean_cqi_" << kind_name(k) << ',' << format_number(s.direct[k].mean_cqi()) << '\n';
        os << "direct_mean_mcs_" << kind_name(k) << ',' << format_number(s.direct[k].mean_mcs()) << '\n';
        os << "direct_bytes_" << kind_name(k) << ',' << s.direct[k].bytes << '\n';
        os << "relayed_mean_cqi_" << kind_name(k) << ',' << format_number(s.relayed[k].mean_cqi()) << '\n';
        os << "relayed_mean_mcs_" << kind_name(k) << ',' << format_number(s.relayed[k].mean_mcs()) << '\n';
        os << "relayed_bytes_" << kind_name(k) << ',' << s.relayed[k].bytes << '\n';
        os << "backhaul_bytes_" << kind_name(k) << ',' << s.backhaul_bytes_by_kind[k] << '\n';
    }
    for (std::size_t r = 0; r < s.relays.size(); ++r) {
        const auto& rs = s.relays[r];
        const std::string p = "rn" + std::to_string(r) + "_";
        os << p << "arrivals," << rs.buffer.arrivals << '\n';
        os << p << "departures," << rs.buffer.departures << '\n';
        os << p << "drops," << rs.buffer.drops << '\n';
        os << p << "queued," << rs.buffer.queued << '\n';
        os << p << "backhaul_subframes," << rs.backhaul_subframes << '\n';
        os << p << "access_subframes," << rs.access_subframes << '\n';
        os << p << "idle_access_rbs," << rs.idle_access_rbs << '\n';
    }
}

void write_balance_csv(std::ostream& os, std::span<const sim::RelayBalance> report)
{
    os << "relay,inbound_rate,outbound_rate,rho_r,rho_a,drops,idle_access_rbs,plan_alpha,recommended_alpha,backhaul\n";
    for (const auto& b : report)
        os << b.relay << ',' << format_number(b.inbound_rate) << ',' << format_number(b.outbound_rate) << ','
           << format_number(b.rho_r) << ',' << format_number(b.rho_a) << ',' << b.drops << ',' << b.idle_access_rbs
           << ',' << format_number(b.plan_alpha) << ','
           << (b.recommended_alpha ? format_number(*b.recommended_alpha) : std::string{}) << ','
           << sim::to_string(b.backhaul) << '\n';
}

void write_comparison_csv(std::ostream& os, const sim::PlanComparison& cmp)
{
    os << "metric,plan_a,plan_b,higher_is_better,dominating\n";
    os << "plan," << cmp.a.plan << ',' << cmp.b.plan << ",,\n";
    for (const auto& m : cmp.metrics)
        os << m.metric << ',' << format_number(m.a) << ',' << format_number(m.b) << ','
           << (m.higher_is_better ? "true" : "false") << ',' << m.dominating << '\n';
}

void write_sinr_grid_csv(std::ostream& os, const radio::SinrGrid& grid)
{
    const auto& r = grid.raster;
    os << format_number(r.origin.x) << ',' << format_number(r.origin.y) << ',' << format_number(r.cell_m) << '\n';
    for (int row = 0; row < r.height; ++row) {
        for (int col = 0; col < r.width; ++col) {
            if (col)
                os << ',';
            os << format_number(grid.at(col, row));
        }
        os << '\n';
    }
}

void write_sinr_grid_svg(std::ostream& os, const radio::SinrGrid& grid, double lo_db, double hi_db)
{
    const auto& r = grid.raster;
    const int px = std::max(1, 600 / std::max(r.width, r.height));
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << r.width * px << "\" height=\"" << r.height * px
       << "\" shape-rendering=\"crispEdges\">\n";
    os << "<title>SINR " << radio::to_string(grid.scenario) << "</title>\n";
    for (int row = 0; row < r.height; ++row) {
        // SVG y grows downwards; put row 0 (lowest y) at the bottom.
        const int y = (r.height - 1 - row) * px;
        for (int col = 0; col < r.width; ++col) {
            const double t = std::clamp((grid.at(col, row) - lo_db) / (hi_db - lo_db), 0.0, 1.0);
            const int level = static_cast<int>(std::lround(t * 255.0));
            os << "<rect x=\"" << col * px << "\" y=\"" << y << "\" width=\"" << px << "\" height=\"" << px
               << "\" fill=\"rgb(" << level << ',' << level << ',' << level << ")\"/>\n";
        }
    }
    os << "</svg>\n";
}

void write_sweep_svg(std::ostream& os, analytic::SweepParameter parameter, std::span<const FlowSpec> flows,
                     std::span<const analytic::SweepRow> rows)
{
    const PlotFrame f;
    const bool log_x = parameter == analytic::SweepParameter::Beta && !rows.empty() && rows.front().value > 0.0
                       && rows.back().value / rows.front().value > 100.0;
    auto xv = [&](double v) { return log_x ? std::log10(v) : v; };

    double x0 = rows.empty() ? 0.0 : xv(rows.front().value);
    double x1 = rows.empty() ? 1.0 : xv(rows.back().value);
    if (x1 <= x0)
        x1 = x0 + 1.0;
    double y1 = 0.0;
    for (const auto& row : rows)
        for (double t : row.report.theta.theta)
            y1 = std::max(y1, t);
    y1 = y1 > 0.0 ? y1 * 1.05 : 1.0;

    auto sx = [&](double v) { return f.left + (xv(v) - x0) / (x1 - x0) * f.plot_w(); };
    auto sy = [&](double t) { return f.top + (1.0 - t / y1) * f.plot_h(); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << f.left << "\" y1=\"" << f.top + f.plot_h() << "\" x2=\"" << f.left + f.plot_w()
       << "\" y2=\"" << f.top + f.plot_h() << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\"" << f.top + f.plot_h()
       << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double t = y1 * tick / 4.0;
        os << "<text x=\"" << f.left - 6 << "\" y=\"" << format_number(sy(t) + 4) << "\" text-anchor=\"end\">"
           << format_number(std::round(t * 1000.0) / 1000.0) << "</text>\n";
    }
    if (!rows.empty()) {
        os << "<text x=\"" << f.left << "\" y=\"" << f.height - 28 << "\">" << format_number(rows.front().value)
           << "</text>\n";
        os << "<text x=\"" << f.left + f.plot_w() << "\" y=\"" << f.height - 28 << "\" text-anchor=\"end\">"
           << format_number(rows.back().value) << "</text>\n";
    }
    os << "<text x=\"" << f.left + f.plot_w() / 2 << "\" y=\"" << f.height - 10 << "\" text-anchor=\"middle\">"
       << analytic::to_string(parameter) << (log_x ? " (log scale)" : "") << "</text>\n";

    for (std::size_t k = 0; k < flows.size(); ++k) {
        const char* colour = kPalette[k % kPalette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i)
            os << (i ? " " : "") << format_number(sx(rows[i].value)) << ',' << format_number(sy(rows[i].report.theta[k]));
        os << "\"/>\n";
        const double ly = f.top + 14.0 * (static_cast<double>(k) + 1.0);
        os << "<text x=\"" << f.left + f.plot_w() - 4 << "\" y=\"" << format_number(ly) << "\" text-anchor=\"end\" fill=\""
           << colour << "\">flow " << flows[k].id << " (" << to_string(flows[k].cls) << ")</text>\n";
    }
    os << "</svg>\n";
}

std::string RunManifest::config_hash() const
{
    return fnv1a_hex(subcommand + "\n" + resolved_config.dump());
}

nlohmann::json RunManifest::to_json() const
{
    nlohmann::json out;
    out["subcommand"] = subcommand;
    out["config_path"] = config_path;
    out["output_dir"] = output_dir;
    out["seed_override"] = seed_override ? nlohmann::json(*seed_override) : nlohmann::json(nullptr);
    out["tool_version"] = tool_version;
    out["config_hash"] = config_hash();
    out["resolved_config"] = resolved_config;
    return out;
}

} // namespace relaysched::io

#pragma once

#include "relaysched/analytic.hpp"
#include "relaysched/montecarlo.hpp"
#include "relaysched/radio.hpp"
#include "relaysched/relay_sim.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace relaysched::io {

/// Locale-independent "%.12g"; NaN prints as "nan".
std::string format_number(double v);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

void write_theta_csv(std::ostream& os, std::span<const FlowSpec> flows, const FixedPointReport& report);

/// Closed forms: RR per scheduled slot, RR as a share of slots, and the PF
/// closed form when the population is single-phase and all direct.
void write_closed_form_csv(std::ostream& os, std::span<const FlowSpec> flows, bool single_phase);

void write_sweep_csv(std::ostream& os, analytic::SweepParameter parameter, std::span<const FlowSpec> flows,
                     std::span<const analytic::SweepRow> rows);

void write_mc_csv(std::ostream& os, std::span<const FlowSpec> flows, const mc::McResult& result);
void write_mc_summary_csv(std::ostream& os, long long slots, const mc::McResult& result);
/// Columns: slot, flow_id, theta_bar.
void write_mc_trace_csv(std::ostream& os, std::span<const FlowSpec> flows, const mc::McResult& result);

/// Columns: tti, kind, node, ue, cqi, mcs, bytes. Backhaul rows use node
/// "donor>rnK" and are emitted in B subframes only.
void write_tti_trace_csv(std::ostream& os, const std::vector<sim::TtiRecord>& records);
void write_summary_csv(std::ostream& os, const sim::ScenarioSummary& summary);
void write_balance_csv(std::ostream& os, std::span<const sim::RelayBalance> report);
void write_comparison_csv(std::ostream& os, const sim::PlanComparison& cmp);

/// First row: origin_x, origin_y, cell size; then one row per raster row.
void write_sinr_grid_csv(std::ostream& os, const radio::SinrGrid& grid);

/// Grayscale heatmap, bright = high SINR, clipped to [lo_db, hi_db].
void write_sinr_grid_svg(std::ostream& os, const radio::SinrGrid& grid, double lo_db = -10.0, double hi_db = 40.0);

/// Line plot with one series per flow.
void write_sweep_svg(std::ostream& os, analytic::SweepParameter parameter, std::span<const FlowSpec> flows,
                     std::span<const analytic::SweepRow> rows);

struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed_override;
    std::string tool_version;
    nlohmann::json resolved_config;

    /// Hash of the subcommand and the resolved configuration.
    std::string config_hash() const;
    nlohmann::json to_json() const;
};

} // namespace relaysched::io

#pragma once

#include "relaysched/radio.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relaysched::sim {

/// B: relay phase, donor serves direct UEs and backhaul. D: access phase with
/// relays silent. U: access phase with relays transmitting to their UEs.
enum class SubframeKind : char { B = 'B', D = 'D', U = 'U' };

char to_char(SubframeKind k) noexcept;

class SubframePlan {
public:
    /// Accepts either a literal pattern ("BDDDUU") or run-length groups
    /// ("1B,3D,2U"). At least one B, and all B entries must lead the period.
    static SubframePlan parse(std::string_view text);

    /// FDD-style relay/access partition "k/(8-k)" for k = 1..7: period 8 with
    /// k B subframes followed by U subframes.
    static SubframePlan fdd_partition(std::string_view partition);

    static SubframePlan from_pattern(std::vector<SubframeKind> pattern);

    int period() const noexcept { return static_cast<int>(pattern_.size()); }
    SubframeKind at(long long tti) const noexcept { return pattern_[static_cast<std::size_t>(tti % period())]; }
    int count(SubframeKind k) const noexcept;
    /// Relay-phase fraction count(B) / period.
    double alpha() const noexcept;
    /// Literal pattern, e.g. "BDDDUU".
    std::string to_string() const;
    const std::vector<SubframeKind>& pattern() const noexcept { return pattern_; }

    friend bool operator==(const SubframePlan&, const SubframePlan&) = default;

private:
    std::vector<SubframeKind> pattern_;
};

enum class SchedulerPolicy { ProportionalFair, RoundRobin };

std::string_view to_string(SchedulerPolicy p) noexcept;
SchedulerPolicy parse_scheduler_policy(std::string_view name);

enum class RbAllocation {
    /// The winning flow takes every RB of the subframe.
    WholeSubframe,
    /// RBs are dealt one at a time, round robin over the eligible flows.
    RoundRobinSplit,
};

struct Traffic {
    enum class Kind { FullBuffer, ConstantBitRate };
    Kind kind = Kind::FullBuffer;
    /// Bytes offered per TTI for constant bit rate.
    long long bytes_per_tti = 0;

    static Traffic full_buffer() { return {}; }
    static Traffic cbr(long long bytes) { return {Kind::ConstantBitRate, bytes}; }
};

struct ScenarioConfig {
    radio::NodeGeometry geometry;
    /// Serving relay per UE; empty for UEs served directly by the donor.
    std::vector<std::optional<std::size_t>> ue_relay;
    SubframePlan plan = SubframePlan::parse("B");
    std::vector<Traffic> traffic;
    SchedulerPolicy donor_policy = SchedulerPolicy::ProportionalFair;
    SchedulerPolicy relay_policy = SchedulerPolicy::ProportionalFair;
    RbAllocation allocation = RbAllocation::WholeSubframe;
    /// Multiplier on the donor PF metric of backhaul flows.
    double backhaul_incentive = 1.0;
    int rb_count = 50;
    /// Data resource elements per RB per subframe.
    int symbols_per_rb = 120;
    long long ttis = 600;
    std::uint64_t seed = 1;
    long long buffer_capacity_bytes = 1'000'000;
    double scheduler_epsilon = 0.01;
    radio::CqiMapping cqi;

    bool is_relayed(std::size_t ue) const { return ue_relay[ue].has_value(); }

    /// Throws std::invalid_argument on orphan UEs or inconsistent sizes.
    void validate() const;
    /// Non-fatal notes, e.g. a run length that is not a multiple of the period.
    std::vector<std::string> warnings() const;
};

/// Store-and-forward queue at a relay for one relayed UE.
struct RelayBuffer {
    long long capacity = 0;
    long long queued = 0;
    long long arrivals = 0;
    long long departures = 0;
    long long drops = 0;

    /// Drop-tail enqueue; returns the bytes accepted.
    long long push(long long bytes);
    /// Dequeues up to `bytes`; returns the bytes removed.
    long long pop(long long bytes);
    bool conserved() const noexcept { return arrivals == departures + drops + queued; }
};

/// Donor or relay as seen in the trace.
struct NodeRef {
    bool is_donor = true;
    std::size_t relay = 0;

    std::string label() const;
    friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct UeLinkRecord {
    std::size_t ue = 0;
    NodeRef serving;
    double sinr_db = 0.0;
    int cqi = 0;
    std::optional<int> mcs;
    long long bytes = 0;

    friend bool operator==(const UeLinkRecord&, const UeLinkRecord&) = default;
};

/// Donor-to-relay link carrying one relayed UE's data; only present in B subframes.
struct BackhaulRecord {
    std::size_t ue = 0;
    std::size_t relay = 0;
    double sinr_db = 0.0;
    int cqi = 0;
    std::optional<int> mcs;
    long long bytes = 0;

    friend bool operator==(const BackhaulRecord&, const BackhaulRecord&) = default;
};

struct TtiRecord {
    long long tti = 0;
    SubframeKind kind = SubframeKind::B;
    std::vector<char> relay_transmitting;
    std::vector<char> relay_receiving;
    std::vector<UeLinkRecord> ues;
    std::vector<BackhaulRecord> backhaul;

    friend bool operator==(const TtiRecord&, const TtiRecord&) = default;
};

struct KindStats {
    double cqi_sum = 0.0;
    long long cqi_samples = 0;
    double mcs_sum = 0.0;
    long long mcs_samples = 0;
    long long bytes = 0;

    double mean_cqi() const;
    double mean_mcs() const;
};

struct RelayStats {
    /// Aggregate over the relay's per-UE buffers.
    RelayBuffer buffer;
    long long backhaul_bytes = 0;
    long long backhaul_subframes = 0;
    long long access_bytes = 0;
    long long access_subframes = 0;
    long long u_subframes = 0;
    long long idle_access_rbs = 0;
    /// Mean CQI efficiency of the backhaul link over B subframes.
    double backhaul_efficiency_sum = 0.0;
    long long backhaul_efficiency_samples = 0;
    /// Mean CQI efficiency of the relay's access links over U subframes.
    double access_efficiency_sum = 0.0;
    long long access_efficiency_samples = 0;
};

struct ScenarioSummary {
    std::string plan;
    long long ttis = 0;
    long long direct_bytes = 0;
    long long relayed_bytes = 0;
    long long backhaul_bytes = 0;
    long long drops = 0;
    long long half_duplex_violations = 0;
    /// Indexed by SubframeKind order B, D, U.
    std::array<KindStats, 3> direct;
    std::array<KindStats, 3> relayed;
    std::array<long long, 3> backhaul_bytes_by_kind{};
    std::vector<RelayStats> relays;
    std::vector<std::string> warnings;

    double direct_throughput() const;
    double relayed_throughput() const;
    const KindStats& direct_in(SubframeKind k) const;
    const KindStats& relayed_in(SubframeKind k) const;
};

struct ScenarioResult {
    std::vector<TtiRecord> records;
    ScenarioSummary summary;
};

std::size_t kind_index(SubframeKind k) noexcept;

/// TTI-level simulation of one donor cell with half-duplex decode-and-forward
/// relays. Deterministic for a given config, seed included.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Counts TTIs in which some relay both transmits and receives.
long long count_half_duplex_violations(const std::vector<TtiRecord>& records);

struct MetricComparison {
    std::string metric;
    double a = 0.0;
    double b = 0.0;
    bool higher_is_better = true;
    /// "a", "b" or "tie".
    std::string dominating;
};

struct PlanComparison {
    ScenarioSummary a;
    ScenarioSummary b;
    std::vector<MetricComparison> metrics;

    const MetricComparison& metric(std::string_view name) const;
};

/// Runs `cfg` under both plans with everything else, seed included, equal.
/// Metrics within `tie_tolerance` relative difference are marked "tie".
PlanComparison compare_plans(const ScenarioConfig& cfg, const SubframePlan& plan_a, const SubframePlan& plan_b,
                             double tie_tolerance = 0.01, unsigned jobs = 1);

enum class Provisioning { UnderProvisioned, Balanced, OverProvisioned };

std::string_view to_string(Provisioning p) noexcept;

struct RelayBalance {
    std::size_t relay = 0;
    double inbound_rate = 0.0;  // bytes per TTI into the relay buffers
    double outbound_rate = 0.0; // bytes per TTI delivered to relayed UEs
    double rho_r = 0.0;         // backhaul bits per resource element
    double rho_a = 0.0;         // access bits per resource element
    long long drops = 0;
    long long idle_access_rbs = 0;
    double plan_alpha = 0.0;
    /// Balancing split; absent when either link never measured a usable rate.
    std::optional<double> recommended_alpha;
    Provisioning backhaul = Provisioning::Balanced;
};

/// Inbound versus outbound balance per relay, judged against the balancing
/// split of the measured link efficiencies. Plans within `tolerance` of the
/// recommended alpha count as balanced.
std::vector<RelayBalance> buffer_balance_report(const ScenarioConfig& cfg, const ScenarioSummary& summary,
                                                double tolerance = 0.05);

} // namespace relaysched::sim

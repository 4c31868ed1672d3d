#include "relaysched/relay_sim.hpp"

#include "relaysched/analytic.hpp"
#include "relaysched/parallel.hpp"
#include "relaysched/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaysched::sim {

namespace {

constexpr long long kUnlimited = std::numeric_limits<long long>::max() / 4;

// Stream ids for fading: receivers are keyed by kind and index.
constexpr std::uint64_t kUeStream = 0x1ull << 32;
constexpr std::uint64_t kRelayStream = 0x2ull << 32;

SubframeKind parse_kind(char c)
{
    switch (c) {
    case 'B':
    case 'b':
        return SubframeKind::B;
    case 'D':
    case 'd':
        return SubframeKind::D;
    case 'U':
    case 'u':
        return SubframeKind::U;
    default:
        throw std::invalid_argument(std::string("unknown subframe kind '") + c + "'");
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

struct Candidate {
    std::size_t key;      // stable flow key within the scheduler
    double weight;        // PF incentive
    double bits_per_rb;   // efficiency * symbols_per_rb
    long long backlog;    // bytes available
    double average;       // PF average throughput
};

struct Grant {
    std::size_t candidate;
    int rbs;
    long long bytes;
};

long long bytes_for(double bits_per_rb, int rbs)
{
    return static_cast<long long>(std::floor(bits_per_rb * rbs / 8.0));
}

// Scheduling state of one node: PF averages by flow key and the RR cursor.
struct NodeScheduler {
    SchedulerPolicy policy = SchedulerPolicy::ProportionalFair;
    std::vector<double> average;
    std::size_t rr_last = std::numeric_limits<std::size_t>::max();

    std::vector<Grant> allocate(const std::vector<Candidate>& cands, RbAllocation mode, int rb_count)
    {
        std::vector<Grant> grants;
        if (cands.empty())
            return grants;

        if (mode == RbAllocation::WholeSubframe) {
            std::size_t pick = 0;
            if (policy == SchedulerPolicy::RoundRobin) {
                pick = rr_next(cands);
            } else {
                double best = -1.0;
                for (std::size_t c = 0; c < cands.size(); ++c) {
                    const double rate = cands[c].bits_per_rb * rb_count;
                    const double metric = cands[c].weight * rate / cands[c].average;
                    if (metric > best) {
                        best = metric;
                        pick = c;
                    }
                }
            }
            rr_last = cands[pick].key;
            const long long bytes = std::min(cands[pick].backlog, bytes_for(cands[pick].bits_per_rb, rb_count));
            grants.push_back({pick, rb_count, bytes});
            return grants;
        }

        // Deal RBs one at a time over flows that still have backlog.
        std::vector<int> rbs(cands.size(), 0);
        std::size_t cursor = rr_next(cands);
        for (int rb = 0; rb < rb_count; ++rb) {
            bool placed = false;
            for (std::size_t step = 0; step < cands.size(); ++step) {
                const std::size_t c = (cursor + step) % cands.size();
                if (bytes_for(cands[c].bits_per_rb, rbs[c]) < cands[c].backlog) {
                    ++rbs[c];
                    cursor = (c + 1) % cands.size();
                    placed = true;
                    break;
                }
            }
            if (!placed)
                break;
        }
        for (std::size_t c = 0; c < cands.size(); ++c) {
            if (rbs[c] == 0)
                continue;
            grants.push_back({c, rbs[c], std::min(cands[c].backlog, bytes_for(cands[c].bits_per_rb, rbs[c]))});
            rr_last = cands[c].key;
        }
        return grants;
    }

    // First candidate whose key follows the last served key, cyclically.
    std::size_t rr_next(const std::vector<Candidate>& cands) const
    {
        if (rr_last == std::numeric_limits<std::size_t>::max())
            return 0;
        for (std::size_t c = 0; c < cands.size(); ++c)
            if (cands[c].key > rr_last)
                return c;
        return 0;
    }

    void update(const std::vector<double>& served, double eps)
    {
        for (std::size_t k = 0; k < average.size(); ++k)
            average[k] = (1.0 - eps) * average[k] + eps * served[k];
    }
};

} // namespace

char to_char(SubframeKind k) noexcept
{
    return static_cast<char>(k);
}

std::size_t kind_index(SubframeKind k) noexcept
{
    switch (k) {
    case SubframeKind::B:
        return 0;
    case SubframeKind::D:
        return 1;
    case SubframeKind::U:
        return 2;
    }
    return 0;
}

SubframePlan SubframePlan::from_pattern(std::vector<SubframeKind> pattern)
{
    if (pattern.empty())
        throw std::invalid_argument("subframe plan is empty");
    if (pattern.front() != SubframeKind::B)
        throw std::invalid_argument("subframe plan must start with a B subframe");
    bool past_prefix = false;
    for (auto k : pattern) {
        if (k != SubframeKind::B)
            past_prefix = true;
        else if (past_prefix)
            throw std::invalid_argument("B subframes must form a contiguous prefix of the period");
    }
    SubframePlan p;
    p.pattern_ = std::move(pattern);
    return p;
}

SubframePlan SubframePlan::parse(std::string_view text)
{
    text = trim(text);
    std::vector<SubframeKind> pattern;
    if (text.find_first_of("0123456789") == std::string_view::npos) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                pattern.push_back(parse_kind(c));
        return from_pattern(std::move(pattern));
    }

    // Run-length groups such as "1B,3D,2U" (also accepts "{1B, 3D, 2U}").
    if (!text.empty() && text.front() == '{' && text.back() == '}')
        text = text.substr(1, text.size() - 2);
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto group = trim(text.substr(0, comma));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (group.size() < 2)
            throw std::invalid_argument("malformed subframe group '" + std::string(group) + "'");
        int count = 0;
        std::size_t k = 0;
        for (; k + 1 < group.size() && std::isdigit(static_cast<unsigned char>(group[k])); ++k)
            count = count * 10 + (group[k] - '0');
        if (k == 0 || k + 1 != group.size() || count <= 0)
            throw std::invalid_argument("malformed subframe group '" + std::string(group) + "'");
        pattern.insert(pattern.end(), static_cast<std::size_t>(count), parse_kind(group.back()));
    }
    return from_pattern(std::move(pattern));
}

SubframePlan SubframePlan::fdd_partition(std::string_view partition)
{
    partition = trim(partition);
    if (partition.size() != 3 || partition[1] != '/' || !std::isdigit(static_cast<unsigned char>(partition[0]))
        || !std::isdigit(static_cast<unsigned char>(partition[2])))
        throw std::invalid_argument("partition must look like 'k/m'");
    const int relay = partition[0] - '0';
    const int access = partition[2] - '0';
    if (relay < 1 || relay > 7 || relay + access != 8)
        throw std::invalid_argument("partition must be one of 1/7 ... 7/1");
    std::vector<SubframeKind> pattern(static_cast<std::size_t>(relay), SubframeKind::B);
    pattern.insert(pattern.end(), static_cast<std::size_t>(access), SubframeKind::U);
    return from_pattern(std::move(pattern));
}

int SubframePlan::count(SubframeKind k) const noexcept
{
    return static_cast<int>(std::count(pattern_.begin(), pattern_.end(), k));
}

double SubframePlan::alpha() const noexcept
{
    return static_cast<double>(count(SubframeKind::B)) / period();
}

std::string SubframePlan::to_string() const
{
    std::string s;
    for (auto k : pattern_)
        s.push_back(to_char(k));
    return s;
}

std::string_view to_string(SchedulerPolicy p) noexcept
{
    return p == SchedulerPolicy::ProportionalFair ? "pf" : "rr";
}

SchedulerPolicy parse_scheduler_policy(std::string_view name)
{
    if (name == "pf")
        return SchedulerPolicy::ProportionalFair;
    if (name == "rr")
        return SchedulerPolicy::RoundRobin;
    throw std::invalid_argument("unknown scheduler policy '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const
{
    geometry.validate();
    cqi.validate();
    const std::size_t n = geometry.ues.size();
    if (ue_relay.size() != n)
        throw std::invalid_argument("ue_relay must name a serving node for every UE");
    if (traffic.size() != n)
        throw std::invalid_argument("traffic must be given for every UE");
    for (std::size_t u = 0; u < n; ++u) {
        if (ue_relay[u] && *ue_relay[u] >= geometry.relays.size())
            throw std::invalid_argument("UE " + std::to_string(u) + " is attached to unknown relay "
                                        + std::to_string(*ue_relay[u]));
        if (traffic[u].kind == Traffic::Kind::ConstantBitRate && traffic[u].bytes_per_tti < 0)
            throw std::invalid_argument("constant bit rate must be non-negative");
    }
    if (rb_count <= 0 || symbols_per_rb <= 0)
        throw std::invalid_argument("rb_count and symbols_per_rb must be positive");
    if (ttis <= 0)
        throw std::invalid_argument("run length must be positive");
    if (buffer_capacity_bytes <= 0)
        throw std::invalid_argument("relay buffer capacity must be positive");
    if (!(scheduler_epsilon > 0.0 && scheduler_epsilon < 1.0))
        throw std::invalid_argument("scheduler_epsilon must lie in (0, 1)");
    if (!(backhaul_incentive > 0.0) || !std::isfinite(backhaul_incentive))
        throw std::invalid_argument("backhaul_incentive must be positive");
}

std::vector<std::string> ScenarioConfig::warnings() const
{
    std::vector<std::string> w;
    if (ttis % plan.period() != 0)
        w.push_back("run length " + std::to_string(ttis) + " is not a multiple of the plan period "
                    + std::to_string(plan.period()));
    return w;
}

long long RelayBuffer::push(long long bytes)
{
    arrivals += bytes;
    const long long accepted = std::min(bytes, capacity - queued);
    queued += accepted;
    drops += bytes - accepted;
    return accepted;
}

long long RelayBuffer::pop(long long bytes)
{
    const long long removed = std::min(bytes, queued);
    queued -= removed;
    departures += removed;
    return removed;
}

std::string NodeRef::label() const
{
    return is_donor ? "donor" : "rn" + std::to_string(relay);
}

double KindStats::mean_cqi() const
{
    return cqi_samples ? cqi_sum / static_cast<double>(cqi_samples) : std::numeric_limits<double>::quiet_NaN();
}

double KindStats::mean_mcs() const
{
    return mcs_samples ? mcs_sum / static_cast<double>(mcs_samples) : std::numeric_limits<double>::quiet_NaN();
}

double ScenarioSummary::direct_throughput() const
{
    return static_cast<double>(direct_bytes) / static_cast<double>(ttis);
}

double ScenarioSummary::relayed_throughput() const
{
    return static_cast<double>(relayed_bytes) / static_cast<double>(ttis);
}

const KindStats& ScenarioSummary::direct_in(SubframeKind k) const
{
    return direct[kind_index(k)];
}

const KindStats& ScenarioSummary::relayed_in(SubframeKind k) const
{
    return relayed[kind_index(k)];
}

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    const auto& g = cfg.geometry;
    const std::size_t n_ue = g.ues.size();
    const std::size_t n_relay = g.relays.size();
    const std::size_t n_tx = g.transmitter_count();

    ScenarioResult result;
    auto& summary = result.summary;
    summary.plan = cfg.plan.to_string();
    summary.ttis = cfg.ttis;
    summary.warnings = cfg.warnings();
    summary.relays.resize(n_relay);
    result.records.reserve(static_cast<std::size_t>(cfg.ttis));

    std::vector<RandomStream> ue_fading;
    std::vector<RandomStream> relay_fading;
    for (std::size_t u = 0; u < n_ue; ++u)
        ue_fading.emplace_back(cfg.seed, kUeStream | u);
    for (std::size_t r = 0; r < n_relay; ++r)
        relay_fading.emplace_back(cfg.seed, kRelayStream | r);

    // Donor flow keys: UE u direct at u, backhaul for relayed UE u at n_ue + u.
    NodeScheduler donor{cfg.donor_policy, std::vector<double>(2 * n_ue, 1.0)};
    std::vector<NodeScheduler> relay_sched(n_relay, NodeScheduler{cfg.relay_policy, std::vector<double>(n_ue, 1.0)});

    std::vector<long long> donor_queue(n_ue, 0);
    std::vector<RelayBuffer> buffers(n_ue, RelayBuffer{cfg.buffer_capacity_bytes});

    auto donor_backlog = [&](std::size_t u) {
        return cfg.traffic[u].kind == Traffic::Kind::FullBuffer ? kUnlimited : donor_queue[u];
    };
    auto relay_has_data = [&](std::size_t r) {
        for (std::size_t u = 0; u < n_ue; ++u)
            if (cfg.ue_relay[u] == r && buffers[u].queued > 0)
                return true;
        return false;
    };

    std::vector<std::vector<double>> fading_ue(n_ue, std::vector<double>(n_tx));
    std::vector<std::vector<double>> fading_relay(n_relay, std::vector<double>(n_tx));

    for (long long t = 0; t < cfg.ttis; ++t) {
        for (std::size_t u = 0; u < n_ue; ++u)
            if (cfg.traffic[u].kind == Traffic::Kind::ConstantBitRate)
                donor_queue[u] += cfg.traffic[u].bytes_per_tti;

        TtiRecord rec;
        rec.tti = t;
        rec.kind = cfg.plan.at(t);
        const std::size_t ki = kind_index(rec.kind);

        radio::ActiveSet active = radio::donor_only(g);
        rec.relay_transmitting.assign(n_relay, 0);
        rec.relay_receiving.assign(n_relay, 0);
        if (rec.kind == SubframeKind::U) {
            for (std::size_t r = 0; r < n_relay; ++r) {
                if (relay_has_data(r)) {
                    active[radio::relay_tx(r)] = 1;
                    rec.relay_transmitting[r] = 1;
                }
            }
        }

        // Fixed number of draws per TTI so the streams do not depend on the plan.
        for (std::size_t u = 0; u < n_ue; ++u)
            for (auto& f : fading_ue[u])
                f = ue_fading[u].exponential(1.0);
        for (std::size_t r = 0; r < n_relay; ++r)
            for (auto& f : fading_relay[r])
                f = relay_fading[r].exponential(1.0);

        rec.ues.resize(n_ue);
        for (std::size_t u = 0; u < n_ue; ++u) {
            auto& link = rec.ues[u];
            link.ue = u;
            const radio::TxId serving = cfg.ue_relay[u] ? radio::relay_tx(*cfg.ue_relay[u]) : radio::kDonor;
            link.serving = cfg.ue_relay[u] ? NodeRef{false, *cfg.ue_relay[u]} : NodeRef{};
            link.sinr_db = radio::sinr_db(g, active, serving, {radio::ReceiverKind::Ue, u}, fading_ue[u]);
            link.cqi = cfg.cqi.quantize(link.sinr_db);
        }

        std::vector<int> backhaul_cqi(n_relay, 0);
        std::vector<double> backhaul_sinr(n_relay, 0.0);
        if (rec.kind == SubframeKind::B) {
            for (std::size_t r = 0; r < n_relay; ++r) {
                backhaul_sinr[r] = radio::sinr_db(g, active, radio::kDonor, {radio::ReceiverKind::Relay, r},
                                                  fading_relay[r]);
                backhaul_cqi[r] = cfg.cqi.quantize(backhaul_sinr[r]);
                auto& rs = summary.relays[r];
                rs.backhaul_efficiency_sum += cfg.cqi.efficiency_of(backhaul_cqi[r]);
                ++rs.backhaul_efficiency_samples;
            }
            for (std::size_t u = 0; u < n_ue; ++u) {
                if (!cfg.ue_relay[u])
                    continue;
                const std::size_t r = *cfg.ue_relay[u];
                rec.backhaul.push_back({u, r, backhaul_sinr[r], backhaul_cqi[r], std::nullopt, 0});
            }
        }

        // Donor: direct UEs always, backhaul flows only in B subframes.
        std::vector<Candidate> cands;
        for (std::size_t u = 0; u < n_ue; ++u) {
            if (cfg.ue_relay[u])
                continue;
            const int cqi = rec.ues[u].cqi;
            const long long backlog = donor_backlog(u);
            if (cqi > 0 && backlog > 0)
                cands.push_back({u, 1.0, cfg.cqi.efficiency_of(cqi) * cfg.symbols_per_rb, backlog, donor.average[u]});
        }
        if (rec.kind == SubframeKind::B) {
            for (const auto& bh : rec.backhaul) {
                const long long backlog = donor_backlog(bh.ue);
                if (bh.cqi > 0 && backlog > 0)
                    cands.push_back({n_ue + bh.ue, cfg.backhaul_incentive,
                                     cfg.cqi.efficiency_of(bh.cqi) * cfg.symbols_per_rb, backlog,
                                     donor.average[n_ue + bh.ue]});
            }
        }

        std::vector<double> donor_served(2 * n_ue, 0.0);
        for (const auto& grant : donor.allocate(cands, cfg.allocation, cfg.rb_count)) {
            const std::size_t key = cands[grant.candidate].key;
            donor_served[key] = static_cast<double>(grant.bytes);
            if (key < n_ue) {
                auto& link = rec.ues[key];
                link.mcs = link.cqi;
                link.bytes = grant.bytes;
                if (cfg.traffic[key].kind == Traffic::Kind::ConstantBitRate)
                    donor_queue[key] -= grant.bytes;
            } else {
                const std::size_t u = key - n_ue;
                auto it = std::find_if(rec.backhaul.begin(), rec.backhaul.end(),
                                       [u](const BackhaulRecord& b) { return b.ue == u; });
                it->mcs = it->cqi;
                it->bytes = grant.bytes;
                if (cfg.traffic[u].kind == Traffic::Kind::ConstantBitRate)
                    donor_queue[u] -= grant.bytes;
                buffers[u].push(grant.bytes);
                rec.relay_receiving[it->relay] = 1;
                auto& rs = summary.relays[it->relay];
                rs.backhaul_bytes += grant.bytes;
                ++rs.backhaul_subframes;
            }
        }
        donor.update(donor_served, cfg.scheduler_epsilon);

        // Relays: serve their own UEs in U subframes when they hold data.
        if (rec.kind == SubframeKind::U) {
            for (std::size_t r = 0; r < n_relay; ++r) {
                auto& rs = summary.relays[r];
                ++rs.u_subframes;
                for (std::size_t u = 0; u < n_ue; ++u) {
                    if (cfg.ue_relay[u] != r)
                        continue;
                    rs.access_efficiency_sum += cfg.cqi.efficiency_of(rec.ues[u].cqi);
                    ++rs.access_efficiency_samples;
                }
                if (!rec.relay_transmitting[r]) {
                    rs.idle_access_rbs += cfg.rb_count;
                    continue;
                }
                std::vector<Candidate> rcands;
                for (std::size_t u = 0; u < n_ue; ++u) {
                    if (cfg.ue_relay[u] != r || buffers[u].queued == 0 || rec.ues[u].cqi == 0)
                        continue;
                    rcands.push_back({u, 1.0, cfg.cqi.efficiency_of(rec.ues[u].cqi) * cfg.symbols_per_rb,
                                      buffers[u].queued, relay_sched[r].average[u]});
                }
                std::vector<double> served(n_ue, 0.0);
                int used_rbs = 0;
                for (const auto& grant : relay_sched[r].allocate(rcands, cfg.allocation, cfg.rb_count)) {
                    const std::size_t u = rcands[grant.candidate].key;
                    const long long bytes = buffers[u].pop(grant.bytes);
                    auto& link = rec.ues[u];
                    link.mcs = link.cqi;
                    link.bytes = bytes;
                    served[u] = static_cast<double>(bytes);
                    rs.access_bytes += bytes;
                    used_rbs += grant.rbs;
                }
                if (used_rbs > 0)
                    ++rs.access_subframes;
                rs.idle_access_rbs += cfg.rb_count - used_rbs;
                relay_sched[r].update(served, cfg.scheduler_epsilon);
            }
        }

        for (const auto& link : rec.ues) {
            auto& ks = cfg.ue_relay[link.ue] ? summary.relayed[ki] : summary.direct[ki];
            ks.cqi_sum += link.cqi;
            ++ks.cqi_samples;
            if (link.mcs) {
                ks.mcs_sum += *link.mcs;
                ++ks.mcs_samples;
            }
            ks.bytes += link.bytes;
            (cfg.ue_relay[link.ue] ? summary.relayed_bytes : summary.direct_bytes) += link.bytes;
        }
        for (const auto& bh : rec.backhaul) {
            summary.backhaul_bytes += bh.bytes;
            summary.backhaul_bytes_by_kind[ki] += bh.bytes;
        }

        result.records.push_back(std::move(rec));
    }

    for (std::size_t u = 0; u < n_ue; ++u) {
        if (!cfg.ue_relay[u])
            continue;
        auto& agg = summary.relays[*cfg.ue_relay[u]].buffer;
        agg.capacity += buffers[u].capacity;
        agg.queued += buffers[u].queued;
        agg.arrivals += buffers[u].arrivals;
        agg.departures += buffers[u].departures;
        agg.drops += buffers[u].drops;
        summary.drops += buffers[u].drops;
    }
    summary.half_duplex_violations = count_half_duplex_violations(result.records);
    return result;
}

long long count_half_duplex_violations(const std::vector<TtiRecord>& records)
{
    long long violations = 0;
    for (const auto& rec : records) {
        for (std::size_t r = 0; r < rec.relay_transmitting.size(); ++r) {
            if (rec.relay_transmitting[r] && rec.relay_receiving[r]) {
                ++violations;
                break;
            }
        }
    }
    return violations;
}

const MetricComparison& PlanComparison::metric(std::string_view name) const
{
    for (const auto& m : metrics)
        if (m.metric == name)
            return m;
    throw std::out_of_range("no metric named '" + std::string(name) + "'");
}

PlanComparison compare_plans(const ScenarioConfig& cfg, const SubframePlan& plan_a, const SubframePlan& plan_b,
                             double tie_tolerance, unsigned jobs)
{
    if (plan_a.period() != plan_b.period())
        throw std::domain_error("plans of different periods cannot be compared");
    if (!(tie_tolerance >= 0.0))
        throw std::invalid_argument("tie tolerance must be non-negative");

    std::array<ScenarioSummary, 2> summaries;
    const std::array<const SubframePlan*, 2> plans{&plan_a, &plan_b};
    parallel_for(2, jobs, [&](std::size_t k) {
        ScenarioConfig local = cfg;
        local.plan = *plans[k];
        summaries[k] = run_scenario(local).summary;
    });

    PlanComparison out;
    out.a = std::move(summaries[0]);
    out.b = std::move(summaries[1]);

    auto add = [&](std::string name, double a, double b, bool higher_is_better) {
        MetricComparison m{std::move(name), a, b, higher_is_better, "tie"};
        if (std::isnan(a) || std::isnan(b)) {
            m.dominating = "n/a";
        } else if (std::abs(a - b) > tie_tolerance * std::max(std::abs(a), std::abs(b))) {
            m.dominating = (a > b) == higher_is_better ? "a" : "b";
        }
        out.metrics.push_back(std::move(m));
    };

    add("direct_throughput", out.a.direct_throughput(), out.b.direct_throughput(), true);
    add("relayed_throughput", out.a.relayed_throughput(), out.b.relayed_throughput(), true);
    add("drops", static_cast<double>(out.a.drops), static_cast<double>(out.b.drops), false);
    for (auto k : {SubframeKind::B, SubframeKind::D, SubframeKind::U}) {
        const std::string suffix(1, to_char(k));
        add("direct_mean_cqi_" + suffix, out.a.direct_in(k).mean_cqi(), out.b.direct_in(k).mean_cqi(), true);
        add("relayed_mean_cqi_" + suffix, out.a.relayed_in(k).mean_cqi(), out.b.relayed_in(k).mean_cqi(), true);
        add("direct_mean_mcs_" + suffix, out.a.direct_in(k).mean_mcs(), out.b.direct_in(k).mean_mcs(), true);
    }
    // D and U pooled: the subframes outside the relay phase, comparable
    // between plans that only differ in how that stretch is split.
    auto pooled = [](const ScenarioSummary& s) {
        KindStats d = s.direct_in(SubframeKind::D);
        const KindStats& u = s.direct_in(SubframeKind::U);
        d.cqi_sum += u.cqi_sum;
        d.cqi_samples += u.cqi_samples;
        d.mcs_sum += u.mcs_sum;
        d.mcs_samples += u.mcs_samples;
        d.bytes += u.bytes;
        return d;
    };
    add("direct_mean_cqi_DU", pooled(out.a).mean_cqi(), pooled(out.b).mean_cqi(), true);
    add("direct_mean_mcs_DU", pooled(out.a).mean_mcs(), pooled(out.b).mean_mcs(), true);
    return out;
}

std::string_view to_string(Provisioning p) noexcept
{
    switch (p) {
    case Provisioning::UnderProvisioned:
        return "under_provisioned";
    case Provisioning::Balanced:
        return "balanced";
    case Provisioning::OverProvisioned:
        return "over_provisioned";
    }
    return "?";
}

std::vector<RelayBalance> buffer_balance_report(const ScenarioConfig& cfg, const ScenarioSummary& summary,
                                                double tolerance)
{
    std::vector<RelayBalance> out;
    const double ttis = static_cast<double>(summary.ttis);
    for (std::size_t r = 0; r < summary.relays.size(); ++r) {
        const auto& rs = summary.relays[r];
        RelayBalance b;
        b.relay = r;
        b.inbound_rate = static_cast<double>(rs.buffer.arrivals) / ttis;
        b.outbound_rate = static_cast<double>(rs.buffer.departures) / ttis;
        if (rs.backhaul_efficiency_samples)
            b.rho_r = rs.backhaul_efficiency_sum / static_cast<double>(rs.backhaul_efficiency_samples);
        if (rs.access_efficiency_samples)
            b.rho_a = rs.access_efficiency_sum / static_cast<double>(rs.access_efficiency_samples);
        b.drops = rs.buffer.drops;
        b.idle_access_rbs = rs.idle_access_rbs;
        b.plan_alpha = cfg.plan.alpha();
        if (b.rho_r > 0.0 && b.rho_a > 0.0) {
            const double target = analytic::optimal_split(b.rho_r, b.rho_a);
            b.recommended_alpha = target;
            if (b.plan_alpha < target - tolerance)
                b.backhaul = Provisioning::UnderProvisioned;
            else if (b.plan_alpha > target + tolerance)
                b.backhaul = Provisioning::OverProvisioned;
        }
        out.push_back(b);
    }
    return out;
}

} // namespace relaysched::sim

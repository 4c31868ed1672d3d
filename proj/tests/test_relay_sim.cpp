#include "support.hpp"

#include "relaysched/relay_sim.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace relaysched;
using namespace relaysched::sim;

namespace {

ScenarioConfig example()
{
    return io::load_sim_job(support::load("sim_1b3d2u.json")).scenario;
}

void set_relayed_traffic(ScenarioConfig& cfg, Traffic t)
{
    for (std::size_t u = 0; u < cfg.traffic.size(); ++u)
        if (cfg.is_relayed(u))
            cfg.traffic[u] = t;
}

} // namespace

TEST_CASE("subframe plans")
{
    CHECK(SubframePlan::parse("1B,3D,2U").to_string() == "BDDDUU");
    CHECK(SubframePlan::parse("BDDDUU") == SubframePlan::parse("{1B, 3D, 2U}"));
    const auto p = SubframePlan::parse("1B,3D,2U");
    CHECK(p.period() == 6);
    CHECK(p.alpha() == doctest::Approx(1.0 / 6.0));
    CHECK(p.at(7) == SubframeKind::D);
    CHECK(p.count(SubframeKind::U) == 2);

    for (int k = 1; k <= 7; ++k) {
        const auto f = SubframePlan::fdd_partition(std::to_string(k) + "/" + std::to_string(8 - k));
        CHECK(f.period() == 8);
        CHECK(f.count(SubframeKind::B) == k);
    }
    CHECK_THROWS(SubframePlan::fdd_partition("3/4"));
    CHECK_THROWS(SubframePlan::fdd_partition("0/8"));
    CHECK_THROWS(SubframePlan::parse("DDUU"));
    CHECK_THROWS(SubframePlan::parse("BDBU"));
    CHECK_THROWS(SubframePlan::parse("1B,2X"));
    CHECK_THROWS(SubframePlan::parse(""));
}

TEST_CASE("relay buffer is drop-tail and conserves bytes")
{
    RelayBuffer b;
    b.capacity = 100;
    CHECK(b.push(60) == 60);
    CHECK(b.push(60) == 40);
    CHECK(b.drops == 20);
    CHECK(b.pop(30) == 30);
    CHECK(b.pop(500) == 70);
    CHECK(b.queued == 0);
    CHECK(b.conserved());
}

TEST_CASE("scenario validation")
{
    auto cfg = example();
    cfg.ue_relay.back() = 9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = example();
    cfg.ttis = 601;
    CHECK_FALSE(cfg.warnings().empty());
}

TEST_CASE("invariants on the example run")
{
    const auto cfg = example();
    const auto r = run_scenario(cfg);
    REQUIRE(r.records.size() == 600);
    CHECK(r.summary.half_duplex_violations == 0);
    CHECK(count_half_duplex_violations(r.records) == 0);

    long long relayed_outside_u = 0, backhaul_outside_b = 0, relay_bytes_in_b = 0;
    for (const auto& rec : r.records) {
        for (const auto& link : rec.ues) {
            if (cfg.is_relayed(link.ue) && rec.kind != SubframeKind::U)
                relayed_outside_u += link.bytes;
            if (!link.serving.is_donor && rec.kind == SubframeKind::B)
                relay_bytes_in_b += link.bytes;
            if (link.mcs)
                CHECK(*link.mcs <= link.cqi);
            else
                CHECK(link.bytes == 0);
        }
        for (const auto& bh : rec.backhaul)
            if (rec.kind != SubframeKind::B)
                backhaul_outside_b += bh.bytes;
    }
    CHECK(relayed_outside_u == 0);
    CHECK(backhaul_outside_b == 0);
    CHECK(relay_bytes_in_b == 0);
    CHECK(r.summary.backhaul_bytes_by_kind[kind_index(SubframeKind::D)] == 0);
    CHECK(r.summary.backhaul_bytes_by_kind[kind_index(SubframeKind::U)] == 0);

    for (const auto& rs : r.summary.relays)
        CHECK(rs.buffer.conserved());
    CHECK(r.summary.relayed_bytes > 0);
}

TEST_CASE("direct users do better in D than in U")
{
    const auto r = run_scenario(example());
    CHECK(r.summary.direct_in(SubframeKind::D).mean_mcs() >= r.summary.direct_in(SubframeKind::U).mean_mcs());
}

TEST_CASE("silent relays add no interference")
{
    auto cfg = example();
    set_relayed_traffic(cfg, Traffic::cbr(0));
    const auto with_u = run_scenario(cfg);
    cfg.plan = SubframePlan::parse("BDDDDD");
    const auto all_d = run_scenario(cfg);
    for (std::size_t t = 0; t < with_u.records.size(); ++t) {
        const auto& a = with_u.records[t];
        const auto& b = all_d.records[t];
        if (a.kind != SubframeKind::U)
            continue;
        for (std::size_t k = 0; k < a.ues.size(); ++k)
            if (!cfg.is_relayed(a.ues[k].ue))
                CHECK(a.ues[k].sinr_db == b.ues[k].sinr_db);
    }
}

TEST_CASE("without relays the plan is irrelevant")
{
    auto cfg = example();
    cfg.geometry.relays.clear();
    for (auto& r : cfg.ue_relay)
        r.reset();
    const auto a = run_scenario(cfg);
    cfg.plan = SubframePlan::parse("1B,5U");
    const auto b = run_scenario(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t)
        CHECK(a.records[t].ues == b.records[t].ues);
}

TEST_CASE("relayed users only hear from their relay in U")
{
    auto cfg = example();
    set_relayed_traffic(cfg, Traffic::full_buffer());
    cfg.plan = SubframePlan::parse("1B,5U");
    const auto r = run_scenario(cfg);
    for (auto k : {SubframeKind::B, SubframeKind::D})
        CHECK(r.summary.relayed_in(k).bytes == 0);
    CHECK(r.summary.relayed_in(SubframeKind::U).bytes > 0);
    CHECK(r.summary.relayed_in(SubframeKind::U).mean_cqi() < r.summary.direct_in(SubframeKind::B).mean_cqi());
}

TEST_CASE("runs are deterministic")
{
    const auto cfg = example();
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    CHECK(a.records == b.records);
}

TEST_CASE("plan comparisons")
{
    const auto job = io::load_compare_job(support::load("compare_plans.json"));

    SUBCASE("identical plans tie everywhere")
    {
        const auto c = compare_plans(job.scenario, job.plan_a, job.plan_a, job.tie_tolerance);
        for (const auto& m : c.metrics)
            CHECK((m.dominating == "tie" || m.dominating == "n/a"));
        CHECK(c.a.direct_bytes == c.b.direct_bytes);
    }

    SUBCASE("direct-only subframes are not worse for direct users")
    {
        const auto c = compare_plans(job.scenario, job.plan_a, job.plan_b, job.tie_tolerance, 2);
        CHECK(c.metric("direct_throughput").dominating != "b");
        const auto& rel = c.metric("relayed_throughput");
        CHECK(std::abs(rel.a - rel.b) <= 0.05 * std::max(rel.a, rel.b));
        CHECK(c.metric("direct_mean_mcs_D").a >= c.metric("direct_mean_mcs_U").a);
    }

    SUBCASE("D-only access starves relayed users")
    {
        auto cfg = job.scenario;
        set_relayed_traffic(cfg, Traffic::full_buffer());
        const auto c = compare_plans(cfg, SubframePlan::parse("1B,5D"), SubframePlan::parse("1B,5U"));
        CHECK(c.a.relayed_bytes == 0);
        CHECK(c.b.relayed_bytes > 0);
    }

    SUBCASE("periods must match")
    {
        CHECK_THROWS_AS(compare_plans(job.scenario, SubframePlan::parse("BU"), job.plan_a), std::domain_error);
    }
}

TEST_CASE("buffer balance")
{
    auto cfg = example();
    set_relayed_traffic(cfg, Traffic::full_buffer());
    cfg.plan = SubframePlan::fdd_partition("1/7");
    const auto r = run_scenario(cfg);
    const auto report = buffer_balance_report(cfg, r.summary);
    REQUIRE(report.size() == cfg.geometry.relays.size());
    for (const auto& b : report) {
        REQUIRE(b.recommended_alpha);
        CHECK(*b.recommended_alpha == doctest::Approx(b.rho_a / (b.rho_r + b.rho_a)));
        CHECK(b.plan_alpha == doctest::Approx(0.125));
        CHECK(b.backhaul == Provisioning::UnderProvisioned);
        CHECK(b.idle_access_rbs > 0);
    }
}

#include "cli_harness.hpp"
#include "support.hpp"

#include <doctest.h>

#include <json.hpp>
#include <stdexcept>

using namespace harness;

namespace {

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text)
{
    std::ofstream(dir / name) << text;
    return dir / name;
}

} // namespace

TEST_CASE("solve writes theta and a manifest")
{
    const auto dir = scratch("solve");
    const auto r = run({"solve", "--config", support::config_path("baseline_solve.json"), "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "theta.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"flow_id", "class", "theta", "residual", "converged"});
    CHECK(std::abs(std::stod(rows[1][2]) - 0.79) <= 0.01);
    CHECK(std::abs(std::stod(rows[2][2]) - 0.44) <= 0.01);
    CHECK(rows[1][4] == "true");

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["subcommand"] == "solve");
    CHECK(manifest["config_hash"].get<std::string>().size() == 16);
    CHECK(manifest["resolved_config"]["flows"].size() == 2);
}

TEST_CASE("single flow solves to its mean gain")
{
    const auto dir = scratch("single");
    const auto cfg = write_file(dir, "one.json", R"({"flows": [{"class": "direct", "lambda_r": 4}]})");
    REQUIRE(run({"solve", "--config", cfg.string(), "--out", (dir / "out").string()}).code == 0);
    CHECK(std::stod(read_csv(dir / "out" / "theta.csv")[1][2]) == doctest::Approx(0.25));
}

TEST_CASE("malformed config exits 1 and writes nothing")
{
    const auto dir = scratch("malformed");
    const auto cfg = write_file(dir, "bad.json", "{\n  \"flows\": [\n");
    const auto out = dir / "out";
    const auto r = run({"solve", "--config", cfg.string(), "--out", out.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("bad.json:3") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    CHECK(run({"solve", "--config", (dir / "missing.json").string(), "--out", out.string()}).code == 1);
    CHECK_FALSE(fs::exists(out));
    CHECK(run({"solve"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("non-convergence exits 2")
{
    const auto dir = scratch("noconv");
    const auto cfg = write_file(dir, "short.json", R"({
  "flows": [{"class": "direct", "lambda_r": 1}, {"class": "relayed", "lambda_r": 1}],
  "phase": {"alpha": 0.5},
  "solver": {"max_iter": 2}
})");
    const auto r = run({"solve", "--config", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.code == 2);
    CHECK(read_csv(dir / "out" / "theta.csv")[1][4] == "false");
}

TEST_CASE("beta sweep csv and svg")
{
    const auto dir = scratch("sweep");
    REQUIRE(run({"sweep", "--config", support::config_path("beta_sweep.json"), "--out", dir.string(), "--svg",
                 "--jobs", "3"})
                .code == 0);
    const auto rows = read_csv(dir / "sweep.csv");
    REQUIRE(rows.size() == 26);
    CHECK(rows[0][0] == "beta");
    for (std::size_t k = 2; k < rows.size(); ++k)
        CHECK(std::stod(rows[k][1]) <= std::stod(rows[k - 1][1]));
    const auto svg = slurp(dir / "sweep.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("map without relays gives equal rasters")
{
    const auto dir = scratch("map");
    REQUIRE(run({"map", "--config", support::config_path("map_norelay.json"), "--out", dir.string()}).code == 0);
    CHECK(slurp(dir / "sinr_relays_active.csv") == slurp(dir / "sinr_relays_silent.csv"));
}

TEST_CASE("compare reports the D-subframe uplift")
{
    const auto dir = scratch("compare");
    REQUIRE(run({"compare", "--config", support::config_path("compare_plans.json"), "--out", dir.string()}).code ==
            0);
    double mcs_d = -1, mcs_u = -1;
    for (const auto& row : read_csv(dir / "compare.csv")) {
        if (row[0] == "direct_mean_mcs_D")
            mcs_d = std::stod(row[1]);
        if (row[0] == "direct_mean_mcs_U")
            mcs_u = std::stod(row[1]);
    }
    CHECK(mcs_d > mcs_u);
    CHECK(fs::exists(dir / "summary_a.csv"));
    CHECK(fs::exists(dir / "summary_b.csv"));
}

TEST_CASE("seed override lands in the manifest")
{
    const auto dir = scratch("seed");
    REQUIRE(run({"sim", "--config", support::config_path("sim_1b3d2u.json"), "--out", dir.string(), "--seed", "99"})
                .code == 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["seed_override"] == 99);
    CHECK(manifest["resolved_config"]["seed"] == 99);
}

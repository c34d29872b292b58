#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "fixtures.hpp"

using namespace tmadf;
using namespace tmadf::cli;
using tmadf::testing::config_path;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tmadf_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const std::string& name, const json& j) {
    fs::create_directories(dir);
    std::ofstream(dir / name) << j.dump(2);
    return dir / name;
}

}  // namespace

TEST_CASE("simulate single source") {
    const fs::path out = scratch("single");
    std::ostringstream o, e;
    REQUIRE(run_simulate({config_path("single_source.json"), out, {}, false, false}, o, e) == kExitOk);
    const json r = read_json(out / "result.json");
    REQUIRE(r["estimated_angles_deg"].size() == 1);
    CHECK(std::abs(r["estimated_angles_deg"][0].get<double>() - 30.0) <= 0.1);
    for (const char* f : {"spectrum.csv", "spectrum.json", "spectrum.svg", "snapshots.csv", "snapshots.json"})
        CHECK(fs::exists(out / f));
    CHECK(slurp(out / "spectrum.csv").rfind("theta_deg,p_linear,p_db\r\n", 0) == 0);
}

TEST_CASE("simulate spread windows without noise") {
    const fs::path out = scratch("spread");
    SimulateOptions opt{config_path("table1_decorrelated.json"), out, {}, true, true};
    std::ostringstream o, e;
    REQUIRE(run_simulate(opt, o, e) == kExitOk);
    const json r = read_json(out / "result.json");
    const auto est = r["estimated_angles_deg"].get<std::vector<double>>();
    REQUIRE(est.size() == 3);
    const double truth[] = {10.0, 30.0, 40.0};
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(est[i] - truth[i]) <= 1.0);
    CHECK(r["noiseless"] == true);
    CHECK(fs::file_size(out / "elements.bin") == 4 * (7 * 25 * 1280 + 1280) * 16);
}

TEST_CASE("simulate rejects an ambiguous array") {
    json j = read_json(config_path("table1.json"));
    j["geometry"]["element_spacing_m"] = 60000.0;
    const fs::path cfg = write_config(scratch("ambiguous_cfg"), "bad.json", j);
    const fs::path out = scratch("ambiguous_out");
    std::ostringstream o, e;
    CHECK(run_simulate({cfg, out, {}, false, false}, o, e) == kExitConfig);
    const json err = json::parse(e.str());
    CHECK(err["violations"][0]["kind"] == "AmbiguityViolation");
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("missing config and unknown keys are configuration errors") {
    std::ostringstream o, e;
    CHECK(run_simulate({"/nonexistent/x.json", scratch("missing"), {}, false, false}, o, e) == kExitConfig);
    json j = read_json(config_path("table1.json"));
    j["sampling"]["oversample"] = 2;
    const fs::path cfg = write_config(scratch("unknown_cfg"), "bad.json", j);
    CHECK(run_simulate({cfg, scratch("unknown_out"), {}, false, false}, o, e) == kExitConfig);
}

TEST_CASE("simulate output is reproducible") {
    const fs::path a = scratch("repro_a");
    const fs::path b = scratch("repro_b");
    std::ostringstream o, e;
    REQUIRE(run_simulate({config_path("table1.json"), a, 7, false, false}, o, e) == kExitOk);
    REQUIRE(run_simulate({config_path("table1.json"), b, 7, false, false}, o, e) == kExitOk);
    for (const char* f : {"spectrum.csv", "spectrum.json", "spectrum.svg", "snapshots.csv", "snapshots.json"})
        CHECK(slurp(a / f) == slurp(b / f));
    json ra = read_json(a / "result.json");
    json rb = read_json(b / "result.json");
    ra.erase("wall_clock_s");
    rb.erase("wall_clock_s");
    CHECK(ra == rb);
    CHECK(ra["seed"] == 7);
}

TEST_CASE("unwritable output directory leaves nothing behind") {
    const fs::path base = scratch("blocked");
    fs::create_directories(base);
    std::ofstream(base / "file") << "x";
    const fs::path out = base / "file" / "run";
    std::ostringstream o, e;
    CHECK(run_simulate({config_path("table1.json"), out, {}, false, false}, o, e) == kExitRuntime);
    CHECK(run_snapshots({config_path("table1.json"), out, {}, true}, o, e) == kExitRuntime);
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(base)) ++entries;
    CHECK(entries == 1);

    if (fs::is_directory("/proc/self")) {
        CHECK(run_snapshots({config_path("table1.json"), "/proc/self", {}, true}, o, e) == kExitRuntime);
        CHECK_FALSE(fs::exists("/proc/self/snapshots.csv"));
        CHECK_FALSE(fs::exists("/proc/self/.snapshots.csv.partial"));
    }
}

TEST_CASE("snapshots report against the oracle") {
    const fs::path out = scratch("snapshots");
    std::ostringstream o, e;
    REQUIRE(run_snapshots({config_path("table1.json"), out, {}, true}, o, e) == kExitOk);
    const json s = read_json(out / "snapshots_summary.json");
    CHECK(s["max_rel_error"].get<double>() <= 2e-2);
    CHECK(slurp(out / "snapshots.csv").find("ideal_re") != std::string::npos);

    json j = read_json(config_path("table1.json"));
    j["modulation"]["harmonic_orders"] = {1, 3};
    j["sampling"]["snr_db"] = nullptr;
    const fs::path cfg = write_config(scratch("orders_cfg"), "orders.json", j);
    const SnapshotsSummary both = snapshots({cfg, scratch("orders_out"), {}, false});
    REQUIRE(both.max_cross_order_rel_diff.has_value());
    CHECK(*both.max_cross_order_rel_diff <= 0.03);
    CHECK(both.max_rel_error <= 2e-2);
}

TEST_CASE("snr sweep improves with SNR") {
    const fs::path out = scratch("sweep_snr");
    SweepOptions opt;
    opt.config = config_path("single_source.json");
    opt.param = "snr_db";
    opt.values = "0,10,20,30";
    opt.trials = 50;
    opt.out_dir = out;
    const SweepResult r = sweep(opt);
    REQUIRE(r.cells.size() == 4);
    CHECK(r.cells[3].rmse_deg < r.cells[0].rmse_deg);
    for (const auto& c : r.cells) CHECK(std::isfinite(c.rmse_deg));
    const std::string csv = slurp(out / "rmse.csv");
    CHECK(csv.rfind("param,value,statistic,result", 0) == 0);
    CHECK(fs::exists(out / "sweep.json"));

    const SweepResult again = sweep(opt);
    for (std::size_t i = 0; i < 4; ++i) CHECK(again.cells[i].rmse_deg == r.cells[i].rmse_deg);
}

TEST_CASE("window count sweep stays valid when K >= M") {
    SweepOptions opt;
    opt.config = config_path("table1_decorrelated.json");
    opt.param = "window_count";
    opt.values = "3,5,10";
    opt.trials = 3;
    opt.out_dir = scratch("sweep_k");
    const SweepResult r = sweep(opt);
    REQUIRE(r.cells.size() == 3);
    for (const auto& c : r.cells) {
        CHECK(std::isfinite(c.rmse_deg));
        CHECK(c.failed_runs == 0);
    }
    CHECK(r.warnings == 0);
}

TEST_CASE("sweep argument errors") {
    std::ostringstream o, e;
    SweepOptions opt;
    opt.config = config_path("single_source.json");
    opt.param = "snr_db";
    opt.values = "10";
    opt.trials = 0;
    opt.out_dir = scratch("sweep_bad");
    CHECK_THROWS_AS((void)sweep(opt), Error);
    try {
        (void)sweep(opt);
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::InvalidTrials);
    }
    CHECK(run_sweep(opt, o, e) == kExitConfig);

    opt.trials = 2;
    opt.param = "antenna_gain";
    try {
        (void)sweep(opt);
        FAIL("accepted");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::UnknownParameter);
    }
    CHECK(run_sweep(opt, o, e) == kExitConfig);
}

TEST_CASE("sweep cells that fail validation are reported, not fatal") {
    SweepOptions opt;
    opt.config = config_path("table1_decorrelated.json");
    opt.param = "window_count";
    opt.values = "2,8";
    opt.trials = 1;
    opt.out_dir = scratch("sweep_invalid");
    const SweepResult r = sweep(opt);
    REQUIRE(r.cells.size() == 2);
    CHECK(std::isnan(r.cells[0].rmse_deg));
    CHECK(std::isfinite(r.cells[1].rmse_deg));
    CHECK(r.warnings >= 1);
}

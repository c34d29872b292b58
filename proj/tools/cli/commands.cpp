#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "log.hpp"
#include "tmadf/io.hpp"
#include "tmadf/pipeline.hpp"

namespace tmadf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kSuccessToleranceDeg = 1.0;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string{} : item.substr(b, e - b + 1));
    }
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "cannot parse '" + s + "' as " + what);
}

json to_json_array(const std::vector<double>& v, bool rounded = false) {
    json arr = json::array();
    for (double x : v) arr.push_back(rounded ? round2(x) : x);
    return arr;
}

}  // namespace

RunResult simulate(const SimulateOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const Scenario scenario = load_scenario(options.config);

    PipelineOptions popt;
    popt.seed = options.seed;
    popt.noiseless = options.noiseless;
    const PipelineResult res = run_pipeline(scenario, popt);

    RunResult out;
    out.scenario = to_json(scenario.config());
    out.estimated_angles_deg = res.estimated_angles_deg;
    out.true_angles_deg = true_angles(scenario);
    out.snapshot_errors = res.stage.snapshot_errors;

    const auto db_of = [&res](double v) {
        const double peak = *std::max_element(res.spectrum.values.begin(), res.spectrum.values.end());
        return 10.0 * std::log10(v / peak);
    };
    json peaks = json::array();
    for (const auto& p : res.spectrum.peaks)
        peaks.push_back({{"angle_deg", round2(p.angle_deg)}, {"p_db", db_of(p.value)}});

    FileStager stager(options.out_dir);
    stager.add("spectrum.csv", spectrum_csv(res.spectrum));
    stager.add("spectrum.json", spectrum_json(res.spectrum).dump(2) + "\n");
    stager.add("spectrum.svg", spectrum_svg(res.spectrum, out.true_angles_deg));
    stager.add("snapshots.csv", snapshots_csv(res.stage.snapshots));
    stager.add("snapshots.json", snapshots_json(res.stage.snapshots).dump(2) + "\n");

    std::vector<std::string> files = {"spectrum.csv", "spectrum.json", "spectrum.svg", "snapshots.csv",
                                      "snapshots.json", "result.json"};
    if (options.dump_signals) {
        // The dump is a debug aid written directly, outside the staged set.
        ElementSignals signals =
            synthesize(scenario, scenario.sampling().start_time_s, res.stage.plan.span_samples());
        if (!options.noiseless && scenario.sampling().snr_db)
            signals = add_noise(std::move(signals), scenario, *scenario.sampling().snr_db,
                                options.seed.value_or(scenario.sampling().rng_seed));
        std::error_code ec;
        fs::create_directories(options.out_dir, ec);
        write_element_signals(signals, options.out_dir / "elements");
        files.push_back("elements.bin");
        files.push_back("elements.json");
    }

    const double max_error = res.stage.snapshot_errors.empty()
                                 ? 0.0
                                 : *std::max_element(res.stage.snapshot_errors.begin(), res.stage.snapshot_errors.end());
    json result = {
        {"schema_version", kSchemaVersion},
        {"command", "simulate"},
        {"scenario", out.scenario},
        {"seed", options.seed.value_or(scenario.sampling().rng_seed)},
        {"noiseless", options.noiseless || !scenario.sampling().snr_db},
        {"source_count", scenario.source_count()},
        {"true_angles_deg", to_json_array(out.true_angles_deg)},
        {"estimated_angles_deg", to_json_array(out.estimated_angles_deg, true)},
        {"peaks", peaks},
        {"snapshot_errors", to_json_array(out.snapshot_errors)},
        {"max_snapshot_error", max_error},
        {"covariance_eigenvalues", to_json_array(res.eigen.values)},
        {"snapshot_singular_values", to_json_array(singular_values(res.stage.snapshots.values))},
        {"files", files},
    };
    out.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result["wall_clock_s"] = out.wall_clock_s;
    stager.add("result.json", result.dump(2) + "\n");
    out.files = stager.commit();
    return out;
}

namespace {

using Mutator = void (*)(ScenarioConfig&, const std::string&);

Mutator mutator_for(const std::string& param) {
    if (param == "snr_db")
        return [](ScenarioConfig& c, const std::string& v) {
            if (v == "none" || v == "inf")
                c.sampling.snr_db.reset();
            else
                c.sampling.snr_db = parse_number(v, "snr_db");
        };
    if (param == "window_count")
        return [](ScenarioConfig& c, const std::string& v) {
            const double x = parse_number(v, "window_count");
            if (x != std::floor(x)) throw Error(ErrorCode::InvalidArgument, "window_count must be an integer");
            c.sampling.window_count = static_cast<int>(x);
        };
    if (param == "window_stride")
        return [](ScenarioConfig& c, const std::string& v) { c.sampling.window_stride_s = parse_number(v, "window_stride"); };
    if (param == "sample_rate")
        return [](ScenarioConfig& c, const std::string& v) { c.sampling.sample_rate_hz = parse_number(v, "sample_rate"); };
    if (param == "harmonic_orders")
        return [](ScenarioConfig& c, const std::string& v) {
            std::vector<int> orders;
            for (const auto& k : split(v, '+')) {
                const double x = parse_number(k, "harmonic order");
                if (x != std::floor(x)) throw Error(ErrorCode::InvalidArgument, "harmonic orders must be integers");
                orders.push_back(static_cast<int>(x));
            }
            c.modulation.harmonic_orders = std::move(orders);
        };
    throw Error(ErrorCode::UnknownParameter,
                "'" + param + "' (expected snr_db, window_count, window_stride, sample_rate or harmonic_orders)");
}

struct TrialOutcome {
    bool ran = false;
    bool success = false;
    std::vector<double> errors_deg;
};

}  // namespace

SweepResult sweep(const SweepOptions& options) {
    if (options.trials <= 0) throw Error(ErrorCode::InvalidTrials, "trials must be >= 1");
    const Mutator mutate = mutator_for(options.param);
    const auto values = split(options.values, ',');
    if (values.empty() || std::any_of(values.begin(), values.end(), [](const auto& v) { return v.empty(); }))
        throw Error(ErrorCode::InvalidArgument, "--values must be a non-empty comma separated list");

    const ScenarioConfig base = load_scenario_config(options.config);
    validate(base);

    SweepResult result;
    result.param = options.param;
    result.trials = options.trials;
    result.base_seed = options.seed.value_or(base.sampling.rng_seed);

    const unsigned workers = std::max(1u, options.workers ? options.workers : std::thread::hardware_concurrency());

    for (const auto& value : values) {
        SweepCell cell;
        cell.value = value;
        ScenarioConfig cfg = base;
        std::optional<Scenario> scenario;
        try {
            mutate(cfg, value);
            scenario = validate(cfg);
        } catch (const ValidationError& e) {
            log(LogLevel::Warn, "sweep cell " + options.param + "=" + value + " rejected: " + e.what());
        }
        if (!scenario) {
            cell.rmse_deg = std::numeric_limits<double>::quiet_NaN();
            cell.success_rate = std::numeric_limits<double>::quiet_NaN();
            cell.failed_runs = options.trials;
            ++result.warnings;
            result.cells.push_back(cell);
            continue;
        }

        const auto truth = true_angles(*scenario);
        std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(options.trials));
        std::atomic<int> next{0};
        std::mutex log_mutex;
        auto work = [&] {
            for (int t = next++; t < options.trials; t = next++) {
                TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
                try {
                    PipelineOptions popt;
                    popt.seed = result.base_seed + static_cast<std::uint64_t>(t);
                    const auto res = run_pipeline(*scenario, popt);
                    const auto matched = match_estimates(res.estimated_angles_deg, truth);
                    o.ran = !matched.empty();
                    o.success = res.estimated_angles_deg.size() == truth.size();
                    for (std::size_t i = 0; i < matched.size(); ++i) {
                        o.errors_deg.push_back(matched[i] - truth[i]);
                        if (std::abs(matched[i] - truth[i]) > kSuccessToleranceDeg) o.success = false;
                    }
                } catch (const std::exception& e) {
                    const std::lock_guard lock(log_mutex);
                    log(LogLevel::Warn, "trial " + std::to_string(t) + " failed: " + e.what());
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < std::min<unsigned>(workers, static_cast<unsigned>(options.trials)); ++w)
            pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();

        double sq = 0.0;
        std::size_t count = 0;
        int successes = 0;
        for (const auto& o : outcomes) {
            if (!o.ran) {
                ++cell.failed_runs;
                continue;
            }
            for (double e : o.errors_deg) {
                sq += e * e;
                ++count;
            }
            successes += o.success ? 1 : 0;
        }
        cell.rmse_deg = count ? std::sqrt(sq / static_cast<double>(count)) : std::numeric_limits<double>::quiet_NaN();
        cell.success_rate = static_cast<double>(successes) / options.trials;
        if (cell.failed_runs > 0) ++result.warnings;
        result.cells.push_back(cell);
    }

    std::ostringstream csv;
    csv << "param,value,statistic,result\r\n";
    json cells = json::array();
    for (const auto& c : result.cells) {
        csv << options.param << ',' << c.value << ",rmse_deg," << format_double(c.rmse_deg) << "\r\n";
        csv << options.param << ',' << c.value << ",success_rate," << format_double(c.success_rate) << "\r\n";
        csv << options.param << ',' << c.value << ",failed_runs," << c.failed_runs << "\r\n";
        cells.push_back({{"value", c.value},
                         {"rmse_deg", std::isnan(c.rmse_deg) ? json(nullptr) : json(c.rmse_deg)},
                         {"success_rate", std::isnan(c.success_rate) ? json(nullptr) : json(c.success_rate)},
                         {"failed_runs", c.failed_runs}});
    }
    const json summary = {{"schema_version", kSchemaVersion},
                          {"command", "sweep"},
                          {"param", options.param},
                          {"trials", options.trials},
                          {"seed_policy", "seed = base_seed + trial_index"},
                          {"base_seed", result.base_seed},
                          {"success_tolerance_deg", kSuccessToleranceDeg},
                          {"warnings", result.warnings},
                          {"cells", cells}};
    FileStager stager(options.out_dir);
    stager.add("rmse.csv", csv.str());
    stager.add("sweep.json", summary.dump(2) + "\n");
    result.files = stager.commit();
    return result;
}

SnapshotsSummary snapshots(const SnapshotsOptions& options) {
    const Scenario scenario = load_scenario(options.config);
    PipelineOptions popt;
    popt.seed = options.seed;
    popt.noiseless = options.noiseless;
    const SnapshotStage stage = run_snapshot_stage(scenario, popt);

    SnapshotsSummary summary;
    for (double e : stage.snapshot_errors) summary.max_rel_error = std::max(summary.max_rel_error, e);
    summary.singular_values = singular_values(stage.snapshots.values);

    const auto& cols = stage.snapshots.columns;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].order == 1) continue;
        for (std::size_t r = 0; r < cols.size(); ++r) {
            if (cols[r].order != 1 || cols[r].window != cols[c].window) continue;
            const double d = relative_l2_error(stage.snapshots.values.column(c), stage.snapshots.values.column(r));
            summary.max_cross_order_rel_diff = std::max(summary.max_cross_order_rel_diff.value_or(0.0), d);
        }
    }

    const json report = {
        {"schema_version", kSchemaVersion},
        {"command", "snapshots"},
        {"scenario", to_json(scenario.config())},
        {"noiseless", options.noiseless || !scenario.sampling().snr_db},
        {"snapshot_count", stage.snapshots.snapshot_count()},
        {"column_rel_errors", to_json_array(stage.snapshot_errors)},
        {"max_rel_error", summary.max_rel_error},
        {"max_cross_order_rel_diff",
         summary.max_cross_order_rel_diff ? json(*summary.max_cross_order_rel_diff) : json(nullptr)},
        {"singular_values", to_json_array(summary.singular_values)},
    };
    FileStager stager(options.out_dir);
    stager.add("snapshots.csv", snapshots_csv(stage.snapshots, stage.oracle, stage.snapshot_errors));
    stager.add("snapshots.json", snapshots_json(stage.snapshots).dump(2) + "\n");
    stager.add("snapshots_summary.json", report.dump(2) + "\n");
    summary.files = stager.commit();
    return summary;
}

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << violations_to_json(e.violations()).dump(2) << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::UnknownParameter:
            case ErrorCode::InvalidTrials:
            case ErrorCode::InvalidArgument:
                err << "tmadf: " << e.what() << '\n';
                return kExitConfig;
            default:
                err << "tmadf: " << e.what() << '\n';
                return kExitRuntime;
        }
    } catch (const std::exception& e) {
        err << "tmadf: " << e.what() << '\n';
        return kExitRuntime;
    }
}

// Unreadable config files are configuration errors, not runtime ones.
void require_readable(const fs::path& config) {
    std::error_code ec;
    if (!fs::is_regular_file(config, ec))
        throw ValidationError({{ViolationKind::MalformedConfig, config.string(), "config file not found"}});
}

}  // namespace

int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_readable(options.config);
        const RunResult r = simulate(options);
        out << "estimated angles (deg):";
        for (double a : r.estimated_angles_deg) out << ' ' << round2(a);
        out << "\ntrue angles (deg):";
        for (double a : r.true_angles_deg) out << ' ' << a;
        out << "\nwrote " << r.files.size() << " files to " << options.out_dir.string() << '\n';
        return kExitOk;
    });
}

int run_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_readable(options.config);
        const SweepResult r = sweep(options);
        for (const auto& c : r.cells)
            out << r.param << '=' << c.value << "  rmse_deg=" << format_double(c.rmse_deg)
                << "  success_rate=" << format_double(c.success_rate) << "  failed_runs=" << c.failed_runs << '\n';
        if (r.warnings) out << r.warnings << " cell(s) had failed runs\n";
        return kExitOk;
    });
}

int run_snapshots(const SnapshotsOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require_readable(options.config);
        const SnapshotsSummary s = snapshots(options);
        out << "max relative snapshot error: " << format_double(s.max_rel_error) << '\n';
        if (s.max_cross_order_rel_diff)
            out << "max cross-order relative difference: " << format_double(*s.max_cross_order_rel_diff) << '\n';
        out << "snapshot singular values:";
        for (double v : s.singular_values) out << ' ' << format_double(v);
        out << "\nwrote " << s.files.size() << " files to " << options.out_dir.string() << '\n';
        return kExitOk;
    });
}

}  // namespace tmadf::cli

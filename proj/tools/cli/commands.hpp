#pragma once

// Experiment drivers behind the `tmadf` subcommands. The throwing functions do
// the work; the run_* wrappers map failures onto the exit-code contract
// (0 success, 2 config/validation, 3 runtime) and report to the given streams.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tmadf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct SimulateOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    bool noiseless = false;
    bool dump_signals = false;  ///< also write elements.bin / elements.json
};

struct RunResult {
    nlohmann::json scenario;
    std::vector<double> estimated_angles_deg;
    std::vector<double> true_angles_deg;
    std::vector<double> snapshot_errors;
    std::vector<std::filesystem::path> files;
    double wall_clock_s = 0.0;
};

struct SweepOptions {
    std::filesystem::path config;
    std::string param;   ///< snr_db, window_count, window_stride, sample_rate, harmonic_orders
    std::string values;  ///< comma separated; harmonic_orders cells use '+', e.g. "1,1+3"
    int trials = 0;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;  ///< 0 selects hardware concurrency
};

struct SweepCell {
    std::string value;
    double rmse_deg = 0.0;      ///< NaN when no trial produced an estimate
    double success_rate = 0.0;  ///< every source within 1 degree
    int failed_runs = 0;
};

struct SweepResult {
    std::string param;
    std::vector<SweepCell> cells;
    int trials = 0;
    std::uint64_t base_seed = 0;
    int warnings = 0;
    std::vector<std::filesystem::path> files;
};

struct SnapshotsOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    bool noiseless = false;
};

struct SnapshotsSummary {
    double max_rel_error = 0.0;
    std::optional<double> max_cross_order_rel_diff;  ///< order k vs order 1, same window
    std::vector<double> singular_values;
    std::vector<std::filesystem::path> files;
};

RunResult simulate(const SimulateOptions& options);
SweepResult sweep(const SweepOptions& options);
SnapshotsSummary snapshots(const SnapshotsOptions& options);

int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int run_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);
int run_snapshots(const SnapshotsOptions& options, std::ostream& out, std::ostream& err);

}  // namespace tmadf::cli

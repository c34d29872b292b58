#pragma once

// File formats: scenario JSON, snapshot/spectrum CSV+JSON, spectrum SVG,
// element-signal binary dump, and staged (temp-and-rename) output writing.

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmadf/music.hpp"
#include "tmadf/scenario.hpp"
#include "tmadf/signal.hpp"
#include "tmadf/snapshot.hpp"

namespace tmadf {

inline constexpr int kSchemaVersion = 1;

/// Strict parse: unknown keys, missing required keys and wrong types become
/// ViolationKind::MalformedConfig entries of a thrown ValidationError.
ScenarioConfig scenario_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& config);

ScenarioConfig load_scenario_config(const std::filesystem::path& path);
/// load_scenario_config followed by validate().
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json violations_to_json(const std::vector<Violation>& violations);

/// Columns window_index, order_k, element_n, re, im (+ ideal_re, ideal_im, rel_error
/// when an oracle per column is supplied). CRLF line endings.
std::string snapshots_csv(const SnapshotMatrix& snapshots,
                          std::span<const CVector> oracle = {},
                          std::span<const double> column_errors = {});
nlohmann::json snapshots_json(const SnapshotMatrix& snapshots);

/// Columns theta_deg, p_linear, p_db with p_db relative to the spectrum maximum.
std::string spectrum_csv(const SpatialSpectrum& spectrum);
nlohmann::json spectrum_json(const SpatialSpectrum& spectrum);

std::string spectrum_svg(const SpatialSpectrum& spectrum, std::span<const double> true_angles_deg);

/// <prefix>.bin: little-endian float64 re/im interleaved, element-major.
/// <prefix>.json: t0, f_s, N, length.
void write_element_signals(const ElementSignals& signals, const std::filesystem::path& prefix);
ElementSignals read_element_signals(const std::filesystem::path& prefix);

/// Collects named outputs, then writes each to a hidden temp file in the target
/// directory and renames them into place. Any failure removes the temp files and
/// throws Error(Io); nothing half-written is left behind.
class FileStager {
public:
    explicit FileStager(std::filesystem::path directory) : directory_(std::move(directory)) {}

    void add(std::string name, std::string content);
    std::vector<std::filesystem::path> commit();

private:
    std::filesystem::path directory_;
    std::vector<std::pair<std::string, std::string>> files_;
};

/// Shortest round-trip decimal, locale-independent.
std::string format_double(double value);

}  // namespace tmadf

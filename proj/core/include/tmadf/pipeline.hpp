#pragma once

// End-to-end run: synthesize -> noise -> modulate/combine -> reconstruct -> MUSIC.

#include <cstdint>
#include <optional>
#include <vector>

#include "tmadf/music.hpp"
#include "tmadf/scenario.hpp"
#include "tmadf/snapshot.hpp"
#include "tmadf/synth.hpp"
#include "tmadf/timemod.hpp"

namespace tmadf {

struct PipelineOptions {
    std::optional<std::uint64_t> seed;  ///< overrides sampling.rng_seed
    bool noiseless = false;             ///< ignore sampling.snr_db
    std::vector<double> grid_deg;       ///< empty selects make_grid()
};

struct SnapshotStage {
    DerivedParams params;
    WindowPlan plan;
    SnapshotMatrix snapshots;
    std::vector<CVector> oracle;            ///< ideal_snapshot at each column's window center
    std::vector<double> snapshot_errors;    ///< relative L2 error per column
};

struct PipelineResult {
    SnapshotStage stage;
    CovarianceMatrix covariance;
    EigenDecomposition eigen;
    SpatialSpectrum spectrum;
    std::vector<double> estimated_angles_deg;  ///< ascending
};

/// Combined single-channel series covering every window of the plan.
ComplexSeries simulate_combined(const Scenario& scenario, const WindowPlan& plan,
                                const PipelineOptions& options = {});

SnapshotStage run_snapshot_stage(const Scenario& scenario, const PipelineOptions& options = {});

PipelineResult run_pipeline(const Scenario& scenario, const PipelineOptions& options = {});

/// Estimates matched to truth: sorted pairing when counts agree, otherwise each
/// true angle takes its nearest estimate. Empty estimates give an empty result.
std::vector<double> match_estimates(std::span<const double> estimated_deg,
                                    std::span<const double> true_deg);

/// True angles of a scenario, ascending.
std::vector<double> true_angles(const Scenario& scenario);

}  // namespace tmadf

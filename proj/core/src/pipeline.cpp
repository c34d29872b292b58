#include "tmadf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tmadf {

ComplexSeries simulate_combined(const Scenario& scenario, const WindowPlan& plan,
                                const PipelineOptions& options) {
    ElementSignals signals = synthesize(scenario, scenario.sampling().start_time_s, plan.span_samples());
    const auto& snr = scenario.sampling().snr_db;
    if (!options.noiseless && snr)
        signals = add_noise(std::move(signals), scenario, *snr,
                            options.seed.value_or(scenario.sampling().rng_seed));
    return modulate_and_combine(signals, scenario.modulation().base_frequency_hz);
}

SnapshotStage run_snapshot_stage(const Scenario& scenario, const PipelineOptions& options) {
    SnapshotStage stage;
    stage.params = derived(scenario);
    stage.plan = make_window_plan(scenario, stage.params);
    const ComplexSeries combined = simulate_combined(scenario, stage.plan, options);
    stage.snapshots = collect_snapshots(combined, stage.plan, scenario.modulation().harmonic_orders,
                                        stage.params, scenario.source_count(),
                                        scenario.modulation().coefficient_model);
    for (std::size_t c = 0; c < stage.snapshots.snapshot_count(); ++c) {
        const std::size_t w = stage.snapshots.columns[c].window;
        const double center = stage.plan.start_times[w] + 0.5 * stage.plan.window_length_s;
        CVector ideal = ideal_snapshot(scenario, center);
        stage.snapshot_errors.push_back(relative_l2_error(stage.snapshots.values.column(c), ideal));
        stage.oracle.push_back(std::move(ideal));
    }
    return stage;
}

PipelineResult run_pipeline(const Scenario& scenario, const PipelineOptions& options) {
    PipelineResult result;
    result.stage = run_snapshot_stage(scenario, options);
    result.covariance = sample_covariance(result.stage.snapshots);
    result.eigen = hermitian_eigendecomposition(result.covariance.values);
    const std::vector<double> grid = options.grid_deg.empty() ? make_grid() : options.grid_deg;
    result.spectrum = music_spectrum(result.covariance, scenario.source_count(), scenario.geometry(), grid);
    result.estimated_angles_deg = result.spectrum.peak_angles();
    return result;
}

std::vector<double> match_estimates(std::span<const double> estimated_deg, std::span<const double> true_deg) {
    std::vector<double> est(estimated_deg.begin(), estimated_deg.end());
    std::sort(est.begin(), est.end());
    if (est.empty()) return {};
    std::vector<double> truth(true_deg.begin(), true_deg.end());
    std::sort(truth.begin(), truth.end());
    if (est.size() == truth.size()) return est;
    std::vector<double> out;
    for (double t : truth) {
        const auto best = std::min_element(est.begin(), est.end(),
                                           [t](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
        out.push_back(*best);
    }
    return out;
}

std::vector<double> true_angles(const Scenario& scenario) {
    std::vector<double> out;
    for (const auto& s : scenario.sources()) out.push_back(s.angle_deg);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace tmadf

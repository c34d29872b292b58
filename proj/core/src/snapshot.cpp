#include "tmadf/snapshot.hpp"

#include <cmath>
#include <numbers>

#include "tmadf/synth.hpp"
#include "tmadf/timemod.hpp"

namespace tmadf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::size_t WindowPlan::span_samples() const noexcept {
    if (start_indices.empty()) return 0;
    return start_indices.back() + samples_per_window;
}

WindowPlan make_window_plan(const Scenario& scenario, const DerivedParams& params) {
    const auto& smp = scenario.sampling();
    WindowPlan plan;
    plan.window_length_s = params.modulation_period_s;
    plan.samples_per_window = params.samples_per_window;
    const std::size_t stride_samples = params.stride_windows * params.samples_per_window;
    for (int w = 0; w < smp.window_count; ++w) {
        const std::size_t start = static_cast<std::size_t>(w) * stride_samples;
        plan.start_indices.push_back(start);
        plan.start_times.push_back(smp.start_time_s + static_cast<double>(start) / params.sample_rate_hz);
    }
    return plan;
}

Complex extract_line(const ComplexSeries& series, std::size_t window_start, std::size_t n_pts,
                     double f_line) {
    if (n_pts == 0) throw Error(ErrorCode::InvalidArgument, "empty window");
    if (window_start > series.size() || n_pts > series.size() - window_start)
        throw Error(ErrorCode::WindowOutOfRange, "window [" + std::to_string(window_start) + ", +" +
                                                     std::to_string(n_pts) + ") exceeds series of " +
                                                     std::to_string(series.size()) + " samples");
    const double t_start = series.time_at(window_start);
    double base = f_line * t_start;
    const double residual = std::fma(f_line, t_start, -base);
    base = (base - std::floor(base)) + residual;
    const double cycles_per_sample = f_line / series.sample_rate;

    Complex acc{};
    for (std::size_t i = 0; i < n_pts; ++i) {
        double cycles = base + static_cast<double>(i) * cycles_per_sample;
        cycles -= std::floor(cycles);
        acc += series.samples[window_start + i] * std::polar(1.0, -kTwoPi * cycles);
    }
    return acc / static_cast<double>(n_pts);
}

CVector reconstruct_snapshot(const ComplexSeries& series, std::size_t window_start, int order,
                             const DerivedParams& params, CoefficientModel model) {
    if (order <= 0 || order % 2 == 0) throw Error(ErrorCode::EvenOrder, "harmonic order " + std::to_string(order));
    const std::size_t n_pts = params.samples_per_window;
    const double nyquist = 0.5 * series.sample_rate;
    CVector gamma(static_cast<std::size_t>(params.element_count));
    for (int n = 1; n <= params.element_count; ++n) {
        const LineId line = line_id(n, order, params.modulation_frequency_hz, params.carrier_frequency_hz);
        if (line.frequency_hz >= nyquist)
            throw Error(ErrorCode::InvalidArgument, "line above Nyquist");
        const Complex value = extract_line(series, window_start, n_pts, line.frequency_hz);
        const Complex coefficient =
            model == CoefficientModel::Sampled
                ? sampled_modulation_coefficient(n, order, params.modulation_frequency_hz,
                                                 series.time_at(window_start), series.sample_rate, n_pts)
                : fourier_coefficient(order);
        gamma[static_cast<std::size_t>(n - 1)] = value / coefficient;
    }
    return gamma;
}

SnapshotMatrix collect_snapshots(const ComplexSeries& series, const WindowPlan& plan,
                                 std::span<const int> orders, const DerivedParams& params,
                                 int source_count, CoefficientModel model) {
    const std::size_t total = plan.window_count() * orders.size();
    if (static_cast<long long>(total) < source_count)
        throw Error(ErrorCode::InsufficientWindows,
                    std::to_string(total) + " snapshots for " + std::to_string(source_count) + " sources");
    SnapshotMatrix out;
    out.values = CMatrix(static_cast<std::size_t>(params.element_count), total);
    std::size_t col = 0;
    for (std::size_t w = 0; w < plan.window_count(); ++w) {
        for (int k : orders) {
            const CVector gamma = reconstruct_snapshot(series, plan.start_indices[w], k, params, model);
            out.values.set_column(col++, gamma);
            out.columns.push_back({w, k});
        }
    }
    return out;
}

CVector ideal_snapshot(const Scenario& scenario, double t) {
    const auto& g = scenario.geometry();
    CVector gamma(static_cast<std::size_t>(scenario.element_count()));
    for (std::size_t n = 0; n < gamma.size(); ++n) {
        Complex sum{};
        for (const auto& s : scenario.sources()) {
            const double phase = static_cast<double>(n) * g.wavenumber() * g.element_spacing_m *
                                 std::sin(s.angle_deg * std::numbers::pi / 180.0);
            sum += baseband_value(s, t) * std::polar(1.0, -phase);
        }
        gamma[n] = sum;
    }
    return gamma;
}

double relative_l2_error(std::span<const Complex> estimate, std::span<const Complex> reference) {
    if (estimate.size() != reference.size())
        throw Error(ErrorCode::LengthMismatch, "vectors differ in length");
    double diff = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) diff += std::norm(estimate[i] - reference[i]);
    return std::sqrt(diff) / l2_norm(reference);
}

}  // namespace tmadf

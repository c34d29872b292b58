#pragma once

// Conventional array snapshots recovered from one combined channel. Element n's
// order-k line at f_c + k*2^(n-1)*f_p carries (coefficient) * gamma_n, so a
// single-bin correlation per line followed by division by the coefficient gives
// the snapshot vector gamma for that window.

#include <cstddef>
#include <span>
#include <vector>

#include "tmadf/scenario.hpp"
#include "tmadf/signal.hpp"

namespace tmadf {

struct WindowPlan {
    std::vector<std::size_t> start_indices;  ///< sample offsets into the series
    std::vector<double> start_times;         ///< absolute seconds
    double window_length_s = 0.0;            ///< T_p
    std::size_t samples_per_window = 0;

    std::size_t window_count() const noexcept { return start_indices.size(); }
    /// Samples needed to cover every window.
    std::size_t span_samples() const noexcept;
};

/// K windows of one T_p each, starting at t0 and separated by the configured stride.
WindowPlan make_window_plan(const Scenario& scenario, const DerivedParams& params);

/// (1/n_pts) * sum x[start+i] * exp(-j*2*pi*f_line*t_i), phase referenced to absolute time.
Complex extract_line(const ComplexSeries& series, std::size_t window_start, std::size_t n_pts,
                     double f_line);

/// gamma_n for n = 1..N from the order-k lines of one window.
CVector reconstruct_snapshot(const ComplexSeries& series, std::size_t window_start, int order,
                             const DerivedParams& params,
                             CoefficientModel model = CoefficientModel::Sampled);

struct SnapshotColumn {
    std::size_t window = 0;
    int order = 1;
};

struct SnapshotMatrix {
    CMatrix values;  ///< N rows, one column per (window, order)
    std::vector<SnapshotColumn> columns;

    std::size_t element_count() const noexcept { return values.rows(); }
    std::size_t snapshot_count() const noexcept { return values.cols(); }
};

/// Window-major, then order. Throws Error(InsufficientWindows) when fewer than
/// source_count columns would result.
SnapshotMatrix collect_snapshots(const ComplexSeries& series, const WindowPlan& plan,
                                 std::span<const int> orders, const DerivedParams& params,
                                 int source_count,
                                 CoefficientModel model = CoefficientModel::Sampled);

/// gamma_n = sum_m s_b(m)(t) * exp(-j*(n-1)*beta*D*sin(theta_m)) with the baseband frozen at t.
CVector ideal_snapshot(const Scenario& scenario, double t);

/// ||estimate - reference|| / ||reference||
double relative_l2_error(std::span<const Complex> estimate, std::span<const Complex> reference);

}  // namespace tmadf

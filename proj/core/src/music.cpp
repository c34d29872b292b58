#include "tmadf/music.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tmadf {

namespace {
constexpr double kTieTolerance = 1e-12;
}

CovarianceMatrix sample_covariance(const CMatrix& snapshots) {
    const std::size_t n = snapshots.rows();
    const std::size_t k = snapshots.cols();
    if (k == 0 || n == 0) throw Error(ErrorCode::EmptySnapshotSet, "no snapshots");
    CovarianceMatrix r{CMatrix(n, n)};
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) r.values(i, j) += snapshots(i, c) * std::conj(snapshots(j, c));
    const double scale = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i) {
        r.values(i, i) = Complex(r.values(i, i).real() * scale, 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            r.values(i, j) *= scale;
            r.values(j, i) = std::conj(r.values(i, j));
        }
    }
    return r;
}

CVector steering_vector(double theta_deg, const ArrayGeometry& geometry) {
    const double step = geometry.wavenumber() * geometry.element_spacing_m *
                        std::sin(theta_deg * std::numbers::pi / 180.0);
    CVector a(static_cast<std::size_t>(geometry.element_count));
    for (std::size_t n = 0; n < a.size(); ++n)
        a[n] = n == 0 ? Complex(1.0, 0.0) : std::polar(1.0, -static_cast<double>(n) * step);
    return a;
}

std::vector<double> SpatialSpectrum::peak_angles() const {
    std::vector<double> out;
    for (const auto& p : peaks) out.push_back(p.angle_deg);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> make_grid(double lo_deg, double hi_deg, double step_deg) {
    if (!(step_deg > 0.0) || !(hi_deg >= lo_deg))
        throw Error(ErrorCode::InvalidArgument, "grid needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo_deg + static_cast<double>(i) * step_deg;
    return grid;
}

SpatialSpectrum music_spectrum(const CovarianceMatrix& covariance, int source_count,
                               const ArrayGeometry& geometry, std::span<const double> grid_deg) {
    const auto n = static_cast<int>(covariance.size());
    if (n != geometry.element_count)
        throw Error(ErrorCode::LengthMismatch, "covariance size differs from element count");
    if (source_count < 1 || source_count >= n)
        throw Error(ErrorCode::SubspaceDimension,
                    "source count " + std::to_string(source_count) + " leaves no noise subspace for N = " +
                        std::to_string(n));
    if (grid_deg.empty()) throw Error(ErrorCode::InvalidArgument, "empty angle grid");
    for (std::size_t i = 0; i < grid_deg.size(); ++i) {
        if (grid_deg[i] < -90.0 || grid_deg[i] > 90.0 || (i > 0 && !(grid_deg[i] > grid_deg[i - 1])))
            throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing within [-90, 90]");
    }

    const EigenDecomposition eig = hermitian_eigendecomposition(covariance.values);
    const auto noise_dim = static_cast<std::size_t>(n - source_count);
    const auto first_noise = static_cast<std::size_t>(source_count);

    SpatialSpectrum out;
    out.source_count = source_count;
    out.grid_deg.assign(grid_deg.begin(), grid_deg.end());
    out.values.resize(grid_deg.size());
    for (std::size_t g = 0; g < grid_deg.size(); ++g) {
        const CVector a = steering_vector(grid_deg[g], geometry);
        double denom = 0.0;
        for (std::size_t c = 0; c < noise_dim; ++c) {
            Complex proj{};
            for (std::size_t r = 0; r < a.size(); ++r) proj += std::conj(eig.vectors(r, first_noise + c)) * a[r];
            denom += std::norm(proj);
        }
        out.values[g] = 1.0 / std::max(denom, std::numeric_limits<double>::min());
    }

    // Local maxima (non-strict); a plateau of equal values collapses to its
    // member nearest broadside. Values within kTieTolerance count as equal.
    const auto& p = out.values;
    const std::size_t size = p.size();
    const auto same = [](double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(a, b); };
    const auto above = [&same](double a, double b) { return a > b && !same(a, b); };
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < size; ++i) {
        const bool left_ok = i == 0 || !above(p[i - 1], p[i]);
        const bool right_ok = i + 1 == size || !above(p[i + 1], p[i]);
        if (!(left_ok && right_ok)) continue;
        if (!candidates.empty() && candidates.back() + 1 == i && same(p[candidates.back()], p[i])) {
            if (std::abs(grid_deg[i]) < std::abs(grid_deg[candidates.back()])) candidates.back() = i;
            continue;
        }
        candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t i, std::size_t j) {
        if (!same(p[i], p[j])) return p[i] > p[j];
        return std::abs(grid_deg[i]) < std::abs(grid_deg[j]);
    });
    if (candidates.size() > static_cast<std::size_t>(source_count))
        candidates.resize(static_cast<std::size_t>(source_count));

    for (std::size_t i : candidates) {
        Peak peak{grid_deg[i], p[i]};
        if (i > 0 && i + 1 < size && above(p[i], p[i - 1]) && above(p[i], p[i + 1])) {
            const double ym = 10.0 * std::log10(p[i - 1]);
            const double y0 = 10.0 * std::log10(p[i]);
            const double yp = 10.0 * std::log10(p[i + 1]);
            const double curvature = ym - 2.0 * y0 + yp;
            if (curvature < 0.0) {
                const double offset = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
                const double step = offset >= 0.0 ? grid_deg[i + 1] - grid_deg[i] : grid_deg[i] - grid_deg[i - 1];
                peak.angle_deg = grid_deg[i] + offset * step;
                peak.value = std::pow(10.0, (y0 - 0.25 * (ym - yp) * offset) / 10.0);
            }
        }
        out.peaks.push_back(peak);
    }
    std::stable_sort(out.peaks.begin(), out.peaks.end(), [&same](const Peak& a, const Peak& b) {
        if (!same(a.value, b.value)) return a.value > b.value;
        return std::abs(a.angle_deg) < std::abs(b.angle_deg);
    });
    return out;
}

int estimate_source_count(std::span<const double> eigenvalues_desc) {
    if (eigenvalues_desc.size() < 2) return 0;
    const double floor = std::numeric_limits<double>::min();
    int best = 1;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < eigenvalues_desc.size(); ++i) {
        const double ratio = std::max(eigenvalues_desc[i], floor) / std::max(eigenvalues_desc[i + 1], floor);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = static_cast<int>(i) + 1;
        }
    }
    return best;
}

}  // namespace tmadf

#pragma once

// MUSIC spatial spectrum on reconstructed snapshots.

#include <span>
#include <vector>

#include "tmadf/eigen.hpp"
#include "tmadf/scenario.hpp"
#include "tmadf/snapshot.hpp"

namespace tmadf {

struct CovarianceMatrix {
    CMatrix values;

    std::size_t size() const noexcept { return values.rows(); }
};

/// R = (1/K) * sum gamma * gamma^H over snapshot columns.
CovarianceMatrix sample_covariance(const CMatrix& snapshots);
inline CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots) {
    return sample_covariance(snapshots.values);
}

/// a(theta)_n = exp(-j*(n-1)*beta*D*sin(theta)), first entry exactly 1.
CVector steering_vector(double theta_deg, const ArrayGeometry& geometry);

struct Peak {
    double angle_deg = 0.0;
    double value = 0.0;  ///< linear pseudo-spectrum at the refined angle
};

struct SpatialSpectrum {
    std::vector<double> grid_deg;
    std::vector<double> values;  ///< linear P(theta)
    std::vector<Peak> peaks;     ///< descending value, at most source_count
    int source_count = 0;

    /// Peak angles sorted ascending.
    std::vector<double> peak_angles() const;
};

inline constexpr double kDefaultGridStepDeg = 0.1;

/// Uniform grid lo, lo+step, ..., hi.
std::vector<double> make_grid(double lo_deg = -90.0, double hi_deg = 90.0,
                              double step_deg = kDefaultGridStepDeg);

/// P(theta) = 1 / (a^H * En * En^H * a) with En the N-M weakest eigenvectors.
/// Peaks are the top-M local maxima, refined by a 3-point parabola on 10*log10(P);
/// values within 1e-12 relative tie, and ties go to the smaller |theta|.
SpatialSpectrum music_spectrum(const CovarianceMatrix& covariance, int source_count,
                               const ArrayGeometry& geometry, std::span<const double> grid_deg);

/// Source count from the largest ratio between consecutive eigenvalues.
/// Diagnostic only; the pipeline always uses the known source count.
int estimate_source_count(std::span<const double> eigenvalues_desc);

}  // namespace tmadf

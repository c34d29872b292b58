#pragma once

// Received-signal synthesis for the linear array. Element n sees every source
// with its true inter-element baseband delay (n-1)*tau_m and the carrier phase
// gradient exp(-j*(n-1)*beta*D*sin(theta_m)).

#include <cstdint>
#include <optional>

#include "tmadf/scenario.hpp"
#include "tmadf/signal.hpp"

namespace tmadf {

/// Inter-element propagation delay D*sin(theta)/c in seconds.
double propagation_delay(double theta_deg, double spacing_m, double speed_mps) noexcept;

Complex baseband_value(const SourceSpec& source, double t) noexcept;

/// Exact analytic value x_n(t); n is 1-based.
Complex element_signal(const Scenario& scenario, int n, double t);

/// Noiseless per-element samples at the scenario sample rate.
ElementSignals synthesize(const Scenario& scenario, double t0, std::size_t n_samples);

/// sigma^2 = P_sig / 10^(snr_db/10) with P_sig = sum |a_m|^2.
double noise_variance(const Scenario& scenario, double snr_db) noexcept;

/// Adds circularly-symmetric complex white Gaussian noise independently per element
/// and sample. A non-finite (+inf) SNR returns the input unchanged.
ElementSignals add_noise(ElementSignals signals, const Scenario& scenario, double snr_db,
                         std::uint64_t seed);

}  // namespace tmadf

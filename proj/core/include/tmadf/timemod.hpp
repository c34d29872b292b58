#pragma once

// Nonuniform-period square-wave modulation and the single-channel combiner.

#include <cstddef>

#include "tmadf/harmonics.hpp"
#include "tmadf/signal.hpp"

namespace tmadf {

/// +1 on [i*T, i*T + T/2), -1 on [i*T + T/2, (i+1)*T) with T = 1/(2^(n-1) * f_p).
int square_wave(int n, double t, double f_p);

/// Same switching rule, evaluated from a phase expressed in modulation cycles.
/// Phases within 1e-9 of a half-cycle boundary are snapped onto it.
int square_wave_from_cycles(double cycles) noexcept;

/// Sum over elements of U_n(t_i) * x_n(t_i) with exact +-1 switching.
ComplexSeries modulate_and_combine(const ElementSignals& signals, double f_p);

/// Line coefficient of the sampled switching sequence of element n over one
/// window: (1/n_pts) * sum_i U_n(t_i) * exp(-j*2*pi*q*f_p*t_i), q = k*2^(n-1).
/// Tends to fourier_coefficient(k) as the sample rate grows.
Complex sampled_modulation_coefficient(int n, int k, double f_p, double window_start,
                                       double sample_rate, std::size_t n_pts);

/// Partial Fourier sum of the square wave over |k| <= max_order.
double truncated_square_wave(int n, double t, double f_p, int max_order);

}  // namespace tmadf

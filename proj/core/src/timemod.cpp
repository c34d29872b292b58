#include "tmadf/timemod.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "tmadf/errors.hpp"

namespace tmadf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Complex fourier_coefficient(std::int64_t k) noexcept {
    if (k == 0 || k % 2 == 0) return {0.0, 0.0};
    // (j/(k*pi)) * (e^{-jk*pi} - 1) with e^{-jk*pi} = -1 for odd k.
    return {0.0, -2.0 / (static_cast<double>(k) * std::numbers::pi)};
}

LineId line_id(int n, int k, double f_p, double f_c) {
    if (n < 1 || n > 62) throw Error(ErrorCode::InvalidArgument, "element index must be in [1, 62]");
    if (k <= 0 || k % 2 == 0) throw Error(ErrorCode::EvenOrder, "harmonic order " + std::to_string(k));
    LineId id;
    id.element = n;
    id.order = k;
    id.multiple = static_cast<std::int64_t>(k) << (n - 1);
    id.frequency_hz = f_c + static_cast<double>(id.multiple) * f_p;
    return id;
}

LineOwner line_owner(std::int64_t q) {
    if (q < 1) throw Error(ErrorCode::InvalidArgument, "line multiple must be >= 1");
    const int twos = std::countr_zero(static_cast<std::uint64_t>(q));
    return {twos + 1, q >> twos};
}

int square_wave_from_cycles(double cycles) noexcept {
    double half = 2.0 * cycles;
    const double nearest = std::round(half);
    if (std::abs(half - nearest) <= 1e-9 * std::max(1.0, std::abs(half))) half = nearest;
    const double pos = half - 2.0 * std::floor(half / 2.0);  // in [0, 2)
    return pos < 1.0 ? 1 : -1;
}

int square_wave(int n, double t, double f_p) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "element index must be >= 1");
    return square_wave_from_cycles(t * std::ldexp(f_p, n - 1));
}

ComplexSeries modulate_and_combine(const ElementSignals& signals, double f_p) {
    if (!signals.aligned())
        throw Error(ErrorCode::LengthMismatch, "element series differ in start time, rate or length");
    ComplexSeries out;
    if (signals.elements.empty()) return out;

    const auto& ref = signals.elements.front();
    out.start_time = ref.start_time;
    out.sample_rate = ref.sample_rate;
    out.samples.assign(ref.size(), Complex{});

    for (std::size_t n = 0; n < signals.element_count(); ++n) {
        const double f_n = std::ldexp(f_p, static_cast<int>(n));
        const double start_cycles = f_n * ref.start_time;
        const double cycles_per_sample = f_n / ref.sample_rate;
        const auto& x = signals.elements[n].samples;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int u = square_wave_from_cycles(start_cycles + static_cast<double>(i) * cycles_per_sample);
            if (u > 0)
                out.samples[i] += x[i];
            else
                out.samples[i] -= x[i];
        }
    }
    return out;
}

Complex sampled_modulation_coefficient(int n, int k, double f_p, double window_start,
                                       double sample_rate, std::size_t n_pts) {
    const LineId line = line_id(n, k, f_p, 0.0);
    if (n_pts == 0) throw Error(ErrorCode::InvalidArgument, "empty window");
    const double f_n = std::ldexp(f_p, n - 1);
    const double f_line = static_cast<double>(line.multiple) * f_p;
    Complex acc{};
    for (std::size_t i = 0; i < n_pts; ++i) {
        const double t_rel = static_cast<double>(i) / sample_rate;
        const int u = square_wave_from_cycles(f_n * window_start + f_n * t_rel);
        double cycles = f_line * window_start;
        cycles -= std::floor(cycles);
        cycles += f_line * t_rel;
        cycles -= std::floor(cycles);
        acc += static_cast<double>(u) * std::polar(1.0, -kTwoPi * cycles);
    }
    return acc / static_cast<double>(n_pts);
}

double truncated_square_wave(int n, double t, double f_p, int max_order) {
    const double f_n = std::ldexp(f_p, n - 1);
    double cycles = f_n * t;
    cycles -= std::floor(cycles);
    Complex sum{};
    for (int k = -max_order; k <= max_order; ++k) {
        const Complex a = fourier_coefficient(k);
        if (a == Complex{}) continue;
        sum += a * std::polar(1.0, kTwoPi * static_cast<double>(k) * cycles);
    }
    return sum.real();
}

}  // namespace tmadf

#include "tmadf/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tmadf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

// exp(j*2*pi*cycles), reducing to the fractional cycle first so long time
// spans keep full phase precision.
Complex unit_phasor(double cycles) {
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, kTwoPi * frac);
}

}  // namespace

bool ElementSignals::aligned() const noexcept {
    if (elements.empty()) return true;
    const auto& ref = elements.front();
    for (const auto& e : elements)
        if (e.start_time != ref.start_time || e.sample_rate != ref.sample_rate || e.size() != ref.size())
            return false;
    return true;
}

double propagation_delay(double theta_deg, double spacing_m, double speed_mps) noexcept {
    return spacing_m * std::sin(radians(theta_deg)) / speed_mps;
}

Complex baseband_value(const SourceSpec& source, double t) noexcept {
    return source.amplitude * unit_phasor(source.baseband_frequency_hz * t);
}

Complex element_signal(const Scenario& scenario, int n, double t) {
    if (n < 1 || n > scenario.element_count())
        throw Error(ErrorCode::InvalidArgument, "element index out of range");
    const auto& g = scenario.geometry();
    const double shift = static_cast<double>(n - 1);
    Complex sum{};
    for (const auto& s : scenario.sources()) {
        const double tau = propagation_delay(s.angle_deg, g.element_spacing_m, g.propagation_speed_mps);
        const double spatial_phase = shift * g.wavenumber() * g.element_spacing_m * std::sin(radians(s.angle_deg));
        sum += baseband_value(s, t - shift * tau) * std::polar(1.0, -spatial_phase);
    }
    return sum * unit_phasor(g.carrier_frequency_hz * t);
}

ElementSignals synthesize(const Scenario& scenario, double t0, std::size_t n_samples) {
    const auto& g = scenario.geometry();
    const auto& sources = scenario.sources();
    const int n_elements = scenario.element_count();
    const double fs = scenario.sampling().sample_rate_hz;

    // x_n(t) = e^{j2pi fc t} * sum_m e^{j2pi fb_m t} * w_{n,m}, where w folds in the
    // amplitude, the delayed-baseband phase and the spatial phase.
    std::vector<CVector> weights(static_cast<std::size_t>(n_elements), CVector(sources.size()));
    for (int n = 0; n < n_elements; ++n) {
        for (std::size_t m = 0; m < sources.size(); ++m) {
            const auto& s = sources[m];
            const double tau = propagation_delay(s.angle_deg, g.element_spacing_m, g.propagation_speed_mps);
            const double spatial_phase = n * g.wavenumber() * g.element_spacing_m * std::sin(radians(s.angle_deg));
            weights[n][m] = s.amplitude * unit_phasor(-s.baseband_frequency_hz * n * tau) *
                            std::polar(1.0, -spatial_phase);
        }
    }

    ElementSignals out;
    out.elements.resize(static_cast<std::size_t>(n_elements));
    for (auto& e : out.elements) {
        e.start_time = t0;
        e.sample_rate = fs;
        e.samples.resize(n_samples);
    }

    CVector tones(sources.size());
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = t0 + static_cast<double>(i) / fs;
        for (std::size_t m = 0; m < sources.size(); ++m)
            tones[m] = unit_phasor(sources[m].baseband_frequency_hz * t);
        const Complex carrier = unit_phasor(g.carrier_frequency_hz * t);
        for (int n = 0; n < n_elements; ++n) {
            Complex acc{};
            for (std::size_t m = 0; m < sources.size(); ++m) acc += weights[n][m] * tones[m];
            out.elements[static_cast<std::size_t>(n)].samples[i] = acc * carrier;
        }
    }
    return out;
}

double noise_variance(const Scenario& scenario, double snr_db) noexcept {
    return scenario.signal_power() / std::pow(10.0, snr_db / 10.0);
}

ElementSignals add_noise(ElementSignals signals, const Scenario& scenario, double snr_db,
                         std::uint64_t seed) {
    if (!std::isfinite(snr_db) && snr_db > 0.0) return signals;
    if (std::isnan(snr_db)) throw Error(ErrorCode::InvalidArgument, "snr_db is NaN");

    const double sigma = std::sqrt(noise_variance(scenario, snr_db) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& e : signals.elements)
        for (auto& x : e.samples) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            x += Complex(re, im);
        }
    return signals;
}

}  // namespace tmadf

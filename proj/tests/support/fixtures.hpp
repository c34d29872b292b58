#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "tmadf/io.hpp"
#include "tmadf/scenario.hpp"
#include "tmadf/signal.hpp"

namespace tmadf::testing {

inline std::filesystem::path config_path(const std::string& name) {
    return std::filesystem::path(TMADF_CONFIG_DIR) / name;
}

/// Reference setup: 4 elements at half a 60 km wavelength, f_p = 1.25 kHz,
/// f_s = 1.6 MHz, five consecutive windows, sources at 10/30/40 deg.
inline ScenarioConfig table1_config() {
    ScenarioConfig c;
    c.geometry = {4, 30000.0, 3e8, 5000.0};
    c.sources = {{10.0, {0.0, 0.6}, 7.0, {}}, {30.0, {0.0, -0.8}, 1.0, {}}, {40.0, {0.0, 0.3}, 4.0, {}}};
    c.modulation.base_frequency_hz = 1250.0;
    c.sampling.sample_rate_hz = 1.6e6;
    c.sampling.window_count = 5;
    c.sampling.window_stride_s = 0.0008;
    c.sampling.snr_db = 20.0;
    c.sampling.rng_seed = 1;
    return c;
}

inline ScenarioConfig noiseless(ScenarioConfig c) {
    c.sampling.snr_db.reset();
    return c;
}

inline ScenarioConfig frozen_basebands(ScenarioConfig c) {
    for (auto& s : c.sources) s.baseband_frequency_hz = 0.0;
    return c;
}

/// Direct O(n) correlation written independently of the library.
inline Complex brute_force_bin(const std::vector<Complex>& x, double t0, double fs, double f) {
    Complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = t0 + static_cast<double>(i) / fs;
        acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * f * t);
    }
    return acc / static_cast<double>(x.size());
}

/// Exact square wave from integer sample arithmetic: element n over a window
/// with samples_per_period samples of f_p.
inline int integer_square_wave(int n, std::size_t sample, std::size_t samples_per_period) {
    const std::size_t period = samples_per_period >> (n - 1);
    return (sample % period) < period / 2 ? 1 : -1;
}

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace tmadf::testing

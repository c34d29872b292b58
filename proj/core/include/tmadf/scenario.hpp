#pragma once

// Experiment description for a time-modulated linear array: geometry, far-field
// narrowband sources, per-element square-wave modulation and sampling. A
// ScenarioConfig is raw user input; a Scenario is only obtainable through
// validate() and is immutable afterwards.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmadf/errors.hpp"
#include "tmadf/harmonics.hpp"
#include "tmadf/types.hpp"

namespace tmadf {

inline constexpr double kSpeedOfLight = 2.99792458e8;
inline constexpr double kDefaultNarrowbandRatio = 100.0;

struct ArrayGeometry {
    int element_count = 0;
    double element_spacing_m = 0.0;
    double propagation_speed_mps = kSpeedOfLight;
    double carrier_frequency_hz = 0.0;

    double wavelength() const noexcept { return propagation_speed_mps / carrier_frequency_hz; }
    /// beta = 2*pi/lambda
    double wavenumber() const noexcept;

    bool operator==(const ArrayGeometry&) const = default;
};

/// One far-field source with a single-tone complex baseband a * exp(j*2*pi*f*t).
struct SourceSpec {
    double angle_deg = 0.0;
    Complex amplitude{1.0, 0.0};
    double baseband_frequency_hz = 0.0;
    std::optional<double> bandwidth_hz;  ///< defaults to |baseband_frequency_hz|

    double bandwidth() const noexcept;

    bool operator==(const SourceSpec&) const = default;
};

/// How reconstruction normalizes an extracted line.
enum class CoefficientModel {
    /// Exact line coefficient of the sampled +-1 switching sequence for the window.
    Sampled,
    /// Continuous-time Fourier coefficient alpha_k = -2j/(k*pi).
    Analytic,
};

struct ModulationSpec {
    double base_frequency_hz = 0.0;
    std::vector<int> harmonic_orders{1};
    double narrowband_ratio_min = kDefaultNarrowbandRatio;
    CoefficientModel coefficient_model = CoefficientModel::Sampled;

    bool operator==(const ModulationSpec&) const = default;
};

struct SamplingSpec {
    double sample_rate_hz = 0.0;
    int window_count = 1;
    double window_stride_s = 0.0;
    double start_time_s = 0.0;
    std::optional<double> snr_db;  ///< absent means noiseless
    std::uint64_t rng_seed = 0;

    bool operator==(const SamplingSpec&) const = default;
};

struct ScenarioConfig {
    ArrayGeometry geometry;
    std::vector<SourceSpec> sources;
    ModulationSpec modulation;
    SamplingSpec sampling;

    bool operator==(const ScenarioConfig&) const = default;
};

enum class ViolationKind {
    MalformedConfig,
    InvalidParameter,
    AmbiguityViolation,
    IncommensurateClocks,
    NarrowbandViolation,
    TooManySources,
    NyquistViolation,
    InsufficientWindows,
    EvenOrder,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::string field;
    std::string message;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }
    bool has(ViolationKind kind) const noexcept;

private:
    std::vector<Violation> violations_;
};

class Scenario {
public:
    const ScenarioConfig& config() const noexcept { return config_; }
    const ArrayGeometry& geometry() const noexcept { return config_.geometry; }
    const std::vector<SourceSpec>& sources() const noexcept { return config_.sources; }
    const ModulationSpec& modulation() const noexcept { return config_.modulation; }
    const SamplingSpec& sampling() const noexcept { return config_.sampling; }

    int element_count() const noexcept { return config_.geometry.element_count; }
    int source_count() const noexcept { return static_cast<int>(config_.sources.size()); }

    /// Total source power at one element, sum of |a_m|^2.
    double signal_power() const noexcept;

    friend Scenario validate(const ScenarioConfig& raw);

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    explicit Scenario(ScenarioConfig config) : config_(std::move(config)) {}
    ScenarioConfig config_;
};

/// Returns every violated constraint; empty means the config is valid.
std::vector<Violation> check(const ScenarioConfig& raw);

/// Throws ValidationError listing all violations.
Scenario validate(const ScenarioConfig& raw);

struct DerivedParams {
    int element_count = 0;
    double wavelength_m = 0.0;
    double wavenumber = 0.0;
    double carrier_frequency_hz = 0.0;
    double carrier_period_s = 0.0;
    double modulation_frequency_hz = 0.0;
    double modulation_period_s = 0.0;
    double sample_rate_hz = 0.0;
    std::size_t samples_per_window = 0;         ///< f_s * T_p
    std::size_t carrier_periods_per_window = 0;  ///< T_p / T_c
    std::size_t stride_windows = 0;             ///< window stride in units of T_p
    std::vector<double> element_frequencies_hz;  ///< 2^(n-1) * f_p
    std::vector<int> harmonic_orders;
    std::vector<LineId> lines;  ///< order-major, then element
};

DerivedParams derived(const Scenario& scenario);

}  // namespace tmadf

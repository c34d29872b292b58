#include "tmadf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tmadf {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Validation: return "Validation";
        case ErrorCode::EvenOrder: return "EvenOrder";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::InsufficientWindows: return "InsufficientWindows";
        case ErrorCode::EmptySnapshotSet: return "EmptySnapshotSet";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::SubspaceDimension: return "SubspaceDimension";
        case ErrorCode::UnknownParameter: return "UnknownParameter";
        case ErrorCode::InvalidTrials: return "InvalidTrials";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::MalformedConfig: return "MalformedConfig";
        case ViolationKind::InvalidParameter: return "InvalidParameter";
        case ViolationKind::AmbiguityViolation: return "AmbiguityViolation";
        case ViolationKind::IncommensurateClocks: return "IncommensurateClocks";
        case ViolationKind::NarrowbandViolation: return "NarrowbandViolation";
        case ViolationKind::TooManySources: return "TooManySources";
        case ViolationKind::NyquistViolation: return "NyquistViolation";
        case ViolationKind::InsufficientWindows: return "InsufficientWindows";
        case ViolationKind::EvenOrder: return "EvenOrder";
    }
    return "Unknown";
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << violations.size() << " violation(s)";
    for (const auto& v : violations) os << "; " << to_string(v.kind) << " [" << v.field << "] " << v.message;
    return os.str();
}

// Relative tolerance for "is an integer" and boundary comparisons on physical
// quantities derived from decimal config values.
constexpr double kRatioTolerance = 1e-9;

bool is_integral(double x) {
    return std::isfinite(x) && std::abs(x - std::round(x)) <= kRatioTolerance * std::max(1.0, std::abs(x));
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(ErrorCode::Validation, summarize(violations)), violations_(std::move(violations)) {}

bool ValidationError::has(ViolationKind kind) const noexcept {
    return std::any_of(violations_.begin(), violations_.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

double ArrayGeometry::wavenumber() const noexcept {
    return 2.0 * std::numbers::pi / wavelength();
}

double SourceSpec::bandwidth() const noexcept {
    return bandwidth_hz.value_or(std::abs(baseband_frequency_hz));
}

double Scenario::signal_power() const noexcept {
    double p = 0.0;
    for (const auto& s : config_.sources) p += std::norm(s.amplitude);
    return p;
}

std::vector<Violation> check(const ScenarioConfig& raw) {
    std::vector<Violation> out;
    auto add = [&out](ViolationKind kind, std::string field, std::string message) {
        out.push_back({kind, std::move(field), std::move(message)});
    };

    const auto& g = raw.geometry;
    const auto& mod = raw.modulation;
    const auto& smp = raw.sampling;

    bool geometry_ok = true;
    if (g.element_count < 2) {
        add(ViolationKind::InvalidParameter, "geometry.element_count", "need at least 2 elements");
        geometry_ok = false;
    } else if (g.element_count > 30) {
        // 2^(N-1) line multiples must stay representable and below any sane Nyquist.
        add(ViolationKind::InvalidParameter, "geometry.element_count", "at most 30 elements supported");
        geometry_ok = false;
    }
    if (!positive_finite(g.element_spacing_m)) {
        add(ViolationKind::InvalidParameter, "geometry.element_spacing_m", "must be > 0");
        geometry_ok = false;
    }
    if (!positive_finite(g.propagation_speed_mps)) {
        add(ViolationKind::InvalidParameter, "geometry.propagation_speed_mps", "must be > 0");
        geometry_ok = false;
    }
    if (!positive_finite(g.carrier_frequency_hz)) {
        add(ViolationKind::InvalidParameter, "geometry.carrier_frequency_hz", "must be > 0");
        geometry_ok = false;
    }
    if (geometry_ok) {
        const double half_lambda = 0.5 * g.wavelength();
        if (g.element_spacing_m > half_lambda * (1.0 + kRatioTolerance)) {
            std::ostringstream os;
            os << "element spacing " << g.element_spacing_m << " m exceeds lambda/2 = " << half_lambda << " m";
            add(ViolationKind::AmbiguityViolation, "geometry.element_spacing_m", os.str());
        }
    }

    const int m_count = static_cast<int>(raw.sources.size());
    if (m_count < 1) add(ViolationKind::InvalidParameter, "sources", "need at least one source");
    if (g.element_count >= 2 && m_count > g.element_count - 1) {
        std::ostringstream os;
        os << m_count << " sources but at most N-1 = " << g.element_count - 1 << " can be estimated";
        add(ViolationKind::TooManySources, "sources", os.str());
    }
    double max_bandwidth = 0.0;
    for (int m = 0; m < m_count; ++m) {
        const auto& s = raw.sources[static_cast<std::size_t>(m)];
        const std::string prefix = "sources[" + std::to_string(m) + "]";
        if (!std::isfinite(s.angle_deg) || s.angle_deg < -90.0 || s.angle_deg > 90.0)
            add(ViolationKind::InvalidParameter, prefix + ".angle_deg", "must lie in [-90, 90]");
        if (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag()) ||
            std::abs(s.amplitude) <= 0.0)
            add(ViolationKind::InvalidParameter, prefix + ".amplitude", "must be finite and nonzero");
        if (!std::isfinite(s.baseband_frequency_hz))
            add(ViolationKind::InvalidParameter, prefix + ".baseband_frequency_hz", "must be finite");
        if (s.bandwidth_hz && (!std::isfinite(*s.bandwidth_hz) || *s.bandwidth_hz < 0.0))
            add(ViolationKind::InvalidParameter, prefix + ".bandwidth_hz", "must be >= 0");
        else if (std::isfinite(s.bandwidth()))
            max_bandwidth = std::max(max_bandwidth, s.bandwidth());
    }

    bool modulation_ok = positive_finite(mod.base_frequency_hz);
    if (!modulation_ok)
        add(ViolationKind::InvalidParameter, "modulation.base_frequency_hz", "must be > 0");
    if (mod.harmonic_orders.empty()) {
        add(ViolationKind::InvalidParameter, "modulation.harmonic_orders", "need at least one order");
        modulation_ok = false;
    }
    int max_order = 0;
    for (std::size_t i = 0; i < mod.harmonic_orders.size(); ++i) {
        const int k = mod.harmonic_orders[i];
        if (k <= 0 || k % 2 == 0) {
            add(ViolationKind::EvenOrder, "modulation.harmonic_orders[" + std::to_string(i) + "]",
                "harmonic orders must be odd and positive (even square-wave harmonics vanish)");
            modulation_ok = false;
        }
        max_order = std::max(max_order, k);
    }
    if (!std::isfinite(mod.narrowband_ratio_min) || mod.narrowband_ratio_min <= 0.0)
        add(ViolationKind::InvalidParameter, "modulation.narrowband_ratio_min", "must be > 0");
    else if (positive_finite(mod.base_frequency_hz) && max_bandwidth > 0.0 &&
             mod.base_frequency_hz / max_bandwidth < mod.narrowband_ratio_min) {
        std::ostringstream os;
        os << "f_p / max B = " << mod.base_frequency_hz / max_bandwidth << " below required "
           << mod.narrowband_ratio_min;
        add(ViolationKind::NarrowbandViolation, "modulation.base_frequency_hz", os.str());
    }

    if (geometry_ok && positive_finite(mod.base_frequency_hz)) {
        const double carrier_periods = g.carrier_frequency_hz / mod.base_frequency_hz;
        if (!is_integral(carrier_periods) || std::round(carrier_periods) < 1.0) {
            std::ostringstream os;
            os << "T_p / T_c = f_c / f_p = " << carrier_periods << " is not a positive integer";
            add(ViolationKind::IncommensurateClocks, "modulation.base_frequency_hz", os.str());
        }
    }

    const bool rate_ok = positive_finite(smp.sample_rate_hz);
    if (!rate_ok) add(ViolationKind::InvalidParameter, "sampling.sample_rate_hz", "must be > 0");
    if (rate_ok && positive_finite(mod.base_frequency_hz) && g.element_count >= 2 &&
        g.element_count <= 30) {
        const double per_window = smp.sample_rate_hz / mod.base_frequency_hz;
        // Half-period switching instants of the fastest element must land on samples.
        const double per_fast_half_period = per_window / std::ldexp(1.0, g.element_count);
        if (!is_integral(per_window)) {
            std::ostringstream os;
            os << "f_s / f_p = " << per_window << " is not an integer";
            add(ViolationKind::IncommensurateClocks, "sampling.sample_rate_hz", os.str());
        } else if (!is_integral(per_fast_half_period) || std::round(per_fast_half_period) < 1.0) {
            std::ostringstream os;
            os << "f_s / (2^N f_p) = " << per_fast_half_period
               << " is not a positive integer; switching instants fall between samples";
            add(ViolationKind::IncommensurateClocks, "sampling.sample_rate_hz", os.str());
        }
        if (geometry_ok && modulation_ok) {
            const double q_max = max_order * std::ldexp(1.0, g.element_count - 1);
            const double highest = g.carrier_frequency_hz + q_max * mod.base_frequency_hz;
            if (!(smp.sample_rate_hz > 2.0 * highest)) {
                std::ostringstream os;
                os << "f_s = " << smp.sample_rate_hz << " Hz must exceed 2 * " << highest << " Hz";
                add(ViolationKind::NyquistViolation, "sampling.sample_rate_hz", os.str());
            }
        }
    }

    if (smp.window_count < 1) {
        add(ViolationKind::InsufficientWindows, "sampling.window_count", "need at least one window");
    } else if (m_count >= 1 && smp.window_count < m_count) {
        std::ostringstream os;
        os << smp.window_count << " windows cannot give a rank-" << m_count << " source covariance";
        add(ViolationKind::InsufficientWindows, "sampling.window_count", os.str());
    }
    if (positive_finite(mod.base_frequency_hz)) {
        const double stride_periods = smp.window_stride_s * mod.base_frequency_hz;
        if (!std::isfinite(smp.window_stride_s) || !is_integral(stride_periods) ||
            std::round(stride_periods) < 1.0) {
            std::ostringstream os;
            os << "window stride " << smp.window_stride_s << " s is not a positive multiple of T_p";
            add(ViolationKind::IncommensurateClocks, "sampling.window_stride_s", os.str());
        }
    }
    if (!std::isfinite(smp.start_time_s))
        add(ViolationKind::InvalidParameter, "sampling.start_time_s", "must be finite");
    if (smp.snr_db && std::isnan(*smp.snr_db))
        add(ViolationKind::InvalidParameter, "sampling.snr_db", "must be a number");

    return out;
}

Scenario validate(const ScenarioConfig& raw) {
    auto violations = check(raw);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return Scenario(raw);
}

DerivedParams derived(const Scenario& scenario) {
    const auto& g = scenario.geometry();
    const auto& mod = scenario.modulation();
    const auto& smp = scenario.sampling();

    DerivedParams d;
    d.element_count = g.element_count;
    d.wavelength_m = g.wavelength();
    d.wavenumber = g.wavenumber();
    d.carrier_frequency_hz = g.carrier_frequency_hz;
    d.carrier_period_s = 1.0 / g.carrier_frequency_hz;
    d.modulation_frequency_hz = mod.base_frequency_hz;
    d.modulation_period_s = 1.0 / mod.base_frequency_hz;
    d.sample_rate_hz = smp.sample_rate_hz;
    d.samples_per_window = static_cast<std::size_t>(std::llround(smp.sample_rate_hz / mod.base_frequency_hz));
    d.carrier_periods_per_window =
        static_cast<std::size_t>(std::llround(g.carrier_frequency_hz / mod.base_frequency_hz));
    d.stride_windows = static_cast<std::size_t>(std::llround(smp.window_stride_s * mod.base_frequency_hz));
    for (int n = 1; n <= g.element_count; ++n)
        d.element_frequencies_hz.push_back(std::ldexp(mod.base_frequency_hz, n - 1));
    d.harmonic_orders = mod.harmonic_orders;
    for (int k : mod.harmonic_orders)
        for (int n = 1; n <= g.element_count; ++n)
            d.lines.push_back(line_id(n, k, mod.base_frequency_hz, g.carrier_frequency_hz));
    return d;
}

}  // namespace tmadf

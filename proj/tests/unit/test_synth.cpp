#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fixtures.hpp"
#include "tmadf/synth.hpp"

using namespace tmadf;
using tmadf::testing::deg2rad;
using tmadf::testing::table1_config;

namespace {

ScenarioConfig single_source(double angle_deg, Complex a, double f_b) {
    ScenarioConfig c = table1_config();
    c.sources = {{angle_deg, a, f_b, {}}};
    c.sampling.window_count = 1;
    return c;
}

}  // namespace

TEST_CASE("propagation delay") {
    CHECK(propagation_delay(30.0, 30000.0, 3e8) == doctest::Approx(5.0e-5).epsilon(1e-12));
    CHECK(propagation_delay(0.0, 12345.0, 3e8) == 0.0);
    CHECK(propagation_delay(-30.0, 30000.0, 3e8) == doctest::Approx(-5.0e-5).epsilon(1e-12));
}

TEST_CASE("baseband value") {
    const SourceSpec s1{10.0, {0.0, 0.6}, 7.0, {}};
    const SourceSpec s2{30.0, {0.0, -0.8}, 1.0, {}};
    CHECK(std::abs(baseband_value(s1, 0.0) - Complex(0.0, 0.6)) < 1e-15);
    CHECK(std::abs(baseband_value(s2, 0.25) - Complex(0.8, 0.0)) < 1e-12);
    for (int cycles = 1; cycles < 50; ++cycles)
        CHECK(std::abs(baseband_value(s1, cycles / 7.0) - s1.amplitude) < 1e-12);
}

TEST_CASE("element signal") {
    SUBCASE("first element is the plain sum on the carrier") {
        const Scenario s = validate(table1_config());
        for (double t : {0.0, 1.3e-4, 0.25, 3.7}) {
            Complex sum{};
            for (const auto& src : s.sources()) sum += baseband_value(src, t);
            const Complex expected = sum * std::polar(1.0, 2.0 * std::numbers::pi * 5000.0 * t);
            CHECK(std::abs(element_signal(s, 1, t) - expected) < 1e-9);
        }
    }
    SUBCASE("broadside source reaches every element identically") {
        const Scenario s = validate(single_source(0.0, {0.3, -0.2}, 3.0));
        for (double t : {0.0, 0.01, 0.4})
            for (int n = 2; n <= 4; ++n) CHECK(element_signal(s, n, t) == element_signal(s, 1, t));
    }
    SUBCASE("delayed source on element two") {
        const Scenario s = validate(single_source(30.0, {0.0, -0.8}, 1.0));
        const Complex x = element_signal(s, 2, 0.0);
        // -0.8 * exp(-j*2*pi*1 Hz*5e-5 s)
        CHECK(x.real() == doctest::Approx(-0.7999999605215828).epsilon(1e-12));
        CHECK(x.imag() == doctest::Approx(0.00025132740815301326).epsilon(1e-9));
    }
    SUBCASE("element index is checked") {
        const Scenario s = validate(table1_config());
        CHECK_THROWS_AS((void)element_signal(s, 0, 0.0), Error);
        CHECK_THROWS_AS((void)element_signal(s, 5, 0.0), Error);
    }
}

TEST_CASE("synthesize matches the analytic signal") {
    const Scenario s = validate(table1_config());
    const ElementSignals sig = synthesize(s, 0.0, 6400);
    REQUIRE(sig.element_count() == 4);
    CHECK(sig.length() == 6400);
    CHECK(sig.aligned());
    for (std::size_t n = 0; n < 4; ++n)
        for (std::size_t i = 0; i < 6400; i += 97)
            CHECK(std::abs(sig.elements[n].samples[i] -
                           element_signal(s, static_cast<int>(n) + 1, sig.elements[n].time_at(i))) < 1e-9);

    const ElementSignals empty = synthesize(s, 0.0, 0);
    CHECK(empty.element_count() == 4);
    CHECK(empty.length() == 0);

    const ElementSignals again = synthesize(s, 0.0, 6400);
    for (std::size_t n = 0; n < 4; ++n) CHECK(again.elements[n].samples == sig.elements[n].samples);
}

TEST_CASE("element magnitude obeys the triangle inequality") {
    const Scenario s = validate(table1_config());
    const ElementSignals sig = synthesize(s, 0.37, 2000);
    for (const auto& e : sig.elements)
        for (const Complex& x : e.samples) CHECK(std::abs(x) <= 0.6 + 0.8 + 0.3 + 1e-12);
}

TEST_CASE("true delay differs from a pure phase shift only at second order") {
    const Scenario s = validate(table1_config());
    const auto& g = s.geometry();
    for (int n = 1; n <= 4; ++n)
        for (double t : {0.0, 0.013, 0.21}) {
            Complex phase_only{};
            double bound = 0.0;
            for (const auto& src : s.sources()) {
                const double spatial = (n - 1) * g.wavenumber() * g.element_spacing_m * std::sin(deg2rad(src.angle_deg));
                phase_only += baseband_value(src, t) * std::polar(1.0, -spatial);
                const double tau = propagation_delay(src.angle_deg, g.element_spacing_m, g.propagation_speed_mps);
                bound += std::abs(src.amplitude) * 2.0 * std::numbers::pi * src.bandwidth() * (n - 1) * std::abs(tau);
            }
            phase_only *= std::polar(1.0, 2.0 * std::numbers::pi * g.carrier_frequency_hz * t);
            CHECK(std::abs(element_signal(s, n, t) - phase_only) <= bound + 1e-12);
        }
}

TEST_CASE("noise variance follows the power definition") {
    const Scenario s = validate(table1_config());
    CHECK(noise_variance(s, 20.0) == doctest::Approx(0.0109).epsilon(1e-12));
    CHECK(noise_variance(s, 0.0) == doctest::Approx(1.09).epsilon(1e-12));
}

TEST_CASE("add_noise") {
    const Scenario s = validate(table1_config());
    const ElementSignals clean = synthesize(s, 0.0, 1000);

    const ElementSignals same = add_noise(clean, s, std::numeric_limits<double>::infinity(), 5);
    for (std::size_t n = 0; n < 4; ++n) CHECK(same.elements[n].samples == clean.elements[n].samples);

    const ElementSignals a = add_noise(clean, s, 20.0, 42);
    const ElementSignals b = add_noise(clean, s, 20.0, 42);
    const ElementSignals c = add_noise(clean, s, 20.0, 43);
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(a.elements[n].samples == b.elements[n].samples);
        CHECK(a.elements[n].samples != c.elements[n].samples);
    }
    CHECK(a.elements[0].samples != a.elements[1].samples);
    CHECK_THROWS_AS((void)add_noise(clean, s, std::nan(""), 1), Error);
}

TEST_CASE("measured noise power and circularity") {
    const Scenario s = validate(table1_config());
    ElementSignals zero = synthesize(s, 0.0, 25000);
    for (auto& e : zero.elements) std::fill(e.samples.begin(), e.samples.end(), Complex{});
    const ElementSignals noisy = add_noise(zero, s, 20.0, 2024);
    double power = 0.0, re2 = 0.0, im2 = 0.0;
    Complex pseudo{};
    Complex mean{};
    std::size_t count = 0;
    for (const auto& e : noisy.elements)
        for (const Complex& x : e.samples) {
            power += std::norm(x);
            re2 += x.real() * x.real();
            im2 += x.imag() * x.imag();
            pseudo += x * x;
            mean += x;
            ++count;
        }
    power /= static_cast<double>(count);
    CHECK(count == 100000);
    CHECK(power == doctest::Approx(0.0109).epsilon(0.05));
    CHECK(re2 / im2 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(pseudo) / static_cast<double>(count) < 0.05 * 0.0109);
    CHECK(std::abs(mean) / static_cast<double>(count) < 0.01 * std::sqrt(0.0109));
}

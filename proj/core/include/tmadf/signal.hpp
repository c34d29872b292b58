#pragma once

#include <cstddef>
#include <vector>

#include "tmadf/types.hpp"

namespace tmadf {

/// Uniformly sampled complex analytic signal; sample i sits at start_time + i / sample_rate.
struct ComplexSeries {
    double start_time = 0.0;
    double sample_rate = 1.0;
    CVector samples;

    std::size_t size() const noexcept { return samples.size(); }
    double time_at(std::size_t i) const noexcept {
        return start_time + static_cast<double>(i) / sample_rate;
    }
};

/// Per-element received signals, element n stored at index n-1. All series share
/// start time, rate and length.
struct ElementSignals {
    std::vector<ComplexSeries> elements;

    std::size_t element_count() const noexcept { return elements.size(); }
    std::size_t length() const noexcept { return elements.empty() ? 0 : elements.front().size(); }
    bool aligned() const noexcept;
};

}  // namespace tmadf

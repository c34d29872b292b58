#pragma once

// Spectral bookkeeping for power-of-two period modulation. Element n (1-based)
// switches at 2^(n-1) * f_p, so its order-k harmonic lands on line multiple
// q = k * 2^(n-1). Splitting q into odd part and power of two recovers (n, k),
// which is why no two elements ever share a line.

#include <cstdint>

#include "tmadf/errors.hpp"
#include "tmadf/types.hpp"

namespace tmadf {

struct LineId {
    int element = 1;           ///< n, 1-based
    int order = 1;             ///< k, odd positive
    std::int64_t multiple = 1; ///< q = k * 2^(n-1)
    double frequency_hz = 0.0; ///< f_c + q * f_p

    bool operator==(const LineId&) const = default;
};

struct LineOwner {
    int element = 1;
    std::int64_t order = 1;

    bool operator==(const LineOwner&) const = default;
};

/// Fourier coefficient of the +-1 half-period square wave: (j/(k*pi)) * (exp(-j*k*pi) - 1).
/// Exactly zero for k == 0 and for even k; -2j/(k*pi) for odd k.
Complex fourier_coefficient(std::int64_t k) noexcept;

/// Throws Error(EvenOrder) for even or non-positive k, Error(InvalidArgument) for n < 1.
LineId line_id(int n, int k, double f_p, double f_c);

/// Unique (n, k) with k odd and q = k * 2^(n-1). Requires q >= 1.
LineOwner line_owner(std::int64_t q);

}  // namespace tmadf

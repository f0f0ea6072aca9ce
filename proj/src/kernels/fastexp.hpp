// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>

namespace lodgs::detail {

// exp() for blend powers. libm's exp is not guaranteed to round identically
// across build configurations, and the vector path needs the exact same
// result lane-for-lane, so both variants run this sequence: clamp, magic-
// number round, Cody-Waite reduction, degree-12 Horner, exponent-bit scale.
// The -30 input clamp is safe because alpha = a0 * exp(power) with a0 <= 1
// falls below the 1/255 skip threshold long before exp(-30).
inline constexpr double kExpClamp = -30.0;
inline constexpr double kInvLn2 = 1.44269504088896338700e+00;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kRoundMagic = 6755399441055744.0;  // 1.5 * 2^52

inline constexpr double kExpPoly[13] = {
    1.0,                        // 1/0!
    1.0,                        // 1/1!
    1.0 / 2,                    // 1/2!
    1.0 / 6,                    // 1/3!
    1.0 / 24,                   // 1/4!
    1.0 / 120,                  // 1/5!
    1.0 / 720,                  // 1/6!
    1.0 / 5040,                 // 1/7!
    1.0 / 40320,                // 1/8!
    1.0 / 362880,               // 1/9!
    1.0 / 3628800,              // 1/10!
    1.0 / 39916800,             // 1/11!
    1.0 / 479001600,            // 1/12!
};

inline double exp_mx(double x) {
    x = std::max(x, kExpClamp);
    const double t = x * kInvLn2;
    const double u = t + kRoundMagic;
    const double fn = u - kRoundMagic;
    const double r1 = x - fn * kLn2Hi;
    const double r = r1 - fn * kLn2Lo;
    double p = kExpPoly[12];
    for (int k = 11; k >= 0; --k) p = p * r + kExpPoly[k];
    const std::int64_t n = std::int64_t(fn);
    const double scale = std::bit_cast<double>((n + 1023) << 52);
    return p * scale;
}

}  // namespace lodgs::detail

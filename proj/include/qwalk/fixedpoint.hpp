// Copyright 2026 The qwalk developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qwalk {

using uint128 = unsigned __int128;

inline bool is_power_of_two(std::uint64_t v) {
  return v != 0 && (v & (v - 1)) == 0;
}

/// A scaled integer representing value / 2^frac_bits.
///
/// Unit-interval values satisfy 0 <= value <= 2^frac_bits; angle values are
/// radians in [0, pi/2] up to one grid step.
struct FixedPoint {
  enum class Range { UnitInterval, Angle };

  std::int64_t value = 0;
  int frac_bits = 0;
  Range range = Range::UnitInterval;

  double to_double() const {
    return std::ldexp(static_cast<double>(value), -frac_bits);
  }
  long double to_long_double() const {
    return ldexpl(static_cast<long double>(value), -frac_bits);
  }

  friend bool operator==(const FixedPoint&, const FixedPoint&) = default;
};

/// floor(sqrt(x)) for 128-bit operands, digit-by-digit.
inline uint128 isqrt_u128(uint128 x) {
  if (x == 0) {
    return 0;
  }
  uint128 bit = uint128{1} << 126;
  while (bit > x) {
    bit >>= 2;
  }
  uint128 res = 0;
  while (bit != 0) {
    if (x >= res + bit) {
      x -= res + bit;
      res = (res >> 1) + bit;
    } else {
      res >>= 1;
    }
    bit >>= 2;
  }
  return res;
}

/// Round sqrt(c_num / b_num) down to the 2^-n grid.
///
/// Let q = floor(c * 4^n / b) and s = floor(sqrt(q)). Then
/// s <= sqrt(c/b) * 2^n < s + 1, so the returned value is within 2^-n of the
/// exact square root, one-sided from below. The division is done by
/// shift-subtract so no intermediate product can overflow (the quotient has
/// at most 2n bits because c < b).
inline FixedPoint fp_amplitude_ratio(std::uint64_t c_num, std::uint64_t b_num,
                                     int n) {
  if (n < 1 || n > 60) {
    throw std::domain_error("fp_amplitude_ratio: n must be in [1, 60]");
  }
  if (b_num == 0 || c_num == 0 || c_num >= b_num) {
    throw std::domain_error(
        "fp_amplitude_ratio: requires 0 < c < b; the c=0 and c=b cases "
        "belong to the special-case flags");
  }
  uint128 rem = c_num;
  uint128 quot = 0;
  for (int i = 0; i < 2 * n; ++i) {
    rem <<= 1;
    quot <<= 1;
    if (rem >= b_num) {
      rem -= b_num;
      quot += 1;
    }
  }
  const uint128 s = isqrt_u128(quot);
  return FixedPoint{static_cast<std::int64_t>(s), n,
                    FixedPoint::Range::UnitInterval};
}

/// arccos of a unit-interval fixed-point value, rounded to the 2^-n grid.
///
/// Returns the largest k such that cos(k * 2^-n) >= a, found by bisection
/// over the monotone cosine. This makes the result exactly non-increasing in
/// a (set inclusion of the searched predicate) and places it within one grid
/// step below arccos(a), well inside the 2 * 2^-n contract. Comparisons are
/// carried in long double, leaving at least 8 guard bits for n <= 56.
inline FixedPoint fp_arccos(const FixedPoint& a, int n) {
  if (a.range != FixedPoint::Range::UnitInterval) {
    throw std::domain_error("fp_arccos: input must be a unit-interval value");
  }
  if (n < 1 || n > 56 || a.frac_bits < 0 || a.frac_bits > 62) {
    throw std::domain_error("fp_arccos: precision out of supported range");
  }
  const std::int64_t one = std::int64_t{1} << a.frac_bits;
  if (a.value < 0 || a.value > one) {
    throw std::domain_error("fp_arccos: a outside [0, 1]");
  }
  const long double av = a.to_long_double();
  const long double grid = ldexpl(1.0L, -n);
  const long double half_pi = 1.57079632679489661923L;
  if (a.value == one) {
    return FixedPoint{0, n, FixedPoint::Range::Angle};
  }
  std::int64_t lo = 0;  // cos(lo * grid) >= a holds
  std::int64_t hi =
      static_cast<std::int64_t>(floorl(half_pi / grid)) + 1;  // violates
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (cosl(static_cast<long double>(mid) * grid) >= av) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return FixedPoint{lo, n, FixedPoint::Range::Angle};
}

}  // namespace qwalk

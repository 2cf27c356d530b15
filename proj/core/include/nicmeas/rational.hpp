#pragma once

#include <boost/rational.hpp>
#include <stdexcept>
#include <string>

namespace nicmeas {

// Exact rational arithmetic for measures. Every measure in scope is a dyadic
// rational with a small denominator, so 64-bit components never overflow.
using Rat = boost::rational<long long>;

// Lowest-terms "p/q" form used on every wire format; never a float.
inline std::string rat_to_string(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "p/q" or a bare integer "p".
Rat rat_from_string(const std::string& s);

// 2^-n, exactly.
inline Rat pow2_inv(int n) {
  if (n < 0 || n > 62) throw std::invalid_argument("pow2_inv: exponent out of range: " + std::to_string(n));
  return Rat(1, 1LL << n);
}

}  // namespace nicmeas

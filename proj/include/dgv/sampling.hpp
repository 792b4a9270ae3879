#ifndef DGV_SAMPLING_HPP
#define DGV_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "dgv/rational.hpp"

namespace dgv {

// Deterministic stream of small exact rationals.  Identical (seed,
// draw-order) pairs reproduce identical samples on every platform
// (mt19937_64 is fully specified by the standard).
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational next() {
    long num = static_cast<long>(rng_() % 19ull) - 9;  // -9..9
    unsigned long den = 1ul + rng_() % 3ull;           // 1..3
    return Rational(num, den);
  }

  // Nonzero variant for places where a zero coordinate is degenerate.
  Rational next_nonzero() {
    for (;;) {
      Rational r = next();
      if (!r.is_zero()) return r;
    }
  }

  std::vector<Rational> tuple(int n) {
    std::vector<Rational> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) v.push_back(next());
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace dgv

#endif

#pragma once

// Shared helpers for the test suites: seeded random exact inputs.

#include "hompot/rational.hpp"

#include <random>

namespace hompot::testing {

inline Rational random_rational(std::mt19937& rng, int max_num = 9, int max_den = 5) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  return make_rational(num(rng), den(rng));
}

inline Rational random_nonzero_rational(std::mt19937& rng, int max_num = 9, int max_den = 5) {
  Rational r = 0;
  while (r == 0) r = random_rational(rng, max_num, max_den);
  return r;
}

inline GaussianRational random_gaussian(std::mt19937& rng, bool complex = true) {
  return {random_rational(rng), complex ? random_rational(rng) : Rational(0)};
}

}  // namespace hompot::testing

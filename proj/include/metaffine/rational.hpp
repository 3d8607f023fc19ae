#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace maf {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational &r) { return r.get_str(); }

inline double to_double(const Rational &r) { return r.get_d(); }

inline bool is_integer(const Rational &r) { return r.get_den() == 1; }

std::size_t hash_value(const Rational &r);

/// Exact square root of a non-negative rational when it is a perfect square.
bool exact_sqrt(const Rational &r, Rational &out);

/// r^k for integer k; throws DomainError for 0^k with k < 0.
Rational rational_pow(const Rational &r, long k);

} // namespace maf

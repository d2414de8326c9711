#pragma once

// Exact rational arithmetic used throughout the workbench.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ppcf {

using Rational = mpq_class;
using Natural = mpz_class;

/// Parses `p/q` or a plain integer. The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::size_t slash = text.find('/');
  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits_only(num) || !digits_only(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  Rational r;
  r.get_num() = Natural(std::string(num));
  r.get_den() = Natural(std::string(den));
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

/// Always `p/q`, even for integers ("1/1", "0/1").
inline std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::size_t hash_natural(const Natural& z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
  std::size_t n = mpz_size(z.get_mpz_t());
  for (std::size_t i = 0; i < n; ++i)
    h = h * 1000003u ^ static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i)));
  return h;
}

inline std::size_t hash_rational(const Rational& q) {
  return hash_natural(q.get_num()) * 31u ^ hash_natural(q.get_den());
}

inline Natural factorial(unsigned long n) {
  Natural r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Conversion of an exact probability into the evaluator's scalar type.
template <class Scalar>
Scalar from_rational(const Rational& q);

template <>
inline Rational from_rational<Rational>(const Rational& q) {
  return q;
}

template <>
inline double from_rational<double>(const Rational& q) {
  return q.get_d();
}

inline Rational to_rational(const Rational& q) { return q; }
inline Rational to_rational(double d) { return Rational(d); }

inline std::string format_scalar(const Rational& q) { return format_rational(q); }
inline std::string format_scalar(double d) { return std::to_string(d); }

}  // namespace ppcf

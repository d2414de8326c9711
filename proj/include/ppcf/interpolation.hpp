#pragma once

// Exact multivariate polynomial interpolation on tensor grids.

#include "ppcf/error.hpp"
#include "ppcf/rational.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ppcf {

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class DegreeBoundExceeded : public Error {
 public:
  using Error::Error;
};

/// Polynomial in `vars` variables with every exponent ≤ `degree`.
/// Coefficient of x^e is stored at Σ_i e_i (degree+1)^i.
struct Polynomial {
  std::size_t vars = 0;
  std::size_t degree = 0;
  std::vector<Rational> coeffs;

  std::size_t index(const std::vector<unsigned>& exps) const {
    std::size_t idx = 0, stride = 1;
    for (std::size_t i = 0; i < vars; ++i) {
      if (exps[i] > degree) return coeffs.size();
      idx += exps[i] * stride;
      stride *= degree + 1;
    }
    return idx;
  }

  Rational coefficient(const std::vector<unsigned>& exps) const {
    std::size_t i = index(exps);
    return i < coeffs.size() ? coeffs[i] : Rational(0);
  }

  Rational operator()(const std::vector<Rational>& x) const {
    Rational total = 0;
    std::vector<unsigned> e(vars, 0);
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
      if (coeffs[idx] != 0) {
        Rational term = coeffs[idx];
        for (std::size_t i = 0; i < vars; ++i)
          for (unsigned p = 0; p < e[i]; ++p) term *= x[i];
        total += term;
      }
      for (std::size_t i = 0; i < vars; ++i) {
        if (++e[i] <= degree) break;
        e[i] = 0;
      }
    }
    return total;
  }
};

/// Inverse of the Vandermonde matrix V[i][j] = nodes[i]^j.
inline std::vector<std::vector<Rational>> vandermonde_inverse(const std::vector<Rational>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    Rational p = 1;
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = p;
      p *= nodes[i];
    }
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw SingularSystem("interpolation nodes are not distinct");
    std::swap(a[piv], a[col]);
    Rational inv = Rational(1) / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

/// The unique polynomial of per-variable degree ≤ nodes.size()-1 agreeing with
/// f on the grid nodes^vars.
inline Polynomial interpolate(std::size_t vars, const std::vector<Rational>& nodes,
                              const std::function<Rational(const std::vector<Rational>&)>& f) {
  Polynomial poly;
  poly.vars = vars;
  poly.degree = nodes.size() - 1;
  const std::size_t base = nodes.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars; ++i) total *= base;

  std::vector<Rational> values(total);
  std::vector<std::size_t> digit(vars, 0);
  std::vector<Rational> point(vars);
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < vars; ++i) point[i] = nodes[digit[i]];
    values[idx] = f(point);
    for (std::size_t i = 0; i < vars; ++i) {
      if (++digit[i] < base) break;
      digit[i] = 0;
    }
  }

  // Solve one axis at a time: along axis i, values = V · coeffs.
  auto inv = vandermonde_inverse(nodes);
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < vars; ++axis) {
    std::vector<Rational> next(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t d = (idx / stride) % base;
      std::size_t row0 = idx - d * stride;
      Rational s = 0;
      for (std::size_t j = 0; j < base; ++j) s += inv[d][j] * values[row0 + j * stride];
      next[idx] = s;
    }
    values = std::move(next);
    stride *= base;
  }
  poly.coeffs = std::move(values);
  return poly;
}

}  // namespace ppcf

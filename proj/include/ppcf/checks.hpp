#pragma once

// Cross-checks between the operational and denotational semantics.

#include "ppcf/denot.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/stdlib.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppcf {

namespace detail {

inline Rational max_abs_delta(const GroundVec<Rational>& a, const GroundVec<Rational>& b) {
  Rational m = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    Rational d = (i < a.size() ? a[i] : Rational(0)) - (i < b.size() ? b[i] : Rational(0));
    if (d < 0) d = -d;
    if (d > m) m = d;
  }
  return m;
}

}  // namespace detail

struct InvarianceReport {
  GroundVec<Rational> before;  // [[M]]
  GroundVec<Rational> after;   // Σ Red(M,M')·[[M']]
  Rational discrepancy = 0;
  bool holds() const { return discrepancy == 0; }
};

inline InvarianceReport check_invariance(const Term& m, const EvalConfig& cfg) {
  InvarianceReport r;
  r.before = ground_dist<Rational>(m, cfg);
  if (is_weak_normal(m)) {
    r.after = r.before;
    return r;
  }
  r.after.assign(cfg.nat_trunc, Rational(0));
  for (const auto& b : step(m)) {
    auto d = ground_dist<Rational>(b.target, cfg);
    for (std::size_t i = 0; i < d.size(); ++i) r.after[i] += b.prob * d[i];
  }
  r.discrepancy = detail::max_abs_delta(r.before, r.after);
  return r;
}

/// Names accepted by closed_form_check.
inline const std::vector<std::string>& closed_form_names() {
  static const std::vector<std::string> names{"pred",  "add",     "exp",  "shift", "cmp",
                                              "probe", "pprod",   "pchoose", "unif", "ran"};
  return names;
}

struct ClosedFormCase {
  std::vector<GroundVec<Rational>> args;
  GroundVec<Rational> evaluated;
  GroundVec<Rational> expected;
  bool ok() const { return evaluated == expected; }
};

struct ClosedFormReport {
  std::string name;
  std::vector<ClosedFormCase> cases;
  std::size_t mismatches() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.ok(); }));
  }
};

namespace detail {

inline std::size_t closed_form_arity(const std::string& name, std::size_t k) {
  if (name == "add" || name == "cmp") return 2;
  if (name == "pprod") return k;
  if (name == "pchoose") return k + 1;
  if (name == "ran") return 1;
  return 1;
}

// The displayed formula, restricted to {0..N-1}.
inline GroundVec<Rational> closed_form(const std::string& name, std::size_t k, const std::vector<GroundVec<Rational>>& a,
                                       std::size_t n) {
  GroundVec<Rational> out(n, Rational(0));
  auto put = [&](std::size_t i, const Rational& x) {
    if (i < n) out[i] += x;
  };
  const auto& u = a[0];
  if (name == "pred") {
    put(0, u[0]);
    for (std::size_t i = 0; i + 1 < n; ++i) put(i, u[i + 1]);
  } else if (name == "add") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; i + j < n; ++j) put(i + j, u[i] * a[1][j]);
  } else if (name == "exp") {
    for (std::size_t i = 0; i < n && i < 63; ++i) put(std::size_t{1} << i, u[i]);
  } else if (name == "shift") {
    for (std::size_t i = 0; i < n; ++i) put(i + k, u[i]);
  } else if (name == "cmp") {
    // x = 0 answers without looking at y; otherwise both are compared.
    put(0, u[0]);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) put(i <= j ? 0 : 1, u[i] * a[1][j]);
  } else if (name == "probe") {
    put(0, k < n ? u[k] : Rational(0));
  } else if (name == "pprod") {
    Rational p = 1;
    for (std::size_t i = 0; i < k; ++i) p *= a[i][0];
    put(0, p);
  } else if (name == "pchoose") {
    for (std::size_t i = 0; i < k && i < n; ++i)
      for (std::size_t m = 0; m < n; ++m) put(m, u[i] * a[i + 1][m]);
  } else if (name == "unif") {
    for (std::size_t m = 0; m < n; ++m) {
      Rational w = u[m] / Rational(static_cast<unsigned long>(m + 1));
      for (std::size_t i = 0; i <= m; ++i) put(i, w);
    }
  } else if (name == "ran") {
    for (std::size_t i = 0; i < n; ++i) put(i, u[i]);
  } else {
    throw std::invalid_argument("no closed form for '" + name + "'");
  }
  return out;
}

inline Term closed_form_term(const std::string& name, std::size_t k, const std::vector<GroundVec<Rational>>& a) {
  if (name == "pred") return stdlib::pred();
  if (name == "add") return stdlib::add();
  if (name == "exp") return stdlib::exp_();
  if (name == "shift") return stdlib::shift(k);
  if (name == "cmp") return stdlib::cmp();
  if (name == "probe") return stdlib::probe(k);
  if (name == "pprod") return stdlib::pprod(k);
  if (name == "pchoose") return stdlib::pchoose(k, Type::nat());
  if (name == "unif") return stdlib::unif();
  if (name == "ran") {
    std::vector<Rational> ps(a[0].begin(), a[0].end());
    while (!ps.empty() && ps.back() == 0) ps.pop_back();
    return stdlib::ran(ps);
  }
  throw std::invalid_argument("no closed form for '" + name + "'");
}

}  // namespace detail

/// Evaluates the named program on each sample (a list of argument vectors;
/// for `ran` the single vector is the probability list) and compares with
/// its closed form. `k` is the parameter of shift, probe, pprod and pchoose.
inline ClosedFormReport closed_form_check(const std::string& name, const std::vector<std::vector<GroundVec<Rational>>>& samples,
                                          const EvalConfig& cfg, std::size_t k = 0) {
  ClosedFormReport r{name, {}};
  const std::size_t n = cfg.nat_trunc;
  const std::size_t arity = detail::closed_form_arity(name, k);
  for (const auto& s : samples) {
    if (s.size() != arity)
      throw std::invalid_argument(name + " expects " + std::to_string(arity) + " argument vectors");
    std::vector<GroundVec<Rational>> args;
    for (auto v : s) {
      v.resize(n, Rational(0));
      args.push_back(std::move(v));
    }
    Evaluator<Rational> ev(cfg);
    SemValue<Rational> val = ev.eval(detail::closed_form_term(name, k, args));
    if (name != "ran")
      for (const auto& v : args) val = val(ev.ground_value(v));
    r.cases.push_back({args, ev.ground(val), detail::closed_form(name, k, args, n)});
  }
  return r;
}

}  // namespace ppcf

#pragma once

// Web points, testing terms and separation experiments.

#include "ppcf/context.hpp"
#include "ppcf/denot.hpp"
#include "ppcf/interpolation.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/pcs.hpp"
#include "ppcf/stdlib.hpp"
#include "ppcf/typecheck.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ppcf {

/// Element of the web of a type: n for nat, ([b1..bk], c) for arrows.
class WebElem {
 public:
  WebElem() : WebElem(nat(0)) {}

  static WebElem nat(std::uint64_t n) {
    WebElem w(nullptr);
    auto node = std::make_shared<Node>();
    node->value = n;
    w.node_ = std::move(node);
    return w;
  }
  static WebElem arrow(std::vector<WebElem> args, WebElem result) {
    std::sort(args.begin(), args.end());
    WebElem w(nullptr);
    auto node = std::make_shared<Node>();
    node->arrow = true;
    node->args = std::move(args);
    node->result = std::make_shared<WebElem>(std::move(result));
    w.node_ = std::move(node);
    return w;
  }

  bool is_nat() const { return !node_->arrow; }
  bool is_arrow() const { return node_->arrow; }
  std::uint64_t value() const { return node_->value; }
  const std::vector<WebElem>& args() const { return node_->args; }
  const WebElem& result() const { return *node_->result; }

  /// Arrow nodes, counting nested ones.
  std::size_t arrow_count() const {
    if (is_nat()) return 0;
    std::size_t n = 1 + result().arrow_count();
    for (const auto& b : args()) n += b.arrow_count();
    return n;
  }

  /// Nodes of the tree: arrow nodes plus nat leaves.
  std::size_t node_size() const {
    if (is_nat()) return 1;
    std::size_t n = 1 + result().node_size();
    for (const auto& b : args()) n += b.node_size();
    return n;
  }

  std::string to_string() const {
    if (is_nat()) return std::to_string(value());
    std::string s = "([";
    for (std::size_t i = 0; i < args().size(); ++i) s += (i ? "," : "") + args()[i].to_string();
    return s + "]," + result().to_string() + ")";
  }

  friend bool operator<(const WebElem& a, const WebElem& b) {
    if (a.is_nat() != b.is_nat()) return a.is_nat();
    if (a.is_nat()) return a.value() < b.value();
    if (a.args() != b.args()) return a.args() < b.args();
    return a.result() < b.result();
  }
  friend bool operator==(const WebElem& a, const WebElem& b) { return !(a < b) && !(b < a); }
  friend bool operator!=(const WebElem& a, const WebElem& b) { return !(a == b); }

 private:
  struct Node {
    bool arrow = false;
    std::uint64_t value = 0;
    std::vector<WebElem> args;
    std::shared_ptr<WebElem> result;
  };
  explicit WebElem(std::nullptr_t) {}
  std::shared_ptr<const Node> node_;
};

/// Parses `n` or `([b1,...,bk],c)`.
inline WebElem parse_web_elem(const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&]() -> WebElem { throw ParseError("malformed web point '" + text + "'", 1, pos + 1); };
  std::function<WebElem()> elem = [&]() -> WebElem {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::uint64_t n = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) n = n * 10 + (text[pos++] - '0');
      return WebElem::nat(n);
    }
    if (text.compare(pos, 2, "([") != 0) return fail();
    pos += 2;
    std::vector<WebElem> args;
    auto skip = [&] { while (pos < text.size() && text[pos] == ' ') ++pos; };
    skip();
    if (pos < text.size() && text[pos] != ']') {
      while (true) {
        args.push_back(elem());
        skip();
        if (pos >= text.size() || text[pos] != ',') break;
        ++pos;
      }
    }
    if (pos < text.size() && text[pos] != ']') return fail();
    if (pos >= text.size()) return fail();
    ++pos;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size() || text[pos] != ',') return fail();
    ++pos;
    WebElem c = elem();
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size() || text[pos] != ')') return fail();
    ++pos;
    return WebElem::arrow(std::move(args), std::move(c));
  };
  WebElem w = elem();
  if (pos != text.size()) fail();
  return w;
}

inline bool in_web(const WebElem& a, const Type& sigma) {
  if (sigma.is_nat()) return a.is_nat();
  if (!a.is_arrow()) return false;
  for (const auto& b : a.args())
    if (!in_web(b, sigma.domain())) return false;
  return in_web(a.result(), sigma.codomain());
}

struct TestArity {
  std::size_t plen = 0;
  std::size_t nlen = 0;
};

/// P(n) = N(n) = 0; P(a) = P(c) + Σ N(b_i); N(a) = N(c) + k + Σ P(b_i).
inline TestArity arity(const WebElem& a) {
  if (a.is_nat()) return {};
  TestArity c = arity(a.result());
  TestArity r{c.plen, c.nlen + a.args().size()};
  for (const auto& b : a.args()) {
    TestArity ab = arity(b);
    r.plen += ab.nlen;
    r.nlen += ab.plen;
  }
  return r;
}

namespace detail {

inline Term shifted(const Term& xi, std::size_t k) {
  return k == 0 ? xi : Term::app(stdlib::unshift(k), xi);
}

inline void require_web(const WebElem& a, const Type& sigma) {
  if (!in_web(a, sigma)) throw TypeError("web point " + a.to_string() + " is not in the web of " + sigma.to_string());
}

}  // namespace detail

inline Term ntest(const WebElem& a, const Type& sigma);

/// ⊢ ptest(a) : nat -> σ
inline Term ptest(const WebElem& a, const Type& sigma) {
  detail::require_web(a, sigma);
  const Type nat = Type::nat();
  const Term xi = Term::var("xi");
  if (sigma.is_nat()) return lam("xi", nat, Term::num(a.value()));
  const Type& phi = sigma.domain();
  const Type& psi = sigma.codomain();
  const auto& bs = a.args();
  std::vector<Term> tests;
  std::size_t offset = 0;
  for (const auto& b : bs) {
    tests.push_back(apps(ntest(b, phi), {detail::shifted(xi, offset), Term::var("x")}));
    offset += arity(b).nlen;
  }
  Term cond = ifz(apps(stdlib::pprod(bs.size()), tests), Term::app(ptest(a.result(), psi), detail::shifted(xi, offset)),
                  "z", stdlib::omega(psi));
  return lam("xi", nat, lam("x", phi, cond));
}

/// ⊢ ntest(a) : nat -> σ -> nat
inline Term ntest(const WebElem& a, const Type& sigma) {
  detail::require_web(a, sigma);
  const Type nat = Type::nat();
  const Term xi = Term::var("xi");
  if (sigma.is_nat()) return lam("xi", nat, stdlib::probe(a.value()));
  const Type& phi = sigma.domain();
  const Type& psi = sigma.codomain();
  const auto& bs = a.args();
  const std::size_t k = bs.size();
  std::vector<Term> choices;
  std::size_t offset = k;
  for (const auto& b : bs) {
    choices.push_back(Term::app(ptest(b, phi), detail::shifted(xi, offset)));
    offset += arity(b).plen;
  }
  Term arg = apps(Term::app(stdlib::pchoose(k, phi), xi), choices);
  Term body = apps(ntest(a.result(), psi), {detail::shifted(xi, offset), Term::app(Term::var("f"), arg)});
  return lam("xi", nat, lam("f", sigma, body));
}

/// φ_w(u) = Fun[[ntest a]](u)(w)_0 for w = [[M]], evaluated with one shared
/// evaluator so repeated points reuse memoised calls.
template <class S = Rational>
class Phi {
 public:
  Phi(const WebElem& a, const Type& sigma, const Term& m, const EvalConfig& cfg) : ev_(cfg) {
    test_ = ev_.eval(ntest(a, sigma));
    w_ = ev_.eval(m);
  }

  S operator()(const std::vector<S>& u) const {
    SemValue<S> r = test_(ev_.ground_value(u))(w_);
    return ev_.ground(r)[0];
  }

 private:
  Evaluator<S> ev_;
  SemValue<S> test_;
  SemValue<S> w_;
};

template <class S = Rational>
S phi(const WebElem& a, const Type& sigma, const Term& m, const std::vector<S>& u, const EvalConfig& cfg) {
  return Phi<S>(a, sigma, m, cfg)(u);
}

struct InterpolationConfig {
  std::size_t degree = 2;        // per-variable degree bound D
  std::size_t residual_points = 3;
};

namespace detail {

// Grid coordinates j/((D+2)·m), j = 1..D+1: distinct, positive, and any m of
// them sum to less than 1.
inline std::vector<Rational> grid_nodes(std::size_t degree, std::size_t vars) {
  std::vector<Rational> nodes;
  for (std::size_t j = 1; j <= degree + 1; ++j) {
    Rational q(static_cast<unsigned long>(j), static_cast<unsigned long>((degree + 2) * std::max<std::size_t>(vars, 1)));
    q.canonicalize();
    nodes.push_back(q);
  }
  return nodes;
}

inline std::vector<Rational> residual_point(std::size_t degree, std::size_t vars, std::size_t seed) {
  std::vector<Rational> p(vars);
  for (std::size_t i = 0; i < vars; ++i) {
    Rational q(static_cast<unsigned long>(2 * ((seed + i) % (degree + 1)) + 3),
               static_cast<unsigned long>(2 * (degree + 2) * std::max<std::size_t>(vars, 1) + 1));
    q.canonicalize();
    p[i] = q;
  }
  return p;
}

inline Polynomial checked_interpolation(std::size_t vars, const InterpolationConfig& icfg,
                                        const std::function<Rational(const std::vector<Rational>&)>& f) {
  Polynomial poly = interpolate(vars, grid_nodes(icfg.degree, vars), f);
  for (std::size_t s = 0; s < icfg.residual_points && vars > 0; ++s) {
    auto x = residual_point(icfg.degree, vars, s);
    if (poly(x) != f(x))
      throw DegreeBoundExceeded("function is not a polynomial of degree " + std::to_string(icfg.degree) +
                                " per variable on the sampled region");
  }
  return poly;
}

// Splits a first-order type nat^k -> nat into its argument count.
inline std::size_t first_order_arity(const Type& sigma) {
  std::size_t k = 0;
  Type t = sigma;
  while (t.is_arrow()) {
    if (!t.domain().is_nat()) throw TypeError("coefficient extraction needs a first-order type, got " + sigma.to_string());
    t = t.codomain();
    ++k;
  }
  return k;
}

}  // namespace detail

/// w_a for w = [[M]], M : nat^k -> nat: the coefficient of Π_j u_j^{μ_j} in
/// [[M]](u_1,..,u_k)_c where a = ([μ_1], ([μ_2], ... c)).
inline Rational extract_coefficient(const Term& m, const Type& sigma, const WebElem& a, const EvalConfig& cfg,
                                    const InterpolationConfig& icfg = {}) {
  const std::size_t k = detail::first_order_arity(sigma);
  detail::require_web(a, sigma);
  std::vector<pcs::Multiset<std::uint64_t>> mus;
  WebElem cur = a;
  for (std::size_t j = 0; j < k; ++j) {
    pcs::Multiset<std::uint64_t> mu;
    for (const auto& b : cur.args()) mu.add(b.value());
    mus.push_back(mu);
    cur = cur.result();
  }
  const std::uint64_t c = cur.value();
  if (c >= cfg.nat_trunc) return 0;

  // One variable per (argument, support point).
  std::vector<std::pair<std::size_t, std::uint64_t>> vars;
  std::vector<unsigned> target;
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& [b, mult] : mus[j].counts()) {
      if (mult > icfg.degree) throw DegreeBoundExceeded("web point multiplicity above the interpolation degree");
      if (b >= cfg.nat_trunc) return 0;
      vars.emplace_back(j, b);
      target.push_back(mult);
    }

  Evaluator<Rational> ev(cfg);
  SemValue<Rational> w = ev.eval(m);
  auto f = [&](const std::vector<Rational>& x) {
    std::vector<GroundVec<Rational>> args(k, GroundVec<Rational>(cfg.nat_trunc, Rational(0)));
    for (std::size_t i = 0; i < vars.size(); ++i) args[vars[i].first][vars[i].second] = x[i];
    SemValue<Rational> r = w;
    for (auto& g : args) r = r(SemValue<Rational>::ground(std::move(g)));
    return ev.ground(r)[c];
  };
  return detail::checked_interpolation(vars.size(), icfg, f).coefficient(target);
}

/// μ!-type factor by which the coefficient of u_0…u_{N(a)-1} in φ_w exceeds
/// w_a when a multiset of a contains repetitions (1 when it has none).
inline Natural one_coef_factor(const WebElem& a, bool negative = true) {
  if (a.is_nat()) return 1;
  Natural f = one_coef_factor(a.result(), negative);
  for (const auto& b : a.args()) f *= one_coef_factor(b, !negative);
  if (negative) {
    pcs::Multiset<WebElem> mu;
    for (const auto& b : a.args()) mu.add(b);
    f *= pcs::multiset_factorial(mu);
  }
  return f;
}

struct OneCoefReport {
  Rational phi_coefficient;  // coefficient of u_0…u_{N(a)-1} in φ_{[[M]]}
  Rational w_a;              // extract_coefficient
  Natural factor;            // one_coef_factor(a)
  bool literal() const { return phi_coefficient == w_a; }
  bool corrected() const { return phi_coefficient == Rational(factor) * w_a; }
};

inline OneCoefReport check_one_coef(const WebElem& a, const Type& sigma, const Term& m, const EvalConfig& cfg,
                                    const InterpolationConfig& icfg = {}) {
  const std::size_t n = arity(a).nlen;
  Phi<Rational> ph(a, sigma, m, cfg);
  auto f = [&](const std::vector<Rational>& x) {
    std::vector<Rational> u(cfg.nat_trunc, Rational(0));
    for (std::size_t i = 0; i < x.size() && i < u.size(); ++i) u[i] = x[i];
    return ph(u);
  };
  OneCoefReport r;
  r.phi_coefficient = detail::checked_interpolation(n, icfg, f).coefficient(std::vector<unsigned>(n, 1));
  r.w_a = extract_coefficient(m, sigma, a, cfg, icfg);
  r.factor = one_coef_factor(a);
  return r;
}

struct SeparationResult {
  WebElem point;
  std::vector<Rational> q;
  std::pair<Rational, Rational> denot;  // φ values at q for M and M'
  ObservationContext context;
  std::optional<std::pair<Rational, Rational>> operational;
  std::size_t grid_denom = 0;
};

/// C = ntest_a (ran q) [·]
inline ObservationContext separating_context(const WebElem& a, const Type& sigma, const std::vector<Rational>& q) {
  Term c = apps(ntest(a, sigma), {stdlib::ran(q), Term::hole({}, sigma)});
  return ObservationContext(c, {}, sigma);
}

/// Probability of reaching 0 within k steps for C[M] and C[M'].
inline std::pair<Rational, Rational> obs_distinguish(const Term& m, const Term& m2, const ObservationContext& c,
                                                     std::size_t k) {
  return {reduce_prob(fill(c, m), Term::num(0), k), reduce_prob(fill(c, m2), Term::num(0), k)};
}

/// Lexicographically least q ∈ {0, 1/D, .., 1}^{N(a)} with Σq ≤ 1 and
/// φ_M(q) ≠ φ_M'(q).
inline std::optional<SeparationResult> separate(const Term& m, const Term& m2, const Type& sigma, const WebElem& a,
                                                const EvalConfig& cfg, std::size_t grid_denom) {
  if (grid_denom == 0) throw std::invalid_argument("grid denominator must be positive");
  detail::require_web(a, sigma);
  const std::size_t n = arity(a).nlen;
  Phi<Rational> p1(a, sigma, m, cfg), p2(a, sigma, m2, cfg);
  std::vector<std::size_t> digits(n, 0);
  while (true) {
    std::size_t sum = 0;
    for (auto d : digits) sum += d;
    if (sum <= grid_denom) {
      std::vector<Rational> q(n), u(cfg.nat_trunc, Rational(0));
      for (std::size_t i = 0; i < n; ++i) {
        q[i] = Rational(static_cast<unsigned long>(digits[i]), static_cast<unsigned long>(grid_denom));
        q[i].canonicalize();
        if (i < u.size()) u[i] = q[i];
      }
      Rational v1 = p1(u), v2 = p2(u);
      if (v1 != v2)
        return SeparationResult{a, q, {v1, v2}, separating_context(a, sigma, q), std::nullopt, grid_denom};
    }
    // Lexicographic successor, most significant digit first.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (digits[i] < grid_denom) {
        ++digits[i];
        std::fill(digits.begin() + static_cast<std::ptrdiff_t>(i) + 1, digits.end(), 0);
        break;
      }
      if (i == 0) return std::nullopt;
    }
    if (n == 0) return std::nullopt;
  }
}

/// Tries D, 2D, 4D, ... up to `max_denom`.
inline std::optional<SeparationResult> separate_refining(const Term& m, const Term& m2, const Type& sigma,
                                                         const WebElem& a, const EvalConfig& cfg,
                                                         std::size_t grid_denom = 4, std::size_t max_denom = 16) {
  for (std::size_t d = grid_denom; d <= max_denom; d *= 2)
    if (auto r = separate(m, m2, sigma, a, cfg, d)) return r;
  return std::nullopt;
}

/// Web points of σ whose numerals, multiset sizes and number of arrow nodes
/// are all ≤ size, in increasing order.
inline std::vector<WebElem> enumerate_web(const Type& sigma, std::size_t size) {
  std::vector<WebElem> out;
  if (sigma.is_nat()) {
    for (std::uint64_t n = 0; n <= size; ++n) out.push_back(WebElem::nat(n));
    return out;
  }
  if (size == 0) return out;
  auto doms = enumerate_web(sigma.domain(), size);
  auto cods = enumerate_web(sigma.codomain(), size);
  std::vector<std::size_t> dom_arrows;
  for (const auto& d : doms) dom_arrows.push_back(d.arrow_count());
  for (unsigned card = 0; card <= size; ++card) {
    for (const auto& mu : pcs::multisets_of_degree(doms, card)) {
      std::size_t arrows = 1;
      for (const auto& b : mu.elements()) arrows += b.arrow_count();
      if (arrows > size) continue;
      for (const auto& c : cods)
        if (arrows + c.arrow_count() <= size) out.push_back(WebElem::arrow(mu.elements(), c));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ppcf

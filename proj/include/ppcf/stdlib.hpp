#pragma once

// The example programs: arithmetic, tests, random generators and the
// building blocks of testing terms.

#include "ppcf/rational.hpp"
#include "ppcf/term.hpp"
#include "ppcf/type.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ppcf::stdlib {

namespace detail {
inline Term v(const char* name) { return Term::var(name); }
inline const Type nat = Type::nat();
inline const Type nat2nat = Type::arrow(Type::nat(), Type::nat());
}  // namespace detail

/// Ω_σ = fix (λx:σ. x)
inline Term omega(const Type& sigma = Type::nat()) { return Term::fix(lam("x", sigma, Term::var("x"))); }

/// λx. if x then 0 else [z] z
inline Term pred() {
  using namespace detail;
  return lam("x", nat, ifz(v("x"), Term::num(0), "z", v("z")));
}

/// λx. fix (λa:nat->nat. λy. if y then x else [z] succ (a z))
inline Term add() {
  using namespace detail;
  Term inner = lam("y", nat, ifz(v("y"), v("x"), "z", Term::succ(Term::app(v("a"), v("z")))));
  return lam("x", nat, Term::fix(lam("a", nat2nat, inner)));
}

inline Term shift(std::uint64_t k) { return Term::app(add(), Term::num(k)); }

/// fix (λe. λx. if x then 1 else [z] add (e z) (e z))
inline Term exp_() {
  using namespace detail;
  Term ez = Term::app(v("e"), v("z"));
  return Term::fix(lam("e", nat2nat, lam("x", nat, ifz(v("x"), Term::num(1), "z", apps(add(), {ez, ez})))));
}

/// Reduces to 0 when x ≤ y and to 1 otherwise.
inline Term cmp() {
  using namespace detail;
  Term body = ifz(v("x"), Term::num(0), "z", ifz(v("y"), Term::num(1), "z'", apps(v("c"), {v("z"), v("z'")})));
  return Term::fix(lam("c", nat_power(2), lam("x", nat, lam("y", nat, body))));
}

/// probe_k M reduces to 0 with the probability that M reduces to k.
inline Term probe(std::uint64_t k) {
  using namespace detail;
  Term t = lam("x", nat, ifz(v("x"), Term::num(0), "z", omega()));
  for (std::uint64_t i = 0; i < k; ++i) t = lam("x", nat, ifz(v("x"), omega(), "z", Term::app(t, v("z"))));
  return t;
}

/// pprod_k M1 .. Mk reduces to 0 with probability the product of the Mi reducing to 0.
inline Term pprod(std::size_t k) {
  using namespace detail;
  Term t = Term::num(0);
  for (std::size_t i = 0; i < k; ++i) t = lam("x", nat, ifz(v("x"), t, "z", omega(nat_power(i))));
  return t;
}

/// pchoose_k ξ N1 .. Nk reduces to N_{i+1} with the probability that ξ reduces to i.
inline Term pchoose(std::size_t k, const Type& sigma) {
  using namespace detail;
  Term t = lam("xi", nat, omega(sigma));
  for (std::size_t i = 1; i <= k; ++i) {
    std::vector<Term> rest;
    for (std::size_t j = 2; j <= i; ++j) rest.push_back(v(("x" + std::to_string(j)).c_str()));
    Term body = ifz(v("xi"), v("x1"), "zeta", apps(Term::app(t, v("zeta")), rest));
    for (std::size_t j = i; j >= 1; --j) body = lam("x" + std::to_string(j), sigma, body);
    t = lam("xi", nat, body);
  }
  return t;
}

/// `let x = M in N`
inline Term let_(const std::string& x, const Term& m, const Term& n) { return let_in(x, m, n); }

/// Uniform on 0 .. 2^n - 1.
inline Term unift() {
  using namespace detail;
  Term uz = Term::app(v("u"), v("z"));
  Term body = ifz(v("x"), Term::num(0), "z",
                  ifz(Term::coin(Rational(1, 2)), uz, "z'", apps(add(), {Term::app(exp_(), v("z")), uz})));
  return Term::fix(lam("u", nat2nat, lam("x", nat, body)));
}

/// Uniform on 0 .. n, by retrying unift until the draw is ≤ n.
inline Term unif() {
  using namespace detail;
  Term retry = let_("z", Term::app(unift(), v("y")), ifz(apps(cmp(), {v("z"), v("y")}), v("z"), "w", v("u")));
  return lam("x", nat, let_("y", v("x"), Term::fix(lam("u", nat, retry))));
}

/// Reduces to i with probability ps[i]; the missing mass diverges.
inline Term ran(const std::vector<Rational>& ps) {
  Rational total = 0;
  for (const auto& p : ps) {
    if (p < 0 || p > 1) throw std::invalid_argument("ran: probability outside [0,1]");
    total += p;
  }
  if (total > 1) throw std::invalid_argument("ran: probabilities sum above 1");
  if (ps.empty()) return omega();
  if (ps[0] == 1) return Term::num(0);
  if (ps.size() == 1) return ifz(Term::coin(ps[0]), Term::num(0), "z", omega());
  std::vector<Rational> rest;
  for (std::size_t i = 1; i < ps.size(); ++i) rest.push_back(ps[i] / (Rational(1) - ps[0]));
  return ifz(Term::coin(ps[0]), Term::num(0), "z", Term::succ(ran(rest)));
}

/// λf. λx. fix (λr:nat. let y = unif x in if f y then y else [z] r)
inline Term las_vegas() {
  using namespace detail;
  Term body = let_("y", Term::app(unif(), v("x")), ifz(Term::app(v("f"), v("y")), v("y"), "z", v("r")));
  return lam("f", nat2nat, lam("x", nat, Term::fix(lam("r", nat, body))));
}

/// unshift_k u = Σ u_{n+k} e_n: the k lowest values diverge, the rest move down by k.
inline Term unshift(std::uint64_t k) {
  using namespace detail;
  Term t = lam("x", nat, v("x"));
  for (std::uint64_t i = 0; i < k; ++i) t = lam("x", nat, ifz(v("x"), omega(), "z", Term::app(t, v("z"))));
  return t;
}

/// A named library program with the parameters it was built from.
struct StdTerm {
  std::string name;
  std::vector<std::string> params;
  Term term;
};

}  // namespace ppcf::stdlib

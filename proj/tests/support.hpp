#pragma once

// Shared test helpers: a generator of well-typed closed terms and a named
// substitution oracle independent of the locally nameless implementation.

#include "ppcf/cli.hpp"
#include "ppcf/ppcf.hpp"

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace ppcf::testkit {

struct GenConfig {
  unsigned depth = 5;
  unsigned max_numeral = 8;
  bool allow_fix = true;
  bool allow_omega = false;
};

/// Random well-typed terms of type nat or nat -> nat. Recursion is always
/// bounded or coin-guarded so every generated term terminates with
/// probability 1 (unless omega is allowed).
class TermGen {
 public:
  explicit TermGen(std::uint64_t seed, GenConfig cfg = {}) : rng_(seed), cfg_(cfg) {}

  Term closed_nat() { return nat(cfg_.depth, {}); }
  Term closed_fun() { return fun(cfg_.depth, {}); }

 private:
  using Scope = std::vector<std::string>;  // nat variables in scope

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng_); }

  Rational prob() {
    static const Rational ps[] = {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3),
                                  Rational(1)};
    return ps[pick(6)];
  }

  std::string fresh(const Scope& s) { return "v" + std::to_string(s.size()); }

  Term leaf(const Scope& s) {
    switch (pick(s.empty() ? 2 : 4)) {
      case 0:
        return Term::num(pick(cfg_.max_numeral));
      case 1:
        return Term::coin(prob());
      default:
        return Term::var(s[pick(static_cast<unsigned>(s.size()))]);
    }
  }

  Term nat(unsigned d, const Scope& s) {
    if (d == 0) return leaf(s);
    switch (pick(cfg_.allow_omega ? 9 : 8)) {
      case 0:
        return leaf(s);
      case 1:
        return Term::succ(nat(d - 1, s));
      case 2:
      case 3: {
        Scope inner = s;
        std::string z = fresh(s);
        inner.push_back(z);
        return ifz(nat(d - 1, s), nat(d - 1, s), z, nat(d - 1, inner));
      }
      case 4:
        return Term::app(fun(d - 1, s), nat(d - 1, s));
      case 5: {
        Scope inner = s;
        std::string x = fresh(s);
        inner.push_back(x);
        return let_in(x, nat(d - 1, s), nat(d - 1, inner));
      }
      case 6:
        if (cfg_.allow_fix) {
          // Coin-guarded retry loop: fix r. if coin p then M else [w] r, p > 0.
          Scope inner = s;
          std::string r = "r" + std::to_string(s.size());
          Rational p = pick(2) ? Rational(1, 2) : Rational(1, 3);
          std::string w = fresh(s);
          return Term::fix(lam(r, Type::nat(), ifz(Term::coin(p), nat(d - 1, s), w, Term::var(r))));
        }
        return leaf(s);
      case 7:
        return Term::coin(prob());
      default:
        return stdlib::omega();
    }
  }

  Term fun(unsigned d, const Scope& s) {
    switch (d == 0 ? 0 : pick(cfg_.allow_fix ? 5 : 4)) {
      case 0:
        return stdlib::pred();
      case 1:
        return Term::app(stdlib::add(), nat(d - 1, s));
      case 2:
      case 3: {
        Scope inner = s;
        std::string x = fresh(s);
        inner.push_back(x);
        return lam(x, Type::nat(), nat(d - 1, inner));
      }
      default: {
        // Structural recursion: fix f. \x. if x then M else [z] succ (f z).
        Scope inner = s;
        std::string x = fresh(s);
        inner.push_back(x);
        std::string z = fresh(inner);
        std::string f = "f" + std::to_string(s.size());
        Term body = ifz(Term::var(x), nat(d - 1, s), z, Term::succ(Term::app(Term::var(f), Term::var(z))));
        return Term::fix(lam(f, Type::arrow(Type::nat(), Type::nat()), lam(x, Type::nat(), body)));
      }
    }
  }

  std::mt19937_64 rng_;
  GenConfig cfg_;
};

/// Named terms with explicit binder names, for the substitution oracle.
struct Named {
  Kind kind;
  std::uint64_t value = 0;
  Rational prob;
  std::string name;  // Var name or binder name
  Type type;
  std::vector<std::shared_ptr<Named>> kids;
};
using NamedPtr = std::shared_ptr<Named>;

inline NamedPtr to_named(const Term& t, std::vector<std::string>& scope, int& counter) {
  auto n = std::make_shared<Named>();
  n->kind = t.kind();
  switch (t.kind()) {
    case Kind::Num:
      n->value = t.numeral();
      break;
    case Kind::Coin:
      n->prob = t.probability();
      break;
    case Kind::Var:
      n->name = t.name();
      break;
    case Kind::Bound:
      n->kind = Kind::Var;
      n->name = scope[scope.size() - 1 - t.index()];
      break;
    case Kind::Succ:
    case Kind::Fix:
      n->kids.push_back(to_named(t.body(), scope, counter));
      break;
    case Kind::App:
      n->kids.push_back(to_named(t.fun(), scope, counter));
      n->kids.push_back(to_named(t.arg(), scope, counter));
      break;
    case Kind::Abs: {
      n->name = "b" + std::to_string(counter++);
      n->type = t.annotation();
      scope.push_back(n->name);
      n->kids.push_back(to_named(t.body(), scope, counter));
      scope.pop_back();
      break;
    }
    case Kind::If: {
      n->kids.push_back(to_named(t.scrutinee(), scope, counter));
      n->kids.push_back(to_named(t.zero_branch(), scope, counter));
      n->name = "b" + std::to_string(counter++);
      scope.push_back(n->name);
      n->kids.push_back(to_named(t.succ_branch(), scope, counter));
      scope.pop_back();
      break;
    }
    case Kind::Hole:
      throw std::logic_error("to_named: hole");
  }
  return n;
}

inline void named_free(const NamedPtr& n, std::set<std::string>& bound, std::set<std::string>& out) {
  if (n->kind == Kind::Var) {
    if (!bound.count(n->name)) out.insert(n->name);
    return;
  }
  if (n->kind == Kind::Abs) {
    bool added = bound.insert(n->name).second;
    named_free(n->kids[0], bound, out);
    if (added) bound.erase(n->name);
    return;
  }
  if (n->kind == Kind::If) {
    named_free(n->kids[0], bound, out);
    named_free(n->kids[1], bound, out);
    bool added = bound.insert(n->name).second;
    named_free(n->kids[2], bound, out);
    if (added) bound.erase(n->name);
    return;
  }
  for (const auto& k : n->kids) named_free(k, bound, out);
}

inline NamedPtr rename(const NamedPtr& n, const std::string& from, const std::string& to);

// Textbook capture-avoiding substitution m[v/x] with renaming on conflict.
inline NamedPtr named_subst(const NamedPtr& m, const NamedPtr& v, const std::string& x, int& counter) {
  if (m->kind == Kind::Var) return m->name == x ? v : m;
  auto out = std::make_shared<Named>(*m);
  std::set<std::string> b, fv;
  named_free(v, b, fv);
  auto binder = [&](std::size_t child) {
    if (m->name == x) return;  // shadowed
    NamedPtr body = m->kids[child];
    if (fv.count(m->name)) {
      std::string fresh = "c" + std::to_string(counter++);
      body = rename(body, m->name, fresh);
      out->name = fresh;
    }
    out->kids[child] = named_subst(body, v, x, counter);
  };
  if (m->kind == Kind::Abs) {
    binder(0);
  } else if (m->kind == Kind::If) {
    out->kids[0] = named_subst(m->kids[0], v, x, counter);
    out->kids[1] = named_subst(m->kids[1], v, x, counter);
    binder(2);
  } else {
    for (auto& k : out->kids) k = named_subst(k, v, x, counter);
  }
  return out;
}

inline NamedPtr rename(const NamedPtr& n, const std::string& from, const std::string& to) {
  int unused = 0;
  auto var = std::make_shared<Named>();
  var->kind = Kind::Var;
  var->name = to;
  return named_subst(n, var, from, unused);
}

inline Term from_named(const NamedPtr& n) {
  switch (n->kind) {
    case Kind::Num:
      return Term::num(n->value);
    case Kind::Coin:
      return Term::coin(n->prob);
    case Kind::Var:
      return Term::var(n->name);
    case Kind::Succ:
      return Term::succ(from_named(n->kids[0]));
    case Kind::Fix:
      return Term::fix(from_named(n->kids[0]));
    case Kind::App:
      return Term::app(from_named(n->kids[0]), from_named(n->kids[1]));
    case Kind::Abs:
      return lam(n->name, n->type, from_named(n->kids[0]));
    case Kind::If:
      return ifz(from_named(n->kids[0]), from_named(n->kids[1]), n->name, from_named(n->kids[2]));
    default:
      throw std::logic_error("from_named");
  }
}

/// m[v/x] computed on named syntax.
inline Term oracle_subst(const Term& m, const Term& v, const std::string& x) {
  int counter = 0;
  std::vector<std::string> scope;
  NamedPtr nm = to_named(m, scope, counter);
  NamedPtr nv = to_named(v, scope, counter);
  return from_named(named_subst(nm, nv, x, counter));
}

}  // namespace ppcf::testkit

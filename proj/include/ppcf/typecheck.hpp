#pragma once

#include "ppcf/error.hpp"
#include "ppcf/term.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ppcf {

namespace detail {

struct Binder {
  std::string hint;
  Type type;
};

class TypeChecker {
 public:
  explicit TypeChecker(const TypingContext& ctx) : ctx_(ctx) {}

  Type infer(const Term& m) {
    switch (m.kind()) {
      case Kind::Num:
      case Kind::Coin:
        return Type::nat();
      case Kind::Var: {
        auto t = ctx_.lookup(m.name());
        if (!t) throw TypeError("unbound variable '" + m.name() + "'");
        return *t;
      }
      case Kind::Bound:
        if (m.index() >= stack_.size()) throw TypeError("dangling bound variable #" + std::to_string(m.index()));
        return stack_[stack_.size() - 1 - m.index()].type;
      case Kind::Succ:
        expect_nat(infer(m.body()), "argument of succ");
        return Type::nat();
      case Kind::If: {
        expect_nat(infer(m.scrutinee()), "scrutinee of if");
        Type zero = infer(m.zero_branch());
        stack_.push_back({m.hint(), Type::nat()});
        Type succ = infer(m.succ_branch());
        stack_.pop_back();
        if (!(zero == succ))
          throw TypeError("branches of if have different types: " + zero.to_string() + " and " +
                          succ.to_string());
        return zero;
      }
      case Kind::Abs: {
        stack_.push_back({m.hint(), m.annotation()});
        Type body = infer(m.body());
        stack_.pop_back();
        return Type::arrow(m.annotation(), body);
      }
      case Kind::App: {
        Type f = infer(m.fun());
        if (!f.is_arrow()) throw TypeError("applying a term of non-arrow type " + f.to_string());
        Type a = infer(m.arg());
        if (!(a == f.domain()))
          throw TypeError("argument of type " + a.to_string() + " where " + f.domain().to_string() +
                          " is expected");
        return f.codomain();
      }
      case Kind::Fix: {
        Type f = infer(m.body());
        if (!f.is_arrow() || !(f.domain() == f.codomain()))
          throw TypeError("fix expects a term of type s -> s, got " + f.to_string());
        return f.domain();
      }
      case Kind::Hole:
        check_hole(m);
        return m.hole_type();
    }
    throw TypeError("unknown term kind");
  }

 private:
  static void expect_nat(const Type& t, const char* what) {
    if (!t.is_nat()) throw TypeError(std::string(what) + " must have type nat, got " + t.to_string());
  }

  void check_hole(const Term& h) {
    for (const auto& [name, type] : h.hole_context().entries()) {
      std::optional<Type> found;
      for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
        if (it->hint == name) {
          found = it->type;
          break;
        }
      if (!found) found = ctx_.lookup(name);
      if (!found) throw TypeError("hole variable '" + name + "' is not in scope");
      if (!(*found == type))
        throw TypeError("hole variable '" + name + "' has type " + found->to_string() + ", hole expects " +
                        type.to_string());
    }
  }

  const TypingContext& ctx_;
  std::vector<Binder> stack_;
};

}  // namespace detail

/// Returns the unique type of `m` under `ctx`, or throws TypeError.
inline Type typecheck(const TypingContext& ctx, const Term& m) {
  if (m.has_hole()) throw TypeError("term contains a hole");
  return detail::TypeChecker(ctx).infer(m);
}

inline Type typecheck(const Term& m) { return typecheck(TypingContext{}, m); }

/// Typing of observation contexts: `Γ ⊢ C[Δ ⊢ τ] : σ`.
inline Type typecheck_context(const TypingContext& ctx, const Term& c) { return detail::TypeChecker(ctx).infer(c); }

}  // namespace ppcf

#pragma once

// Observation contexts are terms containing Kind::Hole leaves. Filling a hole
// may capture free variables of the plugged term: a free name of M that
// matches the hint of a binder enclosing the hole becomes bound by it.

#include "ppcf/error.hpp"
#include "ppcf/term.hpp"
#include "ppcf/typecheck.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ppcf {

namespace detail {

inline void collect_holes(const Term& c, std::vector<Term>& out) {
  if (!c.has_hole()) return;
  if (c.is(Kind::Hole)) {
    out.push_back(c);
    return;
  }
  for (std::size_t i = 0; i < arity(c.kind()); ++i) collect_holes(c.child(i), out);
}

// Replaces each free Var of `m` named like an enclosing binder by the matching
// de Bruijn index; `scope` lists binder hints from outermost to innermost.
inline Term capture(const Term& m, const std::vector<std::string>& scope, std::uint64_t depth) {
  if (!m.has_free_vars()) return m;
  if (m.is(Kind::Var)) {
    for (std::size_t j = scope.size(); j-- > 0;)
      if (scope[j] == m.name()) return Term::bound(depth + (scope.size() - 1 - j));
    return m;
  }
  return map_children(m, depth, [&](const Term& c, std::uint64_t d) { return capture(c, scope, d); });
}

inline Term fill_at(const Term& c, const Term& m, std::vector<std::string>& scope) {
  if (!c.has_hole()) return c;
  if (c.is(Kind::Hole)) return capture(m, scope, 0);
  std::array<Term, 3> kids;
  for (std::size_t i = 0; i < arity(c.kind()); ++i) {
    bool binds = binds_child(c.kind(), i);
    if (binds) scope.push_back(c.hint());
    kids[i] = fill_at(c.child(i), m, scope);
    if (binds) scope.pop_back();
  }
  return rebuild(c, kids);
}

}  // namespace detail

/// A term with holes, all sharing one signature Δ ⊢ τ.
class ObservationContext {
 public:
  ObservationContext(Term body, TypingContext delta, Type tau)
      : body_(std::move(body)), delta_(std::move(delta)), tau_(std::move(tau)) {
    validate();
  }

  /// Takes the signature from the first hole; a context without holes gets `⊢ nat`.
  explicit ObservationContext(Term body) : body_(std::move(body)) {
    std::vector<Term> holes;
    detail::collect_holes(body_, holes);
    if (!holes.empty()) {
      delta_ = holes.front().hole_context();
      tau_ = holes.front().hole_type();
    }
    validate();
  }

  const Term& term() const { return body_; }
  const TypingContext& hole_context() const { return delta_; }
  const Type& hole_type() const { return tau_; }

  /// Γ ⊢ C[Δ ⊢ τ] : σ
  Type type(const TypingContext& gamma = {}) const { return typecheck_context(gamma, body_); }

 private:
  void validate() const {
    std::vector<Term> holes;
    detail::collect_holes(body_, holes);
    for (const auto& h : holes)
      if (!(h.hole_type() == tau_) || !(h.hole_context() == delta_))
        throw TypeError("context holes do not share one signature");
  }

  Term body_;
  TypingContext delta_;
  Type tau_;
};

/// C[M]. Requires Δ ⊢ M : τ for the context's hole signature.
inline Term fill(const ObservationContext& c, const Term& m) {
  Type t = typecheck(c.hole_context(), m);
  if (!(t == c.hole_type()))
    throw TypeError("hole expects " + c.hole_type().to_string() + ", got a term of type " + t.to_string());
  std::vector<std::string> scope;
  return detail::fill_at(c.term(), m, scope);
}

}  // namespace ppcf

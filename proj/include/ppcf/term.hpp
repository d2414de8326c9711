#pragma once

// Locally nameless PPCF terms.
//
// Bound variables are de Bruijn indices (Kind::Bound); free variables are
// names (Kind::Var). Binders keep the source name only as a printing hint, so
// structural equality of two terms is alpha-equivalence and the cached
// structural hash is a hash of the alpha class.

#include "ppcf/rational.hpp"
#include "ppcf/type.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppcf {

enum class Kind : std::uint8_t { Num, Var, Bound, Succ, If, Abs, App, Coin, Fix, Hole };

/// Ordered list of (name, type) with pairwise distinct names.
class TypingContext {
 public:
  TypingContext() = default;
  TypingContext(std::initializer_list<std::pair<std::string, Type>> entries) {
    for (const auto& [name, type] : entries) push(name, type);
  }

  void push(const std::string& name, const Type& type) {
    if (lookup(name)) throw std::invalid_argument("duplicate variable '" + name + "' in typing context");
    entries_.emplace_back(name, type);
  }

  std::optional<Type> lookup(const std::string& name) const {
    for (const auto& [n, t] : entries_)
      if (n == name) return t;
    return std::nullopt;
  }

  const std::vector<std::pair<std::string, Type>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const TypingContext& a, const TypingContext& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::pair<std::string, Type>> entries_;
};

class Term;

namespace detail {

struct TermNode {
  Kind kind;
  std::uint64_t value = 0;  // numeral value, or de Bruijn index
  std::string name;         // free variable name, or binder hint
  Type type;                // Abs annotation, Hole type
  Rational prob;            // Coin
  std::shared_ptr<const TypingContext> hole_context;
  std::array<std::shared_ptr<const TermNode>, 3> child{};

  std::size_t hash = 0;
  std::uint32_t loose = 0;  // number of enclosing binders the term needs
  bool has_free = false;
  bool has_hole = false;
  std::size_t size = 1;
};

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace detail

/// Immutable PPCF term (or observation context, when it contains holes).
/// Copies share structure. `operator==` is alpha-equivalence.
class Term {
 public:
  using NodePtr = std::shared_ptr<const detail::TermNode>;

  Term() = default;
  explicit Term(NodePtr node) : node_(std::move(node)) {}

  // -- raw constructors -----------------------------------------------------
  static Term num(std::uint64_t n) {
    auto node = make(Kind::Num);
    node->value = n;
    node->hash = detail::mix(1, n);
    return Term(std::move(node));
  }
  static Term var(std::string name) {
    auto node = make(Kind::Var);
    node->hash = detail::mix(2, std::hash<std::string>{}(name));
    node->name = std::move(name);
    node->has_free = true;
    return Term(std::move(node));
  }
  static Term bound(std::uint64_t index) {
    auto node = make(Kind::Bound);
    node->value = index;
    node->hash = detail::mix(3, index);
    node->loose = static_cast<std::uint32_t>(index + 1);
    return Term(std::move(node));
  }
  static Term coin(const Rational& p) {
    if (p < 0 || p > 1) throw std::invalid_argument("coin probability " + format_rational(p) + " outside [0,1]");
    auto node = make(Kind::Coin);
    node->prob = p;
    node->hash = detail::mix(4, hash_rational(p));
    return Term(std::move(node));
  }
  static Term succ(const Term& m) { return unary(Kind::Succ, m); }
  static Term fix(const Term& m) { return unary(Kind::Fix, m); }
  static Term app(const Term& f, const Term& a) {
    auto node = make(Kind::App);
    node->child[0] = f.node_;
    node->child[1] = a.node_;
    finish(*node);
    return Term(std::move(node));
  }
  /// Abstraction whose body already refers to its variable as Bound(0).
  static Term abs_raw(std::string hint, const Type& annot, const Term& body) {
    auto node = make(Kind::Abs);
    node->name = std::move(hint);
    node->type = annot;
    node->child[0] = body.node_;
    finish(*node);
    return Term(std::move(node));
  }
  /// Conditional whose successor branch refers to its variable as Bound(0).
  static Term if_raw(const Term& scrutinee, const Term& zero_branch, std::string hint,
                     const Term& succ_branch) {
    auto node = make(Kind::If);
    node->name = std::move(hint);
    node->child[0] = scrutinee.node_;
    node->child[1] = zero_branch.node_;
    node->child[2] = succ_branch.node_;
    finish(*node);
    return Term(std::move(node));
  }
  static Term hole(TypingContext delta, const Type& tau) {
    auto node = make(Kind::Hole);
    node->type = tau;
    node->hash = detail::mix(10, tau.hash());
    node->hole_context = std::make_shared<const TypingContext>(std::move(delta));
    node->has_hole = true;
    return Term(std::move(node));
  }

  // -- accessors ------------------------------------------------------------
  explicit operator bool() const { return static_cast<bool>(node_); }
  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }
  std::uint64_t numeral() const { return node_->value; }
  std::uint64_t index() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const std::string& hint() const { return node_->name; }
  const Type& annotation() const { return node_->type; }
  const Type& hole_type() const { return node_->type; }
  const TypingContext& hole_context() const { return *node_->hole_context; }
  const Rational& probability() const { return node_->prob; }
  Term child(std::size_t i) const { return Term(node_->child[i]); }

  // Named views of children.
  Term body() const { return child(0); }       // Succ, Abs, Fix
  Term fun() const { return child(0); }        // App
  Term arg() const { return child(1); }        // App
  Term scrutinee() const { return child(0); }  // If
  Term zero_branch() const { return child(1); }
  Term succ_branch() const { return child(2); }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  std::uint32_t loose() const { return node_->loose; }
  bool locally_closed() const { return node_->loose == 0; }
  bool has_free_vars() const { return node_->has_free; }
  bool closed() const { return !node_->has_free && node_->loose == 0; }
  bool has_hole() const { return node_->has_hole; }
  const detail::TermNode* raw() const { return node_.get(); }
  const NodePtr& node() const { return node_; }

  friend bool operator==(const Term& a, const Term& b) { return alpha_equal(a.node_.get(), b.node_.get()); }

 private:
  static std::shared_ptr<detail::TermNode> make(Kind k) {
    auto node = std::make_shared<detail::TermNode>();
    node->kind = k;
    return node;
  }

  static Term unary(Kind k, const Term& m) {
    auto node = make(k);
    node->child[0] = m.node_;
    finish(*node);
    return Term(std::move(node));
  }

  static void finish(detail::TermNode& node) {
    std::size_t h = static_cast<std::size_t>(node.kind) * 0x100000001b3ull;
    std::uint32_t loose = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& c = node.child[i];
      if (!c) continue;
      h = detail::mix(h, c->hash);
      bool binds = (node.kind == Kind::Abs && i == 0) || (node.kind == Kind::If && i == 2);
      std::uint32_t l = binds ? (c->loose > 0 ? c->loose - 1 : 0) : c->loose;
      loose = std::max(loose, l);
      node.has_free = node.has_free || c->has_free;
      node.has_hole = node.has_hole || c->has_hole;
      node.size += c->size;
    }
    if (node.kind == Kind::Abs) h = detail::mix(h, node.type.hash());
    node.hash = h;
    node.loose = loose;
  }

  static bool alpha_equal(const detail::TermNode* a, const detail::TermNode* b) {
    while (true) {
      if (a == b) return true;
      if (!a || !b) return false;
      if (a->kind != b->kind || a->hash != b->hash || a->size != b->size) return false;
      switch (a->kind) {
        case Kind::Num:
        case Kind::Bound:
          return a->value == b->value;
        case Kind::Var:
          return a->name == b->name;
        case Kind::Coin:
          return a->prob == b->prob;
        case Kind::Hole:
          return a->type == b->type && *a->hole_context == *b->hole_context;
        case Kind::Abs:
          if (!(a->type == b->type)) return false;
          a = a->child[0].get();
          b = b->child[0].get();
          continue;
        case Kind::Succ:
        case Kind::Fix:
          a = a->child[0].get();
          b = b->child[0].get();
          continue;
        case Kind::App:
          if (!alpha_equal(a->child[0].get(), b->child[0].get())) return false;
          a = a->child[1].get();
          b = b->child[1].get();
          continue;
        case Kind::If:
          if (!alpha_equal(a->child[0].get(), b->child[0].get())) return false;
          if (!alpha_equal(a->child[1].get(), b->child[1].get())) return false;
          a = a->child[2].get();
          b = b->child[2].get();
          continue;
      }
      return false;
    }
  }

  NodePtr node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// -- locally nameless operations -----------------------------------------------

namespace detail {

inline Term rebuild(const Term& t, const std::array<Term, 3>& kids) {
  switch (t.kind()) {
    case Kind::Succ:
      return Term::succ(kids[0]);
    case Kind::Fix:
      return Term::fix(kids[0]);
    case Kind::App:
      return Term::app(kids[0], kids[1]);
    case Kind::Abs:
      return Term::abs_raw(t.hint(), t.annotation(), kids[0]);
    case Kind::If:
      return Term::if_raw(kids[0], kids[1], t.hint(), kids[2]);
    default:
      return t;
  }
}

inline bool binds_child(Kind k, std::size_t i) { return (k == Kind::Abs && i == 0) || (k == Kind::If && i == 2); }

inline std::size_t arity(Kind k) {
  switch (k) {
    case Kind::Succ:
    case Kind::Fix:
    case Kind::Abs:
      return 1;
    case Kind::App:
      return 2;
    case Kind::If:
      return 3;
    default:
      return 0;
  }
}

/// Generic structural map over children, rebuilding only when something changed.
template <class F>
Term map_children(const Term& t, std::uint64_t depth, F&& f) {
  std::array<Term, 3> kids;
  bool changed = false;
  std::size_t n = arity(t.kind());
  for (std::size_t i = 0; i < n; ++i) {
    Term c = t.child(i);
    kids[i] = f(c, binds_child(t.kind(), i) ? depth + 1 : depth);
    changed = changed || kids[i].raw() != c.raw();
  }
  return changed ? rebuild(t, kids) : t;
}

inline Term open_at(const Term& t, const Term& value, std::uint64_t depth) {
  if (t.loose() <= depth) return t;
  if (t.is(Kind::Bound)) {
    if (t.index() == depth) return value;
    return Term::bound(t.index() - 1);  // index > depth
  }
  return map_children(t, depth,
                      [&](const Term& c, std::uint64_t d) { return open_at(c, value, d); });
}

inline Term close_at(const Term& t, const std::string& name, std::uint64_t depth) {
  if (!t.has_free_vars() && t.loose() <= depth) return t;
  if (t.is(Kind::Var)) return t.name() == name ? Term::bound(depth) : t;
  if (t.is(Kind::Bound)) return t.index() >= depth ? Term::bound(t.index() + 1) : t;
  return map_children(t, depth,
                      [&](const Term& c, std::uint64_t d) { return close_at(c, name, d); });
}

inline Term subst_free(const Term& t, const std::string& name, const Term& value) {
  if (!t.has_free_vars()) return t;
  if (t.is(Kind::Var)) return t.name() == name ? value : t;
  return map_children(t, 0, [&](const Term& c, std::uint64_t) { return subst_free(c, name, value); });
}

inline void collect_free(const Term& t, std::set<std::string>& out) {
  if (!t.has_free_vars()) return;
  if (t.is(Kind::Var)) {
    out.insert(t.name());
    return;
  }
  for (std::size_t i = 0; i < arity(t.kind()); ++i) collect_free(t.child(i), out);
}

}  // namespace detail

/// Replaces the outermost dangling bound variable of `body` by `value`
/// (which must be locally closed). This is beta-instantiation.
inline Term open(const Term& body, const Term& value) {
  if (!value.locally_closed()) throw std::logic_error("open: value has dangling bound variables");
  return detail::open_at(body, value, 0);
}

/// Turns the free variable `name` of `t` into the bound variable of a new
/// enclosing binder.
inline Term close(const Term& t, const std::string& name) { return detail::close_at(t, name, 0); }

/// Capture-avoiding substitution M[N/x] of the free variable x.
inline Term subst(const Term& m, const Term& n, const std::string& x) {
  if (!n.locally_closed()) throw std::logic_error("subst: replacement has dangling bound variables");
  return detail::subst_free(m, x, n);
}

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  detail::collect_free(t, out);
  return out;
}

// -- named builders ------------------------------------------------------------

inline Term lam(const std::string& x, const Type& annot, const Term& body) {
  return Term::abs_raw(x, annot, close(body, x));
}

inline Term ifz(const Term& scrutinee, const Term& zero_branch, const std::string& z, const Term& succ_branch) {
  return Term::if_raw(scrutinee, zero_branch, z, close(succ_branch, z));
}

inline Term apps(Term f, std::initializer_list<Term> args) {
  for (const auto& a : args) f = Term::app(f, a);
  return f;
}

inline Term apps(Term f, const std::vector<Term>& args) {
  for (const auto& a : args) f = Term::app(f, a);
  return f;
}

/// `let x = M in N`, sugar for `if M then N[0/x] else [z] N[succ z/x]`:
/// M is evaluated once and its value shared.
inline Term let_in(const std::string& x, const Term& m, const Term& n);

/// A name based on `base` that is not free in any of `avoid`.
inline std::string fresh_name(const std::string& base, std::initializer_list<Term> avoid) {
  std::set<std::string> used;
  for (const auto& t : avoid) detail::collect_free(t, used);
  std::string candidate = base;
  for (int i = 0; used.count(candidate); ++i) candidate = base + std::to_string(i);
  return candidate;
}

inline Term let_in(const std::string& x, const Term& m, const Term& n) {
  std::string z = fresh_name("z", {n, Term::var(x)});
  return ifz(m, subst(n, Term::num(0), x), z, subst(n, Term::succ(Term::var(z)), x));
}

}  // namespace ppcf

template <>
struct std::hash<ppcf::Term> {
  std::size_t operator()(const ppcf::Term& t) const { return t.hash(); }
};

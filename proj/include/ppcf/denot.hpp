#pragma once

// Denotational evaluator. Ground values are sub-probability vectors over the
// truncated web {0..N-1}; values of arrow type are memoised host functions.
// Everything is a lower approximation of the exact semantics, monotone in
// the truncation N and in the number K of fixpoint iterations.

#include "ppcf/rational.hpp"
#include "ppcf/term.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ppcf {

struct EvalConfig {
  std::size_t nat_trunc = 32;   // N: ground vectors live on {0..N-1}
  std::size_t fix_iters = 100;  // K: Kleene iterations per fixpoint
  // Solve ground loops fix(λr:nat. B) with r only in tail position in closed
  // form (B is affine in r there). Applies only when K ≥ 1.
  bool exact_tail_loops = true;
};

template <class S>
class SemValue;

template <class S>
using GroundVec = std::vector<S>;

namespace detail {

template <class S>
struct EvalState {
  EvalConfig cfg;
  S dropped = 0;
};

}  // namespace detail

template <class S>
class FuncValue {
 public:
  virtual ~FuncValue() = default;
  virtual SemValue<S> apply(const SemValue<S>& arg) const = 0;
};

/// Denotational value: the polymorphic bottom, a ground vector, or a function.
template <class S>
class SemValue {
 public:
  enum class Tag { Zero, Ground, Func };

  SemValue() = default;  // bottom at any type
  static SemValue ground(GroundVec<S> v) {
    SemValue s;
    s.tag_ = Tag::Ground;
    s.ground_ = std::make_shared<const GroundVec<S>>(std::move(v));
    return s;
  }
  static SemValue func(std::shared_ptr<const FuncValue<S>> f) {
    SemValue s;
    s.tag_ = Tag::Func;
    s.func_ = std::move(f);
    return s;
  }
  static SemValue function(std::function<SemValue(const SemValue&)> f);

  Tag tag() const { return tag_; }
  bool is_zero() const { return tag_ == Tag::Zero; }
  bool is_ground() const { return tag_ == Tag::Ground; }
  bool is_func() const { return tag_ == Tag::Func; }

  /// Ground view of length n (bottom reads as the zero vector).
  GroundVec<S> as_ground(std::size_t n) const {
    if (tag_ == Tag::Func) throw std::logic_error("semantic value of arrow type used as ground");
    if (tag_ == Tag::Zero) return GroundVec<S>(n, S(0));
    return *ground_;
  }
  const GroundVec<S>& vec() const { return *ground_; }
  const std::shared_ptr<const FuncValue<S>>& fn() const { return func_; }

  SemValue operator()(const SemValue& arg) const {
    if (tag_ == Tag::Zero) return SemValue();
    if (tag_ == Tag::Ground) throw std::logic_error("applying a ground semantic value");
    return func_->apply(arg);
  }

 private:
  Tag tag_ = Tag::Zero;
  std::shared_ptr<const GroundVec<S>> ground_;
  std::shared_ptr<const FuncValue<S>> func_;
};

namespace detail {

template <class S>
class NativeFunc : public FuncValue<S> {
 public:
  explicit NativeFunc(std::function<SemValue<S>(const SemValue<S>&)> f) : f_(std::move(f)) {}
  SemValue<S> apply(const SemValue<S>& arg) const override { return f_(arg); }

 private:
  std::function<SemValue<S>(const SemValue<S>&)> f_;
};

template <class S>
class LinCombFunc : public FuncValue<S> {
 public:
  explicit LinCombFunc(std::vector<std::pair<S, SemValue<S>>> parts) : parts_(std::move(parts)) {}
  SemValue<S> apply(const SemValue<S>& arg) const override;

 private:
  std::vector<std::pair<S, SemValue<S>>> parts_;
};

}  // namespace detail

template <class S>
SemValue<S> SemValue<S>::function(std::function<SemValue(const SemValue&)> f) {
  return func(std::make_shared<detail::NativeFunc<S>>(std::move(f)));
}

/// Σ c_i v_i, pointwise at arrow types. Terms with c_i = 0 are skipped.
template <class S>
SemValue<S> lincomb(const std::vector<std::pair<S, SemValue<S>>>& parts) {
  std::vector<std::pair<S, SemValue<S>>> live;
  bool ground = false, func = false;
  std::size_t n = 0;
  for (const auto& [c, v] : parts) {
    if (c == 0 || v.is_zero()) continue;
    live.emplace_back(c, v);
    if (v.is_ground()) {
      ground = true;
      n = v.vec().size();
    }
    if (v.is_func()) func = true;
  }
  if (live.empty()) return SemValue<S>();
  if (ground && func) throw std::logic_error("lincomb of ground and functional values");
  if (ground) {
    GroundVec<S> out(n, S(0));
    for (const auto& [c, v] : live) {
      const auto& g = v.vec();
      for (std::size_t i = 0; i < n; ++i)
        if (g[i] != 0) out[i] += c * g[i];
    }
    return SemValue<S>::ground(std::move(out));
  }
  if (live.size() == 1 && live[0].first == 1) return live[0].second;
  return SemValue<S>::func(std::make_shared<detail::LinCombFunc<S>>(std::move(live)));
}

template <class S>
SemValue<S> detail::LinCombFunc<S>::apply(const SemValue<S>& arg) const {
  std::vector<std::pair<S, SemValue<S>>> out;
  out.reserve(parts_.size());
  for (const auto& [c, f] : parts_) out.emplace_back(c, f(arg));
  return lincomb(out);
}

/// Values of the bound variables (innermost first) and of the free names.
template <class S>
class Env {
 public:
  Env() : free_(std::make_shared<const std::map<std::string, SemValue<S>>>()) {}

  Env push(SemValue<S> v) const {
    Env e = *this;
    e.stack_ = std::make_shared<const Node>(Node{std::move(v), stack_});
    return e;
  }

  Env bind(const std::string& name, SemValue<S> v) const {
    Env e = *this;
    auto m = std::make_shared<std::map<std::string, SemValue<S>>>(*free_);
    (*m)[name] = std::move(v);
    e.free_ = std::move(m);
    return e;
  }

  const SemValue<S>& bound(std::uint64_t index) const {
    const Node* n = stack_.get();
    for (std::uint64_t i = 0; i < index && n; ++i) n = n->next.get();
    if (!n) throw std::logic_error("environment miss: dangling bound variable");
    return n->value;
  }

  const SemValue<S>& free(const std::string& name) const {
    auto it = free_->find(name);
    if (it == free_->end()) throw std::logic_error("environment miss: '" + name + "'");
    return it->second;
  }

 private:
  struct Node {
    SemValue<S> value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> stack_;
  std::shared_ptr<const std::map<std::string, SemValue<S>>> free_;
};

namespace detail {

template <class S>
struct GroundKeyHash {
  std::size_t operator()(const GroundVec<S>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) {
      std::size_t e;
      if constexpr (std::is_same_v<S, Rational>)
        e = hash_rational(x);
      else
        e = std::hash<S>{}(x);
      h = mix(h, e);
    }
    return h;
  }
};

template <class S>
SemValue<S> eval_term(const Term& t, const Env<S>& env, const std::shared_ptr<EvalState<S>>& st);

// λ-abstraction closed over its environment. Calls are memoised: ground
// arguments by value, functional arguments by identity.
template <class S>
class Closure : public FuncValue<S> {
 public:
  Closure(Term body, Env<S> env, std::shared_ptr<EvalState<S>> st)
      : body_(std::move(body)), env_(std::move(env)), st_(std::move(st)) {}

  SemValue<S> apply(const SemValue<S>& arg) const override {
    const std::size_t n = st_->cfg.nat_trunc;
    std::optional<GroundVec<S>> gkey;
    if (!arg.is_func()) gkey = arg.as_ground(n);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (gkey) {
        auto it = by_ground_.find(*gkey);
        if (it != by_ground_.end()) return hit(it->second);
      } else {
        auto it = by_func_.find(arg.fn().get());
        if (it != by_func_.end()) return hit(it->second.second);
      }
    }
    S before = st_->dropped;
    SemValue<S> out = eval_term(body_, env_.push(arg), st_);
    Entry e{out, st_->dropped - before};
    std::lock_guard<std::mutex> lock(mu_);
    if (gkey)
      by_ground_.emplace(std::move(*gkey), std::move(e));
    else
      by_func_.emplace(arg.fn().get(), std::make_pair(arg.fn(), std::move(e)));
    return out;
  }

 private:
  struct Entry {
    SemValue<S> value;
    S dropped;
  };

  SemValue<S> hit(const Entry& e) const {
    st_->dropped += e.dropped;
    return e.value;
  }

  Term body_;
  Env<S> env_;
  std::shared_ptr<EvalState<S>> st_;
  mutable std::mutex mu_;
  mutable std::unordered_map<GroundVec<S>, Entry, GroundKeyHash<S>> by_ground_;
  mutable std::unordered_map<const FuncValue<S>*, std::pair<std::shared_ptr<const FuncValue<S>>, Entry>> by_func_;
};

inline bool mentions(const Term& t, std::uint64_t idx) {
  if (t.loose() <= idx) return false;
  if (t.is(Kind::Bound)) return t.index() == idx;
  for (std::size_t i = 0; i < arity(t.kind()); ++i)
    if (mentions(t.child(i), binds_child(t.kind(), i) ? idx + 1 : idx)) return true;
  return false;
}

// True when the variable `idx` occurs in `t` only as a whole branch result.
inline bool tail_only(const Term& t, std::uint64_t idx) {
  if (t.is(Kind::Bound) && t.index() == idx) return true;
  if (t.is(Kind::If))
    return !mentions(t.scrutinee(), idx) && tail_only(t.zero_branch(), idx) && tail_only(t.succ_branch(), idx + 1);
  return !mentions(t, idx);
}

inline bool is_tail_loop(const Term& fix_body) {
  return fix_body.is(Kind::Abs) && fix_body.annotation().is_nat() && tail_only(fix_body.body(), 0);
}

template <class S>
SemValue<S> eval_fix(const Term& t, const Env<S>& env, const std::shared_ptr<EvalState<S>>& st) {
  const std::size_t n = st->cfg.nat_trunc;
  const std::size_t k = st->cfg.fix_iters;
  SemValue<S> f = eval_term(t.body(), env, st);
  if (k == 0) return SemValue<S>();
  if (st->cfg.exact_tail_loops && is_tail_loop(t.body())) {
    // f(v) = b + c·v, so the least fixpoint is b / (1 - c).
    GroundVec<S> b = f(SemValue<S>()).as_ground(n);
    S saved = st->dropped;
    GroundVec<S> e0(n, S(0));
    e0[0] = 1;
    GroundVec<S> fe0 = f(SemValue<S>::ground(e0)).as_ground(n);
    st->dropped = saved;
    S c = fe0[0] - b[0];
    if (c >= 1) return SemValue<S>::ground(GroundVec<S>(n, S(0)));
    S scale = S(1) / (S(1) - c);
    for (auto& x : b) x *= scale;
    return SemValue<S>::ground(std::move(b));
  }
  SemValue<S> v;
  for (std::size_t i = 0; i < k; ++i) {
    SemValue<S> next = f(v);
    if (next.is_ground() && v.is_ground() && next.vec() == v.vec()) break;
    v = std::move(next);
  }
  return v;
}

template <class S>
SemValue<S> eval_term(const Term& t, const Env<S>& env, const std::shared_ptr<EvalState<S>>& st) {
  const std::size_t n = st->cfg.nat_trunc;
  switch (t.kind()) {
    case Kind::Num: {
      GroundVec<S> v(n, S(0));
      if (t.numeral() < n)
        v[t.numeral()] = 1;
      else
        st->dropped += 1;
      return SemValue<S>::ground(std::move(v));
    }
    case Kind::Coin: {
      GroundVec<S> v(n, S(0));
      S p = from_rational<S>(t.probability());
      v[0] = p;
      if (n > 1)
        v[1] = S(1) - p;
      else
        st->dropped += S(1) - p;
      return SemValue<S>::ground(std::move(v));
    }
    case Kind::Var:
      return env.free(t.name());
    case Kind::Bound:
      return env.bound(t.index());
    case Kind::Succ: {
      GroundVec<S> u = eval_term(t.body(), env, st).as_ground(n);
      GroundVec<S> v(n, S(0));
      for (std::size_t i = 0; i + 1 < n; ++i) v[i + 1] = u[i];
      st->dropped += u[n - 1];
      return SemValue<S>::ground(std::move(v));
    }
    case Kind::If: {
      GroundVec<S> s = eval_term(t.scrutinee(), env, st).as_ground(n);
      std::vector<std::pair<S, SemValue<S>>> parts;
      if (s[0] != 0) parts.emplace_back(s[0], eval_term(t.zero_branch(), env, st));
      for (std::size_t m = 0; m + 1 < n; ++m) {
        if (s[m + 1] == 0) continue;
        GroundVec<S> em(n, S(0));
        em[m] = 1;
        parts.emplace_back(s[m + 1], eval_term(t.succ_branch(), env.push(SemValue<S>::ground(std::move(em))), st));
      }
      return lincomb(parts);
    }
    case Kind::Abs:
      return SemValue<S>::func(std::make_shared<Closure<S>>(t.body(), env, st));
    case Kind::App: {
      SemValue<S> f = eval_term(t.fun(), env, st);
      if (f.is_zero()) return SemValue<S>();
      return f(eval_term(t.arg(), env, st));
    }
    case Kind::Fix:
      return eval_fix(t, env, st);
    case Kind::Hole:
      throw std::logic_error("eval: term contains a hole");
  }
  throw std::logic_error("eval: unknown term kind");
}

}  // namespace detail

/// Evaluation context: the approximation policy plus the running count of
/// mass discarded at the truncation boundary.
template <class S>
class Evaluator {
 public:
  explicit Evaluator(EvalConfig cfg = {}) : st_(std::make_shared<detail::EvalState<S>>()) {
    if (cfg.nat_trunc == 0) throw std::invalid_argument("nat_trunc must be at least 1");
    st_->cfg = cfg;
  }

  SemValue<S> eval(const Term& m, const Env<S>& env = {}) const { return detail::eval_term(m, env, st_); }

  GroundVec<S> ground(const SemValue<S>& v) const { return v.as_ground(st_->cfg.nat_trunc); }
  SemValue<S> ground_value(GroundVec<S> v) const {
    v.resize(st_->cfg.nat_trunc, S(0));
    return SemValue<S>::ground(std::move(v));
  }

  const EvalConfig& config() const { return st_->cfg; }
  S dropped() const { return st_->dropped; }
  void reset_dropped() const { st_->dropped = 0; }

 private:
  std::shared_ptr<detail::EvalState<S>> st_;
};

/// ⊥_σ: the zero vector at nat, the constant-zero function at arrow types.
template <class S = Rational>
SemValue<S> bottom(const Type& sigma, const EvalConfig& cfg) {
  if (sigma.is_nat()) return SemValue<S>::ground(GroundVec<S>(cfg.nat_trunc, S(0)));
  return SemValue<S>();
}

template <class S = Rational>
SemValue<S> eval(const Term& m, const Env<S>& env, const EvalConfig& cfg) {
  return Evaluator<S>(cfg).eval(m, env);
}

template <class S = Rational>
GroundVec<S> ground_dist(const Term& m, const EvalConfig& cfg) {
  Evaluator<S> ev(cfg);
  return ev.ground(ev.eval(m));
}

template <class S>
struct DenotReport {
  GroundVec<S> dist;
  S dropped_mass = 0;
  S last_fix_delta = 0;  // max_n |ground(K)_n − ground(K−1)_n|
};

template <class S = Rational>
DenotReport<S> denot_report(const Term& m, const EvalConfig& cfg) {
  DenotReport<S> r;
  Evaluator<S> ev(cfg);
  r.dist = ev.ground(ev.eval(m));
  r.dropped_mass = ev.dropped();
  if (cfg.fix_iters > 0) {
    EvalConfig prev = cfg;
    prev.fix_iters = cfg.fix_iters - 1;
    GroundVec<S> before = ground_dist<S>(m, prev);
    for (std::size_t i = 0; i < r.dist.size(); ++i) {
      S d = r.dist[i] - before[i];
      if (d < 0) d = -d;
      if (d > r.last_fix_delta) r.last_fix_delta = d;
    }
  }
  return r;
}

}  // namespace ppcf

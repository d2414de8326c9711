#pragma once

// Weak-head reduction as an absorbing Markov chain over alpha classes of
// closed terms.

#include "ppcf/error.hpp"
#include "ppcf/pretty.hpp"
#include "ppcf/rational.hpp"
#include "ppcf/term.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ppcf {

struct Branch {
  Rational prob;
  Term target;
};

namespace detail {

template <class Ctx>
std::vector<Branch> plug(std::vector<Branch> bs, Ctx&& ctx) {
  for (auto& br : bs) br.target = ctx(br.target);
  return bs;
}

inline void stuck(const Term& m) {
  if (!m.closed()) throw std::logic_error("step: open term");
  throw std::logic_error("step: ill-typed term " + pretty(m));
}

}  // namespace detail

/// One step of leftmost-outermost weak reduction. Empty iff `m` is weak-normal.
inline std::vector<Branch> step(const Term& m) {
  switch (m.kind()) {
    case Kind::Num:
    case Kind::Abs:
      return {};
    case Kind::Coin: {
      const Rational& p = m.probability();
      std::vector<Branch> out;
      if (p != 0) out.push_back({p, Term::num(0)});
      if (p != 1) out.push_back({Rational(1) - p, Term::num(1)});
      return out;
    }
    case Kind::Fix:
      return {{Rational(1), Term::app(m.body(), m)}};
    case Kind::Succ: {
      Term a = m.body();
      if (a.is(Kind::Num)) return {{Rational(1), Term::num(a.numeral() + 1)}};
      auto bs = step(a);
      if (bs.empty()) detail::stuck(m);
      return detail::plug(std::move(bs), [](const Term& t) { return Term::succ(t); });
    }
    case Kind::If: {
      Term s = m.scrutinee();
      if (s.is(Kind::Num)) {
        if (s.numeral() == 0) return {{Rational(1), m.zero_branch()}};
        return {{Rational(1), open(m.succ_branch(), Term::num(s.numeral() - 1))}};
      }
      auto bs = step(s);
      if (bs.empty()) detail::stuck(m);
      return detail::plug(std::move(bs), [&](const Term& t) {
        return Term::if_raw(t, m.zero_branch(), m.hint(), m.succ_branch());
      });
    }
    case Kind::App: {
      Term f = m.fun();
      if (f.is(Kind::Abs)) return {{Rational(1), open(f.body(), m.arg())}};
      auto bs = step(f);
      if (bs.empty()) detail::stuck(m);
      return detail::plug(std::move(bs), [&](const Term& t) { return Term::app(t, m.arg()); });
    }
    default:
      detail::stuck(m);
  }
  return {};
}

/// For closed well-typed terms the weak-normal forms are numerals and abstractions.
inline bool is_weak_normal(const Term& m) { return m.is(Kind::Num) || m.is(Kind::Abs); }

/// Absorbed mass after some number of steps, plus what is still running.
struct Distribution {
  std::vector<std::pair<Term, Rational>> mass;  // numerals by value, then other normal forms
  Rational residual;
  Rational floored;  // part of residual discarded by the mass floor
  std::size_t steps = 0;

  Rational operator[](const Term& v) const {
    for (const auto& [t, p] : mass)
      if (t == v) return p;
    return 0;
  }
  Rational at(std::uint64_t n) const { return (*this)[Term::num(n)]; }
  Rational total() const {
    Rational s = 0;
    for (const auto& e : mass) s += e.second;
    return s;
  }
};

struct ExploreConfig {
  Rational mass_floor = 0;  // frontier states lighter than this are dropped into `floored`
  std::size_t frontier_cap = 2'000'000;
};

/// Incremental computation of the rows of Red^k for a fixed start term.
class Explorer {
 public:
  explicit Explorer(const Term& start, ExploreConfig cfg = {}) : cfg_(std::move(cfg)) {
    if (!start.closed()) throw std::logic_error("explore: open term");
    if (is_weak_normal(start))
      absorbed_[start] = 1;
    else
      frontier_[start] = 1;
  }

  /// Performs up to `n` more steps; stops early once nothing is running.
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && !frontier_.empty(); ++i) one_step();
  }

  void advance_to(std::size_t k) {
    if (k > steps_) advance(k - steps_);
  }

  bool finished() const { return frontier_.empty(); }
  std::size_t steps() const { return steps_; }
  std::size_t frontier_size() const { return frontier_.size(); }

  Distribution distribution() const {
    Distribution d;
    Rational total = 0;
    for (const auto& [t, p] : absorbed_) {
      d.mass.emplace_back(t, p);
      total += p;
    }
    std::sort(d.mass.begin(), d.mass.end(), [](const auto& a, const auto& b) {
      bool an = a.first.is(Kind::Num), bn = b.first.is(Kind::Num);
      if (an != bn) return an;
      if (an) return a.first.numeral() < b.first.numeral();
      return pretty(a.first) < pretty(b.first);
    });
    d.residual = Rational(1) - total;
    d.floored = floored_;
    d.steps = steps_;
    return d;
  }

  Rational mass_of(const Term& v) const {
    auto it = absorbed_.find(v);
    return it == absorbed_.end() ? Rational(0) : it->second;
  }

 private:
  void one_step() {
    std::unordered_map<Term, Rational, TermHash> next;
    next.reserve(frontier_.size() * 2);
    for (const auto& [t, p] : frontier_) {
      for (auto& br : step(t)) {
        Rational q = p * br.prob;
        if (is_weak_normal(br.target))
          absorbed_[br.target] += q;
        else
          next[br.target] += q;
      }
    }
    if (cfg_.mass_floor > 0) {
      for (auto it = next.begin(); it != next.end();) {
        if (it->second < cfg_.mass_floor) {
          floored_ += it->second;
          it = next.erase(it);
        } else {
          ++it;
        }
      }
    }
    if (next.size() > cfg_.frontier_cap)
      throw ResourceLimit("frontier exceeded " + std::to_string(cfg_.frontier_cap) + " states at step " +
                          std::to_string(steps_ + 1));
    frontier_ = std::move(next);
    ++steps_;
  }

  ExploreConfig cfg_;
  std::unordered_map<Term, Rational, TermHash> frontier_;
  std::unordered_map<Term, Rational, TermHash> absorbed_;
  Rational floored_ = 0;
  std::size_t steps_ = 0;
};

/// Mass of each weak-normal term after k steps: exactly the row (Red^k)_M.
inline Distribution explore(const Term& m, std::size_t k, const ExploreConfig& cfg = {}) {
  Explorer e(m, cfg);
  e.advance(k);
  return e.distribution();
}

inline Rational reduce_prob(const Term& m, const Term& v, std::size_t k) {
  if (!is_weak_normal(v)) throw std::invalid_argument("reduce_prob: target is not weak-normal");
  Explorer e(m);
  e.advance(k);
  return e.mass_of(v);
}

struct SampleOutcome {
  std::optional<Term> value;  // empty on timeout
  std::size_t steps = 0;
  bool timed_out() const { return !value.has_value(); }
};

/// Follows one trajectory of the chain. A coin with bias p/q goes to 0 iff
/// r·q < p·2^64 for a uniform 64-bit draw r.
inline SampleOutcome sample(const Term& m, std::uint64_t seed, std::size_t max_steps) {
  if (!m.closed()) throw std::logic_error("sample: open term");
  std::mt19937_64 rng(seed);
  Natural two64 = Natural(1) << 64;
  Term cur = m;
  for (std::size_t i = 0; i <= max_steps; ++i) {
    auto bs = step(cur);
    if (bs.empty()) return {cur, i};
    if (i == max_steps) break;
    if (bs.size() == 1) {
      cur = bs[0].target;
      continue;
    }
    std::uint64_t r = rng();
    Natural rz;
    mpz_import(rz.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
    bool first = rz * bs[0].prob.get_den() < bs[0].prob.get_num() * two64;
    cur = first ? bs[0].target : bs[1].target;
  }
  return {std::nullopt, max_steps};
}

}  // namespace ppcf

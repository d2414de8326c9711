#pragma once

// Finite-web algebra of probabilistic coherence spaces.
//
// Atoms are any totally ordered type. Vectors and matrices are sparse maps
// with nonnegative scalar entries; everything about the exponential is
// truncated at an explicit multiset degree bound.

#include "ppcf/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ppcf::pcs {

/// Finite multiset with natural multiplicities.
template <class A>
class Multiset {
 public:
  Multiset() = default;
  Multiset(std::initializer_list<A> elems) {
    for (const auto& a : elems) add(a);
  }

  static Multiset repeat(const A& a, unsigned k) {
    Multiset m;
    m.add(a, k);
    return m;
  }

  void add(const A& a, unsigned k = 1) {
    if (k == 0) return;
    counts_[a] += k;
    degree_ += k;
  }

  unsigned count(const A& a) const {
    auto it = counts_.find(a);
    return it == counts_.end() ? 0 : it->second;
  }
  unsigned degree() const { return degree_; }
  bool empty() const { return degree_ == 0; }
  const std::map<A, unsigned>& counts() const { return counts_; }

  /// Elements with repetition, in increasing order.
  std::vector<A> elements() const {
    std::vector<A> out;
    for (const auto& [a, k] : counts_) out.insert(out.end(), k, a);
    return out;
  }

  friend Multiset operator+(Multiset x, const Multiset& y) {
    for (const auto& [a, k] : y.counts_) x.add(a, k);
    return x;
  }
  friend bool operator==(const Multiset& x, const Multiset& y) { return x.counts_ == y.counts_; }
  friend bool operator!=(const Multiset& x, const Multiset& y) { return !(x == y); }
  friend bool operator<(const Multiset& x, const Multiset& y) {
    if (x.degree_ != y.degree_) return x.degree_ < y.degree_;
    return x.counts_ < y.counts_;
  }

 private:
  std::map<A, unsigned> counts_;
  unsigned degree_ = 0;
};

template <class A, class S = Rational>
using Vec = std::map<A, S>;

/// t_{a,b}: a row index of the input web, b of the output web.
template <class A, class B, class S = Rational>
using Mat = std::map<std::pair<A, B>, S>;

/// Element of P(!X ⊸ Y) with coefficients s_{μ,b}, deg μ ≤ degree_bound.
template <class A, class B, class S = Rational>
struct KleisliMat {
  std::map<std::pair<Multiset<A>, B>, S> coeffs;
  unsigned degree_bound = 0;

  void set(const Multiset<A>& mu, const B& b, const S& s) {
    if (mu.degree() > degree_bound) throw std::invalid_argument("KleisliMat: key above degree bound");
    if (s != 0) coeffs[{mu, b}] = s;
  }
};

template <class A, class S>
S get(const Vec<A, S>& u, const A& a) {
  auto it = u.find(a);
  return it == u.end() ? S(0) : it->second;
}

template <class A, class S>
Vec<A, S> prune(Vec<A, S> u) {
  for (auto it = u.begin(); it != u.end();) it = it->second == 0 ? u.erase(it) : std::next(it);
  return u;
}

/// ⟨u, u'⟩ = Σ u_a u'_a
template <class A, class S>
S pair(const Vec<A, S>& u, const Vec<A, S>& v) {
  S s = 0;
  for (const auto& [a, x] : u) s += x * get(v, a);
  return s;
}

/// Membership in P N (finite support): nonnegative with Σ ≤ 1.
template <class A, class S>
bool in_pcoh_nat(const Vec<A, S>& u) {
  S s = 0;
  for (const auto& [a, x] : u) {
    if (x < 0) return false;
    s += x;
  }
  return s <= 1;
}

/// ‖u‖ on N, where the dual supremum is attained at the constant-1 vector.
template <class A, class S>
S norm_nat(const Vec<A, S>& u) {
  S s = 0;
  for (const auto& e : u) s += e.second;
  return s;
}

/// (t u)_b = Σ_a t_{a,b} u_a
template <class A, class B, class S>
Vec<B, S> mat_apply(const Mat<A, B, S>& t, const Vec<A, S>& u) {
  Vec<B, S> out;
  for (const auto& [ab, x] : t) {
    auto it = u.find(ab.first);
    if (it != u.end() && it->second != 0) out[ab.second] += x * it->second;
  }
  return prune(std::move(out));
}

template <class A, class B, class C, class S>
Mat<A, C, S> mat_compose(const Mat<B, C, S>& g, const Mat<A, B, S>& f) {
  std::multimap<B, std::pair<C, S>> rows;
  for (const auto& [bc, y] : g) rows.emplace(bc.first, std::make_pair(bc.second, y));
  Mat<A, C, S> out;
  for (const auto& [ab, x] : f) {
    auto [lo, hi] = rows.equal_range(ab.second);
    for (auto it = lo; it != hi; ++it) out[{ab.first, it->second.first}] += x * it->second.second;
  }
  return out;
}

template <class S>
S power(const S& x, unsigned k) {
  S r = 1;
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

/// u^μ = Π_a u_a^{μ(a)}
template <class A, class S>
S monomial(const Vec<A, S>& u, const Multiset<A>& mu) {
  S r = 1;
  for (const auto& [a, k] : mu.counts()) r *= power(get(u, a), k);
  return r;
}

/// All multisets over `web` of degree exactly `d`, in increasing order.
template <class A>
std::vector<Multiset<A>> multisets_of_degree(const std::vector<A>& web, unsigned d) {
  std::vector<Multiset<A>> out;
  std::function<void(std::size_t, unsigned, Multiset<A>)> go = [&](std::size_t i, unsigned left, Multiset<A> acc) {
    if (left == 0) {
      out.push_back(acc);
      return;
    }
    if (i == web.size()) return;
    for (unsigned k = left + 1; k-- > 0;) {
      Multiset<A> next = acc;
      next.add(web[i], k);
      go(i + 1, left - k, next);
    }
  };
  go(0, d, {});
  return out;
}

template <class A>
std::vector<Multiset<A>> multisets_up_to(const std::vector<A>& web, unsigned d) {
  std::vector<Multiset<A>> out;
  for (unsigned k = 0; k <= d; ++k) {
    auto layer = multisets_of_degree(web, k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

/// !u = (u^μ)_μ for deg μ ≤ d.
template <class A, class S>
Vec<Multiset<A>, S> prom(const std::vector<A>& web, const Vec<A, S>& u, unsigned d) {
  Vec<Multiset<A>, S> out;
  for (const auto& mu : multisets_up_to(web, d)) {
    S x = monomial(u, mu);
    if (x != 0) out[mu] = x;
  }
  return out;
}

/// m!(μ) = (#μ)! / μ!
template <class A>
Natural multinomial(const Multiset<A>& mu) {
  Natural r = factorial(mu.degree());
  for (const auto& [a, k] : mu.counts()) r /= factorial(k);
  return r;
}

template <class A>
Natural multiset_factorial(const Multiset<A>& mu) {
  Natural r = 1;
  for (const auto& [a, k] : mu.counts()) r *= factorial(k);
  return r;
}

namespace detail {

// Enumerates the contingency tables ρ ∈ L(μ, ν) row by row: each row a of μ
// spreads its μ(a) copies over the columns that still have room.
template <class A, class B, class F>
void contingency_tables(const std::vector<std::pair<A, unsigned>>& rows, std::vector<std::pair<B, unsigned>>& cols,
                        std::size_t row, Multiset<std::pair<A, B>>& rho, F&& visit) {
  if (row == rows.size()) {
    visit(rho);
    return;
  }
  std::function<void(std::size_t, unsigned)> spread = [&](std::size_t col, unsigned left) {
    if (left == 0) {
      contingency_tables(rows, cols, row + 1, rho, visit);
      return;
    }
    if (col == cols.size()) return;
    unsigned room = 0;
    for (std::size_t j = col; j < cols.size(); ++j) room += cols[j].second;
    if (room < left) return;
    unsigned most = std::min(left, cols[col].second);
    for (unsigned k = most + 1; k-- > 0;) {
      cols[col].second -= k;
      Multiset<std::pair<A, B>> saved = rho;
      rho.add({rows[row].first, cols[col].first}, k);
      spread(col + 1, left - k);
      rho = saved;
      cols[col].second += k;
    }
  };
  spread(0, rows[row].second);
}

}  // namespace detail

/// (!t)_{μ,ν} = Σ_{ρ ∈ L(μ,ν)} ν!/ρ! t^ρ, a single entry.
template <class A, class B, class S>
S excl_entry(const Mat<A, B, S>& t, const Multiset<A>& mu, const Multiset<B>& nu) {
  if (mu.degree() != nu.degree()) return S(0);
  std::vector<std::pair<A, unsigned>> rows(mu.counts().begin(), mu.counts().end());
  std::vector<std::pair<B, unsigned>> cols(nu.counts().begin(), nu.counts().end());
  Natural nu_fact = multiset_factorial(nu);
  S total = 0;
  Multiset<std::pair<A, B>> rho;
  detail::contingency_tables(rows, cols, 0, rho, [&](const Multiset<std::pair<A, B>>& r) {
    Rational weight(nu_fact, multiset_factorial(r));
    weight.canonicalize();
    S term = from_rational<S>(weight);
    for (const auto& [ab, k] : r.counts()) {
      auto it = t.find(ab);
      if (it == t.end()) return;
      term *= power(it->second, k);
    }
    total += term;
  });
  return total;
}

/// !t restricted to multisets of degree ≤ d over the given webs.
template <class A, class B, class S>
Mat<Multiset<A>, Multiset<B>, S> excl(const Mat<A, B, S>& t, const std::vector<A>& web_in,
                                      const std::vector<B>& web_out, unsigned d) {
  Mat<Multiset<A>, Multiset<B>, S> out;
  for (unsigned k = 0; k <= d; ++k) {
    auto mus = multisets_of_degree(web_in, k);
    auto nus = multisets_of_degree(web_out, k);
    for (const auto& mu : mus)
      for (const auto& nu : nus) {
        S x = excl_entry(t, mu, nu);
        if (x != 0) out[{mu, nu}] = x;
      }
  }
  return out;
}

/// (Der X)_{μ,a} = δ_{[a],μ}
template <class A, class S = Rational>
Mat<Multiset<A>, A, S> der(const std::vector<A>& web) {
  Mat<Multiset<A>, A, S> out;
  for (const auto& a : web) out[{Multiset<A>{a}, a}] = 1;
  return out;
}

/// (Digg X)_{μ,[μ1..μn]} = δ_{Σμi,μ}, with deg μ ≤ d and n ≤ d.
template <class A, class S = Rational>
Mat<Multiset<A>, Multiset<Multiset<A>>, S> digg(const std::vector<A>& web, unsigned d) {
  Mat<Multiset<A>, Multiset<Multiset<A>>, S> out;
  auto inner = multisets_up_to(web, d);
  for (const auto& outer : multisets_up_to(inner, d)) {
    Multiset<A> sum;
    for (const auto& mu : outer.elements()) sum = sum + mu;
    if (sum.degree() <= d) out[{sum, outer}] = 1;
  }
  return out;
}

/// Fun s(u) = s · !u, i.e. (Fun s(u))_b = Σ_μ s_{μ,b} u^μ.
template <class A, class B, class S>
Vec<B, S> kleisli_apply(const KleisliMat<A, B, S>& s, const Vec<A, S>& u) {
  Vec<B, S> out;
  for (const auto& [key, x] : s.coeffs) out[key.second] += x * monomial(u, key.first);
  return prune(std::move(out));
}

/// Der as a Kleisli morphism (the identity of the Kleisli category).
template <class A, class S = Rational>
KleisliMat<A, A, S> kleisli_identity(const std::vector<A>& web) {
  KleisliMat<A, A, S> id;
  id.degree_bound = 1;
  for (const auto& a : web) id.set(Multiset<A>{a}, a, S(1));
  return id;
}

/// g ∘ f = g · f^!, where the promotion f^! = !f · Digg has entries
/// (f^!)_{μ,ν} = Σ_{[μ1..μn], Σμi = μ} (!f)_{[μ1..μn],ν}. Keys of degree above
/// `d` are dropped.
template <class A, class B, class C, class S>
KleisliMat<A, C, S> kleisli_compose(const KleisliMat<A, B, S>& f, const KleisliMat<B, C, S>& g, unsigned d) {
  // f as a plain matrix from the web !X (restricted to its support) to Y.
  Mat<Multiset<A>, B, S> flat;
  std::set<Multiset<A>> in_keys;
  std::set<B> out_keys;
  for (const auto& [key, x] : f.coeffs) {
    flat[key] = x;
    in_keys.insert(key.first);
    out_keys.insert(key.second);
  }
  std::vector<Multiset<A>> web_in(in_keys.begin(), in_keys.end());

  std::map<Multiset<B>, std::vector<std::pair<C, S>>> g_by_nu;
  for (const auto& [key, y] : g.coeffs) g_by_nu[key.first].emplace_back(key.second, y);

  KleisliMat<A, C, S> out;
  out.degree_bound = d;
  for (const auto& [nu, targets] : g_by_nu) {
    bool reachable = true;
    for (const auto& [b, k] : nu.counts()) reachable = reachable && out_keys.count(b);
    if (!reachable) continue;
    // Σ over the outer multisets M = [μ1..μn] with n = deg ν.
    for (const auto& outer : multisets_of_degree(web_in, nu.degree())) {
      Multiset<A> mu;
      for (const auto& m : outer.elements()) mu = mu + m;
      if (mu.degree() > d) continue;
      S x = excl_entry(flat, outer, nu);
      if (x == 0) continue;
      for (const auto& [c, y] : targets) {
        S v = x * y;
        out.coeffs[{mu, c}] += v;
      }
    }
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
  return out;
}

/// Coalgebra structure on N: h_{n,μ} = 1 iff μ = k[n], for n < N and k ≤ d.
template <class S = Rational>
Mat<unsigned, Multiset<unsigned>, S> nat_coalgebra(unsigned N, unsigned d) {
  Mat<unsigned, Multiset<unsigned>, S> out;
  for (unsigned n = 0; n < N; ++n)
    for (unsigned k = 0; k <= d; ++k) out[{n, Multiset<unsigned>::repeat(n, k)}] = 1;
  return out;
}

template <class S = Rational>
Vec<unsigned, S> basis(unsigned n) {
  return {{n, S(1)}};
}

}  // namespace ppcf::pcs

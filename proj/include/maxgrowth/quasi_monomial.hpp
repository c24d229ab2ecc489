#ifndef MAXGROWTH_QUASI_MONOMIAL_HPP
#define MAXGROWTH_QUASI_MONOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linmod.hpp"
#include "numeric.hpp"
#include "series.hpp"
#include "words.hpp"

namespace maxgrowth {

//! alpha(j, i) for letters j = 1..r and positions i >= 1. Each row must take
//! every value only finitely often; rows are declared injective from
//! `injective_from` on, and that declaration is checked to any finite depth.
struct AlphaTable {
  std::function<Rational(int, std::size_t)> value;
  std::size_t                               injective_from = 1;
  std::string                               name;

  Rational operator()(int j, std::size_t i) const {
    return value(j, i);
  }

  //! alpha(j, i) = i
  static AlphaTable position() {
    return {[](int, std::size_t i) { return Rational(static_cast<long long>(i)); }, 1, "i"};
  }

  void validate(int r, std::size_t depth) const {
    for (int j = 1; j <= r; ++j) {
      std::set<Rational> seen;
      for (std::size_t i = injective_from; i <= depth; ++i) {
        if (!seen.insert(value(j, i)).second) {
          throw contract_error("alpha row " + std::to_string(j) + " repeats a value at position " +
                               std::to_string(i));
        }
      }
    }
  }
};

//! e_v = (x_{j_1} - alpha(j_1, 1)) ... (x_{j_d} - alpha(j_d, d)) in monomials.
inline Poly quasi_monomial(Word const& v, AlphaTable const& alpha, int r) {
  check_letters(v, r, true);
  Poly p = Poly::constant(1, r);
  for (std::size_t k = 0; k < v.size(); ++k) {
    p = p * (Poly::monomial({v[k]}, r) - Poly::constant(alpha(v[k], k + 1), r));
  }
  return p;
}

//! Coordinates of p in the quasi-monomial basis, keyed like monomials.
inline SparseVec quasi_convert(Poly p, AlphaTable const& alpha) {
  SparseVec out;
  while (!p.is_zero()) {
    auto const [k, c] = *p.terms.rbegin();
    out.emplace(k, c);
    p -= Rational(c) * quasi_monomial(key_monomial(k, p.r), alpha, p.r);
  }
  return out;
}

//! Inverse of quasi_convert.
inline Poly quasi_expand(SparseVec const& e, AlphaTable const& alpha, int r) {
  Poly p{r, {}};
  for (auto const& [k, c] : e) {
    p += Rational(c) * quasi_monomial(key_monomial(k, r), alpha, r);
  }
  return p;
}

//! e_v x_j = e_{v x_j} + alpha(j, |v| + 1) e_v, extended linearly.
inline SparseVec quasi_times_letter(SparseVec const& e, Letter x, AlphaTable const& alpha, int r) {
  SparseVec out;
  for (auto const& [k, c] : e) {
    Word v = key_monomial(k, r);
    add_scaled(out, SparseVec{{k, 1}}, c * alpha(x, v.size() + 1));
    v.push_back(x);
    add_scaled(out, SparseVec{{monomial_key(v, r), 1}}, c);
  }
  return out;
}

//! 1 + r + ... + r^n - 2 sum_{d_j <= n} r^(n - d_j)
inline BigInt forbidden_prefix_bound(std::vector<std::size_t> const& degrees, int r,
                                     std::size_t n) {
  BigInt b = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    b += ipow(BigInt(r), k);
  }
  for (auto dj : degrees) {
    if (dj <= n) {
      b -= 2 * ipow(BigInt(r), n - dj);
    }
  }
  return b;
}

//! R / I where I is the right ideal generated by e_w for the given leading
//! monomials; I is spanned by the e_v with v having a forbidden prefix.
//! Elements are SparseVecs over the surviving e_v. Exact up to degree `depth`.
class QuasiMonomialModule {
 public:
  QuasiMonomialModule(int r, AlphaTable alpha, std::vector<Word> forbidden, std::size_t depth)
      : r_(r), alpha_(std::move(alpha)), depth_(depth) {
    check_rank(r);
    if (r < 2) {
      throw contract_error("quasi-monomial module needs r >= 2");
    }
    check_monomial_degree(depth + 1, r);
    alpha_.validate(r, depth + 1);
    for (auto& w : forbidden) {
      check_letters(w, r, true);
      forbidden_.insert(std::move(w));
    }
  }

  int alphabet_rank() const noexcept {
    return r_;
  }
  std::size_t depth() const noexcept {
    return depth_;
  }
  AlphaTable const& alpha() const noexcept {
    return alpha_;
  }
  std::set<Word> const& forbidden() const noexcept {
    return forbidden_;
  }

  //! e_v lies in I.
  bool killed(Word const& v) const {
    for (std::size_t n = 0; n <= v.size(); ++n) {
      if (forbidden_.count(Word(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)))) {
        return true;
      }
    }
    return false;
  }

  SparseVec reduce(SparseVec const& e) const {
    SparseVec out;
    for (auto const& [k, c] : e) {
      Word v = key_monomial(k, r_);
      if (killed(v)) {
        continue;
      }
      if (v.size() > depth_) {
        throw budget_exceeded("quasi-monomial module: degree beyond depth " +
                              std::to_string(depth_));
      }
      out.emplace(k, c);
    }
    return out;
  }

  SparseVec generator() const {
    return reduce({{0, 1}});
  }
  SparseVec basis(Word const& v) const {
    return reduce({{monomial_key(v, r_), 1}});
  }

  SparseVec act(SparseVec const& e, Letter x) const {
    return reduce(quasi_times_letter(e, x, alpha_, r_));
  }
  SparseVec act(SparseVec const& e, Word const& w) const {
    SparseVec out = e;
    for (Letter x : w) {
      out = act(out, x);
    }
    return out;
  }
  SparseVec act(SparseVec const& e, Poly const& p) const {
    SparseVec out;
    for (auto const& [k, c] : p.terms) {
      add_scaled(out, act(e, key_monomial(k, r_)), c);
    }
    return out;
  }

  //! Surviving words of length <= n, by a trie walk.
  GrowthSeries growth(std::size_t N) const {
    if (N > depth_) {
      throw budget_exceeded("quasi-monomial module: radius beyond depth");
    }
    std::vector<BigInt> level(N + 1, 0);
    Word                w;
    auto                walk = [&](auto&& self) -> void {
      if (killed(w)) {
        return;
      }
      level[w.size()] += 1;
      if (w.size() == N) {
        return;
      }
      for (Letter x = 1; x <= r_; ++x) {
        w.push_back(x);
        self(self);
        w.pop_back();
      }
    };
    walk(walk);
    GrowthSeries s{SeriesKind::monoid, r_, {}};
    BigInt       total = 0;
    for (auto const& l : level) {
      total += l;
      s.g.push_back(total);
    }
    return checked(std::move(s));
  }

  //! Same series from ranks: images of all monomials of degree <= n.
  GrowthSeries growth_by_rank(std::size_t N) const {
    GrowthSeries s{SeriesKind::monoid, r_, {}};
    Echelon      e;
    for (std::size_t n = 0; n <= N; ++n) {
      for (auto const& w : all_words(n, r_, WordMode::monoid)) {
        e.insert(reduce(quasi_convert(Poly::monomial(w, r_), alpha_)));
      }
      s.g.push_back(BigInt(e.rank()));
    }
    return checked(std::move(s));
  }

  //! Largest i with e in M Delta_1 ... Delta_i: every surviving component has degree >= i.
  std::size_t filtration_level(SparseVec const& e) const {
    std::size_t lvl = depth_ + 1;
    for (auto const& [k, c] : e) {
      lvl = std::min(lvl, key_degree(k, r_));
    }
    return lvl;
  }

 private:
  int            r_;
  AlphaTable     alpha_;
  std::size_t    depth_;
  std::set<Word> forbidden_;
};

//! Leading monomials v_i x1^(d_i - |v_i|) where v_1, v_2, ... run over all
//! words in ShortLex (v_1 empty) and d is strictly increasing with d_1 > 1.
inline std::vector<Word> residually_finite_leading_monomials(std::vector<std::size_t> const& d, int r,
                                                std::size_t depth) {
  if (d.empty() || d[0] <= 1) {
    throw contract_error("residually finite module: need 1 < d_1");
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] <= d[i - 1]) {
      throw contract_error("residually finite module: d must be strictly increasing");
    }
  }
  if (d.back() < depth) {
    throw contract_error("residually finite module: d-sequence must reach the depth " + std::to_string(depth));
  }
  std::vector<Word> out;
  for (std::size_t i = 1; i <= d.size() && d[i - 1] <= depth; ++i) {
    Word v = key_monomial(i - 1, r);
    if (v.size() > d[i - 1]) {
      throw contract_error("residually finite module: deg u_" + std::to_string(i) + " exceeds d_" + std::to_string(i));
    }
    v.insert(v.end(), d[i - 1] - v.size(), 1);
    out.push_back(std::move(v));
  }
  return out;
}

struct AnnihilatorWitness {
  SparseVec   w;
  std::size_t level = 0;  // w lies in M_level
  std::size_t s = 0, t = 0;
  bool        ok = false;
};

struct DeltaQuotient {
  std::size_t i = 0;
  std::size_t dim = 0;
  BigInt      bound;  // #monomials of degree < i
  bool        closed = true;  // M_i is spanned by the e_v with |v| >= i
};

struct ResiduallyFiniteReport {
  GrowthSeries                    growth;
  std::size_t                     rank_checked_to = 0;
  bool                            rank_agrees     = true;
  bool                            exceeds_free    = true;  // g(n) > r^n for n >= 1
  bool                            bound_ok        = true;  // g(n) > forbidden_prefix_bound
  std::vector<AnnihilatorWitness> witnesses;
  std::vector<DeltaQuotient>      delta_quotients;
  bool                            triangular = true;
  bool                            faithful_low_degree = true;

  bool ok() const {
    bool all = rank_agrees && exceeds_free && bound_ok && triangular && faithful_low_degree;
    for (auto const& w : witnesses) {
      all = all && w.ok;
    }
    for (auto const& q : delta_quotients) {
      all = all && q.closed && BigInt(q.dim) <= q.bound;
    }
    return all;
  }
};

struct ResiduallyFiniteModule {
  QuasiMonomialModule      module;
  std::vector<std::size_t> d;
};

//! Depth chosen so that every annihilator check stays materialized.
inline ResiduallyFiniteModule build_residually_finite_module(AlphaTable const& alpha, std::vector<std::size_t> const& d,
                                    int r, std::size_t depth) {
  return {QuasiMonomialModule(r, alpha, residually_finite_leading_monomials(d, r, depth), depth), d};
}

//! w (x1 - alpha(1, s)) ... (x1 - alpha(1, t)) with s = min(|v|+1), t = max d_j
//! over the components e_v = u_j of w.
inline AnnihilatorWitness annihilator_witness(ResiduallyFiniteModule const& M, SparseVec const& w) {
  auto const&        Q = M.module;
  AnnihilatorWitness out;
  out.w     = w;
  out.level = Q.filtration_level(w);
  out.s     = std::numeric_limits<std::size_t>::max();
  for (auto const& [k, c] : w) {
    std::size_t const j = static_cast<std::size_t>(k) + 1;
    if (j > M.d.size()) {
      throw contract_error("annihilator_witness: component beyond the d-sequence");
    }
    out.s = std::min(out.s, key_degree(k, Q.alphabet_rank()) + 1);
    out.t = std::max(out.t, M.d[j - 1]);
  }
  if (w.empty()) {
    out.s = out.t = 0;
    out.ok        = true;
    return out;
  }
  if (out.t > Q.depth()) {
    throw budget_exceeded("annihilator_witness: needs depth " + std::to_string(out.t));
  }
  SparseVec cur = w;
  for (std::size_t k = out.s; k <= out.t; ++k) {
    SparseVec next = Q.act(cur, 1);
    add_scaled(next, cur, -Q.alpha()(1, k));
    cur = std::move(next);
  }
  out.ok = cur.empty() && out.s > out.level;
  return out;
}

//! Checks (i)-(iv) of the residually finite construction plus low-degree faithfulness.
inline ResiduallyFiniteReport residually_finite_report(ResiduallyFiniteModule const& M, std::size_t N, std::uint64_t seed = 1,
                              std::size_t samples = 10, std::size_t rank_to = 6) {
  auto const& Q = M.module;
  int const   r = Q.alphabet_rank();
  ResiduallyFiniteReport  rep;
  rep.growth = Q.growth(N);
  std::vector<std::size_t> degrees;
  for (auto const& w : Q.forbidden()) {
    degrees.push_back(w.size());
  }
  // both inequalities are equalities at n = 0; the bound is strict once
  // some forbidden degree is <= n
  for (std::size_t n = 1; n <= N; ++n) {
    if (rep.growth.g[n] <= ipow(BigInt(r), n)) {
      rep.exceeds_free = false;
    }
  }
  for (std::size_t n = 0; n <= N; ++n) {
    bool const strict = std::any_of(degrees.begin(), degrees.end(),
                                    [n](std::size_t dj) { return dj <= n; });
    auto const bound  = forbidden_prefix_bound(degrees, r, n);
    if (strict ? rep.growth.g[n] <= bound : rep.growth.g[n] < bound) {
      rep.bound_ok = false;
    }
  }
  rep.rank_checked_to = std::min(N, rank_to);
  auto const by_rank  = Q.growth_by_rank(rep.rank_checked_to);
  for (std::size_t n = 0; n <= rep.rank_checked_to; ++n) {
    rep.rank_agrees = rep.rank_agrees && by_rank.g[n] == rep.growth.g[n];
  }

  // surviving basis words by degree, up to degree 3
  std::vector<std::vector<Word>> alive(4);
  for (std::size_t n = 0; n < alive.size(); ++n) {
    for (auto const& v : all_words(n, r, WordMode::monoid)) {
      if (!Q.killed(v)) {
        alive[n].push_back(v);
      }
    }
  }

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < samples; ++t) {
    std::size_t const level = t % 3;
    SparseVec         w;
    for (std::size_t c = 0, terms = 1 + rng() % 3; c < terms; ++c) {
      std::size_t const deg = level + rng() % (alive.size() - level);
      if (alive[deg].empty()) {
        continue;
      }
      auto const& v = alive[deg][rng() % alive[deg].size()];
      add_scaled(w, Q.basis(v), Rational(1 + static_cast<long long>(rng() % 5)));
    }
    if (w.empty()) {
      w = Q.basis(alive[level].empty() ? Word{} : alive[level].front());
    }
    rep.witnesses.push_back(annihilator_witness(M, w));
  }

  for (std::size_t i = 1; i <= 4 && i <= N; ++i) {
    DeltaQuotient dq;
    dq.i     = i;
    dq.bound = 0;
    for (std::size_t k = 0; k < i; ++k) {
      dq.bound += ipow(BigInt(r), k);
      for (auto const& v : all_words(k, r, WordMode::monoid)) {
        dq.dim += Q.killed(v) ? 0 : 1;
      }
    }
    // Delta_1 ... Delta_i is spanned by e_w with |w| >= i; its action on low
    // basis vectors must stay at degree >= i
    if (i + 2 <= Q.depth()) {
      for (auto const& w : all_words(i, r, WordMode::monoid)) {
        Poly const ew = quasi_monomial(w, Q.alpha(), r);
        for (std::size_t n = 0; n <= 2; ++n) {
          for (auto const& v : alive[n]) {
            if (Q.filtration_level(Q.act(Q.basis(v), ew)) < i) {
              dq.closed = false;
            }
          }
        }
      }
    }
    rep.delta_quotients.push_back(dq);
  }

  for (std::size_t n = 0; n + 1 <= N; ++n) {
    for (auto const& v : all_words(n, r, WordMode::monoid)) {
      if (Q.killed(v)) {
        continue;
      }
      Key const k = monomial_key(v, r);
      for (Letter x = 1; x <= r; ++x) {
        for (auto const& [kk, c] : Q.act(Q.basis(v), x)) {
          rep.triangular = rep.triangular && kk >= k;
        }
      }
    }
  }

  // no nonzero element of degree <= 3 acts as zero on the states of degree <= 3
  if (Q.depth() >= 6) {
    Echelon                  e;
    std::size_t              offset = 0;
    std::vector<SparseVec>   images(words_below(4, r));
    for (std::size_t n = 0; n <= 3; ++n) {
      for (auto const& v : alive[n]) {
        for (Key m = 0; m < images.size(); ++m) {
          for (auto const& [kk, c] : Q.act(Q.basis(v), key_monomial(m, r))) {
            images[m].emplace(offset * words_below(7, r) + kk, c);
          }
        }
        ++offset;
      }
    }
    for (auto const& img : images) {
      e.insert(img);
    }
    rep.faithful_low_degree = e.rank() == images.size();
  }
  return rep;
}

//! Co-growth of I inside R: c(n) = #{killed words of length <= n}.
inline CogrowthResult quasi_cogrowth(QuasiMonomialModule const& Q, std::size_t N) {
  int const      r = Q.alphabet_rank();
  CogrowthResult out;
  out.quotient_growth = Q.growth(N);
  out.free_growth     = GrowthSeries{SeriesKind::monoid, r, {}};
  BigInt total = 0, killed = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    for (auto const& v : all_words(n, r, WordMode::monoid)) {
      killed += Q.killed(v) ? 1 : 0;
    }
    total += ipow(BigInt(r), n);
    out.c.push_back(killed);
    out.free_growth.g.push_back(total);
    out.ratios.emplace_back(killed, total);
    if (total != out.quotient_growth.g[n] + killed) {
      out.identity_ok = false;
    }
  }
  out.free_growth = checked(std::move(out.free_growth));
  return out;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_QUASI_MONOMIAL_HPP

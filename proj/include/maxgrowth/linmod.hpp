#ifndef MAXGROWTH_LINMOD_HPP
#define MAXGROWTH_LINMOD_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "series.hpp"
#include "words.hpp"

namespace maxgrowth {

////////////////////////////////////////////////////////////////////////
// Sparse vectors and incremental row reduction
////////////////////////////////////////////////////////////////////////

using Key = std::uint64_t;

//! Finite linear combination of basis elements; zero coefficients are never stored.
using SparseVec = std::map<Key, Rational>;

inline void add_scaled(SparseVec& a, SparseVec const& b, Rational const& c) {
  if (c == 0) {
    return;
  }
  for (auto const& [k, v] : b) {
    auto [it, fresh] = a.try_emplace(k, 0);
    it->second += c * v;
    if (it->second == 0) {
      a.erase(it);
    }
  }
}

inline SparseVec scaled(SparseVec v, Rational const& c) {
  if (c == 0) {
    return {};
  }
  for (auto& [k, x] : v) {
    x *= c;
  }
  return v;
}

//! Row echelon form with the largest key of each row as its pivot.
class Echelon {
 public:
  std::size_t rank() const noexcept {
    return rows_.size();
  }

  //! Removes leading terms until the leading key is not a pivot.
  SparseVec reduce_leading(SparseVec v) const {
    while (!v.empty()) {
      auto lead = v.rbegin();
      auto it   = rows_.find(lead->first);
      if (it == rows_.end()) {
        break;
      }
      Rational const c = lead->second;
      add_scaled(v, it->second, -c);
    }
    return v;
  }

  //! Fully reduced representative: no key of the result is a pivot.
  SparseVec normal_form(SparseVec v) const {
    SparseVec out;
    while (!v.empty()) {
      auto lead = std::prev(v.end());
      auto it   = rows_.find(lead->first);
      if (it == rows_.end()) {
        out.insert(*lead);
        v.erase(lead);
      } else {
        add_scaled(v, it->second, -Rational(lead->second));
      }
    }
    return out;
  }

  bool contains(SparseVec const& v) const {
    return reduce_leading(v).empty();
  }

  //! True iff v was independent of the rows so far.
  bool insert(SparseVec const& v) {
    auto red = reduce_leading(v);
    if (red.empty()) {
      return false;
    }
    Rational const lead = red.rbegin()->second;
    Key const      k    = red.rbegin()->first;
    rows_.emplace(k, scaled(std::move(red), Rational(1) / lead));
    return true;
  }

  std::vector<Key> pivots() const {
    std::vector<Key> out;
    for (auto const& [k, row] : rows_) {
      out.push_back(k);
    }
    return out;
  }

 private:
  std::map<Key, SparseVec> rows_;
};

////////////////////////////////////////////////////////////////////////
// Free associative algebra: monomials keyed by ShortLex position
////////////////////////////////////////////////////////////////////////

//! Number of positive words of length < n.
inline Key words_below(std::size_t n, int r) {
  Key total = 0, p = 1;
  for (std::size_t k = 0; k < n; ++k) {
    total += p;
    p *= static_cast<Key>(r);
  }
  return total;
}

inline void check_monomial_degree(std::size_t n, int r) {
  // keep r^n well inside 64 bits
  long double bound = 1;
  for (std::size_t k = 0; k < n; ++k) {
    bound *= r;
  }
  if (bound > 1e17L) {
    throw budget_exceeded("monomial degree " + std::to_string(n) + " too large for rank " +
                          std::to_string(r));
  }
}

//! ShortLex position of a positive word (the empty word is 0).
inline Key monomial_key(Word const& w, int r) {
  check_monomial_degree(w.size(), r);
  Key lex = 0;
  for (Letter x : w) {
    lex = lex * static_cast<Key>(r) + static_cast<Key>(x - 1);
  }
  return words_below(w.size(), r) + lex;
}

inline Word key_monomial(Key k, int r) {
  std::size_t n = 0;
  Key         p = 1;
  while (k >= p) {
    k -= p;
    p *= static_cast<Key>(r);
    ++n;
  }
  Word w(n);
  for (std::size_t i = n; i-- > 0;) {
    w[i] = static_cast<Letter>(k % static_cast<Key>(r)) + 1;
    k /= static_cast<Key>(r);
  }
  return w;
}

inline std::size_t key_degree(Key k, int r) {
  std::size_t n = 0;
  Key         p = 1;
  while (k >= p) {
    k -= p;
    p *= static_cast<Key>(r);
    ++n;
  }
  return n;
}

//! Polynomial in the free associative algebra of rank r.
struct Poly {
  int       r = 2;
  SparseVec terms;

  static Poly monomial(Word const& w, int r, Rational const& c = 1) {
    Poly p{r, {}};
    if (c != 0) {
      p.terms.emplace(monomial_key(w, r), c);
    }
    return p;
  }
  static Poly constant(Rational const& c, int r) {
    return monomial({}, r, c);
  }
  bool is_zero() const noexcept {
    return terms.empty();
  }
  //! -1 for the zero polynomial.
  long long degree() const {
    return terms.empty() ? -1 : static_cast<long long>(key_degree(terms.rbegin()->first, r));
  }
  bool homogeneous() const {
    return terms.empty() ||
           key_degree(terms.begin()->first, r) == key_degree(terms.rbegin()->first, r);
  }
  //! Homogeneous components by degree.
  std::map<std::size_t, Poly> components() const {
    std::map<std::size_t, Poly> out;
    for (auto const& [k, c] : terms) {
      auto& p = out.try_emplace(key_degree(k, r), Poly{r, {}}).first->second;
      p.terms.emplace(k, c);
    }
    return out;
  }
  Poly& operator+=(Poly const& o) {
    add_scaled(terms, o.terms, 1);
    return *this;
  }
  Poly& operator-=(Poly const& o) {
    add_scaled(terms, o.terms, -1);
    return *this;
  }
  friend Poly operator+(Poly a, Poly const& b) {
    return a += b;
  }
  friend Poly operator-(Poly a, Poly const& b) {
    return a -= b;
  }
  friend Poly operator*(Poly const& a, Poly const& b) {
    Poly out{a.r, {}};
    for (auto const& [ka, ca] : a.terms) {
      Word const wa = key_monomial(ka, a.r);
      for (auto const& [kb, cb] : b.terms) {
        Word w = wa;
        auto wb = key_monomial(kb, a.r);
        w.insert(w.end(), wb.begin(), wb.end());
        add_scaled(out.terms, SparseVec{{monomial_key(w, a.r), 1}}, ca * cb);
      }
    }
    return out;
  }
  friend Poly operator*(Rational const& c, Poly p) {
    p.terms = scaled(std::move(p.terms), c);
    return p;
  }
  bool operator==(Poly const&) const = default;

  std::string str() const {
    if (terms.empty()) {
      return "0";
    }
    std::string out;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
      Word w = key_monomial(it->first, r);
      std::string mono;
      for (Letter x : w) {
        mono += (mono.empty() ? "x" : " x") + std::to_string(x);
      }
      std::string coeff = to_string(it->second);
      if (!out.empty()) {
        out += " + ";
      }
      if (mono.empty()) {
        out += coeff;
      } else if (it->second == 1) {
        out += mono;
      } else {
        out += "(" + coeff + ") " + mono;
      }
    }
    return out;
  }
};

inline Poly power(Poly const& p, std::size_t q) {
  Poly out = Poly::constant(1, p.r);
  for (std::size_t i = 0; i < q; ++i) {
    out = out * p;
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Modules given by rules on a tagged basis
////////////////////////////////////////////////////////////////////////

//! Basis element name: a kind letter, an integer index and a monomial.
struct BasisTag {
  char        kind = 'e';
  std::int64_t i   = 0;
  Word        u;
  auto operator<=>(BasisTag const&) const = default;

  std::string str() const {
    std::string s(1, kind);
    s += std::to_string(i);
    if (!u.empty()) {
      s += '[';
      for (std::size_t k = 0; k < u.size(); ++k) {
        s += (k ? " x" : "x") + std::to_string(u[k]);
      }
      s += ']';
    }
    return s;
  }
};

//! Linear combination of tags, as produced by a rule.
using TagVec = std::vector<std::pair<BasisTag, Rational>>;

//! A right module over the free associative algebra: tag . x_k = rule(tag, k).
//! Basis tags are interned to keys in order of first use.
class RuleModule {
 public:
  using Rule = std::function<TagVec(BasisTag const&, Letter)>;

  RuleModule(int r, Rule rule) : r_(r), rule_(std::move(rule)) {
    check_rank(r);
  }

  int alphabet_rank() const noexcept {
    return r_;
  }

  Key key(BasisTag const& t) {
    auto [it, fresh] = keys_.try_emplace(t, tags_.size());
    if (fresh) {
      tags_.push_back(t);
    }
    return it->second;
  }
  BasisTag const& tag(Key k) const {
    return tags_.at(k);
  }
  std::size_t interned() const noexcept {
    return tags_.size();
  }

  SparseVec vec(TagVec const& tv) {
    SparseVec v;
    for (auto const& [t, c] : tv) {
      add_scaled(v, SparseVec{{key(t), 1}}, c);
    }
    return v;
  }
  SparseVec vec(BasisTag const& t) {
    return {{key(t), 1}};
  }

  SparseVec apply(SparseVec const& v, Letter x) {
    if (x < 1 || x > r_) {
      throw contract_error("module action: letter out of range");
    }
    SparseVec out;
    for (auto const& [k, c] : v) {
      add_scaled(out, image(k, x), c);
    }
    return out;
  }
  SparseVec apply(SparseVec v, Word const& w) {
    for (Letter x : w) {
      v = apply(v, x);
    }
    return v;
  }
  SparseVec apply(SparseVec const& v, Poly const& p) {
    SparseVec out;
    for (auto const& [k, c] : p.terms) {
      add_scaled(out, apply(v, key_monomial(k, r_)), c);
    }
    return out;
  }

  std::string str(SparseVec const& v) const {
    if (v.empty()) {
      return "0";
    }
    std::string out;
    for (auto const& [k, c] : v) {
      if (!out.empty()) {
        out += " + ";
      }
      out += (c == 1 ? "" : "(" + to_string(c) + ") ") + tag(k).str();
    }
    return out;
  }

  //! The quotient by the span of all tags satisfying `drop`, which must be a submodule.
  RuleModule coordinate_quotient(std::function<bool(BasisTag const&)> drop) const {
    auto rule = rule_;
    return RuleModule(r_, [rule, drop](BasisTag const& t, Letter x) {
      TagVec out;
      if (drop(t)) {
        return out;
      }
      for (auto& term : rule(t, x)) {
        if (!drop(term.first)) {
          out.push_back(std::move(term));
        }
      }
      return out;
    });
  }

 private:
  SparseVec const& image(Key k, Letter x) {
    auto [it, fresh] = cache_.try_emplace({k, x});
    if (fresh) {
      it->second = vec(rule_(tags_.at(k), x));
    }
    return it->second;
  }

  int                                       r_;
  Rule                                      rule_;
  std::map<BasisTag, Key>                   keys_;
  std::vector<BasisTag>                     tags_;
  std::map<std::pair<Key, Letter>, SparseVec> cache_;
};

//! g(n) = dim span{a u : a in gens, |u| <= n}.
inline GrowthSeries module_growth(RuleModule& M, std::vector<SparseVec> const& gens, std::size_t N,
                                  std::size_t max_rank = 200'000) {
  Echelon                ball;
  std::vector<SparseVec> frontier;
  for (auto const& a : gens) {
    if (ball.insert(a)) {
      frontier.push_back(a);
    }
  }
  GrowthSeries s{SeriesKind::monoid, M.alphabet_rank(), {BigInt(ball.rank())}};
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<SparseVec> next;
    for (auto const& v : frontier) {
      for (Letter x = 1; x <= M.alphabet_rank(); ++x) {
        auto w = M.apply(v, x);
        if (ball.insert(w)) {
          next.push_back(std::move(w));
          if (ball.rank() > max_rank) {
            throw budget_exceeded("module_growth: ball dimension above " +
                                  std::to_string(max_rank));
          }
        }
      }
    }
    s.g.push_back(BigInt(ball.rank()));
    frontier = std::move(next);
  }
  return checked(std::move(s));
}

//! Free module of rank s: tags ('a', c, u) for c < s.
inline RuleModule free_module(int r, std::size_t s) {
  return RuleModule(r, [s](BasisTag const& t, Letter x) {
    if (t.kind != 'a' || t.i < 0 || static_cast<std::size_t>(t.i) >= s) {
      throw contract_error("free module: foreign basis tag " + t.str());
    }
    BasisTag out = t;
    out.u.push_back(x);
    return TagVec{{out, 1}};
  });
}

////////////////////////////////////////////////////////////////////////
// Extension examples
////////////////////////////////////////////////////////////////////////

inline void check_d_sequence(std::vector<std::size_t> const& d) {
  if (d.empty()) {
    throw contract_error("d-sequence must be nonempty");
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] <= d[i - 1]) {
      throw contract_error("d-sequence must be strictly increasing");
    }
  }
}

//! phi(1) = 1, phi(i) = 4 r^(d_i) for i > 1.
inline std::int64_t extension_phi(std::vector<std::size_t> const& d, int r, std::size_t i) {
  if (i == 1) {
    return 1;
  }
  if (i > d.size()) {
    throw contract_error("extension example: d-sequence too short for index " + std::to_string(i));
  }
  std::int64_t p = 4;
  for (std::size_t k = 0; k < d[i - 1]; ++k) {
    if (p > (std::int64_t{1} << 55) / r) {
      throw budget_exceeded("extension example: phi overflows");
    }
    p *= r;
  }
  return p;
}

enum class ExtensionKind { linear_pieces, no_nil_quotients };

//! Cyclic module with generator e1 ('e', 1).
//! linear_pieces: tags e_i, h_j, z_{i,u}; the submodule h_1 R and the quotient
//! by it both grow linearly while the whole module grows almost maximally.
//! no_nil_quotients: tags e_i, q_{i,u}; e_1 x_1^m = 0 forces finite dimension.
inline RuleModule build_extension_example(ExtensionKind kind, std::vector<std::size_t> const& d,
                                          int r) {
  check_d_sequence(d);
  if (r < 2) {
    throw contract_error("extension example needs r >= 2");
  }
  auto di = [d](std::int64_t i) {
    if (i < 1 || static_cast<std::size_t>(i) > d.size()) {
      throw contract_error("extension example: d-sequence too short for index " +
                           std::to_string(i));
    }
    return d[static_cast<std::size_t>(i - 1)];
  };
  if (kind == ExtensionKind::no_nil_quotients) {
    return RuleModule(r, [di](BasisTag const& t, Letter x) -> TagVec {
      if (t.kind == 'e') {
        if (x == 1) {
          return {{{'e', t.i + 1, {}}, 1}};
        }
        if (x == 2) {
          return {{{'q', t.i, {}}, 1}};
        }
        return {};
      }
      if (t.u.size() < di(t.i)) {
        BasisTag out = t;
        out.u.push_back(x);
        return {{out, 1}};
      }
      return {};
    });
  }
  // phi values up to the end of the d-sequence
  std::map<std::int64_t, std::int64_t> phi_inverse;
  for (std::size_t i = 1; i <= d.size(); ++i) {
    phi_inverse[extension_phi(d, r, i)] = static_cast<std::int64_t>(i);
  }
  // phi beyond the sequence is at least 4 r^(d_last + 1)
  std::int64_t phi_max = phi_inverse.rbegin()->first;
  if (d.size() > 1 && phi_max <= (std::int64_t{1} << 55) / r) {
    phi_max = phi_max * r - 1;
  }
  return RuleModule(r, [d, r, di, phi_inverse, phi_max](BasisTag const& t, Letter x) -> TagVec {
    switch (t.kind) {
      case 'e':
        if (x == 1) {
          return {{{'e', t.i + 1, {}}, 1}};
        }
        if (x == 2) {
          return {{{'e', t.i, {}}, 1},
                  {{'h', extension_phi(d, r, static_cast<std::size_t>(t.i)), {}}, 1}};
        }
        return {};
      case 'h': {
        if (x == 1) {
          return {{{'h', t.i + 1, {}}, 1}};
        }
        if (x != 2) {
          return {};
        }
        if (t.i > phi_max) {
          throw contract_error("extension example: d-sequence too short for h" +
                               std::to_string(t.i));
        }
        auto it = phi_inverse.find(t.i);
        if (it == phi_inverse.end()) {
          return {};
        }
        return {{{'z', it->second, {}}, 1}};
      }
      default:  // 'z': z_{phi(i),u} stored with index i
        if (t.u.size() < di(t.i)) {
          BasisTag out = t;
          out.u.push_back(x);
          return {{out, 1}};
        }
        return {};
    }
  });
}

//! r^(n-i-1) where i is least with n <= d_i: the lower bound on g_M(n) that
//! dominates alpha(n) r^n for any alpha below r^-(i+1) past d_(i-1).
inline BigInt extension_lower_bound(std::vector<std::size_t> const& d, int r, std::size_t n) {
  for (std::size_t i = 1; i <= d.size(); ++i) {
    if (n <= d[i - 1]) {
      return n >= i + 1 ? ipow(BigInt(r), n - i - 1) : BigInt(1);
    }
  }
  throw contract_error("extension_lower_bound: n beyond the d-sequence");
}

////////////////////////////////////////////////////////////////////////
// Graded submodules of free modules
////////////////////////////////////////////////////////////////////////

//! Key of (component c, monomial w) in the free module of rank s.
inline Key free_key(std::size_t c, Word const& w, int r, std::size_t s) {
  return monomial_key(w, r) * s + c;
}

//! Element of the free module of rank s, one polynomial per basis vector.
using FreeElement = std::vector<Poly>;

inline SparseVec to_sparse(FreeElement const& f, std::size_t s) {
  SparseVec v;
  for (std::size_t c = 0; c < f.size(); ++c) {
    for (auto const& [k, x] : f[c].terms) {
      v.emplace(k * s + c, x);
    }
  }
  return v;
}

//! Degree of a homogeneous element; contract_error otherwise.
inline std::size_t homogeneous_degree(FreeElement const& f) {
  long long deg = -1;
  for (auto const& p : f) {
    if (!p.homogeneous()) {
      throw contract_error("element is not homogeneous");
    }
    if (p.is_zero()) {
      continue;
    }
    if (deg >= 0 && p.degree() != deg) {
      throw contract_error("element is not homogeneous");
    }
    deg = p.degree();
  }
  if (deg < 0) {
    return 0;
  }
  return static_cast<std::size_t>(deg);
}

//! Per-degree echelon forms of the graded submodule generated by homogeneous elements.
struct GradedSubmodule {
  int                  r = 2;
  std::size_t          s = 1;
  std::vector<Echelon> degree;  // degree[k] spans N_k

  std::size_t dim(std::size_t k) const {
    return degree.at(k).rank();
  }
  //! Membership of an arbitrary element of degree <= top().
  bool contains(FreeElement const& f) const {
    std::map<std::size_t, FreeElement> parts;
    for (std::size_t c = 0; c < f.size(); ++c) {
      for (auto const& [k, piece] : f[c].components()) {
        auto& part = parts.try_emplace(k, FreeElement(s, Poly{r, {}})).first->second;
        part[c]    = piece;
      }
    }
    for (auto const& [k, part] : parts) {
      if (k >= degree.size()) {
        throw contract_error("graded membership: degree beyond the computed range");
      }
      if (!degree[k].contains(to_sparse(part, s))) {
        return false;
      }
    }
    return true;
  }
  std::size_t top() const {
    return degree.size() - 1;
  }
};

inline GradedSubmodule graded_submodule(std::vector<FreeElement> const& gens, int r, std::size_t s,
                                        std::size_t N) {
  check_rank(r);
  check_monomial_degree(N, r);
  GradedSubmodule out{r, s, std::vector<Echelon>(N + 1)};
  for (auto const& g : gens) {
    if (g.size() != s) {
      throw contract_error("graded submodule: element has wrong number of components");
    }
    bool zero = std::all_of(g.begin(), g.end(), [](Poly const& p) { return p.is_zero(); });
    if (zero) {
      continue;
    }
    std::size_t const d = homogeneous_degree(g);
    if (d > N) {
      continue;
    }
    std::vector<Word> layer{Word{}};
    for (std::size_t k = d; k <= N; ++k) {
      for (auto const& u : layer) {
        FreeElement gu(s, Poly{r, {}});
        for (std::size_t c = 0; c < s; ++c) {
          gu[c] = g[c] * Poly::monomial(u, r);
        }
        out.degree[k].insert(to_sparse(gu, s));
      }
      if (k == N) {
        break;
      }
      std::vector<Word> next;
      for (auto const& u : layer) {
        for (Letter x = 1; x <= r; ++x) {
          next.push_back(u);
          next.back().push_back(x);
        }
      }
      layer = std::move(next);
    }
  }
  return out;
}

struct CogrowthResult {
  std::vector<BigInt>   c;         // dim(N cap B(A,n))
  GrowthSeries          free_growth;
  GrowthSeries          quotient_growth;
  bool                  identity_ok = true;
  std::vector<Rational> ratios;  // c(n) / g_L(n)
};

//! Co-growth of a graded submodule N of the free module L of rank s. The
//! quotient growth is computed separately, by a ball search on normal forms.
inline CogrowthResult cogrowth(std::vector<FreeElement> const& sub_gens, int r, std::size_t s,
                               std::size_t N) {
  if (s == 0) {
    throw contract_error("cogrowth: rank must be positive");
  }
  auto const     sub = graded_submodule(sub_gens, r, s, N);
  CogrowthResult out;
  out.free_growth = GrowthSeries{SeriesKind::monoid, r, {}};
  BigInt c = 0, total = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    c += sub.dim(n);
    total += ipow(BigInt(r), n) * s;
    out.c.push_back(c);
    out.free_growth.g.push_back(total);
  }
  out.free_growth = checked(std::move(out.free_growth));
  // ball in L/N around the images of the basis, one degree at a time
  out.quotient_growth = GrowthSeries{SeriesKind::monoid, r, {}};
  std::vector<SparseVec> frontier;
  std::size_t            dim = 0;
  for (std::size_t cc = 0; cc < s; ++cc) {
    frontier.push_back(sub.degree[0].normal_form({{free_key(cc, {}, r, s), 1}}));
  }
  for (std::size_t n = 0; n <= N; ++n) {
    Echelon layer;  // graded: each sphere lives in its own degree
    std::vector<SparseVec> kept;
    for (auto const& v : frontier) {
      if (layer.insert(v)) {
        kept.push_back(v);
      }
    }
    dim += layer.rank();
    out.quotient_growth.g.push_back(BigInt(dim));
    if (n == N) {
      break;
    }
    std::vector<SparseVec> next;
    for (auto const& v : kept) {
      for (Letter x = 1; x <= r; ++x) {
        SparseVec w;
        for (auto const& [k, coef] : v) {
          std::size_t const cc   = static_cast<std::size_t>(k % s);
          Word              mono = key_monomial(k / s, r);
          mono.push_back(x);
          w.emplace(free_key(cc, mono, r, s), coef);
        }
        next.push_back(sub.degree[n + 1].normal_form(std::move(w)));
      }
    }
    frontier = std::move(next);
  }
  out.quotient_growth = checked(std::move(out.quotient_growth));
  for (std::size_t n = 0; n <= N; ++n) {
    if (out.free_growth.g[n] != out.quotient_growth.g[n] + out.c[n]) {
      out.identity_ok = false;
    }
    out.ratios.emplace_back(out.c[n], out.free_growth.g[n]);
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Golod-type bound and one nil-quotient step
////////////////////////////////////////////////////////////////////////

struct GolodReport {
  std::vector<std::size_t> p_dims;  // d_i = dim P_i
  std::vector<std::size_t> l_dims;  // dim L_n
  std::vector<BigInt>      bounds;  // sum_{i<=n} d_i r^(n-i)
  bool                     ok = true;
};

//! L = P R inside R, with P spanned by the given homogeneous polynomials.
inline GolodReport golod_bound_check(std::vector<Poly> const& P, int r, std::size_t N) {
  GolodReport          rep;
  std::vector<Echelon> pd(N + 1);
  std::vector<FreeElement> gens;
  for (auto const& p : P) {
    if (!p.homogeneous()) {
      throw contract_error("golod_bound_check: generator is not homogeneous");
    }
    if (p.is_zero() || static_cast<std::size_t>(p.degree()) > N) {
      continue;
    }
    pd[static_cast<std::size_t>(p.degree())].insert(p.terms);
    gens.push_back({p});
  }
  auto const L = graded_submodule(gens, r, 1, N);
  for (std::size_t n = 0; n <= N; ++n) {
    rep.p_dims.push_back(pd[n].rank());
    rep.l_dims.push_back(L.dim(n));
    BigInt b = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      b += BigInt(rep.p_dims[i]) * ipow(BigInt(r), n - i);
    }
    rep.bounds.push_back(b);
    if (BigInt(rep.l_dims[n]) > b) {
      rep.ok = false;
    }
  }
  return rep;
}

//! Homogeneous parts w_m of (s_1 v_1 + ... + s_k v_k)^q, one per multiplicity
//! vector m; the coefficients inside w_m do not depend on s.
inline std::vector<Poly> power_components(std::vector<Word> const& v, std::size_t q, int r) {
  std::map<std::vector<std::size_t>, Poly> parts;
  std::size_t const                        k = v.size();
  std::vector<std::size_t>                 seq(q, 0);
  for (bool done = false; !done;) {
    std::vector<std::size_t> m(k, 0);
    Word                     mono;
    for (auto i : seq) {
      ++m[i];
      mono.insert(mono.end(), v[i].begin(), v[i].end());
    }
    parts.try_emplace(m, Poly{r, {}}).first->second += Poly::monomial(mono, r);
    done = true;
    for (std::size_t pos = q; pos-- > 0;) {
      if (++seq[pos] < k) {
        done = false;
        break;
      }
      seq[pos] = 0;
    }
  }
  std::vector<Poly> out;
  for (auto& [m, p] : parts) {
    if (!p.is_zero()) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

struct NilStepResult {
  std::size_t       q = 0;
  std::vector<Poly> components;  // b w_m, generators of L
  GrowthSeries      module_growth;
  GrowthSeries      quotient_growth;
  bool              growth_ok = true;  // quotient >= c r^n for n <= N
  std::size_t       spot_checks = 0;
  bool              spot_ok     = true;
};

//! Smallest q >= 1 with 2 q^k <= (C - c) r^q.
inline std::size_t nil_step_exponent(Rational const& C, Rational const& c, std::size_t k, int r,
                                      std::size_t q_max = 4096) {
  if (!(c > 0 && c < C)) {
    throw contract_error("nil_step: need 0 < c < C");
  }
  for (std::size_t q = 1; q <= q_max; ++q) {
    if (Rational(2 * ipow(BigInt(q), k)) <= (C - c) * Rational(ipow(BigInt(r), q))) {
      return q;
    }
  }
  throw contract_error("nil_step: no exponent q <= " + std::to_string(q_max));
}

//! One step towards a nil quotient of M = R/J (J graded, generated by
//! homogeneous J_gens, generator a = 1 + J). L is generated by u w_m.
inline NilStepResult nil_step(std::vector<Poly> const& J_gens, Rational const& C, Word const& u,
                              std::vector<Word> const& v, Rational const& c, int r, std::size_t N,
                              std::uint64_t seed = 1, std::size_t samples = 5) {
  check_rank(r);
  if (r < 2) {
    throw contract_error("nil_step needs r >= 2");
  }
  if (v.empty()) {
    throw contract_error("nil_step: need at least one monomial v");
  }
  for (auto const& w : v) {
    check_letters(w, r, true);
    if (w.empty()) {
      throw contract_error("nil_step: monomials v must have degree >= 1");
    }
  }
  check_letters(u, r, true);
  NilStepResult out;
  out.q = nil_step_exponent(C, c, v.size(), r);
  for (auto const& w : power_components(v, out.q, r)) {
    out.components.push_back(Poly::monomial(u, r) * w);
  }
  std::size_t max_v = 0;
  for (auto const& w : v) {
    max_v = std::max(max_v, w.size());
  }
  std::size_t const top = std::max(N, u.size() + out.q * max_v);

  std::vector<FreeElement> jg, lg;
  for (auto const& p : J_gens) {
    jg.push_back({p});
  }
  lg = jg;
  for (auto const& p : out.components) {
    lg.push_back({p});
  }
  auto const J  = graded_submodule(jg, r, 1, N);
  auto const JL = graded_submodule(lg, r, 1, top);

  out.module_growth   = GrowthSeries{SeriesKind::monoid, r, {}};
  out.quotient_growth = GrowthSeries{SeriesKind::monoid, r, {}};
  BigInt gm = 0, gq = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    BigInt const all = ipow(BigInt(r), n);
    gm += all - J.dim(n);
    gq += all - JL.dim(n);
    out.module_growth.g.push_back(gm);
    out.quotient_growth.g.push_back(gq);
    Rational const rn = Rational(ipow(BigInt(r), n));
    if (Rational(gm) < C * rn) {
      throw contract_error("nil_step: certificate g_M(n) >= C r^n fails at n = " +
                           std::to_string(n));
    }
    if (Rational(gq) < c * rn) {
      out.growth_ok = false;
    }
  }
  out.module_growth   = checked(std::move(out.module_growth));
  out.quotient_growth = checked(std::move(out.quotient_growth));

  std::mt19937_64                    rng(seed);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (std::size_t t = 0; t < samples; ++t) {
    Poly sum{r, {}};
    for (auto const& w : v) {
      sum += Poly::monomial(w, r, Rational(coeff(rng), 1 + (rng() % 4)));
    }
    Poly const b = Poly::monomial(u, r) * power(sum, out.q);
    ++out.spot_checks;
    if (!JL.contains({b})) {
      out.spot_ok = false;
    }
  }
  return out;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_LINMOD_HPP

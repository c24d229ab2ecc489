#ifndef MAXGROWTH_COSET_GROWTH_HPP
#define MAXGROWTH_COSET_GROWTH_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "series.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace maxgrowth {

//! A coset vertex: a core vertex followed by a reduced forest path whose
//! first letter is missing from the core vertex's star.
struct CosetVertex {
  std::size_t core = 0;
  Word        tail;
  bool        operator==(CosetVertex const&) const = default;
  bool        in_core() const noexcept {
    return tail.empty();
  }
};

struct CosetVertexHash {
  std::size_t operator()(CosetVertex const& v) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(v.core) * 0x9e3779b97f4a7c15ULL;
    for (Letter x : v.tail) {
      h ^= std::hash<int>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

//! The coset graph F_r/H = core plus hanging trees, expanded on demand.
class LazyCosetGraph {
 public:
  explicit LazyCosetGraph(CoreAutomaton core)
      : core_(std::move(core)), dist_(core_.distances()) {}

  CoreAutomaton const& core() const noexcept {
    return core_;
  }

  CosetVertex origin() const {
    return {core_.base(), {}};
  }

  //! v . x
  CosetVertex act(CosetVertex v, Letter x) const {
    if (v.tail.empty()) {
      auto t = core_.target(v.core, x);
      if (t != no_vertex) {
        return {t, {}};
      }
      v.tail.push_back(x);
      return v;
    }
    push_reduced(v.tail, x);
    return v;
  }

  CosetVertex act(CosetVertex v, Word const& w) const {
    for (Letter x : w) {
      v = act(std::move(v), x);
    }
    return v;
  }

  //! H w as a coset vertex.
  CosetVertex coset(Word const& w) const {
    return act(origin(), w);
  }

  //! Distance from the base coset.
  std::size_t distance(CosetVertex const& v) const {
    return dist_[v.core] + v.tail.size();
  }

  std::size_t core_distance(std::size_t c) const {
    return dist_[c];
  }

 private:
  CoreAutomaton            core_;
  std::vector<std::size_t> dist_;
};

//! Closed-form ball sizes from the core and the deficit.
inline GrowthSeries growth_series_closed_form(CoreAutomaton const& core, std::size_t N) {
  int const    r    = core.alphabet_rank();
  auto const   def  = deficit(core);
  BigInt const q    = 2 * r - 1;
  GrowthSeries s{SeriesKind::group, r, {}};
  for (std::size_t n = 0; n <= N; ++n) {
    BigInt g = 0;
    for (std::size_t c = 0; c < core.size(); ++c) {
      std::size_t dc = def.distance[c];
      if (dc > n) {
        continue;
      }
      g += 1;
      if (dc < n && def.per_vertex[c] > 0) {
        // trees hanging at c contribute sum_{k=1}^{n-|c|} (2r-1)^(k-1) each
        BigInt tree = r == 1 ? BigInt(n - dc) : (ipow(q, n - dc) - 1) / (q - 1);
        g += BigInt(def.per_vertex[c]) * tree;
      }
    }
    s.g.push_back(g);
  }
  return checked(s);
}

//! Ball sizes by breadth-first search of the coset graph.
inline GrowthSeries growth_series_bfs(CoreAutomaton const& core, std::size_t N,
                                      std::size_t max_vertices = 20'000'000) {
  LazyCosetGraph G(core);
  std::unordered_set<CosetVertex, CosetVertexHash> seen;
  std::vector<CosetVertex>                         frontier{G.origin()};
  seen.insert(G.origin());
  GrowthSeries s{SeriesKind::group, core.alphabet_rank(), {BigInt(1)}};
  auto const   letters = letters_of(core.alphabet_rank());
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<CosetVertex> next;
    for (auto const& v : frontier) {
      for (Letter x : letters) {
        auto t = G.act(v, x);
        if (seen.insert(t).second) {
          if (seen.size() > max_vertices) {
            throw budget_exceeded("growth_series_bfs: more than " + std::to_string(max_vertices)
                                  + " vertices");
          }
          next.push_back(std::move(t));
        }
      }
    }
    s.g.push_back(s.g.back() + next.size());
    frontier = std::move(next);
  }
  return checked(s);
}

enum class GrowthMethod { closed_form, bfs };

inline GrowthSeries growth_series(CoreAutomaton const& core, std::size_t N,
                                  GrowthMethod method = GrowthMethod::closed_form) {
  return method == GrowthMethod::closed_form ? growth_series_closed_form(core, N)
                                             : growth_series_bfs(core, N);
}

//! g(n) = def/(2r-2) (2r-1)^n + f(n).
struct LeadingTermDecomposition {
  Rational              coefficient;
  std::vector<Rational> f;
  Rational              bound;          // max |f(n)| for n >= threshold
  std::size_t           threshold = 0;  // max core distance + 1
  bool                  constant_tail = true;
};

inline LeadingTermDecomposition leading_term_decompose(CoreAutomaton const& core, GrowthSeries const& s) {
  int const r = core.alphabet_rank();
  if (r < 2) {
    throw contract_error("leading_term_decompose: needs r >= 2");
  }
  LeadingTermDecomposition out;
  out.coefficient = deficit(core).total / (2 * r - 2);
  out.threshold   = core.radius() + 1;
  out.bound       = 0;
  BigInt const q  = 2 * r - 1;
  for (std::size_t n = 0; n < s.g.size(); ++n) {
    out.f.push_back(Rational(s.g[n]) - out.coefficient * Rational(ipow(q, n)));
    if (n >= out.threshold) {
      out.bound = std::max(out.bound, abs(out.f.back()));
      if (out.f.back() != out.f[out.threshold]) {
        out.constant_tail = false;
      }
    }
  }
  return out;
}

struct GrowthVerdict {
  bool                  maximal = false;
  Rational              certificate;  // c with g(n) >= c (2r-1)^n
  std::size_t           checked_from = 1;
  bool                  inequality_holds = true;
  std::vector<Rational> alpha_tail;
};

//! Maximal growth iff the deficit is positive; certificate def/(2r-1),
//! verified for 1 <= n <= N.
inline GrowthVerdict classify(CoreAutomaton const& core, std::size_t N) {
  int const     r   = core.alphabet_rank();
  auto const    def = deficit(core);
  auto const    s   = growth_series_closed_form(core, N);
  GrowthVerdict v;
  v.maximal     = def.total > 0;
  v.certificate = def.total / (2 * r - 1);
  BigInt const q = 2 * r - 1;
  for (std::size_t n = v.checked_from; n <= N; ++n) {
    if (Rational(s.g[n]) < v.certificate * Rational(ipow(q, n))) {
      v.inequality_holds = false;
    }
  }
  for (std::size_t n = N >= 4 ? N - 4 : 0; n <= N; ++n) {
    v.alpha_tail.push_back(s.alpha(n));
  }
  return v;
}

//! Upper bounds u(n) for the boundary measure of the rays of the geodesic
//! spanning tree: u(n) = t_n (2r-1)^-(n-1) / (2r), u(0) = t_0, where t_n
//! counts tree vertices at level n with a descendant at level N.
inline std::vector<Rational> boundary_measure_bounds(CoreAutomaton const& core, std::size_t N) {
  int const  r   = core.alphabet_rank();
  auto const def = deficit(core);
  std::size_t const n_core = core.size();
  // Breadth-first tree on the core; forest roots are children of their
  // core vertex automatically.
  std::vector<std::size_t> parent(n_core, no_vertex);
  std::vector<std::size_t> order{core.base()};
  std::vector<char>        seen(n_core, 0);
  seen[core.base()] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto v = order[i];
    for (Letter x : letters_of(r)) {
      auto t = core.target(v, x);
      if (t != no_vertex && !seen[t]) {
        seen[t]   = 1;
        parent[t] = v;
        order.push_back(t);
      }
    }
  }
  // extends[c]: c's subtree reaches level N.
  std::vector<char> extends(n_core, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto        c  = *it;
    std::size_t dc = def.distance[c];
    if (dc == N || (dc < N && def.per_vertex[c] > 0)) {
      extends[c] = 1;
    }
    if (extends[c] && parent[c] != no_vertex && dc <= N) {
      extends[parent[c]] = 1;
    }
  }
  for (std::size_t c = 0; c < n_core; ++c) {
    if (def.distance[c] > N) {
      extends[c] = 0;
    }
  }
  BigInt const          q = 2 * r - 1;
  std::vector<Rational> u;
  for (std::size_t n = 0; n <= N; ++n) {
    BigInt t = 0;
    for (std::size_t c = 0; c < n_core; ++c) {
      std::size_t dc = def.distance[c];
      if (dc == n && extends[c]) {
        t += 1;
      }
      if (dc < n && def.per_vertex[c] > 0) {
        t += BigInt(def.per_vertex[c]) * ipow(q, n - dc - 1);
      }
    }
    if (n == 0) {
      u.emplace_back(t);
    } else {
      u.emplace_back(t, ipow(q, n - 1) * (2 * r));
    }
  }
  return u;
}

struct FaithfulnessVerdict {
  bool        faithful = true;
  Word        u, v;  // a pair acting identically, when not faithful
  std::size_t cosets_scanned = 0;
};

//! Do distinct reduced words of length <= d act differently on the ball of
//! radius d + max core distance?
inline FaithfulnessVerdict faithfulness_scan(CoreAutomaton const& core, std::size_t d,
                                             std::size_t max_work = 50'000'000) {
  LazyCosetGraph           G(core);
  std::size_t const        R = d + core.radius();
  std::vector<CosetVertex> ball{G.origin()};
  std::unordered_set<CosetVertex, CosetVertexHash> seen{G.origin()};
  auto const letters = letters_of(core.alphabet_rank());
  for (std::size_t lo = 0, n = 0; n < R; ++n) {
    std::size_t hi = ball.size();
    for (std::size_t i = lo; i < hi; ++i) {
      for (Letter x : letters) {
        auto t = G.act(ball[i], x);
        if (seen.insert(t).second) {
          ball.push_back(std::move(t));
        }
      }
    }
    lo = hi;
  }
  auto words = all_words_upto(d, core.alphabet_rank(), WordMode::group);
  if (words.size() * ball.size() > max_work) {
    throw budget_exceeded("faithfulness_scan: work budget exceeded");
  }
  FaithfulnessVerdict verdict;
  verdict.cosets_scanned = ball.size();
  std::map<std::vector<CosetVertex>, Word, std::function<bool(std::vector<CosetVertex> const&,
                                                             std::vector<CosetVertex> const&)>>
      signatures([](auto const& a, auto const& b) {
        return std::lexicographical_compare(
            a.begin(), a.end(), b.begin(), b.end(), [](CosetVertex const& x, CosetVertex const& y) {
              return x.core != y.core ? x.core < y.core : shortlex_less(x.tail, y.tail);
            });
      });
  for (auto const& w : words) {
    std::vector<CosetVertex> sig;
    sig.reserve(ball.size());
    for (auto const& c : ball) {
      sig.push_back(G.act(c, w));
    }
    auto [it, fresh] = signatures.emplace(std::move(sig), w);
    if (!fresh) {
      verdict.faithful = false;
      verdict.u        = it->second;
      verdict.v        = w;
      return verdict;
    }
  }
  return verdict;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_COSET_GROWTH_HPP

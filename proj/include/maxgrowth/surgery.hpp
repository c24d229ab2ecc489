#ifndef MAXGROWTH_SURGERY_HPP
#define MAXGROWTH_SURGERY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coset_growth.hpp"
#include "numeric.hpp"
#include "series.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace maxgrowth {

////////////////////////////////////////////////////////////////////////
// Drafting graphs on top of a core
////////////////////////////////////////////////////////////////////////

namespace detail {

//! Core edges plus freely added paths, folded at the end.
struct Draft {
  int               r;
  std::size_t       n;
  std::vector<Edge> edges;

  explicit Draft(CoreAutomaton const& core)
      : r(core.alphabet_rank()), n(core.size()), edges(core.positive_edges()) {}

  //! Draws a path labelled w from `from`; ends at `to` when given, else at a new vertex.
  std::size_t path(std::size_t from, Word const& w, std::size_t to = no_vertex) {
    if (w.empty()) {
      if (to != no_vertex && to != from) {
        throw contract_error("draft: empty path between distinct vertices");
      }
      return from;
    }
    std::size_t prev = from;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t next = (i + 1 == w.size() && to != no_vertex) ? to : n++;
      edges.push_back({prev, w[i], next});
      prev = next;
    }
    return prev;
  }

  //! Edges reoriented to carry positive labels.
  std::vector<Edge> positive_edges() const {
    std::vector<Edge> out;
    for (auto const& e : edges) {
      out.push_back(e.letter > 0 ? e : Edge{e.dst, -e.letter, e.src});
    }
    return out;
  }

  FoldResult fold() const {
    return CoreBuilder::fold(r, n, 0, edges);
  }
};

inline Rational deficit_bound_squared(int r, std::size_t l) {
  return rpow(Rational(2 * r - 1), 4 - static_cast<std::int64_t>(l));
}

//! Smallest l with k^2 (2r-1)^(4-l) < eps^2, i.e. k (2r-1)^(2-l/2) < eps.
inline std::size_t attachment_length(int r, Rational const& eps, std::size_t k = 1) {
  std::size_t l = 1;
  while (Rational(k * k) * deficit_bound_squared(r, l) >= eps * eps) {
    ++l;
  }
  return l;
}

inline std::size_t core_diameter(CoreAutomaton const& core) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < core.size(); ++s) {
    std::vector<std::size_t> dist(core.size(), no_vertex);
    std::vector<std::size_t> queue{s};
    dist[s] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (Letter x : letters_of(core.alphabet_rank())) {
        auto t = core.target(queue[i], x);
        if (t != no_vertex && dist[t] == no_vertex) {
          dist[t] = dist[queue[i]] + 1;
          best    = std::max(best, dist[t]);
          queue.push_back(t);
        }
      }
    }
  }
  return best;
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////
// Elementary attachments
////////////////////////////////////////////////////////////////////////

enum class ElementaryKind { cycle, cycle_with_leg, arc };

//! Graph to attach: the label is the distinguished path q. Cycles and
//! cycles with a leg hang from `at`; an arc runs from `at` to `to`.
struct ElementarySpec {
  ElementaryKind kind = ElementaryKind::cycle;
  Word           label;
  std::size_t    at = 0;
  std::size_t    to = no_vertex;
};

struct AttachResult {
  CoreAutomaton core;
  Rational      delta;      // def(old) - def(new)
  Word          generator;  // new free factor
  std::size_t   length = 0;
};

inline AttachResult attach_elementary(CoreAutomaton const& core, ElementarySpec const& spec) {
  int const r = core.alphabet_rank();
  Word const& q = spec.label;
  check_letters(q, r);
  if (q.empty() || !is_reduced(q)) {
    throw contract_error("attach: label must be a nonempty reduced word");
  }
  if (spec.at >= core.size()) {
    throw contract_error("attach: vertex out of range");
  }
  auto free_at = [&](std::size_t v, Letter x) {
    if (core.target(v, x) != no_vertex) {
      throw contract_error("attach: label collision at vertex " + std::to_string(v));
    }
  };
  detail::Draft d(core);
  auto const    tree = schreier_basis(core).tree_words;
  Word          g;
  switch (spec.kind) {
    case ElementaryKind::cycle:
      if (!is_cyclically_reduced(q)) {
        throw contract_error("attach: cycle label must be cyclically reduced");
      }
      free_at(spec.at, q.front());
      free_at(spec.at, -q.back());
      d.path(spec.at, q, spec.at);
      g = multiply(multiply(tree[spec.at], q), inverse(tree[spec.at]));
      break;
    case ElementaryKind::cycle_with_leg: {
      auto [u, w] = cyclic_decompose(q);
      if (u.empty()) {
        throw contract_error("attach: leg label must have the form u w u^-1");
      }
      free_at(spec.at, q.front());
      auto j = d.path(spec.at, u);
      d.path(j, w, j);
      g = multiply(multiply(tree[spec.at], q), inverse(tree[spec.at]));
      break;
    }
    case ElementaryKind::arc:
      if (spec.to >= core.size() || spec.to == spec.at) {
        throw contract_error("attach: arc needs two distinct core vertices");
      }
      free_at(spec.at, q.front());
      free_at(spec.to, -q.back());
      d.path(spec.at, q, spec.to);
      g = multiply(multiply(tree[spec.at], q), inverse(tree[spec.to]));
      break;
  }
  AttachResult res{CoreAutomaton::from_edges(r, d.n, 0, d.positive_edges()), 0, g, q.size()};
  res.delta = deficit(core).total - deficit(res.core).total;
  if (res.delta < 0 || res.delta * res.delta > detail::deficit_bound_squared(r, q.size())) {
    throw postcondition_error("attach: deficit drop " + to_string(res.delta) + " out of bounds");
  }
  if (!membership(res.core, g) || !embed_check(core, res.core) ||
      subgroup_rank(res.core) != subgroup_rank(core) + 1) {
    throw postcondition_error("attach: free factor witness failed");
  }
  return res;
}

////////////////////////////////////////////////////////////////////////
// Power adjunction
////////////////////////////////////////////////////////////////////////

struct PowerResult {
  long long     n = 0;
  CoreAutomaton core;
  Word          u, w;  // g = u w u^-1
  long long     i = 0, j = 0;
  std::size_t   l = 0;
  Rational      drop;
};

//! Decides whether <g> meets H only trivially by tracing H u w^i.
//! Returns the smallest k > 0 with g^k in H, or 0 when none exists.
inline long long power_in_subgroup(CoreAutomaton const& core, Word const& g) {
  auto [u, w]   = cyclic_decompose(free_reduce(g, core.alphabet_rank()));
  LazyCosetGraph G(core);
  auto const     start = G.coset(u);
  auto           v     = start;
  long long const bound = 2 * static_cast<long long>(core.size()) + 10;
  bool            escaped = !start.in_core();
  for (long long i = 1; i <= bound; ++i) {
    v = G.act(std::move(v), w);
    if (v == start) {
      return i;
    }
    escaped = escaped || !v.in_core();
  }
  if (!escaped) {
    throw postcondition_error("power probe: orbit neither repeats nor leaves the core");
  }
  return 0;
}

//! H1 = H * <g^n> with def(H) - def(H1) <= epsilon.
inline PowerResult adjoin_power(CoreAutomaton const& core, Word const& g0, Rational const& epsilon) {
  int const r = core.alphabet_rank();
  check_letters(g0, r);
  Word const g = free_reduce(g0, r);
  if (g.empty()) {
    throw contract_error("adjoin_power: g is trivial");
  }
  Rational const def0 = deficit(core).total;
  if (epsilon <= 0 || epsilon >= def0) {
    throw contract_error("adjoin_power: need 0 < epsilon < deficit");
  }
  if (auto k = power_in_subgroup(core, g); k != 0) {
    throw contract_error("adjoin_power: g^" + std::to_string(k) + " already lies in H");
  }
  PowerResult res;
  std::tie(res.u, res.w) = cyclic_decompose(g);
  LazyCosetGraph G(core);
  auto const     start = G.coset(res.u);
  std::size_t const l0 = detail::attachment_length(r, epsilon);
  for (std::size_t l = l0; l < l0 + 16; ++l) {
    long long const cap = 4 * static_cast<long long>(core.size() + l + res.u.size() + 10);
    auto far = [&](Word const& step, long long& index) {
      auto v = start;
      for (long long i = 1; i <= cap; ++i) {
        v = G.act(std::move(v), step);
        if (v.tail.size() > l) {
          index = i;
          return v;
        }
      }
      throw postcondition_error("adjoin_power: orbit does not leave the core far enough");
    };
    long long i = 0, j = 0;
    auto      vi = far(res.w, i);
    auto      vj = far(inverse(res.w), j);
    j            = -j;
    detail::Draft d(core);
    auto          x = d.path(vi.core, vi.tail);
    d.path(vj.core, vj.tail, x);
    auto folded = d.fold().core;
    res.drop    = def0 - deficit(folded).total;
    if (res.drop > epsilon) {
      continue;
    }
    res.n    = i - j;
    res.i    = i;
    res.j    = j;
    res.l    = l;
    res.core = std::move(folded);
    if (res.drop < 0 || !membership(res.core, power(g, res.n)) || !embed_check(core, res.core) ||
        deficit(res.core).total <= 0 || subgroup_rank(res.core) != subgroup_rank(core) + 1) {
      throw postcondition_error("adjoin_power: witness check failed");
    }
    return res;
  }
  throw postcondition_error("adjoin_power: no admissible exponent found");
}

////////////////////////////////////////////////////////////////////////
// Tuple linking
////////////////////////////////////////////////////////////////////////

struct LinkResult {
  CoreAutomaton core;
  Word          b;
  Word          w, w_prime;
  std::size_t   m = 0, l = 0, attempts = 0;
  Rational      drop;
};

//! Finds H1 >= H (free factor) and b with H1 g_i b = H1 g'_i for every i.
inline LinkResult link_tuples(CoreAutomaton const& core, std::vector<Word> const& from,
                              std::vector<Word> const& to, Rational const& epsilon,
                              std::uint64_t seed, std::size_t samples_per_length = 256) {
  int const r = core.alphabet_rank();
  if (from.size() != to.size() || from.empty()) {
    throw contract_error("link_tuples: tuples must be nonempty and of equal length");
  }
  std::size_t const k = from.size();
  LazyCosetGraph    G(core);
  std::vector<CosetVertex> c, c2;
  for (std::size_t i = 0; i < k; ++i) {
    check_letters(from[i], r);
    check_letters(to[i], r);
    c.push_back(G.coset(free_reduce(from[i], r)));
    c2.push_back(G.coset(free_reduce(to[i], r)));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (c[i] == c[j] || c2[i] == c2[j]) {
        throw contract_error("link_tuples: repeated coset in a tuple");
      }
    }
  }
  LinkResult res{core, {}, {}, {}, 0, 0, 0, 0};
  if (c == c2) {
    return res;
  }
  Rational const def0 = deficit(core).total;
  if (epsilon <= 0 || epsilon >= def0) {
    throw contract_error("link_tuples: need 0 < epsilon < deficit");
  }
  res.l = detail::attachment_length(r, epsilon, k);
  std::size_t const m0 = std::max<std::size_t>({8 * res.l, 4 * detail::core_diameter(core), 8});
  std::mt19937_64   rng(seed);

  // Vertices on the last floor(m/4)+1 edges of the path from s labelled w.
  auto tail_vertices = [&](CosetVertex s, Word const& w, std::size_t keep,
                           std::vector<CosetVertex>& out) {
    std::vector<CosetVertex> trail{s};
    for (Letter x : w) {
      trail.push_back(G.act(trail.back(), x));
    }
    out.assign(trail.end() - static_cast<std::ptrdiff_t>(keep + 1), trail.end());
  };

  for (std::size_t m = m0; m <= 16 * m0; m *= 2) {
    std::size_t const keep = m / 4 + 1;
    for (std::size_t s = 0; s < samples_per_length; ++s) {
      ++res.attempts;
      Word w  = sample_reduced(m, r, rng);
      Word w2 = sample_reduced(m, r, rng);
      if (w.back() == w2.back()) {
        continue;
      }
      bool                                                    generic = true;
      std::unordered_set<CosetVertex, CosetVertexHash>        used;
      std::vector<CosetVertex>                                ends;
      std::vector<CosetVertex>                                part;
      for (std::size_t i = 0; i < 2 * k && generic; ++i) {
        tail_vertices(i < k ? c[i] : c2[i - k], i < k ? w : w2, keep, part);
        for (auto const& v : part) {
          if (v.in_core() || !used.insert(v).second) {
            generic = false;
            break;
          }
        }
        ends.push_back(part.back());
      }
      if (!generic) {
        continue;
      }
      detail::Draft d(core);
      for (std::size_t i = 0; i < k; ++i) {
        auto x = d.path(ends[i].core, ends[i].tail);
        d.path(ends[k + i].core, ends[k + i].tail, x);
      }
      res.core    = d.fold().core;
      res.b       = multiply(w, inverse(w2));
      res.w       = std::move(w);
      res.w_prime = std::move(w2);
      res.m       = m;
      res.drop    = def0 - deficit(res.core).total;
      LazyCosetGraph G1(res.core);
      for (std::size_t i = 0; i < k; ++i) {
        if (!(G1.coset(multiply(from[i], res.b)) == G1.coset(to[i]))) {
          throw postcondition_error("link_tuples: transitivity witness failed");
        }
      }
      if (res.drop < 0 || res.drop > epsilon ||
          res.drop * res.drop > Rational(k * k) * detail::deficit_bound_squared(r, res.l) ||
          !embed_check(core, res.core)) {
        throw postcondition_error("link_tuples: deficit or embedding check failed");
      }
      return res;
    }
  }
  throw budget_exceeded("link_tuples: no generic sample after " + std::to_string(res.attempts) +
                        " attempts (m up to " + std::to_string(16 * m0) + ", l = " +
                        std::to_string(res.l) + ")");
}

////////////////////////////////////////////////////////////////////////
// Towers
////////////////////////////////////////////////////////////////////////

enum class StepKind { power_adjoin, tuple_link };

struct TowerRequest {
  StepKind          kind = StepKind::power_adjoin;
  Word              g;         // power step
  std::vector<Word> from, to;  // link step
};

struct TowerStep {
  StepKind      kind;
  Rational      epsilon;
  Rational      deficit_before;
  Rational      deficit_after;
  long long     n = 0;  // power step exponent
  Word          b;      // link step connecting element
  CoreAutomaton core;
};

struct TowerResult {
  std::vector<CoreAutomaton> cores;
  std::vector<TowerStep>     steps;
  std::string                error;
  bool                       complete() const {
    return error.empty();
  }
};

//! Runs the plan with epsilon_i = c / 3^(i+1); every witness is rechecked
//! against the final core.
inline TowerResult tower(CoreAutomaton const& core, std::vector<TowerRequest> const& plan,
                         std::uint64_t seed = 1) {
  TowerResult    res;
  Rational const c = deficit(core).total;
  if (c <= 0) {
    throw contract_error("tower: core must have positive deficit");
  }
  res.cores.push_back(core);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    auto const& cur = res.cores.back();
    TowerStep   st{plan[i].kind, c / rpow(Rational(3), i + 1), deficit(cur).total, 0, 0, {}, cur};
    try {
      if (plan[i].kind == StepKind::power_adjoin) {
        auto p  = adjoin_power(cur, plan[i].g, st.epsilon);
        st.n    = p.n;
        st.core = std::move(p.core);
      } else {
        auto p  = link_tuples(cur, plan[i].from, plan[i].to, st.epsilon, seed + i);
        st.b    = std::move(p.b);
        st.core = std::move(p.core);
      }
    } catch (std::exception const& e) {
      res.error = "step " + std::to_string(i) + ": " + e.what();
      return res;
    }
    st.deficit_after = deficit(st.core).total;
    if (st.deficit_after < st.deficit_before - st.epsilon || st.deficit_after <= c / 2) {
      res.error = "step " + std::to_string(i) + ": deficit fell below the schedule";
      return res;
    }
    res.cores.push_back(st.core);
    res.steps.push_back(std::move(st));
  }
  auto const&    last = res.cores.back();
  LazyCosetGraph G(last);
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    auto const& st = res.steps[i];
    bool        ok = embed_check(res.cores[i], res.cores[i + 1]).ok;
    if (st.kind == StepKind::power_adjoin) {
      ok = ok && membership(last, power(plan[i].g, st.n));
    } else {
      for (std::size_t j = 0; j < plan[i].from.size(); ++j) {
        ok = ok && G.coset(multiply(plan[i].from[j], st.b)) == G.coset(plan[i].to[j]);
      }
    }
    if (!ok) {
      res.error = "step " + std::to_string(i) + ": witness fails in the final core";
      return res;
    }
  }
  return res;
}

////////////////////////////////////////////////////////////////////////
// Basis change experiment
////////////////////////////////////////////////////////////////////////

struct BasisChangeResult {
  GrowthSeries             series_a;  // basis a_1, ..., a_r; exact to depth
  GrowthSeries             series_b;  // basis a_1, a_1 a_2, a_3, ...; exact to radius (depth-1)/2
  std::size_t              exact_radius_b = 0;
  std::vector<std::size_t> level_sizes;
  std::vector<std::size_t> z_counts;  // #Z(n) for n <= depth; phi(Z(n)) lies in the b-ball of radius n
  std::size_t              paired_edges = 0;
};

namespace detail {

//! Prefix tree of the symmetrized image set; nodes are vertices of the action.
class WordTrie {
 public:
  explicit WordTrie(int r, std::size_t max_nodes) : sigma_(2 * r), max_nodes_(max_nodes) {
    add_node(no_index, 0, 0);
  }

  static constexpr std::uint32_t no_index = 0xffffffffu;

  std::size_t size() const noexcept {
    return parent_.size();
  }
  std::uint32_t child(std::uint32_t v, int k) const {
    return child_[static_cast<std::size_t>(v) * sigma_ + k];
  }
  std::uint32_t parent(std::uint32_t v) const {
    return parent_[v];
  }
  int last(std::uint32_t v) const {
    return last_[v];
  }
  std::size_t level(std::uint32_t v) const {
    return level_[v];
  }

  std::uint32_t descend(std::uint32_t v, int k) {
    auto c = child(v, k);
    if (c == no_index) {
      c = add_node(v, k, level_[v] + 1);
      child_[static_cast<std::size_t>(v) * sigma_ + k] = c;
    }
    return c;
  }

  //! Nodes of each level in ShortLex order.
  std::vector<std::vector<std::uint32_t>> levels() const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t>              stack{0};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (out.size() <= level_[v]) {
        out.resize(level_[v] + 1);
      }
      out[level_[v]].push_back(v);
      for (int k = sigma_ - 1; k >= 0; --k) {
        if (auto c = child(v, k); c != no_index) {
          stack.push_back(c);
        }
      }
    }
    return out;
  }

 private:
  std::uint32_t add_node(std::uint32_t p, int k, std::uint32_t lev) {
    if (parent_.size() >= std::min<std::size_t>(max_nodes_, no_index - 1)) {
      throw budget_exceeded("word trie: more than " + std::to_string(max_nodes_) + " vertices");
    }
    parent_.push_back(p);
    last_.push_back(static_cast<std::int8_t>(k));
    level_.push_back(lev);
    child_.resize(child_.size() + sigma_, no_index);
    return static_cast<std::uint32_t>(parent_.size() - 1);
  }

  int                        sigma_;
  std::size_t                max_nodes_;
  std::vector<std::uint32_t> child_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::int8_t>   last_;
  std::vector<std::uint32_t> level_;
};

//! Depth-first walk over Z inserting every truncated, letter-flipped image.
class ImageCollector {
 public:
  ImageCollector(int r, ZParams const& p, std::size_t depth, WordTrie& trie)
      : r_(r), p_(p), depth_(depth), trie_(trie), freq_(r, p.epsilon),
        masks_(std::size_t{1} << r) {}

  void run() {
    std::vector<std::uint32_t> nodes(masks_, 0);
    visit(Word{}, nodes);
  }

 private:
  Letter flip(Letter y, std::size_t mask) const {
    return (mask >> (std::abs(y) - 1)) & 1u ? -y : y;
  }

  void visit(Word const& phi, std::vector<std::uint32_t> const& nodes) {
    for (Letter x : letters_of(r_)) {
      if (!word_.empty() && word_.back() == -x) {
        continue;
      }
      freq_.push(x);
      word_.push_back(x);
      if (word_.size() < p_.l || freq_.balanced()) {
        Word                       next  = phi;
        std::vector<std::uint32_t> moved = nodes;
        for (Letter y : apply_nielsen(Word{x})) {
          bool const cancel = !next.empty() && next.back() == -y;
          for (std::size_t m = 0; m < masks_; ++m) {
            if (cancel) {
              if (next.size() <= depth_) {
                moved[m] = trie_.parent(moved[m]);
              }
            } else if (next.size() < depth_) {
              moved[m] = trie_.descend(moved[m], letter_index(flip(y, m)));
            }
          }
          if (cancel) {
            next.pop_back();
          } else {
            next.push_back(y);
          }
        }
        // A single extension cancels at most one letter, and never two in a
        // row, so once |phi| > depth + 1 the first depth letters are final.
        if (next.size() + 1 < phi.size()) {
          throw postcondition_error("image shrank by more than one letter");
        }
        if (next.size() <= depth_ + 1) {
          visit(next, moved);
        }
      }
      word_.pop_back();
      freq_.pop();
    }
  }

  int              r_;
  ZParams          p_;
  std::size_t      depth_;
  WordTrie&        trie_;
  FrequencyTracker freq_;
  std::size_t      masks_;
  Word             word_;
};

}  // namespace detail

//! #Z(n) for n <= N: reduced words whose prefixes of length >= l are balanced.
inline std::vector<std::size_t> count_z_words(int r, ZParams const& zp, std::size_t N) {
  std::vector<std::size_t> counts(N + 1, 0);
  FrequencyTracker         freq(r, zp.epsilon);
  Word                     w;
  auto                     visit = [&](auto&& self) -> void {
    ++counts[w.size()];
    if (w.size() == N) {
      return;
    }
    for (Letter x : letters_of(r)) {
      if (!w.empty() && w.back() == -x) {
        continue;
      }
      freq.push(x);
      w.push_back(x);
      if (w.size() < zp.l || freq.balanced()) {
        self(self);
      }
      w.pop_back();
      freq.pop();
    }
  };
  visit(visit);
  return counts;
}

//! Builds the truncated transitive action whose Schreier tree is the
//! prefix closure of the symmetrized images phi(Z), and counts balls in
//! both bases.
inline BasisChangeResult basis_change_experiment(int r, ZParams const& zp, std::size_t depth,
                                                 std::size_t max_vertices = 20'000'000) {
  check_rank(r);
  if (r < 2 || r > 4) {
    throw contract_error("basis_change_experiment: r must be 2, 3 or 4");
  }
  if (depth < 1 || depth > 64) {
    throw contract_error("basis_change_experiment: depth must lie in [1, 64]");
  }
  int const         sigma = 2 * r;
  detail::WordTrie  trie(r, max_vertices);
  detail::ImageCollector collect(r, zp, depth, trie);
  collect.run();

  using detail::WordTrie;
  std::size_t const                   n = trie.size();
  std::vector<std::uint32_t>          adj(n * sigma, WordTrie::no_index);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (int k = 0; k < sigma; ++k) {
      if (auto c = trie.child(v, k); c != WordTrie::no_index) {
        adj[static_cast<std::size_t>(v) * sigma + k]                            = c;
        adj[static_cast<std::size_t>(c) * sigma + letter_index(-index_letter(k))] = v;
      }
    }
  }
  BasisChangeResult res;
  auto const        levels = trie.levels();
  for (std::size_t lev = 0; lev < levels.size(); ++lev) {
    res.level_sizes.push_back(levels[lev].size());
    if (lev >= depth) {
      continue;  // deficits on the last level are not yet determined
    }
    for (Letter x = 1; x <= r; ++x) {
      int const                  kx = letter_index(x), ky = letter_index(-x);
      std::vector<std::uint32_t> xs, ys;
      for (auto v : levels[lev]) {
        if (adj[static_cast<std::size_t>(v) * sigma + kx] == WordTrie::no_index) {
          xs.push_back(v);
        }
        if (adj[static_cast<std::size_t>(v) * sigma + ky] == WordTrie::no_index) {
          ys.push_back(v);
        }
      }
      if (xs.size() != ys.size()) {
        throw postcondition_error("basis_change_experiment: pairing infeasible at level " +
                                  std::to_string(lev));
      }
      for (std::size_t i = 0; i < xs.size(); ++i) {
        adj[static_cast<std::size_t>(xs[i]) * sigma + kx] = ys[i];
        adj[static_cast<std::size_t>(ys[i]) * sigma + ky] = xs[i];
      }
      res.paired_edges += xs.size();
    }
  }

  res.series_a = GrowthSeries{SeriesKind::group, r, {}};
  BigInt total = 0;
  for (std::size_t lev = 0; lev <= depth; ++lev) {
    total += lev < res.level_sizes.size() ? res.level_sizes[lev] : 0;
    res.series_a.g.push_back(total);
  }
  res.series_a = checked(std::move(res.series_a));

  // Balls in the basis b_1 = a_1, b_2 = a_1 a_2, b_i = a_i.
  std::size_t const radius = (depth - 1) / 2;
  res.exact_radius_b        = radius;
  auto b_move = [&](std::uint32_t v, Letter y) {
    for (Letter a : apply_nielsen(Word{y})) {
      v = adj[static_cast<std::size_t>(v) * sigma + letter_index(a)];
      if (v == WordTrie::no_index) {
        throw postcondition_error("basis_change_experiment: truncated edge inside exact radius");
      }
    }
    return v;
  };
  std::vector<std::uint32_t> dist(n, WordTrie::no_index);
  std::vector<std::uint32_t> frontier{0};
  dist[0]      = 0;
  res.series_b = GrowthSeries{SeriesKind::group, r, {1}};
  std::size_t seen = 1;
  for (std::size_t rad = 1; rad <= radius; ++rad) {
    std::vector<std::uint32_t> next;
    for (auto v : frontier) {
      for (Letter y : letters_of(r)) {
        auto t = b_move(v, y);
        if (dist[t] == WordTrie::no_index) {
          dist[t] = static_cast<std::uint32_t>(rad);
          next.push_back(t);
        }
      }
    }
    seen += next.size();
    res.series_b.g.push_back(seen);
    frontier = std::move(next);
  }
  res.series_b = checked(std::move(res.series_b));
  res.z_counts = count_z_words(r, zp, depth);
  for (std::size_t rad = 0; rad <= radius; ++rad) {
    if (res.series_b.g[rad] < res.z_counts[rad]) {
      throw postcondition_error("basis_change_experiment: b-ball smaller than #Z(n)");
    }
  }
  return res;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_SURGERY_HPP

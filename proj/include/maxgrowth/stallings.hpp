#ifndef MAXGROWTH_STALLINGS_HPP
#define MAXGROWTH_STALLINGS_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "words.hpp"

namespace maxgrowth {

inline constexpr std::size_t no_vertex = std::numeric_limits<std::size_t>::max();

//! A labelled edge src --letter--> dst.
struct Edge {
  std::size_t src;
  Letter      letter;
  std::size_t dst;
  bool        operator==(Edge const&) const = default;
};

//! Folded core graph of a finitely generated subgroup of F_r.
//!
//! Vertices are numbered by breadth-first discovery from the base (which is
//! therefore vertex 0), expanding letters in the order 1 < -1 < 2 < -2 < ...
//! Two cores are isomorphic exactly when they compare equal.
class CoreAutomaton {
 public:
  explicit CoreAutomaton(int r = 2) : r_(r), out_(1, std::vector<std::size_t>(2 * r, no_vertex)) {
    check_rank(r);
  }

  int alphabet_rank() const noexcept {
    return r_;
  }
  std::size_t size() const noexcept {
    return out_.size();
  }
  std::size_t base() const noexcept {
    return 0;
  }

  //! Target of the x-edge at v, or no_vertex.
  std::size_t target(std::size_t v, Letter x) const {
    return out_[v][letter_index(x)];
  }

  //! Star size; a loop counts twice.
  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (auto t : out_[v]) {
      d += t != no_vertex ? 1 : 0;
    }
    return d;
  }

  //! Edges with positive labels, sorted by (src, letter).
  std::vector<Edge> positive_edges() const {
    std::vector<Edge> out;
    for (std::size_t v = 0; v < size(); ++v) {
      for (Letter x = 1; x <= r_; ++x) {
        if (auto t = target(v, x); t != no_vertex) {
          out.push_back({v, x, t});
        }
      }
    }
    return out;
  }

  //! End of the path labelled w from v, or no_vertex if it leaves the core.
  std::size_t read(std::size_t v, Word const& w) const {
    for (Letter x : w) {
      if (v == no_vertex) {
        return no_vertex;
      }
      v = target(v, x);
    }
    return v;
  }

  //! Length of the longest prefix of w readable from v, and its endpoint.
  std::pair<std::size_t, std::size_t> read_prefix(std::size_t v, Word const& w) const {
    std::size_t i = 0;
    for (; i < w.size(); ++i) {
      auto t = target(v, w[i]);
      if (t == no_vertex) {
        break;
      }
      v = t;
    }
    return {i, v};
  }

  //! Breadth-first distances from the base.
  std::vector<std::size_t> distances() const {
    std::vector<std::size_t> dist(size(), no_vertex);
    std::deque<std::size_t>  queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto t : out_[v]) {
        if (t != no_vertex && dist[t] == no_vertex) {
          dist[t] = dist[v] + 1;
          queue.push_back(t);
        }
      }
    }
    return dist;
  }

  //! max |v| over core vertices.
  std::size_t radius() const {
    std::size_t m = 0;
    for (auto d : distances()) {
      m = std::max(m, d);
    }
    return m;
  }

  bool operator==(CoreAutomaton const&) const = default;

  //! Builds a core from a graph that is already folded and trimmed.
  //! Validates every invariant and renumbers canonically.
  static CoreAutomaton from_edges(int r, std::size_t n, std::size_t base,
                                  std::vector<Edge> const& edges);

 private:
  friend struct CoreBuilder;

  int                                   r_;
  std::vector<std::vector<std::size_t>> out_;
};

//! Result of folding an arbitrary labelled graph.
struct FoldResult {
  CoreAutomaton core;
  //! Image of each input vertex in the core; no_vertex if trimmed away.
  std::vector<std::size_t> vertex_map;
};

struct CoreBuilder {
  //! Folds a labelled graph (edges with any nonzero labels), trims hanging
  //! trees away from the base, and renumbers canonically.
  static FoldResult fold(int r, std::size_t n, std::size_t base, std::vector<Edge> const& edges) {
    check_rank(r);
    if (base >= n) {
      throw contract_error("fold: base vertex out of range");
    }
    int const                             sigma = 2 * r;
    std::vector<std::size_t>              parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::vector<std::size_t>> out(n, std::vector<std::size_t>(sigma, no_vertex));
    auto find = [&](std::size_t v) {
      while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v         = parent[v];
      }
      return v;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pending;
    auto add_half = [&](std::size_t u, int a, std::size_t v) {
      u = find(u);
      if (out[u][a] == no_vertex) {
        out[u][a] = v;
      } else {
        pending.emplace_back(out[u][a], v);
      }
    };
    auto drain = [&]() {
      while (!pending.empty()) {
        auto [a, b] = pending.back();
        pending.pop_back();
        a = find(a);
        b = find(b);
        if (a == b) {
          continue;
        }
        if (a > b) {
          std::swap(a, b);
        }
        parent[b] = a;
        for (int k = 0; k < sigma; ++k) {
          if (out[b][k] != no_vertex) {
            add_half(a, k, out[b][k]);
            out[b][k] = no_vertex;
          }
        }
      }
    };
    for (auto const& e : edges) {
      if (e.src >= n || e.dst >= n) {
        throw contract_error("fold: edge endpoint out of range");
      }
      if (e.letter == 0 || e.letter > r || e.letter < -r) {
        throw contract_error("fold: edge label out of range");
      }
      add_half(e.src, letter_index(e.letter), e.dst);
      add_half(e.dst, letter_index(-e.letter), e.src);
      drain();
    }
    // Resolve targets to representatives.
    for (std::size_t v = 0; v < n; ++v) {
      if (find(v) != v) {
        continue;
      }
      for (int k = 0; k < sigma; ++k) {
        if (out[v][k] != no_vertex) {
          out[v][k] = find(out[v][k]);
        }
      }
    }
    // Trim degree-one vertices other than the base.
    std::size_t const        root = find(base);
    std::vector<std::size_t> deg(n, 0);
    std::vector<char>        alive(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (find(v) == v) {
        alive[v] = 1;
        for (int k = 0; k < sigma; ++k) {
          deg[v] += out[v][k] != no_vertex ? 1 : 0;
        }
      }
    }
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v] && v != root && deg[v] <= 1) {
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (!alive[v]) {
        continue;
      }
      alive[v] = 0;
      for (int k = 0; k < sigma; ++k) {
        auto t = out[v][k];
        if (t == no_vertex) {
          continue;
        }
        out[v][k]                          = no_vertex;
        out[t][letter_index(-index_letter(k))] = no_vertex;
        if (t != v) {
          --deg[t];
          if (alive[t] && t != root && deg[t] <= 1) {
            stack.push_back(t);
          }
        }
      }
    }
    // Canonical renumbering by BFS from the root.
    std::vector<std::size_t> number(n, no_vertex);
    std::vector<std::size_t> order{root};
    number[root] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto v = order[i];
      for (int k = 0; k < sigma; ++k) {
        auto t = out[v][k];
        if (t != no_vertex && number[t] == no_vertex) {
          number[t] = order.size();
          order.push_back(t);
        }
      }
    }
    FoldResult result{CoreAutomaton(r), std::vector<std::size_t>(n, no_vertex)};
    result.core.out_.assign(order.size(), std::vector<std::size_t>(sigma, no_vertex));
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (int k = 0; k < sigma; ++k) {
        auto t = out[order[i]][k];
        if (t != no_vertex) {
          result.core.out_[i][k] = number[t];
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto rep = find(v);
      if (alive[rep]) {
        result.vertex_map[v] = number[rep];
      }
    }
    return result;
  }
};

inline CoreAutomaton CoreAutomaton::from_edges(int r, std::size_t n, std::size_t base,
                                               std::vector<Edge> const& edges) {
  check_rank(r);
  if (n == 0 || base >= n) {
    throw contract_error("core: base vertex out of range");
  }
  std::vector<std::vector<std::size_t>> out(n, std::vector<std::size_t>(2 * r, no_vertex));
  auto set = [&](std::size_t u, Letter x, std::size_t v) {
    auto& slot = out[u][letter_index(x)];
    if (slot != no_vertex && slot != v) {
      throw contract_error("core: two edges with label " + std::to_string(x) + " at vertex "
                           + std::to_string(u));
    }
    slot = v;
  };
  for (auto const& e : edges) {
    if (e.src >= n || e.dst >= n) {
      throw contract_error("core: edge endpoint out of range");
    }
    if (e.letter <= 0 || e.letter > r) {
      throw contract_error("core: serialized edges must carry positive labels in [1, r]");
    }
    set(e.src, e.letter, e.dst);
    set(e.dst, -e.letter, e.src);
  }
  std::vector<std::size_t> seen(n, 0);
  std::vector<std::size_t> stack{base};
  seen[base] = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto t : out[v]) {
      if (t != no_vertex && !seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) {
      throw contract_error("core: vertex " + std::to_string(v) + " is not connected to the base");
    }
    if (v != base) {
      std::size_t d = 0;
      for (auto t : out[v]) {
        d += t != no_vertex ? 1 : 0;
      }
      if (d < 2) {
        throw contract_error("core: non-base vertex " + std::to_string(v) + " has degree < 2");
      }
    }
  }
  auto folded = CoreBuilder::fold(r, n, base, edges);
  if (folded.core.size() != n) {
    throw contract_error("core: graph is not folded");
  }
  return folded.core;
}

//! The folded core of <generators>.
inline CoreAutomaton build_core(std::vector<Word> const& generators, int r) {
  check_rank(r);
  std::vector<Edge> edges;
  std::size_t       n = 1;
  for (auto const& g0 : generators) {
    check_letters(g0, r);
    Word g = free_reduce(g0, r);
    if (g.empty()) {
      continue;
    }
    std::size_t prev = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::size_t next = (i + 1 == g.size()) ? 0 : n++;
      edges.push_back({prev, g[i], next});
      prev = next;
    }
  }
  return CoreBuilder::fold(r, n, 0, edges).core;
}

inline bool membership(CoreAutomaton const& core, Word const& w) {
  return core.read(core.base(), w) == core.base();
}

//! Exact deficit data.
struct Deficit {
  std::vector<std::size_t> per_vertex;  // 2r - degree
  std::vector<std::size_t> distance;    // |v|
  Rational                 total;
};

inline Deficit deficit(CoreAutomaton const& core) {
  int const r = core.alphabet_rank();
  Deficit   d;
  d.distance = core.distances();
  d.total    = 0;
  BigInt const q = 2 * r - 1;
  for (std::size_t v = 0; v < core.size(); ++v) {
    d.per_vertex.push_back(2 * static_cast<std::size_t>(r) - core.degree(v));
    if (d.per_vertex.back() > 0) {
      d.total += Rational(BigInt(d.per_vertex.back()), ipow(q, d.distance[v]));
    }
  }
  return d;
}

//! Finite index (number of vertices) when every star is full.
inline std::optional<std::size_t> index(CoreAutomaton const& core) {
  for (std::size_t v = 0; v < core.size(); ++v) {
    if (core.degree(v) != 2 * static_cast<std::size_t>(core.alphabet_rank())) {
      return std::nullopt;
    }
  }
  return core.size();
}

//! rank(H) = #positive edges - #vertices + 1.
inline std::size_t subgroup_rank(CoreAutomaton const& core) {
  return core.positive_edges().size() + 1 - core.size();
}

struct SchreierBasis {
  std::vector<Edge> tree;        // positive-orientation tree edges
  std::vector<Word> tree_words;  // label of the tree path o -> v
  std::vector<Word> basis;       // one word per non-tree positive edge
};

//! Schreier basis from the breadth-first (geodesic) spanning tree.
inline SchreierBasis schreier_basis(CoreAutomaton const& core) {
  SchreierBasis            sb;
  std::size_t const        n = core.size();
  std::vector<char>        seen(n, 0);
  std::vector<std::size_t> order{core.base()};
  std::vector<std::vector<char>> tree_edge(n, std::vector<char>(2 * core.alphabet_rank(), 0));
  sb.tree_words.assign(n, Word{});
  seen[core.base()] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto v = order[i];
    for (Letter x : letters_of(core.alphabet_rank())) {
      auto t = core.target(v, x);
      if (t == no_vertex || seen[t]) {
        continue;
      }
      seen[t] = 1;
      order.push_back(t);
      sb.tree_words[t] = sb.tree_words[v];
      sb.tree_words[t].push_back(x);
      tree_edge[v][letter_index(x)]  = 1;
      tree_edge[t][letter_index(-x)] = 1;
      sb.tree.push_back(x > 0 ? Edge{v, x, t} : Edge{t, -x, v});
    }
  }
  for (auto const& e : core.positive_edges()) {
    if (tree_edge[e.src][letter_index(e.letter)]) {
      continue;
    }
    Word w = sb.tree_words[e.src];
    push_reduced(w, e.letter);
    for (Letter x : inverse(sb.tree_words[e.dst])) {
      push_reduced(w, x);
    }
    sb.basis.push_back(std::move(w));
  }
  return sb;
}

//! Outcome of the free-factor embedding test.
struct EmbedResult {
  bool                     ok = false;
  std::vector<std::size_t> map;
  std::size_t              sub_vertex = no_vertex;
  std::size_t              sup_vertex = no_vertex;
  std::string              reason;

  explicit operator bool() const noexcept {
    return ok;
  }
};

//! Label-preserving, base-preserving, injective morphism sub -> sup.
inline EmbedResult embed_check(CoreAutomaton const& sub, CoreAutomaton const& sup) {
  EmbedResult res;
  if (sub.alphabet_rank() != sup.alphabet_rank()) {
    res.reason = "alphabet ranks differ";
    return res;
  }
  res.map.assign(sub.size(), no_vertex);
  std::vector<std::size_t> used(sup.size(), no_vertex);
  res.map[sub.base()]  = sup.base();
  used[sup.base()]     = sub.base();
  std::vector<std::size_t> order{sub.base()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto v = order[i];
    for (Letter x : letters_of(sub.alphabet_rank())) {
      auto t = sub.target(v, x);
      if (t == no_vertex) {
        continue;
      }
      auto image = sup.target(res.map[v], x);
      if (image == no_vertex) {
        res.sub_vertex = v;
        res.sup_vertex = res.map[v];
        res.reason     = "edge " + std::to_string(x) + " has no image";
        return res;
      }
      if (res.map[t] == no_vertex) {
        if (used[image] != no_vertex) {
          res.sub_vertex = t;
          res.sup_vertex = image;
          res.reason     = "vertex image already used";
          return res;
        }
        res.map[t]   = image;
        used[image]  = t;
        order.push_back(t);
      } else if (res.map[t] != image) {
        res.sub_vertex = t;
        res.sup_vertex = image;
        res.reason     = "conflicting vertex images";
        return res;
      }
    }
  }
  res.ok = true;
  return res;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_STALLINGS_HPP

#include <random>
#include <unordered_map>

#include "catch_amalgamated.hpp"
#include "maxgrowth/coset_growth.hpp"
#include "test_support.hpp"

using namespace maxgrowth;
using maxgrowth::testing::random_core;
using maxgrowth::testing::ReferenceCores;

namespace {
// Explicit breadth-first tree of the coset graph, counting level-n vertices
// with a descendant at level N.
std::vector<Rational> measure_by_tree(CoreAutomaton const& core, std::size_t N) {
  LazyCosetGraph                                                 G(core);
  std::vector<std::vector<CosetVertex>>                          levels{{G.origin()}};
  std::vector<std::vector<std::size_t>>                          parent{{no_vertex}};
  std::unordered_map<CosetVertex, std::size_t, CosetVertexHash> seen{{G.origin(), 0}};
  for (std::size_t n = 1; n <= N; ++n) {
    levels.emplace_back();
    parent.emplace_back();
    for (std::size_t i = 0; i < levels[n - 1].size(); ++i) {
      for (Letter x : letters_of(core.alphabet_rank())) {
        auto t = G.act(levels[n - 1][i], x);
        if (seen.emplace(t, n).second) {
          levels[n].push_back(t);
          parent[n].push_back(i);
        }
      }
    }
  }
  std::vector<std::vector<char>> ext(N + 1);
  ext[N].assign(levels[N].size(), 1);
  for (std::size_t n = N; n > 0; --n) {
    ext[n - 1].assign(levels[n - 1].size(), 0);
    for (std::size_t i = 0; i < levels[n].size(); ++i) {
      if (ext[n][i]) {
        ext[n - 1][parent[n][i]] = 1;
      }
    }
  }
  int const             r = core.alphabet_rank();
  std::vector<Rational> u;
  for (std::size_t n = 0; n <= N; ++n) {
    std::size_t t = std::count(ext[n].begin(), ext[n].end(), 1);
    u.push_back(n == 0 ? Rational(t) : Rational(t, ipow(BigInt(2 * r - 1), n - 1) * (2 * r)));
  }
  return u;
}
}  // namespace

TEST_CASE("growth series of reference subgroups", "[coset-growth]") {
  ReferenceCores ref;
  auto           t = growth_series(ref.trivial, 12);
  auto           a = growth_series(ref.cyclic_a, 12);
  auto           c = growth_series(ref.conj_b, 12);
  for (std::size_t n = 0; n <= 12; ++n) {
    CHECK(t.g[n] == 2 * ipow(BigInt(3), n) - 1);
    CHECK(a.g[n] == ipow(BigInt(3), n));
    if (n >= 1) {
      CHECK(c.g[n] == 5 * ipow(BigInt(3), n - 1));
    }
  }
  CHECK(c.g[1] == 5);
  CHECK(c.g[2] == 15);
  CHECK(growth_series(ref.bouquet, 5).g == std::vector<BigInt>(6, 1));
  CHECK(growth_series(ref.index_two, 3).g == std::vector<BigInt>{1, 2, 2, 2});
  CHECK(growth_series(ref.conj_b, 8, GrowthMethod::bfs) == growth_series(ref.conj_b, 8));
}

TEST_CASE("closed form agrees with breadth-first search", "[coset-growth]") {
  std::mt19937_64 rng(21);
  int             tested = 0;
  while (tested < 60) {
    int  r    = 2 + tested % 2;
    auto core = random_core(rng, r, 3, 5);
    if (core.size() > 8) {
      continue;
    }
    ++tested;
    std::size_t N = r == 2 ? 10 : 7;
    CHECK(growth_series_closed_form(core, N) == growth_series_bfs(core, N));
  }
}

TEST_CASE("leading coefficient and bounded remainder", "[coset-growth]") {
  ReferenceCores ref;
  auto           a = leading_term_decompose(ref.cyclic_a, growth_series(ref.cyclic_a, 10));
  CHECK(a.coefficient == 1);
  for (auto const& f : a.f) {
    CHECK(f == 0);
  }
  auto c = leading_term_decompose(ref.conj_b, growth_series(ref.conj_b, 10));
  CHECK(c.coefficient == Rational(5, 3));
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(c.f[n] == 0);
  }
  auto t = leading_term_decompose(ref.trivial, growth_series(ref.trivial, 10));
  CHECK(t.coefficient == 2);
  for (auto const& f : t.f) {
    CHECK(f == -1);
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto core = random_core(rng, 2, 4, 8);
    auto d    = leading_term_decompose(core, growth_series(core, core.radius() + 6));
    CHECK(d.constant_tail);
  }
}

TEST_CASE("classification of reference subgroups", "[coset-growth]") {
  ReferenceCores ref;
  auto           b = classify(ref.bouquet, 12);
  CHECK_FALSE(b.maximal);
  CHECK(b.alpha_tail.back() < b.alpha_tail.front());
  auto c = classify(ref.conj_b, 12);
  CHECK(c.maximal);
  CHECK(c.certificate == Rational(10, 9));
  CHECK(c.inequality_holds);
  auto s = growth_series(ref.conj_b, 12);
  for (std::size_t n = 1; n <= 12; ++n) {
    // strict: 5*3^(n-1) = (3/2) * (10/9) * 3^n
    CHECK(Rational(s.g[n]) == Rational(3, 2) * c.certificate * Rational(ipow(BigInt(3), n)));
  }
  CHECK_FALSE(classify(ref.index_two, 12).maximal);
  CHECK(classify(ref.trivial, 12).inequality_holds);
}

TEST_CASE("maximal iff positive deficit iff infinite index", "[coset-growth]") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    int  r    = 2 + i % 2;
    auto core = random_core(rng, r, 6, 6);
    auto v    = classify(core, 10);
    CHECK(v.inequality_holds);
    CHECK(v.maximal == (deficit(core).total > 0));
    CHECK(v.maximal == !index(core).has_value());
    auto s = growth_series(core, 16);
    if (v.maximal) {
      for (std::size_t n = 0; n <= 16; ++n) {
        CHECK(s.alpha(n) > 0);
      }
    } else {
      CHECK(s.alpha(16) < s.alpha(8));
    }
  }
}

TEST_CASE("validate_series", "[coset-growth]") {
  GrowthSeries free_act{SeriesKind::group, 2, {}};
  for (std::size_t n = 0; n <= 10; ++n) {
    free_act.g.push_back(2 * ipow(BigInt(3), n) - 1);
  }
  CHECK(validate_series(free_act));
  GrowthSeries bad{SeriesKind::group, 2, {1, 5, 100}};
  auto         rep = validate_series(bad);
  CHECK_FALSE(rep);
  CHECK(rep.index == 2);
  CHECK_THROWS_AS(checked(bad), series_postcondition_error);
  GrowthSeries dec{SeriesKind::monoid, 2, {1, 3, 2}};
  CHECK_FALSE(validate_series(dec));
  GrowthSeries mono{SeriesKind::monoid, 2, {1, 3, 7, 16}};
  CHECK_FALSE(validate_series(mono));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto core = random_core(rng, 2, 4, 10);
    CHECK(validate_series(growth_series(core, 14)));
  }
}

TEST_CASE("growth is monotone along subgroup inclusion", "[coset-growth]") {
  std::mt19937_64 rng(31);
  int             non_embedding = 0;
  for (int i = 0; i < 300; ++i) {
    auto gens  = testing::random_generators(rng, 2, 3, 5);
    auto sub   = build_core(gens, 2);
    auto extra = testing::random_generators(rng, 2, 2, 4);
    gens.insert(gens.end(), extra.begin(), extra.end());
    auto sup = build_core(gens, 2);
    for (auto const& b : schreier_basis(sub).basis) {
      REQUIRE(membership(sup, b));
    }
    if (!embed_check(sub, sup)) {
      ++non_embedding;
    }
    auto gs = growth_series(sub, 10), gp = growth_series(sup, 10);
    for (std::size_t n = 0; n <= 10; ++n) {
      CHECK(gp.g[n] <= gs.g[n]);
    }
  }
  CHECK(non_embedding > 0);
}

TEST_CASE("boundary measure bounds", "[coset-growth]") {
  ReferenceCores ref;
  auto           fin = boundary_measure_bounds(ref.index_two, 6);
  CHECK(fin.back() == 0);
  CHECK(boundary_measure_bounds(ref.bouquet, 3)[1] == 0);
  for (auto const& u : boundary_measure_bounds(ref.trivial, 10)) {
    CHECK(u == 1);
  }
  auto c = boundary_measure_bounds(ref.conj_b, 12);
  CHECK(c == measure_by_tree(ref.conj_b, 12));
  CHECK(c[0] == 1);
  CHECK(c[1] == 1);
  for (std::size_t n = 2; n <= 12; ++n) {
    CHECK(c[n] == Rational(5, 6));  // def/(2r) once past the core
  }
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    auto core = random_core(rng, 2, 4, 5);
    auto u    = boundary_measure_bounds(core, 8);
    CHECK(u == measure_by_tree(core, 8));
    for (std::size_t n = 1; n < u.size(); ++n) {
      CHECK(u[n] <= u[n - 1]);
    }
    CHECK(u.back() >= deficit(core).total / 4);
    CHECK((u.back() > 0) == (deficit(core).total > 0));
  }
}

TEST_CASE("faithfulness scan", "[coset-growth]") {
  ReferenceCores ref;
  CHECK(faithfulness_scan(ref.conj_b, 3).faithful);
  auto b = faithfulness_scan(ref.bouquet, 1);
  CHECK_FALSE(b.faithful);
  CHECK(faithfulness_scan(ref.trivial, 3).faithful);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    auto core = random_core(rng, 2, 2, 6);
    if (deficit(core).total > 0) {
      CHECK(faithfulness_scan(core, 2).faithful);
    }
  }
}

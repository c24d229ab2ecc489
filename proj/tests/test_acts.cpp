#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "maxgrowth/acts.hpp"

using namespace maxgrowth;

namespace {
std::vector<BigInt> cumulative(std::vector<std::uint64_t> const& d) {
  std::vector<BigInt> g;
  BigInt              total = 0;
  for (auto x : d) {
    total += x;
    g.push_back(total);
  }
  return g;
}

// Forbidden set U written out as words, and membership by scanning prefixes.
struct ExplicitU {
  std::set<Word> u;
  explicit ExplicitU(KTransitiveAct const& act) {
    for (std::size_t i = 1; i <= act.budget(); ++i) {
      for (auto const& v : act.tuple(i).from) {
        Word w = v;
        auto m = act.marker(i);
        w.insert(w.end(), m.begin(), m.end());
        u.insert(w);
      }
    }
  }
  bool is_state(Word const& w) const {
    for (std::size_t n = 1; n <= w.size(); ++n) {
      if (u.count(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n)))) {
        return false;
      }
    }
    return true;
  }
};
}  // namespace

TEST_CASE("build_prescribed reproduces the prescribed spheres") {
  SECTION("ray") {
    auto act = build_prescribed(std::vector<std::uint64_t>(11, 1), 2);
    act.validate();
    auto g = act_growth(act, 10);
    for (std::size_t n = 0; n <= 10; ++n) {
      CHECK(g.g[n] == n + 1);
    }
    // x2 loops everywhere on a ray
    for (std::size_t s = 0; s < act.size(); ++s) {
      CHECK(act.apply(s, 2) == s);
    }
  }
  SECTION("two rays") {
    auto g = act_growth(build_prescribed(std::vector<std::uint64_t>(9, 2), 2), 8);
    for (std::size_t n = 0; n <= 8; ++n) {
      CHECK(g.g[n] == 2 * n + 2);
    }
  }
  SECTION("inadmissible") {
    CHECK_THROWS_AS(build_prescribed({1, 3}, 2), contract_error);
    CHECK_THROWS_WITH(build_prescribed({1, 2, 4, 9}, 2), Catch::Matchers::ContainsSubstring("d(3)"));
    CHECK_THROWS_AS(build_prescribed({0, 0}, 2), contract_error);
    CHECK(first_inadmissible({1, 2, 4, 9}, 2) == 3u);
    CHECK_FALSE(first_inadmissible({1, 2, 4, 8}, 2));
  }
  SECTION("full spheres give the free act") {
    CHECK(act_growth(build_prescribed({1, 2, 4, 8}, 2), 3) == free_act_growth(1, 2, 3));
    CHECK(free_act_growth(1, 2, 3).g == std::vector<BigInt>{1, 3, 7, 15});
    CHECK(free_act_growth(2, 3, 2).g == std::vector<BigInt>{2, 8, 26});
  }
  SECTION("random admissible sequences") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      int const                  r = 1 + static_cast<int>(rng() % 4);
      std::vector<std::uint64_t> d{1 + rng() % 3};
      std::size_t const          N = 1 + rng() % 8;
      while (d.size() <= N) {
        d.push_back(rng() % (static_cast<std::uint64_t>(r) * d.back() + 1));
      }
      auto act = build_prescribed(d, r);
      act.validate();
      CHECK(act.size() == cumulative(d).back());
      CHECK(act_growth(act, N).g == cumulative(d));
    }
  }
  CHECK_THROWS_AS(act_growth(build_prescribed({1, 1}, 2), 2), contract_error);
}

TEST_CASE("property dagger") {
  CHECK(check_property_dagger({{1, 1, 2, 2}, {1, 1, 2, 1, 2, 2}}));
  CHECK_FALSE(check_property_dagger({{1, 2}, {2, 1}}));
  CHECK(check_property_dagger({{1, 1, 2, 2}}));
  CHECK_FALSE(check_property_dagger({{1, 2, 1}}));  // border x
  CHECK_FALSE(check_property_dagger({{1, 2}, {1, 2, 2}}));
  CHECK(check_property_dagger({}));
  std::vector<Word> markers;
  for (std::size_t t = 0; t < 12; ++t) {
    markers.push_back(marker_word(t));
  }
  CHECK(check_property_dagger(markers));
  CHECK(marker_word(1) == Word{1, 1, 2, 1, 2, 2});
}

TEST_CASE("k-transitive act: enumeration and markers") {
  KTransitiveAct act(2, 42673);
  CHECK(act.tuple(1) == TransitiveTuple{{{1}}, {{}}});
  CHECK(act.marker(1) == Word{1, 1, 2, 2});
  CHECK(act.tuple(2) == TransitiveTuple{{{1}}, {{1}}});
  CHECK(act.tuple(7) == TransitiveTuple{{{1}, {2}}, {{}, {}}});
  // k <= 3 with entries of length <= 2 fill the first 42 + 1470 + 41160 slots
  for (std::size_t i = 1; i <= 42672; ++i) {
    auto const& tu = act.tuple(i);
    REQUIRE(tu.from.size() <= 3);
    for (auto const* side : {&tu.from, &tu.to}) {
      for (auto const& w : *side) {
        REQUIRE(w.size() <= 2);
      }
    }
  }
  CHECK(act.tuple(42672) == TransitiveTuple{{{2, 2}, {2, 1}, {1, 2}}, {{2, 2}, {2, 2}, {2, 2}}});
  CHECK(act.tuple(42673) == TransitiveTuple{{{1}}, {{1, 1, 1}}});
  for (std::size_t i = 1; i <= act.budget(); ++i) {
    auto const& tu = act.tuple(i);
    REQUIRE(act.marker(i).size() >= i + tu.from.size());
    if (i > 1) {
      REQUIRE(act.marker_exponent(i) > act.marker_exponent(i - 1));
    }
  }
  CHECK_THROWS_AS(KTransitiveAct(1, 5), contract_error);
  CHECK_THROWS_AS(KTransitiveAct(2, 0), contract_error);
}

TEST_CASE("k-transitive act: witnesses") {
  KTransitiveAct act(2, 3000);
  auto           first = act.apply({1}, act.marker(1));
  CHECK(first.known);
  CHECK(first.state == Word{});
  for (std::size_t i = 1; i <= act.budget(); ++i) {
    REQUIRE(act.witness(i));
  }
  // a state that is not a source moves on freely
  auto free_move = act.apply({2, 2}, act.marker(1));
  CHECK(free_move.known);
  CHECK(free_move.state == Word{2, 2, 1, 1, 2, 2});
}

TEST_CASE("k-transitive act: state membership against an explicit forbidden set") {
  KTransitiveAct  act(2, 400);
  ExplicitU const oracle(act);
  for (auto const& w : all_words_upto(12, 2, WordMode::monoid)) {
    auto s = act.is_state(w);
    REQUIRE(s.has_value());
    REQUIRE(*s == oracle.is_state(w));
  }
  // beyond the budget a long marker suffix is undecidable
  Word long_word{1};
  auto m = marker_word(act.marker_exponent(act.budget()) + 1);
  long_word.insert(long_word.end(), m.begin(), m.end());
  for (int i = 0; i < 500; ++i) {
    long_word.insert(long_word.begin(), 2);
  }
  CHECK_FALSE(act.is_state(long_word).has_value());
  CHECK_FALSE(act.apply(Word(long_word.begin(), long_word.end() - 1), {2}).known);
}

TEST_CASE("k-transitive act: growth is maximal") {
  KTransitiveAct act(2, 1u << 14);
  auto           g      = act.growth(14);
  auto           counts = act.state_counts(14);
  for (std::size_t n = 0; n <= 14; ++n) {
    CHECK(g.g[n] >= ipow(2, n));
    CHECK(g.g[n] == counts[n]);
  }
  CHECK(g.g[4] == 31);
  CHECK(g.g[5] == 62);  // x . x x y y is the shortest forbidden word
}

TEST_CASE("k-transitive act: small words act faithfully") {
  KTransitiveAct act(2, 1u << 12);
  CHECK(undistinguished_pairs(act, 5, 10).empty());
}

TEST_CASE("k-transitive act over three letters") {
  KTransitiveAct act(3, 2000);
  for (std::size_t i = 1; i <= act.budget(); ++i) {
    REQUIRE(act.witness(i));
  }
  auto g = act.growth(8);
  for (std::size_t n = 0; n <= 8; ++n) {
    CHECK(g.g[n] >= ipow(3, n));
  }
}

#include <map>
#include <random>

#include "catch_amalgamated.hpp"
#include "maxgrowth/words.hpp"

using namespace maxgrowth;

namespace {
// Shortest u with g = u w u^-1 and w cyclically reduced, by trying every prefix.
std::pair<Word, Word> decompose_by_search(Word const& g) {
  for (std::size_t k = 0; k <= g.size(); ++k) {
    Word u(g.begin(), g.begin() + k);
    Word w = multiply(multiply(inverse(u), g), u);
    if (!w.empty() && is_cyclically_reduced(w) && multiply(multiply(u, w), inverse(u)) == g) {
      return {u, w};
    }
  }
  return {};
}

// Direct rational evaluation of the frequency windows.
bool z_direct(Word const& w, Rational eps, std::size_t l, int r) {
  Rational one(1, 2 * r), two(1, 2 * r * (2 * r - 1));
  for (std::size_t m = l; m <= w.size(); ++m) {
    if (m == 0) {
      continue;
    }
    Word v(w.begin(), w.begin() + m);
    for (Letter a : letters_of(r)) {
      Rational f(count_occurrences(v, Word{a}), m);
      if (!(f > one - eps && f < one + eps)) {
        return false;
      }
      for (Letter b : letters_of(r)) {
        if (a == -b) {
          continue;
        }
        Rational f2(count_occurrences(v, Word{a, b}), m);
        if (!(f2 > two - eps && f2 < two + eps)) {
          return false;
        }
      }
    }
  }
  return true;
}

std::size_t brute_avoid(std::size_t n, int r, WordMode mode, Word const& u) {
  std::size_t c = 0;
  for (auto const& w : all_words(n, r, mode)) {
    if (w.size() < u.size() || count_occurrences(w, u) == 0) {
      ++c;
    }
  }
  return c;
}
}  // namespace

TEST_CASE("free_reduce cancels adjacent inverse pairs", "[words]") {
  CHECK(free_reduce({1, -1}, 2).empty());
  CHECK(free_reduce({1, 2, -2, 1}, 2) == Word{1, 1});
  Word w{1, 2, -1, -2, 2};
  auto once = free_reduce(w, 2);
  CHECK(free_reduce(once, 2) == once);
  CHECK_THROWS_AS(free_reduce({3}, 2), contract_error);
  CHECK_THROWS_AS(free_reduce({0}, 2), contract_error);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Word x = sample_reduced(i % 15, 3, rng);
    CHECK(multiply(x, inverse(x)).empty());
    CHECK(free_reduce(x, 3) == x);
  }
}

TEST_CASE("cyclic_decompose returns the shortest conjugator", "[words]") {
  auto [u1, w1] = cyclic_decompose({1, 2, -1});
  CHECK(u1 == Word{1});
  CHECK(w1 == Word{2});
  auto [u2, w2] = cyclic_decompose({1, 2});
  CHECK(u2.empty());
  CHECK(w2 == Word{1, 2});
  Word g{1, 2, 1, -2, -1};
  auto got = cyclic_decompose(g);
  CHECK(got == decompose_by_search(g));
  CHECK(got.first == Word{1, 2});
  CHECK(got.second == Word{1});
  CHECK_THROWS_AS(cyclic_decompose({}), contract_error);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Word x = sample_reduced(1 + i % 12, 2, rng);
    CHECK(cyclic_decompose(x) == decompose_by_search(x));
  }
}

TEST_CASE("count_occurrences counts overlapping matches", "[words]") {
  CHECK(count_occurrences({1, 1, 1}, {1, 1}) == 2);
  CHECK(count_occurrences({1, -2, 1, -2}, {-2, 1}) == 1);
  CHECK_THROWS_AS(count_occurrences({1}, {}), contract_error);
}

TEST_CASE("letter frequency of long random reduced words", "[words][statistics]") {
  std::mt19937_64 rng(2024);
  int             good = 0;
  for (int s = 0; s < 100; ++s) {
    Word     w = sample_reduced(10000, 2, rng);
    Rational f(count_occurrences(w, {1}), w.size());
    if (f > Rational(1, 4) - Rational(1, 20) && f < Rational(1, 4) + Rational(1, 20)) {
      ++good;
    }
  }
  CHECK(good >= 99);
}

TEST_CASE("count_avoiding matches exhaustive enumeration", "[words]") {
  auto xy = count_avoiding({1, 2}, 3, WordMode::monoid, 2);
  CHECK(xy.ball == std::vector<BigInt>{1, 3, 6, 10});
  CHECK(xy.C == 2);
  CHECK(xy.block_count == 3);
  CHECK(xy.ball_bound_holds(3));  // 10^2 <= 2^2 * 3^3
  auto x = count_avoiding({1}, 2, WordMode::monoid, 2);
  CHECK(x.ball == std::vector<BigInt>{1, 2, 3});
  auto ab = count_avoiding({1, 2}, 2, WordMode::group, 2);
  CHECK(ab.ball[2] == 16);  // 17 reduced words minus "ab"
  for (int r : {2, 3}) {
    for (auto const& u : all_words_upto(3, r, WordMode::monoid)) {
      if (u.empty()) {
        continue;
      }
      auto c = count_avoiding(u, 6, WordMode::monoid, r);
      for (std::size_t n = 0; n <= 6; ++n) {
        CHECK(c.sphere[n] == brute_avoid(n, r, WordMode::monoid, u));
      }
    }
  }
  for (auto const& u : all_words_upto(2, 2, WordMode::group)) {
    if (u.empty()) {
      continue;
    }
    auto c = count_avoiding(u, 6, WordMode::group, 2);
    for (std::size_t n = 0; n <= 6; ++n) {
      CHECK(c.sphere[n] == brute_avoid(n, 2, WordMode::group, u));
    }
  }
  CHECK_THROWS_AS(count_avoiding({}, 3, WordMode::monoid, 2), contract_error);
}

TEST_CASE("sphere counts obey the block bound", "[words]") {
  for (int r : {2, 3}) {
    for (auto const& u : all_words_upto(4, r, WordMode::monoid)) {
      if (u.empty()) {
        continue;
      }
      auto c = count_avoiding(u, 12, WordMode::monoid, r);
      for (std::size_t k = 1; k <= 12; ++k) {
        CHECK(c.sphere_bound_holds(k));
      }
    }
  }
}

TEST_CASE("Nielsen automorphism and its inverse", "[words]") {
  CHECK(apply_nielsen({2}) == Word{1, 2});
  CHECK(apply_nielsen({-1, 2}) == Word{2});
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Word w = sample_reduced(i % 30, 2, rng);
    CHECK(apply_nielsen_inverse(apply_nielsen(w)) == w);
    CHECK(apply_nielsen(apply_nielsen_inverse(w)) == w);
    Word w2 = sample_reduced(i % 7, 2, rng);
    CHECK(apply_nielsen(multiply(w, w2)) == multiply(apply_nielsen(w), apply_nielsen(w2)));
  }
  CHECK(stretch_factor(2, Rational(1, 100)) == Rational(7, 6) - Rational(6, 100));
}

TEST_CASE("z_membership agrees with a direct rational evaluation", "[words]") {
  CHECK_FALSE(z_membership(Word(20, 1), ZParams{Rational(1, 5), 6}, 2));
  CHECK_THROWS_AS(z_membership(Word{1}, ZParams{Rational(1, 5), 6}, 2), contract_error);
  std::size_t agree = 0, passed = 0;
  for (auto const& w : all_words(6, 2, WordMode::group)) {
    bool a = z_membership(w, ZParams{Rational(1, 5), 6}, 2);
    bool b = z_direct(w, Rational(1, 5), 6, 2);
    agree += a == b;
    passed += a;
  }
  CHECK(agree == 4 * 243);
  CHECK(passed > 0);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Word w = sample_reduced(40, 2, rng);
    CHECK(z_membership(w, ZParams{Rational(3, 20), 12}, 2) == z_direct(w, Rational(3, 20), 12, 2));
  }
}

TEST_CASE("stretch of balanced words under the Nielsen map", "[words]") {
  Rational const  eps(1, 25);
  Rational const  lambda = stretch_factor(2, eps);
  std::mt19937_64 rng(17);
  std::size_t     tested = 0;
  for (int i = 0; i < 400; ++i) {
    Word w = sample_reduced(3000, 2, rng);
    if (z_membership(w, ZParams{eps, 1000}, 2)) {
      ++tested;
      CHECK(Rational(apply_nielsen(w).size()) > lambda * Rational(w.size()));
    }
  }
  CHECK(tested > 0);
}

TEST_CASE("sample_reduced is uniform", "[words][statistics]") {
  CHECK(sample_reduced(0, 2, 1).empty());
  std::mt19937_64            rng(3);
  std::map<Word, long>       one, two;
  for (int i = 0; i < 100000; ++i) {
    ++one[sample_reduced(1, 2, rng)];
  }
  CHECK(one.size() == 4);
  for (auto const& [w, c] : one) {
    CHECK(std::abs(c / 100000.0 - 0.25) < 0.02);
  }
  for (int i = 0; i < 1000000; ++i) {
    ++two[sample_reduced(2, 2, rng)];
  }
  CHECK(two.size() == 12);
  double chi2 = 0;
  for (auto const& [w, c] : two) {
    CHECK(is_reduced(w));
    CHECK(std::abs(c / 1e6 - 1.0 / 12) < 0.01);
    double e = 1e6 / 12;
    chi2 += (c - e) * (c - e) / e;
  }
  CHECK(chi2 < 40.0);  // 11 degrees of freedom; p < 1e-4
  CHECK(sample_reduced(50, 3, 42) == sample_reduced(50, 3, 42));
}

TEST_CASE("ShortLex is a total order", "[words]") {
  auto ws = all_words_upto(4, 2, WordMode::group);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK_FALSE(shortlex_less(ws[i], ws[i]));
    for (std::size_t j = i + 1; j < ws.size(); ++j) {
      // all_words_upto lists words in ShortLex order
      CHECK(shortlex_less(ws[i], ws[j]));
      CHECK_FALSE(shortlex_less(ws[j], ws[i]));
    }
  }
  CHECK(shortlex_less({1}, {-1}));
  CHECK(shortlex_less({-1}, {2}));
  CHECK(shortlex_less({2, 2}, {1, 1, 1}));
}

TEST_CASE("word text format round-trips", "[words]") {
  CHECK(parse_word("a b A") == Word{1, 2, -1});
  CHECK(parse_word("a1 a2 A1 A2") == Word{1, 2, -1, -2});
  CHECK(parse_word("abA") == Word{1, 2, -1});
  CHECK(parse_word("1").empty());
  CHECK(parse_word("").empty());
  CHECK(format_word({1, 2, -1, -2}) == "a1 a2 A1 A2");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    Word w = sample_reduced(i % 20, 12, rng);
    CHECK(parse_word(format_word(w)) == w);
  }
  CHECK_THROWS_AS(parse_word("a0"), contract_error);
  CHECK_THROWS_AS(parse_word("b2"), contract_error);
  CHECK_THROWS_AS(parse_word("#"), contract_error);
}

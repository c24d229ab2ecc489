#ifndef MAXGROWTH_WORDS_HPP
#define MAXGROWTH_WORDS_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace maxgrowth {

//! A letter is a nonzero integer; -k is the inverse of generator k.
using Letter = int;
//! Words over the symmetric alphabet, or positive words for the monoid.
using Word = std::vector<Letter>;

enum class WordMode { monoid, group };

inline void check_rank(int r) {
  if (r < 1) {
    throw contract_error("alphabet rank must be >= 1, got " + std::to_string(r));
  }
}

inline void check_letters(Word const& w, int r, bool positive_only = false) {
  check_rank(r);
  for (Letter x : w) {
    if (x == 0 || x > r || x < -r) {
      throw contract_error("letter " + std::to_string(x) + " out of range for rank "
                           + std::to_string(r));
    }
    if (positive_only && x < 0) {
      throw contract_error("monoid word contains inverse letter " + std::to_string(x));
    }
  }
}

//! Position of a letter in the order 1 < -1 < 2 < -2 < ...
inline constexpr int letter_index(Letter x) noexcept {
  return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1;
}

inline constexpr Letter index_letter(int i) noexcept {
  return (i % 2 == 0) ? i / 2 + 1 : -(i / 2 + 1);
}

//! All 2r letters in ShortLex order.
inline std::vector<Letter> letters_of(int r) {
  std::vector<Letter> out;
  for (int i = 0; i < 2 * r; ++i) {
    out.push_back(index_letter(i));
  }
  return out;
}

inline bool is_reduced(Word const& w) noexcept {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == -w[i - 1]) {
      return false;
    }
  }
  return true;
}

inline bool is_cyclically_reduced(Word const& w) noexcept {
  return is_reduced(w) && (w.size() < 2 || w.front() != -w.back());
}

//! Appends x to a reduced word, cancelling if needed.
inline void push_reduced(Word& w, Letter x) {
  if (!w.empty() && w.back() == -x) {
    w.pop_back();
  } else {
    w.push_back(x);
  }
}

inline Word free_reduce(Word const& letters, int r) {
  check_letters(letters, r);
  Word out;
  out.reserve(letters.size());
  for (Letter x : letters) {
    push_reduced(out, x);
  }
  return out;
}

inline Word inverse(Word const& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& x : out) {
    x = -x;
  }
  return out;
}

//! Reduced product of two words.
inline Word multiply(Word const& a, Word const& b) {
  Word out = a;
  for (Letter x : b) {
    push_reduced(out, x);
  }
  return out;
}

inline Word power(Word const& w, long long k) {
  Word base = k >= 0 ? w : inverse(w);
  Word out;
  for (long long i = 0; i < (k >= 0 ? k : -k); ++i) {
    for (Letter x : base) {
      push_reduced(out, x);
    }
  }
  return out;
}

//! Splits g = u w u^-1 with w cyclically reduced and u as short as possible.
inline std::pair<Word, Word> cyclic_decompose(Word const& g) {
  if (g.empty()) {
    throw contract_error("cyclic_decompose: empty word");
  }
  if (!is_reduced(g)) {
    throw contract_error("cyclic_decompose: word is not reduced");
  }
  std::size_t k = 0;
  while (2 * k + 2 <= g.size() && g[k] == -g[g.size() - 1 - k]) {
    ++k;
  }
  Word u(g.begin(), g.begin() + k);
  Word w(g.begin() + k, g.end() - k);
  return {u, w};
}

//! ShortLex comparison under the letter order 1 < -1 < 2 < -2 < ...
inline bool shortlex_less(Word const& a, Word const& b) noexcept {
  if (a.size() != b.size()) {
    return a.size() < b.size();
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      return letter_index(a[i]) < letter_index(b[i]);
    }
  }
  return false;
}

struct ShortLexLess {
  bool operator()(Word const& a, Word const& b) const noexcept {
    return shortlex_less(a, b);
  }
};

//! Number of (possibly overlapping) occurrences of v in w.
inline std::size_t count_occurrences(Word const& w, Word const& v) {
  if (v.empty()) {
    throw contract_error("count_occurrences: empty pattern");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i + v.size() <= w.size(); ++i) {
    if (std::equal(v.begin(), v.end(), w.begin() + i)) {
      ++count;
    }
  }
  return count;
}

//! All reduced words of length exactly n (group) or all positive words
//! (monoid), in ShortLex order.
inline std::vector<Word> all_words(std::size_t n, int r, WordMode mode) {
  check_rank(r);
  std::vector<Word> level{Word{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Word> next;
    for (Word const& w : level) {
      if (mode == WordMode::monoid) {
        for (Letter x = 1; x <= r; ++x) {
          next.push_back(w);
          next.back().push_back(x);
        }
      } else {
        for (Letter x : letters_of(r)) {
          if (!w.empty() && w.back() == -x) {
            continue;
          }
          next.push_back(w);
          next.back().push_back(x);
        }
      }
    }
    level = std::move(next);
  }
  return level;
}

//! All words of length at most n in ShortLex order.
inline std::vector<Word> all_words_upto(std::size_t n, int r, WordMode mode) {
  std::vector<Word> out;
  for (std::size_t k = 0; k <= n; ++k) {
    auto lvl = all_words(k, r, mode);
    out.insert(out.end(), lvl.begin(), lvl.end());
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Subword avoidance
////////////////////////////////////////////////////////////////////////

//! Counts of words avoiding a subword, plus the power-form certificate
//! sphere(k)^m <= C^m (r^m - 1)^k with C = r^(m-1) in monoid mode.
struct AvoidanceCounts {
  std::vector<BigInt> sphere;
  std::vector<BigInt> ball;
  bool                has_bound = false;
  std::size_t         m         = 0;
  BigInt              C;
  BigInt              block_count;  // r^m - 1

  bool sphere_bound_holds(std::size_t k) const {
    return ipow(sphere.at(k), m) <= ipow(C, m) * ipow(block_count, k);
  }
  bool ball_bound_holds(std::size_t k) const {
    return ipow(ball.at(k), m) <= ipow(C, m) * ipow(block_count, k);
  }
};

namespace detail {
// KMP automaton over letter indices; state m means u was seen.
inline std::vector<std::vector<std::size_t>> kmp_automaton(Word const& u, int sigma) {
  std::size_t                           m = u.size();
  std::vector<std::size_t>              fail(m + 1, 0);
  std::vector<std::vector<std::size_t>> delta(m + 1, std::vector<std::size_t>(sigma, 0));
  for (std::size_t q = 0; q <= m; ++q) {
    for (int a = 0; a < sigma; ++a) {
      if (q < m && letter_index(u[q]) == a) {
        delta[q][a] = q + 1;
      } else {
        delta[q][a] = q == 0 ? 0 : delta[fail[q]][a];
      }
    }
    if (q + 1 <= m && q > 0) {
      fail[q + 1] = delta[fail[q]][letter_index(u[q])];
    }
  }
  return delta;
}
}  // namespace detail

//! Counts words of length 0..n with no occurrence of u.
inline AvoidanceCounts count_avoiding(Word const& u, std::size_t n, WordMode mode, int r) {
  if (u.empty()) {
    throw contract_error("count_avoiding: empty pattern");
  }
  check_letters(u, r, mode == WordMode::monoid);
  if (mode == WordMode::group && !is_reduced(u)) {
    throw contract_error("count_avoiding: pattern must be reduced in group mode");
  }
  int const   sigma = mode == WordMode::monoid ? 2 * r : 2 * r;
  std::size_t m     = u.size();
  auto        delta = detail::kmp_automaton(u, sigma);
  // state: (last letter index + 1 or 0, automaton state)
  std::size_t const           lastn = static_cast<std::size_t>(sigma) + 1;
  std::vector<BigInt>         cur(lastn * m, 0);
  AvoidanceCounts             out;
  cur[0] = 1;
  BigInt running = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt total = 0;
    for (auto const& c : cur) {
      total += c;
    }
    running += total;
    out.sphere.push_back(total);
    out.ball.push_back(running);
    if (k == n) {
      break;
    }
    std::vector<BigInt> next(lastn * m, 0);
    for (std::size_t last = 0; last < lastn; ++last) {
      for (std::size_t q = 0; q < m; ++q) {
        BigInt const& c = cur[last * m + q];
        if (c == 0) {
          continue;
        }
        for (int a = 0; a < sigma; ++a) {
          Letter x = index_letter(a);
          if (mode == WordMode::monoid && x < 0) {
            continue;
          }
          if (mode == WordMode::group && last > 0 && index_letter(static_cast<int>(last) - 1) == -x) {
            continue;
          }
          std::size_t q2 = delta[q][a];
          if (q2 == m) {
            continue;
          }
          next[(static_cast<std::size_t>(a) + 1) * m + q2] += c;
        }
      }
    }
    cur = std::move(next);
  }
  if (mode == WordMode::monoid) {
    out.has_bound   = true;
    out.m           = m;
    out.C           = ipow(BigInt(r), m - 1);
    out.block_count = ipow(BigInt(r), m) - 1;
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Nielsen automorphism a1 -> a1, a2 -> a1 a2
////////////////////////////////////////////////////////////////////////

inline Word apply_nielsen(Word const& w) {
  Word out;
  out.reserve(w.size() * 2);
  for (Letter x : w) {
    if (x == 2) {
      push_reduced(out, 1);
      push_reduced(out, 2);
    } else if (x == -2) {
      push_reduced(out, -2);
      push_reduced(out, -1);
    } else {
      push_reduced(out, x);
    }
  }
  return out;
}

//! Inverse automorphism a1 -> a1, a2 -> a1^-1 a2.
inline Word apply_nielsen_inverse(Word const& w) {
  Word out;
  out.reserve(w.size() * 2);
  for (Letter x : w) {
    if (x == 2) {
      push_reduced(out, -1);
      push_reduced(out, 2);
    } else if (x == -2) {
      push_reduced(out, -2);
      push_reduced(out, 1);
    } else {
      push_reduced(out, x);
    }
  }
  return out;
}

//! lambda = 1 + (2r-3)/(r(2r-1)) - 6 eps.
inline Rational stretch_factor(int r, Rational const& eps) {
  return Rational(1) + Rational(2 * r - 3, r * (2 * r - 1)) - 6 * eps;
}

////////////////////////////////////////////////////////////////////////
// Frequency-balanced words
////////////////////////////////////////////////////////////////////////

struct ZParams {
  Rational    epsilon;
  std::size_t l = 0;
};

//! Prefix letter and two-letter counts with the exact window test.
class FrequencyTracker {
 public:
  FrequencyTracker(int r, Rational const& eps) : r_(r), sigma_(2 * r) {
    check_rank(r);
    if (eps <= 0) {
      throw contract_error("epsilon must be positive");
    }
    if (numerator(eps) > BigInt(1) << 40 || denominator(eps) > BigInt(1) << 40) {
      throw contract_error("epsilon numerator/denominator too large");
    }
    p_ = static_cast<long long>(numerator(eps));
    q_ = static_cast<long long>(denominator(eps));
    single_.assign(sigma_, 0);
    pair_.assign(sigma_ * sigma_, 0);
  }

  void push(Letter x) {
    int a = letter_index(x);
    ++single_[a];
    if (!word_.empty()) {
      ++pair_[letter_index(word_.back()) * sigma_ + a];
    }
    word_.push_back(x);
  }

  void pop() {
    int a = letter_index(word_.back());
    --single_[a];
    word_.pop_back();
    if (!word_.empty()) {
      --pair_[letter_index(word_.back()) * sigma_ + a];
    }
  }

  std::size_t size() const noexcept {
    return word_.size();
  }

  //! True iff the current prefix passes every frequency window.
  bool balanced() const {
    using i128         = __int128;
    i128 const m       = static_cast<i128>(word_.size());
    i128 const d1      = sigma_;
    i128 const d2      = static_cast<i128>(sigma_) * (sigma_ - 1);
    // |c/m - 1/D| < p/q  <=>  |D q c - q m| < D p m
    auto inside = [&](i128 c, i128 D) {
      i128 lhs = D * q_ * c - static_cast<i128>(q_) * m;
      if (lhs < 0) {
        lhs = -lhs;
      }
      return lhs < D * p_ * m;
    };
    for (int a = 0; a < sigma_; ++a) {
      if (!inside(single_[a], d1)) {
        return false;
      }
    }
    for (int a = 0; a < sigma_; ++a) {
      for (int b = 0; b < sigma_; ++b) {
        if (index_letter(a) == -index_letter(b)) {
          continue;
        }
        if (!inside(pair_[a * sigma_ + b], d2)) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  int                   r_;
  int                   sigma_;
  long long             p_ = 0, q_ = 1;
  std::vector<long long> single_;
  std::vector<long long> pair_;
  Word                  word_;
};

//! Every prefix of length in [l, |w|] passes the frequency windows.
inline bool z_membership(Word const& w, ZParams const& p, int r) {
  check_letters(w, r);
  if (w.size() < p.l) {
    throw contract_error("z_membership: word shorter than l");
  }
  if (!is_reduced(w)) {
    throw contract_error("z_membership: word is not reduced");
  }
  FrequencyTracker t(r, p.epsilon);
  for (Letter x : w) {
    t.push(x);
    if (t.size() >= p.l && t.size() > 0 && !t.balanced()) {
      return false;
    }
  }
  return true;
}

////////////////////////////////////////////////////////////////////////
// Sampling
////////////////////////////////////////////////////////////////////////

//! Uniform reduced word of length n.
template <typename Rng>
Word sample_reduced(std::size_t n, int r, Rng& rng) {
  check_rank(r);
  Word w;
  w.reserve(n);
  if (n == 0) {
    return w;
  }
  std::uniform_int_distribution<int> first(0, 2 * r - 1);
  w.push_back(index_letter(first(rng)));
  if (2 * r - 1 == 0) {
    return w;
  }
  std::uniform_int_distribution<int> rest(0, 2 * r - 2);
  for (std::size_t i = 1; i < n; ++i) {
    int    k   = rest(rng);
    Letter bad = -w.back();
    // skip the inverse of the previous letter
    if (k >= letter_index(bad)) {
      ++k;
    }
    w.push_back(index_letter(k));
  }
  return w;
}

inline Word sample_reduced(std::size_t n, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_reduced(n, r, rng);
}

//! Doubles l from l0 until the pass fraction at lengths 2l and 4l is
//! positive and the two fractions differ by less than 1/100.
inline std::size_t calibrate_l(int r, Rational const& eps, std::uint64_t seed,
                               std::size_t l0 = 16, std::size_t samples = 200,
                               std::size_t l_max = std::size_t(1) << 20) {
  std::mt19937_64 rng(seed);
  for (std::size_t l = std::max<std::size_t>(l0, 1); l <= l_max; l *= 2) {
    std::size_t pass[2] = {0, 0};
    for (int which = 0; which < 2; ++which) {
      std::size_t n = l * (which == 0 ? 2 : 4);
      for (std::size_t s = 0; s < samples; ++s) {
        Word w = sample_reduced(n, r, rng);
        pass[which] += z_membership(w, ZParams{eps, l}, r) ? 1 : 0;
      }
    }
    long long diff = static_cast<long long>(pass[0]) - static_cast<long long>(pass[1]);
    if (pass[1] > 0 && 100 * std::llabs(diff) < static_cast<long long>(samples)) {
      return l;
    }
  }
  throw budget_exceeded("calibrate_l: no stable threshold up to l_max");
}

////////////////////////////////////////////////////////////////////////
// Text format: tokens a1 a2 A1 (capital = inverse); a b c ... also accepted
////////////////////////////////////////////////////////////////////////

inline std::string format_word(Word const& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += w[i] > 0 ? 'a' : 'A';
    out += std::to_string(w[i] > 0 ? w[i] : -w[i]);
  }
  return out;
}

//! Parses "a1 a2 A1", "a b A", "abA" or "1" (the empty word).
inline Word parse_word(std::string const& text) {
  Word        w;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '*') {
      ++i;
      continue;
    }
    if (c == '1' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      ++i;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw contract_error(std::string("unexpected character in word: '") + c + "'");
    }
    bool inv  = std::isupper(static_cast<unsigned char>(c)) != 0;
    char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    ++i;
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    int idx;
    if (base == 'a' && j > i) {
      idx = std::stoi(text.substr(i, j - i));
      if (idx < 1) {
        throw contract_error("generator index must be >= 1");
      }
      i = j;
    } else if (j > i) {
      throw contract_error("indexed letters must use 'a': " + text);
    } else {
      idx = base - 'a' + 1;
    }
    w.push_back(inv ? -idx : idx);
  }
  return w;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_WORDS_HPP

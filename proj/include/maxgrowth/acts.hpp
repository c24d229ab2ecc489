#ifndef MAXGROWTH_ACTS_HPP
#define MAXGROWTH_ACTS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "series.hpp"
#include "words.hpp"

namespace maxgrowth {

struct WordHash {
  std::size_t operator()(Word const& w) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Letter x : w) {
      h = (h ^ static_cast<std::size_t>(x + 64)) * 0x100000001b3ULL;
    }
    return h;
  }
};

////////////////////////////////////////////////////////////////////////
// Materialized acts
////////////////////////////////////////////////////////////////////////

//! A right act of W_r on states 0..size()-1, materialized to `radius`.
//! States on the outermost sphere loop on every letter.
struct Act {
  int                                   r = 2;
  std::vector<std::size_t>              generators;
  std::vector<std::vector<std::size_t>> next;  // next[s][x-1]
  std::size_t                           radius = 0;

  std::size_t size() const noexcept {
    return next.size();
  }
  std::size_t apply(std::size_t s, Letter x) const {
    return next[s][x - 1];
  }
  std::size_t apply(std::size_t s, Word const& w) const {
    for (Letter x : w) {
      s = apply(s, x);
    }
    return s;
  }

  //! Every transition is defined and in range.
  void validate() const {
    check_rank(r);
    for (auto const& row : next) {
      if (row.size() != static_cast<std::size_t>(r)) {
        throw contract_error("act: transition row has wrong width");
      }
      for (auto t : row) {
        if (t >= size()) {
          throw contract_error("act: transition target out of range");
        }
      }
    }
    for (auto a : generators) {
      if (a >= size()) {
        throw contract_error("act: generator out of range");
      }
    }
  }
};

//! First index n >= 1 with d(n) > r d(n-1), or nullopt.
inline std::optional<std::size_t> first_inadmissible(std::vector<std::uint64_t> const& d, int r) {
  for (std::size_t n = 1; n < d.size(); ++n) {
    if (d[n] > static_cast<std::uint64_t>(r) * d[n - 1]) {
      return n;
    }
  }
  return std::nullopt;
}

//! Act whose sphere sizes are exactly d(0), ..., d(N).
inline Act build_prescribed(std::vector<std::uint64_t> const& d, int r,
                            std::size_t max_states = 50'000'000) {
  check_rank(r);
  if (d.empty() || d[0] == 0) {
    throw contract_error("build_prescribed: need d(0) >= 1");
  }
  if (auto bad = first_inadmissible(d, r)) {
    throw contract_error("build_prescribed: d(" + std::to_string(*bad) + ") = " +
                         std::to_string(d[*bad]) + " exceeds r*d(" + std::to_string(*bad - 1) +
                         ")");
  }
  std::uint64_t total = 0;
  for (auto x : d) {
    total += x;
    if (total > max_states) {
      throw budget_exceeded("build_prescribed: more than " + std::to_string(max_states) +
                            " states");
    }
  }
  Act act;
  act.r      = r;
  act.radius = d.size() - 1;
  std::vector<std::size_t> sphere;
  for (std::uint64_t i = 0; i < d[0]; ++i) {
    act.generators.push_back(i);
    sphere.push_back(i);
    act.next.emplace_back(r, i);
  }
  for (std::size_t n = 0; n + 1 < d.size(); ++n) {
    std::uint64_t const p = d[n + 1] / r, q = d[n + 1] % r;
    std::vector<std::size_t> fresh;
    auto grow = [&](std::size_t s, int letters) {
      for (int j = 0; j < letters; ++j) {
        std::size_t t = act.next.size();
        act.next.emplace_back(r, t);
        act.next[s][j] = t;
        fresh.push_back(t);
      }
    };
    for (std::uint64_t i = 0; i < p; ++i) {
      grow(sphere[i], r);
    }
    if (q > 0) {
      grow(sphere[p], static_cast<int>(q));
    }
    sphere = std::move(fresh);
  }
  return act;
}

//! Ball sizes of any act given by its generators and a transition function.
template <typename State, typename Hash, typename Step>
GrowthSeries act_growth(std::vector<State> const& generators, int r, std::size_t N, Step step,
                        std::size_t max_states = 50'000'000) {
  std::unordered_set<State, Hash> seen;
  std::vector<State>              frontier;
  for (auto const& a : generators) {
    if (seen.insert(a).second) {
      frontier.push_back(a);
    }
  }
  GrowthSeries s{SeriesKind::monoid, r, {BigInt(seen.size())}};
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<State> next;
    for (auto const& v : frontier) {
      for (Letter x = 1; x <= r; ++x) {
        State t = step(v, x);
        if (seen.insert(t).second) {
          next.push_back(std::move(t));
          if (seen.size() > max_states) {
            throw budget_exceeded("act_growth: more than " + std::to_string(max_states) +
                                  " states");
          }
        }
      }
    }
    s.g.push_back(BigInt(seen.size()));
    frontier = std::move(next);
  }
  return checked(std::move(s));
}

inline GrowthSeries act_growth(Act const& act, std::size_t N) {
  if (N > act.radius) {
    throw contract_error("act_growth: radius beyond the materialized region");
  }
  return act_growth<std::size_t, std::hash<std::size_t>>(
      act.generators, act.r, N, [&](std::size_t s, Letter x) { return act.apply(s, x); });
}

//! Free act of rank m: ball sizes m(1 + r + ... + r^n).
inline GrowthSeries free_act_growth(std::size_t m, int r, std::size_t N) {
  GrowthSeries s{SeriesKind::monoid, r, {}};
  BigInt       sphere = m, total = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    total += sphere;
    s.g.push_back(total);
    sphere *= r;
  }
  return checked(std::move(s));
}

////////////////////////////////////////////////////////////////////////
// Prefix-free marker languages
////////////////////////////////////////////////////////////////////////

//! A nonempty suffix of w is a prefix of w' only when it is all of w and w = w'.
inline bool check_property_dagger(std::vector<Word> const& P) {
  for (auto const& w : P) {
    for (auto const& w2 : P) {
      for (std::size_t start = 0; start < w.size(); ++start) {
        std::size_t len = w.size() - start;
        if (len > w2.size() || !std::equal(w.begin() + static_cast<std::ptrdiff_t>(start), w.end(),
                                           w2.begin())) {
          continue;
        }
        if (start != 0 || w != w2) {
          return false;
        }
      }
    }
  }
  return true;
}

//! x^2 (yx)^t y^2 over letters x = 1, y = 2.
inline Word marker_word(std::size_t t) {
  Word w{1, 1};
  for (std::size_t i = 0; i < t; ++i) {
    w.push_back(2);
    w.push_back(1);
  }
  w.push_back(2);
  w.push_back(2);
  return w;
}

////////////////////////////////////////////////////////////////////////
// The k-transitive act of maximal growth
////////////////////////////////////////////////////////////////////////

//! (v_1..v_k ; v'_1..v'_k) with pairwise distinct nonempty sources.
struct TransitiveTuple {
  std::vector<Word> from;
  std::vector<Word> to;
  bool              operator==(TransitiveTuple const&) const = default;
};

struct ApplyResult {
  bool known = true;  // false: the answer depends on tuples beyond the budget
  Word state;
};

//! Tuples are enumerated by (h = max(k, longest entry), longest entry, k),
//! then componentwise ShortLex; the i-th admitted tuple gets the marker
//! w_i = x^2 (yx)^(t_i) y^2 with t_i strictly increasing and |w_i| >= i + k(i).
//! States are the words with no prefix v(i,j) w_i.
class KTransitiveAct {
 public:
  KTransitiveAct(int r, std::size_t budget) : r_(r) {
    check_rank(r);
    if (r < 2) {
      throw contract_error("k-transitive act needs r >= 2");
    }
    if (budget == 0) {
      throw contract_error("k-transitive act needs a positive budget");
    }
    enumerate(budget);
  }

  int alphabet_rank() const noexcept {
    return r_;
  }
  std::size_t budget() const noexcept {
    return tuples_.size();
  }
  //! 1-based as in the enumeration.
  TransitiveTuple const& tuple(std::size_t i) const {
    return tuples_.at(i - 1);
  }
  std::size_t marker_exponent(std::size_t i) const {
    return t_.at(i - 1);
  }
  Word marker(std::size_t i) const {
    return marker_word(marker_exponent(i));
  }

  //! Index i and slot j with w = v(i,j) w_i; {0,0} when w is not in U;
  //! nullopt when that depends on tuples beyond the budget.
  std::optional<std::pair<std::size_t, std::size_t>> forbidden_index(Word const& w) const {
    std::size_t n = w.size();
    if (n < 4 || w[n - 1] != 2 || w[n - 2] != 2) {
      return std::pair<std::size_t, std::size_t>{0, 0};
    }
    std::size_t pos = n - 2, t = 0;
    while (pos >= 2 && w[pos - 1] == 1 && w[pos - 2] == 2) {
      pos -= 2;
      ++t;
    }
    if (pos < 2 || w[pos - 1] != 1 || w[pos - 2] != 1) {
      return std::pair<std::size_t, std::size_t>{0, 0};
    }
    pos -= 2;  // w = v . marker_word(t) with |v| = pos
    if (t_.empty() || t > t_.back()) {
      // unseen tuples i > budget have |u(i,j)| >= i + k(i) >= budget + 2
      if (n < tuples_.size() + 2) {
        return std::pair<std::size_t, std::size_t>{0, 0};
      }
      return std::nullopt;
    }
    auto it = std::lower_bound(t_.begin(), t_.end(), t);
    if (it == t_.end() || *it != t) {
      return std::pair<std::size_t, std::size_t>{0, 0};
    }
    std::size_t const i = static_cast<std::size_t>(it - t_.begin()) + 1;
    auto const&       tu = tuples_[i - 1];
    for (std::size_t j = 0; j < tu.from.size(); ++j) {
      if (tu.from[j].size() == pos && std::equal(tu.from[j].begin(), tu.from[j].end(), w.begin())) {
        return std::pair<std::size_t, std::size_t>{i, j + 1};
      }
    }
    return std::pair<std::size_t, std::size_t>{0, 0};
  }

  //! True iff no prefix of w lies in U; nullopt if undecidable at this budget.
  std::optional<bool> is_state(Word const& w) const {
    Word prefix;
    for (Letter x : w) {
      prefix.push_back(x);
      auto f = forbidden_index(prefix);
      if (!f) {
        return std::nullopt;
      }
      if (f->first != 0) {
        return false;
      }
    }
    return true;
  }

  //! s . x in place; returns false when the answer is unknown at this budget.
  bool step(Word& s, Letter x) const {
    s.push_back(x);
    auto f = forbidden_index(s);
    if (!f) {
      s.pop_back();
      return false;
    }
    if (f->first != 0) {
      s = tuples_[f->first - 1].to[f->second - 1];
    }
    return true;
  }

  ApplyResult apply(Word s, Word const& w) const {
    for (Letter x : w) {
      if (!step(s, x)) {
        return {false, {}};
      }
    }
    return {true, std::move(s)};
  }

  //! v(i,j) . w_i = v'(i,j) for every j, by direct application.
  bool witness(std::size_t i) const {
    auto const& tu = tuple(i);
    Word const  w  = marker(i);
    for (std::size_t j = 0; j < tu.from.size(); ++j) {
      auto res = apply(tu.from[j], w);
      if (!res.known || res.state != tu.to[j]) {
        return false;
      }
    }
    return true;
  }

  //! Ball sizes around the empty word.
  GrowthSeries growth(std::size_t N) const {
    return act_growth<Word, WordHash>({Word{}}, r_, N, [&](Word s, Letter x) {
      if (!step(s, x)) {
        throw budget_exceeded("k-transitive act: ball of radius " + std::to_string(N) +
                              " needs tuples beyond the budget");
      }
      return s;
    });
  }

  //! #{states of length <= n}, counted directly from the forbidden prefixes.
  std::vector<std::size_t> state_counts(std::size_t N) const {
    std::vector<std::size_t> counts(N + 1, 0);
    Word                     w;
    auto                     visit = [&](auto&& self) -> void {
      ++counts[w.size()];
      if (w.size() == N) {
        return;
      }
      for (Letter x = 1; x <= r_; ++x) {
        w.push_back(x);
        auto f = forbidden_index(w);
        if (!f) {
          throw budget_exceeded("k-transitive act: state count needs tuples beyond the budget");
        }
        if (f->first == 0) {
          self(self);
        }
        w.pop_back();
      }
    };
    visit(visit);
    for (std::size_t n = 1; n <= N; ++n) {
      counts[n] += counts[n - 1];
    }
    return counts;
  }

 private:
  // ShortLex-ordered words of length in [lo, hi] over r letters.
  std::vector<Word> words_between(std::size_t lo, std::size_t hi) const {
    std::vector<Word> out;
    for (std::size_t n = lo; n <= hi; ++n) {
      auto layer = all_words(n, r_, WordMode::monoid);
      std::sort(layer.begin(), layer.end(), ShortLexLess{});
      out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
  }

  void admit(TransitiveTuple tu) {
    std::size_t const i = tuples_.size() + 1;
    std::size_t const k = tu.from.size();
    std::size_t       t = (i + k > 4) ? (i + k - 4 + 1) / 2 : 0;
    if (!t_.empty()) {
      t = std::max(t, t_.back() + 1);
    }
    tuples_.push_back(std::move(tu));
    t_.push_back(t);
  }

  // Entries must be states; membership of a word of length m only involves
  // tuples of index < m - 1, all of which are earlier in the enumeration.
  bool entries_are_states(TransitiveTuple const& tu) const {
    for (auto const* side : {&tu.from, &tu.to}) {
      for (auto const& w : *side) {
        if (w.size() + 1 > tuples_.size() + 2) {
          throw postcondition_error("k-transitive act: enumeration outran state membership");
        }
        auto s = is_state(w);
        if (!s || !*s) {
          return false;
        }
      }
    }
    return true;
  }

  void enumerate(std::size_t budget) {
    for (std::size_t h = 1;; ++h) {
      for (std::size_t len = 1; len <= h; ++len) {
        for (std::size_t k = 1; k <= h; ++k) {
          if (std::max(len, k) != h) {
            continue;
          }
          auto const sources = words_between(1, len);
          auto const targets = words_between(0, len);
          if (sources.size() < k) {
            continue;
          }
          // Odometer over (from_1..from_k, to_1..to_k) in lexicographic order.
          std::vector<std::size_t> idx(2 * k, 0);
          for (bool done = false; !done;) {
            TransitiveTuple tu;
            bool            longest = false;
            for (std::size_t c = 0; c < 2 * k; ++c) {
              Word const& w = c < k ? sources[idx[c]] : targets[idx[c]];
              longest       = longest || w.size() == len;
              (c < k ? tu.from : tu.to).push_back(w);
            }
            bool distinct = true;
            for (std::size_t a = 0; a < k; ++a) {
              for (std::size_t b = 0; b < a; ++b) {
                distinct = distinct && tu.from[a] != tu.from[b];
              }
            }
            if (distinct && longest && entries_are_states(tu)) {
              admit(std::move(tu));
              if (tuples_.size() == budget) {
                return;
              }
            }
            done = true;
            for (std::size_t c = 2 * k; c-- > 0;) {
              std::size_t const limit = c < k ? sources.size() : targets.size();
              if (++idx[c] < limit) {
                done = false;
                break;
              }
              idx[c] = 0;
            }
          }
        }
      }
    }
  }

  int                          r_;
  std::vector<TransitiveTuple> tuples_;
  std::vector<std::size_t>     t_;
};

//! Pairs of distinct positive words of length <= L acting identically on
//! every state of length <= R (an empty result certifies faithfulness there).
inline std::vector<std::pair<Word, Word>> undistinguished_pairs(KTransitiveAct const& act,
                                                                std::size_t L, std::size_t R) {
  std::vector<Word> states;
  Word              w;
  auto              collect = [&](auto&& self) -> void {
    states.push_back(w);
    if (w.size() == R) {
      return;
    }
    for (Letter x = 1; x <= act.alphabet_rank(); ++x) {
      w.push_back(x);
      auto s = act.is_state(w);
      if (!s) {
        throw budget_exceeded("faithfulness check needs tuples beyond the budget");
      }
      if (*s) {
        self(self);
      }
      w.pop_back();
    }
  };
  collect(collect);
  auto const                         words = all_words_upto(L, act.alphabet_rank(), WordMode::monoid);
  std::vector<std::vector<Word>>     images(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (auto const& s : states) {
      auto res = act.apply(s, words[i]);
      if (!res.known) {
        throw budget_exceeded("faithfulness check needs tuples beyond the budget");
      }
      images[i].push_back(std::move(res.state));
    }
  }
  std::vector<std::pair<Word, Word>> same;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (images[i] == images[j]) {
        same.emplace_back(words[j], words[i]);
      }
    }
  }
  return same;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_ACTS_HPP

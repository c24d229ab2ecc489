#ifndef MAXGROWTH_SERIES_HPP
#define MAXGROWTH_SERIES_HPP

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace maxgrowth {

//! monoid: acts and modules over W_r or A_r (base r);
//! group: acts and modules over F_r (base 2r - 1).
enum class SeriesKind { monoid, group };

//! Ball sizes (or ball dimensions) g(0..N).
struct GrowthSeries {
  SeriesKind          kind = SeriesKind::group;
  int                 r    = 2;
  std::vector<BigInt> g;

  BigInt base() const {
    return kind == SeriesKind::monoid ? BigInt(r) : BigInt(2 * r - 1);
  }
  std::size_t size() const noexcept {
    return g.size();
  }
  //! Sphere size d(n) = g(n) - g(n-1), with g(-1) = 0.
  BigInt d(std::size_t n) const {
    return n == 0 ? g.at(0) : g.at(n) - g.at(n - 1);
  }
  //! alpha(n) = g(n) / base^n.
  Rational alpha(std::size_t n) const {
    return Rational(g.at(n), ipow(base(), n));
  }
  bool operator==(GrowthSeries const&) const = default;
};

struct SeriesReport {
  bool        ok    = true;
  std::size_t index = 0;
  std::string violation;

  explicit operator bool() const noexcept {
    return ok;
  }
};

//! Checks monotonicity, the sphere inequalities and, for group series,
//! backward propagation of exponential lower bounds:
//! g(n) >= c (2r-1)^n implies g(m) >= (2r-2)/(2r-1) c (2r-1)^m for 0 < m < n.
inline SeriesReport validate_series(GrowthSeries const& s) {
  SeriesReport rep;
  auto fail = [&](std::size_t n, std::string msg) {
    rep.ok        = false;
    rep.index     = n;
    rep.violation = std::move(msg);
    return rep;
  };
  BigInt const r = s.r;
  for (std::size_t n = 0; n < s.g.size(); ++n) {
    if (s.g[n] < 0) {
      return fail(n, "negative ball size");
    }
    if (n > 0 && s.g[n] < s.g[n - 1]) {
      return fail(n, "ball sizes decrease");
    }
  }
  for (std::size_t n = 1; n < s.g.size(); ++n) {
    BigInt dn = s.d(n), dp = s.d(n - 1);
    if (s.kind == SeriesKind::monoid) {
      if (dn > r * dp) {
        return fail(n, "d(" + std::to_string(n) + ")=" + dn.str() + " > r*d(" + std::to_string(n - 1)
                           + ")=" + (r * dp).str());
      }
    } else {
      BigInt factor = n == 1 ? 2 * r : 2 * r - 1;
      if (dn > factor * dp) {
        return fail(n, "d(" + std::to_string(n) + ")=" + dn.str() + " > " + factor.str() + "*d("
                           + std::to_string(n - 1) + ")=" + (factor * dp).str());
      }
    }
  }
  if (s.kind == SeriesKind::group && s.r >= 2) {
    BigInt const q = 2 * r - 1;
    for (std::size_t n = 2; n < s.g.size(); ++n) {
      for (std::size_t m = 1; m < n; ++m) {
        // (2r-2) g(n) <= g(m) (2r-1)^(n-m+1)
        if ((2 * r - 2) * s.g[n] > s.g[m] * ipow(q, n - m + 1)) {
          return fail(m, "backward propagation from n=" + std::to_string(n) + " fails at m="
                             + std::to_string(m));
        }
      }
    }
  }
  return rep;
}

//! Thrown when an emitted series violates the growth-function axioms.
class series_postcondition_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {
inline std::atomic<std::size_t>& validated_counter() {
  static std::atomic<std::size_t> n{0};
  return n;
}
}  // namespace detail

//! Number of series validated by checked() in this process.
inline std::size_t series_validation_count() {
  return detail::validated_counter().load();
}

//! Every series leaving the library passes through here.
inline GrowthSeries checked(GrowthSeries s) {
  auto rep = validate_series(s);
  ++detail::validated_counter();
  if (!rep) {
    throw series_postcondition_error("growth series post-condition: " + rep.violation);
  }
  return s;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_SERIES_HPP

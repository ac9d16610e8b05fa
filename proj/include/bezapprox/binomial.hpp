#pragma once

#include <atomic>
#include <cmath>
#include <string>

#include "error.hpp"

namespace bezapprox {

inline constexpr int kMaxBinomialOrder = 60;
inline constexpr int kDefaultDegreeCap = 30;

namespace detail {
inline std::atomic<int>& degree_cap_storage() {
  static std::atomic<int> cap{kDefaultDegreeCap};
  return cap;
}
}  // namespace detail

/// Largest polynomial degree accepted by basis, elevation and reduction routines.
inline int degree_cap() { return detail::degree_cap_storage().load(std::memory_order_relaxed); }

inline void set_degree_cap(int cap) {
  if (cap < 0 || 2 * cap > kMaxBinomialOrder) {
    fail(ErrorKind::InvalidArgument, "degree cap must lie in [0, " + std::to_string(kMaxBinomialOrder / 2) + "]");
  }
  detail::degree_cap_storage().store(cap, std::memory_order_relaxed);
}

inline void check_degree(int n, const char* what = "degree") {
  if (n < 0) fail(ErrorKind::InvalidArgument, std::string(what) + " must be nonnegative");
  if (n > degree_cap()) {
    fail(ErrorKind::DegreeCap, std::string(what) + " " + std::to_string(n) + " exceeds the configured cap " +
                                   std::to_string(degree_cap()));
  }
}

/// C(n, k) by the multiplicative recurrence in extended precision; zero outside 0 <= k <= n.
inline double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (n > kMaxBinomialOrder) fail(ErrorKind::DegreeCap, "binomial order above " + std::to_string(kMaxBinomialOrder));
  if (k > n - k) k = n - k;
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  return static_cast<double>(std::round(c));
}

}  // namespace bezapprox

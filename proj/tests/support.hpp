#pragma once

#include <gtest/gtest.h>

#include <initializer_list>

#include "flagcurv/minkowski_randers.hpp"
#include "flagcurv/rng.hpp"

namespace flagcurv::testing {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Mat diag(std::initializer_list<double> xs) { return vec(xs).asDiagonal(); }

/// Symmetric positive definite, condition number bounded by roughly 10.
inline Mat random_spd(int n, SplitMix64& rng) {
  const Mat A = Mat::NullaryExpr(n, n, [&]() { return rng.uniform(-1.0, 1.0); });
  return A * A.transpose() / n + 0.3 * Mat::Identity(n, n);
}

/// Wind with h-norm exactly `wind`.
inline Vec wind_with_norm(const Mat& h, double wind, SplitMix64& rng) {
  Vec W = rng.normal_vector(h.rows());
  const double nw = norm_h(h, W);
  return nw > 0.0 ? Vec(W * (wind / nw)) : W;
}

inline ZermeloData random_zermelo(int n, SplitMix64& rng, double max_wind = 0.8) {
  const Mat h = random_spd(n, rng);
  return ZermeloData::make(h, wind_with_norm(h, rng.uniform(0.0, max_wind), rng));
}

inline RandersData random_randers(int n, SplitMix64& rng, double max_b = 0.8) {
  const Mat g = random_spd(n, rng);
  return RandersData::make(g, wind_with_norm(g, rng.uniform(0.0, max_b), rng));
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

#define EXPECT_THROW_KIND(stmt, expected_kind)                          \
  do {                                                                  \
    try {                                                               \
      stmt;                                                             \
      ADD_FAILURE() << "expected GeometryError(" #expected_kind ")";     \
    } catch (const ::flagcurv::GeometryError& e) {                      \
      EXPECT_EQ(e.kind(), ::flagcurv::ErrorKind::expected_kind) << e.what(); \
    }                                                                   \
  } while (0)

}  // namespace flagcurv::testing

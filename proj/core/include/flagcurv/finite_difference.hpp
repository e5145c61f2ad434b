#pragma once

#include <array>

namespace flagcurv::fd {

// Central-difference stencils over a scalar offset. `f` maps an offset to a
// double or an Eigen vector; the second-order variants are used for immersion
// derivatives, the fourth- and sixth-order ones by the oracle, where derivatives
// are nested two levels deep.

namespace detail {
// Forces Eigen expressions into concrete values so no temporaries dangle.
inline double eval(double x) { return x; }
template <class E>
auto eval(const E& e) {
  return e.eval();
}
}  // namespace detail

inline constexpr std::array<double, 4> kOffsets4 = {-2.0, -1.0, 1.0, 2.0};
inline constexpr std::array<double, 4> kWeights4 = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0,
                                                    -1.0 / 12.0};

template <class Fn>
auto first2(const Fn& f, double h) {
  return detail::eval((f(h) - f(-h)) / (2.0 * h));
}

template <class Fn>
auto first4(const Fn& f, double h) {
  auto acc = detail::eval(kWeights4[0] * f(kOffsets4[0] * h));
  for (int i = 1; i < 4; ++i) acc += kWeights4[i] * f(kOffsets4[i] * h);
  return detail::eval(acc / h);
}

template <class Fn>
auto second2(const Fn& f, double h) {
  return detail::eval((f(h) - 2.0 * f(0.0) + f(-h)) / (h * h));
}

template <class Fn>
auto second4(const Fn& f, double h) {
  const double w = 1.0 / (12.0 * h * h);
  return detail::eval(w * (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)));
}

/// d^2/ds dt of f(s, t) at the origin, tensor product of first2 stencils.
template <class Fn>
auto mixed2(const Fn& f, double hs, double ht) {
  return detail::eval((f(hs, ht) - f(hs, -ht) - f(-hs, ht) + f(-hs, -ht)) / (4.0 * hs * ht));
}

/// d^2/ds dt of f(s, t) at the origin, tensor product of first4 stencils.
template <class Fn>
auto mixed4(const Fn& f, double hs, double ht) {
  auto row = [&](int i) {
    const double s = kOffsets4[i] * hs;
    auto acc = detail::eval(kWeights4[0] * f(s, kOffsets4[0] * ht));
    for (int j = 1; j < 4; ++j) acc += kWeights4[j] * f(s, kOffsets4[j] * ht);
    return acc;
  };
  auto acc = detail::eval(kWeights4[0] * row(0));
  for (int i = 1; i < 4; ++i) acc += kWeights4[i] * row(i);
  return detail::eval(acc / (hs * ht));
}

inline constexpr std::array<double, 6> kOffsets6 = {-3.0, -2.0, -1.0, 1.0, 2.0, 3.0};
inline constexpr std::array<double, 6> kWeights6 = {-1.0 / 60.0, 9.0 / 60.0, -45.0 / 60.0,
                                                    45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};

template <class Fn>
auto first6(const Fn& f, double h) {
  auto acc = detail::eval(kWeights6[0] * f(kOffsets6[0] * h));
  for (int i = 1; i < 6; ++i) acc += kWeights6[i] * f(kOffsets6[i] * h);
  return detail::eval(acc / h);
}

/// d^2/ds dt of f(s, t) at the origin, tensor product of first6 stencils.
template <class Fn>
auto mixed6(const Fn& f, double hs, double ht) {
  auto row = [&](int i) {
    const double s = kOffsets6[i] * hs;
    auto acc = detail::eval(kWeights6[0] * f(s, kOffsets6[0] * ht));
    for (int j = 1; j < 6; ++j) acc += kWeights6[j] * f(s, kOffsets6[j] * ht);
    return acc;
  };
  auto acc = detail::eval(kWeights6[0] * row(0));
  for (int i = 1; i < 6; ++i) acc += kWeights6[i] * row(i);
  return detail::eval(acc / (hs * ht));
}

/// d^3/dr ds dt of f(r, s, t) at the origin, tensor product of first2 stencils.
template <class Fn>
auto mixed3_2(const Fn& f, double h) {
  auto acc = detail::eval(f(h, h, h));
  acc -= f(h, h, -h);
  acc -= f(h, -h, h);
  acc += f(h, -h, -h);
  acc -= f(-h, h, h);
  acc += f(-h, h, -h);
  acc += f(-h, -h, h);
  acc -= f(-h, -h, -h);
  return detail::eval(acc / (8.0 * h * h * h));
}

}  // namespace flagcurv::fd

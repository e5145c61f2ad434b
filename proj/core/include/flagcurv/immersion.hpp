#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flagcurv/types.hpp"

namespace flagcurv {

struct ZermeloData;

/// D^2 f at a point: k*k ambient vectors, row-major in the parameter indices.
class SecondDerivatives {
 public:
  SecondDerivatives() = default;
  SecondDerivatives(int k, int n);

  int param_dim() const { return k_; }
  Vec& at(int i, int j) { return entries_[static_cast<size_t>(i * k_ + j)]; }
  const Vec& at(int i, int j) const { return entries_[static_cast<size_t>(i * k_ + j)]; }

  /// sum_ij a^i b^j D_ij f
  Vec contract(const Vec& a, const Vec& b) const;

 private:
  int k_ = 0;
  std::vector<Vec> entries_;
};

/// D^3 f at a point: k*k*k ambient vectors.
class ThirdDerivatives {
 public:
  ThirdDerivatives() = default;
  ThirdDerivatives(int k, int n);

  int param_dim() const { return k_; }
  Vec& at(int i, int j, int l) { return entries_[index(i, j, l)]; }
  const Vec& at(int i, int j, int l) const { return entries_[index(i, j, l)]; }

  Vec contract(const Vec& a, const Vec& b, const Vec& c) const;

 private:
  size_t index(int i, int j, int l) const { return static_cast<size_t>((i * k_ + j) * k_ + l); }
  int k_ = 0;
  std::vector<Vec> entries_;
};

enum class DerivativeMode { Analytic, FiniteDifference };

/// Axis-aligned box of chart parameters where a preset is regular.
struct ChartBox {
  Vec center;
  double half_width = 1.0;
};

/// A single chart x -> f(x) of a k-dimensional submanifold of R^n together
/// with derivatives up to order three.
class Immersion {
 public:
  using MapFn = std::function<Vec(const Vec&)>;
  using JacobianFn = std::function<Mat(const Vec&)>;
  using HessianFn = std::function<SecondDerivatives(const Vec&)>;
  using ThirdFn = std::function<ThirdDerivatives(const Vec&)>;

  Immersion(std::string name, int ambient_dim, int param_dim, MapFn map, JacobianFn jacobian,
            HessianFn hessian, ThirdFn third, ChartBox domain);

  const std::string& name() const { return name_; }
  int ambient_dim() const { return n_; }
  int param_dim() const { return k_; }
  int codimension() const { return n_ - k_; }
  DerivativeMode mode() const { return mode_; }
  const ChartBox& domain() const { return domain_; }

  /// Copy evaluated in the given mode. Finite-difference mode only uses the map.
  Immersion with_mode(DerivativeMode mode) const;

  Vec point(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
  SecondDerivatives hessian(const Vec& x) const;
  /// Throws MissingThirdDerivative for analytic immersions built without D^3 f.
  ThirdDerivatives third(const Vec& x) const;
  bool has_third() const { return mode_ == DerivativeMode::FiniteDifference || bool(third_); }

  /// x in the chart box, drawn from `uniform01` (one draw per coordinate).
  template <class Rng>
  Vec sample_point(Rng& rng) const {
    Vec x(k_);
    for (int i = 0; i < k_; ++i) {
      x[i] = domain_.center[i] + rng.uniform(-domain_.half_width, domain_.half_width);
    }
    return x;
  }

  /// S = V as a one-chart "immersion" (k = n); used by the oracle for flat checks.
  static Immersion identity(int n);

  /// f(x) = (x, phi_1(x), ..., phi_m(x)).
  struct GraphComponent {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
    /// third(x)[l](i, j) = d^3 phi / dx_i dx_j dx_l
    std::function<std::vector<Mat>(const Vec&)> third;
  };
  static Immersion graph(std::string name, int param_dim, std::vector<GraphComponent> comps,
                         ChartBox domain);

  /// c + M f(x).
  static Immersion affine_image(const Immersion& inner, Vec offset, Mat linear,
                                std::string name);

  /// f(c + A s + (1/2) B(s, s)), with B[i] the Hessian of the i-th new coordinate map.
  static Immersion reparametrize(const Immersion& inner, Vec c, Mat A, std::vector<Mat> B,
                                 ChartBox domain, std::string name);

 private:
  std::string name_;
  int n_;
  int k_;
  MapFn map_;
  JacobianFn jacobian_;
  HessianFn hessian_;
  ThirdFn third_;
  ChartBox domain_;
  DerivativeMode mode_ = DerivativeMode::Analytic;
};

/// phi(x) = c + b.x + (1/2) x^T A x + (1/6) T(x,x,x), T given by slices T[l](i,j).
Immersion::GraphComponent cubic_component(double c, Vec b, Mat A, std::vector<Mat> T);
/// phi(x) = sum_i coeffs[i] * x_0^i
Immersion::GraphComponent univariate_poly_component(int param_dim, std::vector<double> coeffs);
/// phi(x) = sqrt(r^2 - |x|^2)
Immersion::GraphComponent hemisphere_component(int param_dim, double radius);

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Registry of named charts. `spec` is "name" or "name{p1,p2,...}". Presets
/// whose ambient dimension is free (hyperplane, sphere, indicatrix) take it
/// from Z; fixed-dimension presets throw UnknownPreset on a mismatch.
Immersion make_preset(const std::string& spec, const ZermeloData& Z);
std::vector<PresetInfo> preset_registry();

}  // namespace flagcurv

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "flagcurv/rng.hpp"
#include "flagcurv/submanifold.hpp"

namespace flagcurv {

/// Relative spread below which a flagpole counts as having scalar flag curvature.
inline constexpr double kScalarFlagTol = 1e-7;
inline constexpr double kDegenerateFlagTol = 1e-12;

/// A flag (v, u) at a chart point, with the quantities every formula reuses.
/// v and u are ambient tangent vectors.
struct FlagFrame {
  Vec x;
  Vec p;
  Vec v;
  Vec u;
  double F_v = 0.0;
  double phi_v = 0.0;
  /// u - (1/phi) h(v/F - W, u) v/F, the g_v-orthogonal part of u.
  Vec u_tilde;
  WindSplit wind;
};

/// Finslerian invariants of the induced Randers metric at (x, v). Chart
/// coordinates are used for tangent arguments.
class FlagContext {
 public:
  FlagContext(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v,
              bool with_third = true);

  const SurfacePoint& point() const { return sp_; }
  const ZermeloData& zermelo() const { return sp_.zermelo(); }
  const Vec& v_chart() const { return v_chart_; }
  const Vec& v() const { return v_; }
  double F() const { return F_; }
  double phi() const { return phi_; }
  const WindSplit& wind() const { return wind_; }
  const Mat& g_matrix() const { return G_; }

  /// g_v and C_v on ambient vectors.
  double g(const Vec& a, const Vec& b) const { return a.dot(G_ * b); }
  double cartan(const Vec& a, const Vec& b, const Vec& c) const;

  FlagFrame flag_frame(const Vec& u) const;

  /// II_v(u, w), ambient.
  Vec sff(const Vec& u, const Vec& w) const;
  /// g_v-unit normal xi_v (hypersurfaces).
  Vec xi() const;
  /// sigma_v(u, w) (hypersurfaces).
  double sigma(const Vec& u, const Vec& w) const;

  /// Q_v(u, v) in chart coordinates.
  Vec Q_with_flagpole(const Vec& u) const;
  /// Q_v(u, w) in chart coordinates.
  Vec Q(const Vec& u, const Vec& w) const;

  double flag_curvature(const Vec& u) const;
  double flag_curvature_hypersurface(const Vec& u) const;
  /// Riemannian part of the flag curvature: prefactor * K^h plus the
  /// wind-weighted II' Gram term; u-independence of this is the scalar test.
  double scalar_flag_quantity(const Vec& u) const;

 private:
  void check_flag(const Vec& ua) const;
  Vec u_tilde_chart(const Vec& u) const;
  /// Chart-coordinates solve against the g_v Gram matrix of the frame.
  Vec solve_g(const Vec& rhs) const;

  SurfacePoint sp_;
  Vec v_chart_;
  Vec v_;
  double F_ = 0.0;
  double phi_ = 0.0;
  Vec vu_;  ///< v / F
  Mat G_;   ///< g_v, ambient coefficients
  Eigen::LLT<Mat> g_gram_llt_;
  WindSplit wind_;
};

struct ScalarFlagReport {
  Vec flagpole;
  int samples = 0;
  std::vector<double> values;
  double spread = 0.0;
  double mean = 0.0;
  bool verdict = false;
};

struct TotallyGeodesicReport {
  bool totally_geodesic = false;
  /// max |II_v(v,v)|_h / |v|_h^2 over the samples
  double worst_residual = 0.0;
  /// max |Q_v(u,w)|_h / (|u|_h |w|_h); NaN unless totally geodesic
  double worst_q_residual = 0.0;
};

/// Draws (x, v) in chart coordinates.
using RegionSampler = std::function<std::pair<Vec, Vec>(SplitMix64&)>;

Vec second_fundamental_form_F(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                              const Vec& v, const Vec& u, const Vec& w);
Vec xi_normal(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v);
double sigma_F(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v,
               const Vec& u, const Vec& w);
Vec difference_tensor_Q(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v,
                        const Vec& u, const Vec& w);
double flag_curvature_general(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                              const Vec& v, const Vec& u);
double flag_curvature_hypersurface(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                                   const Vec& v, const Vec& u);

/// Closed-form flag curvature of the indicatrix at the ambient point x
/// (h(x - W, x - W) = 1) for ambient tangent vectors v, u.
double indicatrix_flag_curvature(const ZermeloData& Z, const Vec& x, const Vec& v, const Vec& u);

ScalarFlagReport scalar_flag_check(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                                   const Vec& v, int m, std::uint64_t seed,
                                   double tol = kScalarFlagTol);

TotallyGeodesicReport totally_geodesic_sample(const ZermeloData& Z, const Immersion& imm,
                                              const RegionSampler& sampler, int m,
                                              std::uint64_t seed);

}  // namespace flagcurv

#pragma once

#include <optional>

#include "flagcurv/immersion.hpp"
#include "flagcurv/minkowski_randers.hpp"

namespace flagcurv {

/// Tangent basis (columns of Df) and an h-orthonormal normal basis at f(x).
struct TangentFrame {
  Vec point;
  Mat basis;         ///< n x k
  Mat h_gram;        ///< k x k, h(E_i, E_j)
  Mat normal_basis;  ///< n x (n - k)
};

/// h-projections of the wind at a point, for a given flagpole.
struct WindSplit {
  Vec W_top;
  Vec W_perp;
  /// Projection onto T_pS cap T_{v/F}Sigma.
  Vec W_top_sigma;
  /// h-orthonormal basis of T_pS cap T_{v/F}Sigma (n x (k - 1)).
  Mat sigma_basis;
};

/// Everything the Riemannian side needs at one chart point: frame, projectors
/// and derivatives of f. Tangent vectors are passed in chart coordinates unless
/// a function says otherwise.
class SurfacePoint {
 public:
  SurfacePoint(const ZermeloData& Z, const Immersion& imm, const Vec& x, bool with_third = false);

  const ZermeloData& zermelo() const { return Z_; }
  const Vec& x() const { return x_; }
  const TangentFrame& frame() const { return frame_; }
  int ambient_dim() const { return static_cast<int>(frame_.basis.rows()); }
  int param_dim() const { return static_cast<int>(frame_.basis.cols()); }
  int codimension() const { return ambient_dim() - param_dim(); }

  Vec to_ambient(const Vec& chart) const { return frame_.basis * chart; }
  /// Chart coordinates of the h-projection of `a` onto T_pS.
  Vec to_chart(const Vec& a) const;
  Vec tangent_part(const Vec& a) const { return to_ambient(to_chart(a)); }
  Vec normal_part(const Vec& a) const { return a - tangent_part(a); }

  /// Unit normal for hypersurfaces; throws CodimensionNotOne otherwise.
  Vec unit_normal() const;

  /// II'(u, w): h-normal part of D^2 f(u, w).
  Vec sff(const Vec& u, const Vec& w) const;
  /// (nabla-bar_v II')(v, v), normal-valued.
  Vec nabla_sff(const Vec& v) const;
  /// Riemannian sectional curvature of span{v, u} by the Gauss equation.
  double sectional_curvature(const Vec& v, const Vec& u) const;

  WindSplit wind_split(const Vec& v) const;

 private:
  ZermeloData Z_;
  Vec x_;
  TangentFrame frame_;
  Eigen::LLT<Mat> gram_llt_;
  SecondDerivatives d2_;
  std::optional<ThirdDerivatives> d3_;
};

TangentFrame tangent_frame(const ZermeloData& Z, const Immersion& imm, const Vec& x);

Vec second_fundamental_form_h(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                              const Vec& u, const Vec& w);

double sectional_curvature_h(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                             const Vec& v, const Vec& u);

/// (nabla-bar_v sigma')(v, v) for hypersurfaces.
double nabla_bar_sfp(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v);

/// Zermelo data of the induced norm, in the frame E = Df(x).
ZermeloData induced_zermelo(const ZermeloData& Z, const Immersion& imm, const Vec& x);

WindSplit wind_split(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v);

}  // namespace flagcurv

#pragma once

#include <functional>

#include "flagcurv/immersion.hpp"
#include "flagcurv/types.hpp"

namespace flagcurv {

struct ZermeloData;

/// Finite-difference ground truth. Everything below is built from L(x, y)
/// alone: no fundamental tensor, Cartan tensor or curvature formula is shared
/// with the closed-form modules.
struct OracleSteps {
  /// Relative step in y for derivatives of L (scaled by |y|).
  double dy = 2e-3;
  /// Relative step in x for derivatives of L (scaled by 1 + |x|).
  double dx = 2e-3;
  /// Relative steps for derivatives of the spray coefficients.
  double nested_dy = 1e-2;
  double nested_dx = 1e-2;

  OracleSteps scaled(double factor) const {
    return {dy * factor, dx * factor, nested_dy * factor, nested_dx * factor};
  }
};

/// Lagrangian L(x, y) of a Finsler metric on a chart domain in R^k.
struct ChartFinsler {
  using Lagrangian = std::function<double(const Vec& x, const Vec& y)>;

  int param_dim = 0;
  Lagrangian L;
  OracleSteps steps;

  /// L(x, y) = F(Df(x) y)^2, with F read off the indicatrix
  /// {w : h(w - W, w - W) = 1} directly.
  static ChartFinsler induced(const ZermeloData& Z, const Immersion& imm,
                              OracleSteps steps = {});
};

double fd_fundamental_tensor(const ChartFinsler& cf, const Vec& x, const Vec& y, const Vec& a,
                             const Vec& b);
Mat fd_fundamental_matrix(const ChartFinsler& cf, const Vec& x, const Vec& y);
double fd_cartan_tensor(const ChartFinsler& cf, const Vec& x, const Vec& y, const Vec& a,
                        const Vec& b, const Vec& c);

/// G^i = (1/4) g^{ij} (y^k d^2L/dy^j dx^k - dL/dx^j)
Vec spray_coefficients(const ChartFinsler& cf, const Vec& x, const Vec& y);

/// R^i_k built from G by nested differences; returns g_y(R(u), u) / (L g_y(u,u) - g_y(y,u)^2).
double spray_flag_curvature(const ChartFinsler& cf, const Vec& x, const Vec& y, const Vec& u);

}  // namespace flagcurv

#pragma once

#include "flagcurv/types.hpp"

namespace flagcurv {

/// Reject winds with h(W,W) >= 1 - kWindMargin.
inline constexpr double kWindMargin = 1e-8;
/// Relative orthogonality tolerance for arguments that must lie in T_{v/F}Sigma.
inline constexpr double kSigmaTangentTol = 1e-8;
inline constexpr double kZeroVectorTol = 1e-14;

/// Navigation data of a Randers norm: a scalar product h and a wind W with
/// h(W,W) < 1. The unit ball of F is the h-unit ball translated by W.
struct ZermeloData {
  Mat h;
  Vec W;

  /// Validates symmetry, positive definiteness and the wind margin.
  static ZermeloData make(Mat h, Vec W);

  int dim() const { return static_cast<int>(W.size()); }
  /// l(W) = 1 - h(W,W)
  double wind_slack() const { return 1.0 - inner(h, W, W); }
};

/// R(v) = sqrt(g(v,v)) + g(v,B).
struct RandersData {
  Mat g;
  Vec B;

  static RandersData make(Mat g, Vec B);

  int dim() const { return static_cast<int>(B.size()); }
};

/// a = a_sigma + lambda * v_unit with a_sigma in T_{v/F(v)}Sigma.
struct SigmaDecomposition {
  Vec v_unit;
  double lambda = 0.0;
  Vec a_sigma;
};

double zermelo_norm(const ZermeloData& Z, const Vec& v);
double randers_norm(const RandersData& R, const Vec& v);

ZermeloData randers_to_zermelo(const RandersData& R);
RandersData zermelo_to_randers(const ZermeloData& Z);

/// phi(v) = h(v/F - W, v/F); scale invariant, equal to 1 when W = 0.
double phi(const ZermeloData& Z, const Vec& v);

SigmaDecomposition sigma_decompose(const ZermeloData& Z, const Vec& v,
                                   const Vec& a);

/// g_v(a,b) through the indicatrix splitting: (1/phi) h on T Sigma and
/// g_v(v/F, .) = (1/phi) h(v/F - W, .).
double fundamental_tensor(const ZermeloData& Z, const Vec& v, const Vec& a,
                          const Vec& b);

/// Coefficient matrix of g_v in the ambient basis.
Mat fundamental_tensor_matrix(const ZermeloData& Z, const Vec& v);

/// Cartan tensor on T_{v/F}Sigma. Throws NotInSigmaTangent when an argument
/// has an h(v/F - W, .) component above tolerance.
double cartan_tensor_sigma(const ZermeloData& Z, const Vec& v, const Vec& u,
                           const Vec& w, const Vec& z);

/// Cartan tensor for arbitrary arguments; the v-components drop out.
double cartan_tensor_full(const ZermeloData& Z, const Vec& v, const Vec& a,
                          const Vec& b, const Vec& c);

}  // namespace flagcurv

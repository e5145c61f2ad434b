#include "flagcurv/submanifold.hpp"

#include <Eigen/SVD>

namespace flagcurv {
namespace {

constexpr double kRankTol = 1e-8;
constexpr double kPlaneTol = 1e-12;
constexpr double kOrientTol = 1e-12;

// Residual of `a` after removing its h-components along the h-orthonormal
// columns of Q; applied twice for stability.
Vec h_residual(const Mat& h, const Mat& Q, Vec a) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < Q.cols(); ++c) a -= inner(h, Q.col(c), a) * Q.col(c);
  }
  return a;
}

// Extends the h-orthonormal columns of Q by `count` vectors drawn from
// `candidates`, always taking the candidate with the largest residual.
Mat extend_orthonormal(const Mat& h, Mat Q, const Mat& candidates, Eigen::Index count) {
  std::vector<bool> used(static_cast<size_t>(candidates.cols()), false);
  for (Eigen::Index step = 0; step < count; ++step) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    Vec best_res;
    for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
      if (used[static_cast<size_t>(c)]) continue;
      Vec r = h_residual(h, Q, candidates.col(c));
      const double nr = norm_h(h, r);
      if (nr > best_norm) {
        best = c;
        best_norm = nr;
        best_res = std::move(r);
      }
    }
    if (best < 0 || !(best_norm > kRankTol)) {
      throw GeometryError(ErrorKind::RankDeficient, "could not complete an orthonormal basis");
    }
    used[static_cast<size_t>(best)] = true;
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = best_res / best_norm;
  }
  return Q;
}

Mat normalized_columns(const Mat& h, Mat E) {
  for (Eigen::Index c = 0; c < E.cols(); ++c) E.col(c) /= norm_h(h, E.col(c));
  return E;
}

void orient(const Mat& h, Eigen::Ref<Vec> N) {
  const double last = (h * N)[N.size() - 1];
  double sign = 0.0;
  if (std::abs(last) > kOrientTol) {
    sign = last > 0.0 ? 1.0 : -1.0;
  } else {
    for (Eigen::Index i = 0; i < N.size() && sign == 0.0; ++i) {
      if (std::abs(N[i]) > kOrientTol) sign = N[i] > 0.0 ? 1.0 : -1.0;
    }
  }
  if (sign < 0.0) N = -N;
}

}  // namespace

SurfacePoint::SurfacePoint(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                           bool with_third)
    : Z_(Z), x_(x) {
  if (imm.ambient_dim() != Z.dim()) {
    throw GeometryError(ErrorKind::RankDeficient, "immersion and Zermelo data disagree on n");
  }
  if (x.size() != imm.param_dim()) {
    throw GeometryError(ErrorKind::RankDeficient, "chart point has wrong dimension");
  }
  const Mat& h = Z_.h;
  frame_.point = imm.point(x);
  frame_.basis = imm.jacobian(x);
  Eigen::JacobiSVD<Mat> svd(frame_.basis);
  if (!(svd.singularValues().minCoeff() > kRankTol)) {
    throw GeometryError(ErrorKind::RankDeficient, "Df is not of full rank");
  }
  frame_.h_gram = frame_.basis.transpose() * h * frame_.basis;
  gram_llt_.compute(frame_.h_gram);
  if (gram_llt_.info() != Eigen::Success) {
    throw GeometryError(ErrorKind::RankDeficient, "tangent Gram matrix is singular");
  }
  const int n = ambient_dim();
  const int k = param_dim();
  const Mat tangent_on = extend_orthonormal(h, Mat(n, 0), normalized_columns(h, frame_.basis), k);
  const Mat full = extend_orthonormal(h, tangent_on, Mat::Identity(n, n), n - k);
  frame_.normal_basis = full.rightCols(n - k);
  for (int c = 0; c < n - k; ++c) orient(h, frame_.normal_basis.col(c));

  d2_ = imm.hessian(x);
  if (with_third) d3_ = imm.third(x);
}

Vec SurfacePoint::to_chart(const Vec& a) const {
  return gram_llt_.solve(frame_.basis.transpose() * (Z_.h * a));
}

Vec SurfacePoint::unit_normal() const {
  if (codimension() != 1) {
    throw GeometryError(ErrorKind::CodimensionNotOne, "operation needs a hypersurface");
  }
  return frame_.normal_basis.col(0);
}

Vec SurfacePoint::sff(const Vec& u, const Vec& w) const { return normal_part(d2_.contract(u, w)); }

Vec SurfacePoint::nabla_sff(const Vec& v) const {
  if (!d3_) {
    throw GeometryError(ErrorKind::MissingThirdDerivative,
                        "surface point was built without third derivatives");
  }
  // With the chart-constant extension V: normal part of d/dt II'(V, V) is
  // (D^3 f(v,v,v))^perp - II'(v, c), and nabla-bar_v V = c = tangent part of
  // D^2 f(v, v); the two II'(nabla-bar_v V, v) corrections bring the total to 3.
  const Vec c = to_chart(d2_.contract(v, v));
  return normal_part(d3_->contract(v, v, v)) - 3.0 * sff(v, c);
}

double SurfacePoint::sectional_curvature(const Vec& v, const Vec& u) const {
  if (param_dim() < 2) {
    throw GeometryError(ErrorKind::DegeneratePlane, "curves have no tangent 2-planes");
  }
  const Mat& h = Z_.h;
  const Vec va = to_ambient(v);
  const Vec ua = to_ambient(u);
  const double hvv = inner(h, va, va);
  const double huu = inner(h, ua, ua);
  const double huv = inner(h, ua, va);
  const double den = hvv * huu - huv * huv;
  if (!(den > kPlaneTol * hvv * huu)) {
    throw GeometryError(ErrorKind::DegeneratePlane, "v and u do not span a plane");
  }
  const Vec IIvv = sff(v, v);
  const Vec IIuu = sff(u, u);
  const Vec IIvu = sff(v, u);
  return (inner(h, IIvv, IIuu) - inner(h, IIvu, IIvu)) / den;
}

WindSplit SurfacePoint::wind_split(const Vec& v) const {
  const Mat& h = Z_.h;
  const Vec& W = Z_.W;
  const Vec va = to_ambient(v);
  const double F = zermelo_norm(Z_, va);
  const Vec m = va / F - W;  // h-unit normal of the indicatrix at v/F

  WindSplit out;
  out.W_top = tangent_part(W);
  out.W_perp = W - out.W_top;

  // For t tangent, h(t, m) = h(t, m_top): the intersection is the
  // h-orthocomplement of m_top inside T_pS.
  const Vec m_top = tangent_part(m);
  Mat seed(ambient_dim(), 1);
  seed.col(0) = m_top / norm_h(h, m_top);
  const Mat Q = extend_orthonormal(h, seed, normalized_columns(h, frame_.basis), param_dim() - 1);
  out.sigma_basis = Q.rightCols(param_dim() - 1);
  out.W_top_sigma = Vec::Zero(ambient_dim());
  for (Eigen::Index c = 0; c < out.sigma_basis.cols(); ++c) {
    out.W_top_sigma += inner(h, W, out.sigma_basis.col(c)) * out.sigma_basis.col(c);
  }
  return out;
}

TangentFrame tangent_frame(const ZermeloData& Z, const Immersion& imm, const Vec& x) {
  return SurfacePoint(Z, imm, x).frame();
}

Vec second_fundamental_form_h(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                              const Vec& u, const Vec& w) {
  return SurfacePoint(Z, imm, x).sff(u, w);
}

double sectional_curvature_h(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                             const Vec& v, const Vec& u) {
  return SurfacePoint(Z, imm, x).sectional_curvature(v, u);
}

double nabla_bar_sfp(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v) {
  if (imm.codimension() != 1) {
    throw GeometryError(ErrorKind::CodimensionNotOne, "operation needs a hypersurface");
  }
  const SurfacePoint sp(Z, imm, x, true);
  return inner(Z.h, sp.nabla_sff(v), sp.unit_normal());
}

ZermeloData induced_zermelo(const ZermeloData& Z, const Immersion& imm, const Vec& x) {
  const SurfacePoint sp(Z, imm, x);
  const Vec W_top = sp.tangent_part(Z.W);
  const Vec W_perp = Z.W - W_top;
  const double scale = 1.0 - inner(Z.h, W_perp, W_perp);
  if (!(scale > 0.0)) throw GeometryError(ErrorKind::InvalidZermelo, "normal wind too strong");
  return ZermeloData::make(sp.frame().h_gram / scale, sp.to_chart(Z.W));
}

WindSplit wind_split(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v) {
  return SurfacePoint(Z, imm, x).wind_split(v);
}

}  // namespace flagcurv

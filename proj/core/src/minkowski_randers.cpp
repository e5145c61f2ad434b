#include "flagcurv/minkowski_randers.hpp"

#include <Eigen/Eigenvalues>

namespace flagcurv {
namespace {

constexpr int kMaxDim = 8;
constexpr double kEigenTol = 1e-12;

// Returns an empty string when `m` is a valid scalar product of size n.
std::string check_scalar_product(const Mat& m, Eigen::Index n) {
  if (n < 1 || n > kMaxDim) return "dimension must be in [1, 8]";
  if (m.rows() != n || m.cols() != n) return "matrix size does not match vector size";
  if (!m.allFinite()) return "non-finite coefficients";
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return "matrix is not symmetric";
  Eigen::SelfAdjointEigenSolver<Mat> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= kEigenTol) return "matrix is not positive definite";
  return {};
}

void require_nonzero(const Mat& h, const Vec& v) {
  if (v.size() != h.rows()) {
    throw GeometryError(ErrorKind::ZeroVector, "vector has wrong dimension");
  }
  if (!v.allFinite() || !(norm_h(h, v) > kZeroVectorTol)) {
    throw GeometryError(ErrorKind::ZeroVector, "flagpole must be nonzero");
  }
}

// Unchecked Cartan formula for arguments already in T_{v/F}Sigma.
double cartan_on_sigma(const ZermeloData& Z, const Vec& v, double F, double ph,
                       const Vec& u, const Vec& w, const Vec& z) {
  const Mat& h = Z.h;
  const double s = inner(h, u, w) * inner(h, z, v) +
                   inner(h, w, z) * inner(h, u, v) + inner(h, z, u) * inner(h, w, v);
  return -s / (2.0 * ph * ph * F * F);
}

}  // namespace

ZermeloData ZermeloData::make(Mat h, Vec W) {
  if (auto err = check_scalar_product(h, W.size()); !err.empty()) {
    throw GeometryError(ErrorKind::InvalidZermelo, err);
  }
  if (!W.allFinite()) throw GeometryError(ErrorKind::InvalidZermelo, "non-finite wind");
  h = 0.5 * (h + h.transpose());
  if (inner(h, W, W) >= 1.0 - kWindMargin) {
    throw GeometryError(ErrorKind::InvalidZermelo, "wind must satisfy h(W,W) < 1");
  }
  return ZermeloData{std::move(h), std::move(W)};
}

RandersData RandersData::make(Mat g, Vec B) {
  if (auto err = check_scalar_product(g, B.size()); !err.empty()) {
    throw GeometryError(ErrorKind::InvalidRanders, err);
  }
  if (!B.allFinite()) throw GeometryError(ErrorKind::InvalidRanders, "non-finite one-form");
  g = 0.5 * (g + g.transpose());
  if (inner(g, B, B) >= 1.0 - kWindMargin) {
    throw GeometryError(ErrorKind::InvalidRanders, "one-form must satisfy g(B,B) < 1");
  }
  return RandersData{std::move(g), std::move(B)};
}

double zermelo_norm(const ZermeloData& Z, const Vec& v) {
  require_nonzero(Z.h, v);
  const double l = Z.wind_slack();
  const double hvW = inner(Z.h, v, Z.W);
  const double hvv = inner(Z.h, v, v);
  const double root = std::sqrt(hvW * hvW + l * hvv);
  // Both branches are the positive root of l F^2 + 2 h(v,W) F - h(v,v) = 0;
  // the second avoids cancellation when h(v,W) > 0.
  if (hvW <= 0.0) return (-hvW + root) / l;
  return hvv / (hvW + root);
}

double randers_norm(const RandersData& R, const Vec& v) {
  if (v.size() != R.g.rows() || !v.allFinite() || !(norm_h(R.g, v) > kZeroVectorTol)) {
    throw GeometryError(ErrorKind::ZeroVector, "argument must be nonzero");
  }
  return std::sqrt(inner(R.g, v, v)) + inner(R.g, v, R.B);
}

ZermeloData randers_to_zermelo(const RandersData& R) {
  const double l = 1.0 - inner(R.g, R.B, R.B);
  const Vec gB = R.g * R.B;
  Mat h = l * (R.g - gB * gB.transpose());
  Vec W = -R.B / l;
  return ZermeloData::make(std::move(h), std::move(W));
}

RandersData zermelo_to_randers(const ZermeloData& Z) {
  const double l = Z.wind_slack();
  const Vec hW = Z.h * Z.W;
  Mat g = (Z.h + hW * hW.transpose() / l) / l;
  // g(., B) = -h(., W)/l solves to B = -l W.
  Vec B = -l * Z.W;
  return RandersData::make(std::move(g), std::move(B));
}

double phi(const ZermeloData& Z, const Vec& v) {
  const Vec vu = v / zermelo_norm(Z, v);
  return inner(Z.h, vu - Z.W, vu);
}

SigmaDecomposition sigma_decompose(const ZermeloData& Z, const Vec& v, const Vec& a) {
  const double F = zermelo_norm(Z, v);
  SigmaDecomposition d;
  d.v_unit = v / F;
  const Vec m = d.v_unit - Z.W;
  const double ph = inner(Z.h, m, d.v_unit);
  d.lambda = inner(Z.h, m, a) / ph;
  d.a_sigma = a - d.lambda * d.v_unit;
  return d;
}

double fundamental_tensor(const ZermeloData& Z, const Vec& v, const Vec& a, const Vec& b) {
  const auto da = sigma_decompose(Z, v, a);
  const auto db = sigma_decompose(Z, v, b);
  const double ph = inner(Z.h, da.v_unit - Z.W, da.v_unit);
  return inner(Z.h, da.a_sigma, db.a_sigma) / ph + da.lambda * db.lambda;
}

Mat fundamental_tensor_matrix(const ZermeloData& Z, const Vec& v) {
  const double F = zermelo_norm(Z, v);
  const Vec vu = v / F;
  const Vec m = vu - Z.W;
  const double ph = inner(Z.h, m, vu);
  // lambda(a) = c.a with c = h m / phi; a_sigma = P a with P = I - vu c^T.
  const Vec c = Z.h * m / ph;
  const Eigen::Index n = v.size();
  const Mat P = Mat::Identity(n, n) - vu * c.transpose();
  Mat G = P.transpose() * Z.h * P / ph + c * c.transpose();
  return 0.5 * (G + G.transpose());
}

double cartan_tensor_sigma(const ZermeloData& Z, const Vec& v, const Vec& u, const Vec& w,
                           const Vec& z) {
  const double F = zermelo_norm(Z, v);
  const Vec vu = v / F;
  const Vec m = vu - Z.W;
  for (const Vec* x : {&u, &w, &z}) {
    if (std::abs(inner(Z.h, m, *x)) > kSigmaTangentTol * norm_h(Z.h, *x)) {
      throw GeometryError(ErrorKind::NotInSigmaTangent,
                          "argument is not h-orthogonal to v/F(v) - W");
    }
  }
  return cartan_on_sigma(Z, v, F, inner(Z.h, m, vu), u, w, z);
}

double cartan_tensor_full(const ZermeloData& Z, const Vec& v, const Vec& a, const Vec& b,
                          const Vec& c) {
  const double F = zermelo_norm(Z, v);
  const Vec vu = v / F;
  const Vec m = vu - Z.W;
  const double ph = inner(Z.h, m, vu);
  auto project = [&](const Vec& x) -> Vec { return x - (inner(Z.h, m, x) / ph) * vu; };
  return cartan_on_sigma(Z, v, F, ph, project(a), project(b), project(c));
}

}  // namespace flagcurv

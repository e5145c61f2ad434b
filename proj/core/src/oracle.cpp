#include "flagcurv/oracle.hpp"

#include "flagcurv/finite_difference.hpp"
#include "flagcurv/minkowski_randers.hpp"  // ZermeloData fields only

namespace flagcurv {
namespace {

constexpr double kFlagTol = 1e-12;

// Step along direction d so that the displacement is `rel * scale` in norm.
double step_along(const Vec& d, double rel, double scale) {
  const double nd = d.norm();
  if (!(nd > 0.0)) throw GeometryError(ErrorKind::ZeroVector, "zero difference direction");
  return rel * scale / nd;
}

void require_nonzero(const Vec& y) {
  if (!y.allFinite() || !(y.norm() > 0.0)) {
    throw GeometryError(ErrorKind::ZeroVector, "velocity must be nonzero");
  }
}

// Positive root of h(w - F W, w - F W) = F^2, polished by one Newton step.
double indicatrix_gauge(const Mat& h, const Vec& W, const Vec& w) {
  const double a = 1.0 - W.dot(h * W);
  const double b = w.dot(h * W);
  const double c = w.dot(h * w);
  const double disc = std::sqrt(b * b + a * c);
  double F = b > 0.0 ? c / (b + disc) : (disc - b) / a;
  const double r = a * F * F + 2.0 * b * F - c;
  const double dr = 2.0 * a * F + 2.0 * b;
  if (dr != 0.0) F -= r / dr;
  return F;
}

Mat inverse_gram(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) {
    throw GeometryError(ErrorKind::SingularGram, "finite-difference Gram is not positive definite");
  }
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

}  // namespace

ChartFinsler ChartFinsler::induced(const ZermeloData& Z, const Immersion& imm, OracleSteps steps) {
  ChartFinsler cf;
  cf.param_dim = imm.param_dim();
  cf.steps = steps;
  const Mat h = Z.h;
  const Vec W = Z.W;
  cf.L = [imm, h, W](const Vec& x, const Vec& y) {
    const double F = indicatrix_gauge(h, W, imm.jacobian(x) * y);
    return F * F;
  };
  return cf;
}

double fd_fundamental_tensor(const ChartFinsler& cf, const Vec& x, const Vec& y, const Vec& a,
                             const Vec& b) {
  require_nonzero(y);
  const double ha = step_along(a, cf.steps.dy, y.norm());
  const double hb = step_along(b, cf.steps.dy, y.norm());
  return 0.5 * fd::mixed4([&](double s, double t) { return cf.L(x, y + s * a + t * b); }, ha, hb);
}

Mat fd_fundamental_matrix(const ChartFinsler& cf, const Vec& x, const Vec& y) {
  require_nonzero(y);
  const int k = cf.param_dim;
  const double hy = cf.steps.dy * y.norm();
  Mat g(k, k);
  for (int i = 0; i < k; ++i) {
    const Vec ei = Vec::Unit(k, i);
    g(i, i) = 0.5 * fd::second4([&](double t) { return cf.L(x, y + t * ei); }, hy);
    for (int j = 0; j < i; ++j) {
      const Vec ej = Vec::Unit(k, j);
      g(i, j) = g(j, i) =
          0.5 * fd::mixed4([&](double s, double t) { return cf.L(x, y + s * ei + t * ej); }, hy, hy);
    }
  }
  return g;
}

double fd_cartan_tensor(const ChartFinsler& cf, const Vec& x, const Vec& y, const Vec& a,
                        const Vec& b, const Vec& c) {
  require_nonzero(y);
  const double hc = step_along(c, cf.steps.nested_dy, y.norm());
  return 0.5 * fd::first4([&](double t) { return fd_fundamental_tensor(cf, x, y + t * c, a, b); },
                          hc);
}

Vec spray_coefficients(const ChartFinsler& cf, const Vec& x, const Vec& y) {
  require_nonzero(y);
  const int k = cf.param_dim;
  const double hx = cf.steps.dx * (1.0 + x.norm());
  const double hy = cf.steps.dy * y.norm();
  const Vec yhat = y / y.norm();
  Vec rhs(k);
  for (int j = 0; j < k; ++j) {
    const Vec ej = Vec::Unit(k, j);
    const double mixed =
        y.norm() *
        fd::mixed4([&](double s, double t) { return cf.L(x + s * yhat, y + t * ej); }, hx, hy);
    const double dLdx = fd::first4([&](double t) { return cf.L(x + t * ej, y); }, hx);
    rhs[j] = mixed - dLdx;
  }
  return 0.25 * inverse_gram(fd_fundamental_matrix(cf, x, y)) * rhs;
}

double spray_flag_curvature(const ChartFinsler& cf, const Vec& x, const Vec& y, const Vec& u) {
  require_nonzero(y);
  const int k = cf.param_dim;
  const double Hx = cf.steps.nested_dx * (1.0 + x.norm());
  const double Hy = cf.steps.nested_dy * y.norm();
  const Vec yhat = y / y.norm();
  auto G = [&](const Vec& xx, const Vec& yy) { return spray_coefficients(cf, xx, yy); };

  const Vec G0 = G(x, y);
  Mat dGdx(k, k), dGdy(k, k), y_dGdxdy(k, k), G_dGdydy(k, k);
  for (int c = 0; c < k; ++c) {
    const Vec ec = Vec::Unit(k, c);
    dGdx.col(c) = fd::first6([&](double t) -> Vec { return G(x + t * ec, y); }, Hx);
    dGdy.col(c) = fd::first6([&](double t) -> Vec { return G(x, y + t * ec); }, Hy);
    y_dGdxdy.col(c) =
        y.norm() * fd::mixed6([&](double s, double t) -> Vec { return G(x + s * yhat, y + t * ec); },
                              Hx, Hy);
    if (G0.norm() > 0.0) {
      const Vec Ghat = G0 / G0.norm();
      G_dGdydy.col(c) =
          G0.norm() *
          fd::mixed6([&](double s, double t) -> Vec { return G(x, y + s * Ghat + t * ec); }, Hy, Hy);
    } else {
      G_dGdydy.col(c).setZero();
    }
  }
  const Mat R = 2.0 * dGdx - y_dGdxdy + 2.0 * G_dGdydy - dGdy * dGdy;

  const Mat g = fd_fundamental_matrix(cf, x, y);
  const double L = cf.L(x, y);
  // g(y, y) rather than L, so that the test and the projection use one Gram.
  const double gyy = y.dot(g * y);
  const double guu = u.dot(g * u);
  const double gyu = y.dot(g * u);
  const double den = gyy * guu - gyu * gyu;
  if (!(den > kFlagTol * gyy * guu)) {
    throw GeometryError(ErrorKind::DegenerateFlag, "u is parallel to y");
  }
  // R(y) = 0, so the g_y-orthogonal part of u gives the same value with
  // less cancellation for nearly degenerate flags.
  const Vec w = u - (gyu / gyy) * y;
  return (R * w).dot(g * w) / (L * w.dot(g * w));
}

}  // namespace flagcurv

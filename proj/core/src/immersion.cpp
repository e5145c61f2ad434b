#include "flagcurv/immersion.hpp"

#include <cmath>
#include <array>
#include <sstream>

#include "flagcurv/finite_difference.hpp"
#include "flagcurv/minkowski_randers.hpp"

namespace flagcurv {

SecondDerivatives::SecondDerivatives(int k, int n)
    : k_(k), entries_(static_cast<size_t>(k * k), Vec::Zero(n)) {}

Vec SecondDerivatives::contract(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(entries_.front().size());
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) out += (a[i] * b[j]) * at(i, j);
  }
  return out;
}

ThirdDerivatives::ThirdDerivatives(int k, int n)
    : k_(k), entries_(static_cast<size_t>(k * k * k), Vec::Zero(n)) {}

Vec ThirdDerivatives::contract(const Vec& a, const Vec& b, const Vec& c) const {
  Vec out = Vec::Zero(entries_.front().size());
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      for (int l = 0; l < k_; ++l) out += (a[i] * b[j] * c[l]) * at(i, j, l);
    }
  }
  return out;
}

Immersion::Immersion(std::string name, int ambient_dim, int param_dim, MapFn map,
                     JacobianFn jacobian, HessianFn hessian, ThirdFn third, ChartBox domain)
    : name_(std::move(name)),
      n_(ambient_dim),
      k_(param_dim),
      map_(std::move(map)),
      jacobian_(std::move(jacobian)),
      hessian_(std::move(hessian)),
      third_(std::move(third)),
      domain_(std::move(domain)) {
  if (k_ < 1 || k_ > n_) {
    throw GeometryError(ErrorKind::RankDeficient, "parameter dimension must be in [1, n]");
  }
  if (domain_.center.size() != k_) domain_.center = Vec::Zero(k_);
}

Immersion Immersion::with_mode(DerivativeMode mode) const {
  Immersion copy = *this;
  copy.mode_ = mode;
  return copy;
}

Vec Immersion::point(const Vec& x) const { return map_(x); }

Mat Immersion::jacobian(const Vec& x) const {
  if (mode_ == DerivativeMode::Analytic) return jacobian_(x);
  const double h = 1e-5 * (1.0 + x.norm());
  Mat J(n_, k_);
  for (int a = 0; a < k_; ++a) {
    J.col(a) = fd::first2([&](double t) -> Vec { return map_(x + t * Vec::Unit(k_, a)); }, h);
  }
  return J;
}

SecondDerivatives Immersion::hessian(const Vec& x) const {
  if (mode_ == DerivativeMode::Analytic) return hessian_(x);
  const double h = 1e-4 * (1.0 + x.norm());
  SecondDerivatives out(k_, n_);
  for (int a = 0; a < k_; ++a) {
    for (int b = a; b < k_; ++b) {
      out.at(a, b) = fd::mixed2(
          [&](double s, double t) -> Vec {
            return map_(x + s * Vec::Unit(k_, a) + t * Vec::Unit(k_, b));
          },
          h, h);
      out.at(b, a) = out.at(a, b);
    }
  }
  return out;
}

ThirdDerivatives Immersion::third(const Vec& x) const {
  if (mode_ == DerivativeMode::Analytic) {
    if (!third_) {
      throw GeometryError(ErrorKind::MissingThirdDerivative,
                          "immersion '" + name_ + "' has no analytic third derivative");
    }
    return third_(x);
  }
  const double h = 1e-3 * (1.0 + x.norm());
  ThirdDerivatives out(k_, n_);
  for (int a = 0; a < k_; ++a) {
    for (int b = a; b < k_; ++b) {
      for (int c = b; c < k_; ++c) {
        const Vec d = fd::mixed3_2(
            [&](double r, double s, double t) -> Vec {
              return map_(x + r * Vec::Unit(k_, a) + s * Vec::Unit(k_, b) +
                          t * Vec::Unit(k_, c));
            },
            h);
        for (auto [i, j, l] : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                               std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
          out.at(i, j, l) = d;
        }
      }
    }
  }
  return out;
}

Immersion Immersion::identity(int n) {
  return Immersion(
      "identity", n, n, [](const Vec& x) -> Vec { return x; },
      [n](const Vec&) -> Mat { return Mat::Identity(n, n); },
      [n](const Vec&) { return SecondDerivatives(n, n); },
      [n](const Vec&) { return ThirdDerivatives(n, n); }, ChartBox{Vec::Zero(n), 1.0});
}

Immersion Immersion::graph(std::string name, int param_dim, std::vector<GraphComponent> comps,
                           ChartBox domain) {
  const int k = param_dim;
  const int m = static_cast<int>(comps.size());
  const int n = k + m;
  auto map = [k, n, comps](const Vec& x) -> Vec {
    Vec out(n);
    out.head(k) = x;
    for (int l = 0; l < static_cast<int>(comps.size()); ++l) out[k + l] = comps[l].value(x);
    return out;
  };
  auto jac = [k, n, comps](const Vec& x) -> Mat {
    Mat J = Mat::Zero(n, k);
    J.topRows(k).setIdentity();
    for (int l = 0; l < static_cast<int>(comps.size()); ++l) {
      J.row(k + l) = comps[l].gradient(x).transpose();
    }
    return J;
  };
  auto hess = [k, n, comps](const Vec& x) {
    SecondDerivatives out(k, n);
    for (int l = 0; l < static_cast<int>(comps.size()); ++l) {
      const Mat H = comps[l].hessian(x);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) out.at(i, j)[k + l] = H(i, j);
      }
    }
    return out;
  };
  auto third = [k, n, comps](const Vec& x) {
    ThirdDerivatives out(k, n);
    for (int l = 0; l < static_cast<int>(comps.size()); ++l) {
      const std::vector<Mat> T = comps[l].third(x);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          for (int c = 0; c < k; ++c) out.at(i, j, c)[k + l] = T[c](i, j);
        }
      }
    }
    return out;
  };
  return Immersion(std::move(name), n, k, map, jac, hess, third, std::move(domain));
}

Immersion Immersion::affine_image(const Immersion& inner, Vec offset, Mat linear,
                                  std::string name) {
  const int n = static_cast<int>(linear.rows());
  const int k = inner.param_dim();
  auto map = [inner, offset, linear](const Vec& x) -> Vec {
    return offset + linear * inner.point(x);
  };
  auto jac = [inner, linear](const Vec& x) -> Mat { return linear * inner.jacobian(x); };
  auto hess = [inner, linear, k, n](const Vec& x) {
    const SecondDerivatives d = inner.hessian(x);
    SecondDerivatives out(k, n);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) out.at(i, j) = linear * d.at(i, j);
    }
    return out;
  };
  ThirdFn third;
  if (inner.has_third()) {
    third = [inner, linear, k, n](const Vec& x) {
      const ThirdDerivatives d = inner.third(x);
      ThirdDerivatives out(k, n);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          for (int l = 0; l < k; ++l) out.at(i, j, l) = linear * d.at(i, j, l);
        }
      }
      return out;
    };
  }
  return Immersion(std::move(name), n, k, map, jac, hess, third, inner.domain());
}

Immersion Immersion::reparametrize(const Immersion& inner, Vec c, Mat A, std::vector<Mat> B,
                                   ChartBox domain, std::string name) {
  const int k_old = inner.param_dim();
  const int k = static_cast<int>(A.cols());
  const int n = inner.ambient_dim();
  if (A.rows() != k_old || static_cast<int>(B.size()) != k_old) {
    throw GeometryError(ErrorKind::RankDeficient, "reparametrization has wrong shape");
  }
  auto psi = [c, A, B](const Vec& s) -> Vec {
    Vec out = c + A * s;
    for (size_t i = 0; i < B.size(); ++i) out[static_cast<Eigen::Index>(i)] += 0.5 * s.dot(B[i] * s);
    return out;
  };
  auto dpsi = [A, B](const Vec& s) -> Mat {
    Mat D = A;
    for (size_t i = 0; i < B.size(); ++i) D.row(static_cast<Eigen::Index>(i)) += (B[i] * s).transpose();
    return D;
  };
  auto d2psi = [B, k_old](int a, int b) -> Vec {
    Vec out(k_old);
    for (int i = 0; i < k_old; ++i) out[i] = B[static_cast<size_t>(i)](a, b);
    return out;
  };
  auto map = [inner, psi](const Vec& s) -> Vec { return inner.point(psi(s)); };
  auto jac = [inner, psi, dpsi](const Vec& s) -> Mat {
    return inner.jacobian(psi(s)) * dpsi(s);
  };
  auto hess = [inner, psi, dpsi, d2psi, k, n](const Vec& s) {
    const Vec x = psi(s);
    const Mat D = dpsi(s);
    const Mat J = inner.jacobian(x);
    const SecondDerivatives H = inner.hessian(x);
    SecondDerivatives out(k, n);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        out.at(a, b) = H.contract(D.col(a), D.col(b)) + J * d2psi(a, b);
      }
    }
    return out;
  };
  ThirdFn third;
  if (inner.has_third()) {
    third = [inner, psi, dpsi, d2psi, k, n](const Vec& s) {
      const Vec x = psi(s);
      const Mat D = dpsi(s);
      const SecondDerivatives H = inner.hessian(x);
      const ThirdDerivatives T = inner.third(x);
      ThirdDerivatives out(k, n);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          for (int e = 0; e < k; ++e) {
            out.at(a, b, e) = T.contract(D.col(a), D.col(b), D.col(e)) +
                              H.contract(d2psi(a, b), D.col(e)) +
                              H.contract(d2psi(a, e), D.col(b)) +
                              H.contract(d2psi(b, e), D.col(a));
          }
        }
      }
      return out;
    };
  }
  return Immersion(std::move(name), n, k, map, jac, hess, third, std::move(domain));
}

Immersion::GraphComponent cubic_component(double c, Vec b, Mat A, std::vector<Mat> T) {
  const Eigen::Index k = b.size();
  if (A.size() == 0) A = Mat::Zero(k, k);
  if (T.empty()) T.assign(static_cast<size_t>(k), Mat::Zero(k, k));
  Immersion::GraphComponent comp;
  auto tx = [T](const Vec& x) -> Mat {  // T(x, ., .)
    Mat out = Mat::Zero(x.size(), x.size());
    for (Eigen::Index l = 0; l < x.size(); ++l) out += x[l] * T[static_cast<size_t>(l)];
    return out;
  };
  comp.value = [c, b, A, tx](const Vec& x) {
    return c + b.dot(x) + 0.5 * x.dot(A * x) + x.dot(tx(x) * x) / 6.0;
  };
  comp.gradient = [b, A, tx](const Vec& x) -> Vec { return b + A * x + 0.5 * tx(x) * x; };
  comp.hessian = [A, tx](const Vec& x) -> Mat { return A + tx(x); };
  comp.third = [T](const Vec&) { return T; };
  return comp;
}

Immersion::GraphComponent univariate_poly_component(int param_dim, std::vector<double> coeffs) {
  const int k = param_dim;
  // p^(d)(t) by Horner on the differentiated coefficients.
  auto deriv = [coeffs](int d, double t) {
    double acc = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= d; --i) {
      double falling = 1.0;
      for (int j = 0; j < d; ++j) falling *= static_cast<double>(i - j);
      acc = acc * t + falling * coeffs[static_cast<size_t>(i)];
    }
    return acc;
  };
  Immersion::GraphComponent comp;
  comp.value = [deriv](const Vec& x) { return deriv(0, x[0]); };
  comp.gradient = [deriv, k](const Vec& x) -> Vec {
    Vec g = Vec::Zero(k);
    g[0] = deriv(1, x[0]);
    return g;
  };
  comp.hessian = [deriv, k](const Vec& x) -> Mat {
    Mat H = Mat::Zero(k, k);
    H(0, 0) = deriv(2, x[0]);
    return H;
  };
  comp.third = [deriv, k](const Vec& x) {
    std::vector<Mat> T(static_cast<size_t>(k), Mat::Zero(k, k));
    T[0](0, 0) = deriv(3, x[0]);
    return T;
  };
  return comp;
}

Immersion::GraphComponent hemisphere_component(int param_dim, double radius) {
  const int k = param_dim;
  const double r2 = radius * radius;
  auto height = [r2](const Vec& x) {
    const double s2 = r2 - x.squaredNorm();
    if (!(s2 > 0.0)) {
      throw GeometryError(ErrorKind::RankDeficient, "point outside the hemisphere chart");
    }
    return std::sqrt(s2);
  };
  Immersion::GraphComponent comp;
  comp.value = height;
  comp.gradient = [height](const Vec& x) -> Vec { return -x / height(x); };
  comp.hessian = [height, k](const Vec& x) -> Mat {
    const double s = height(x);
    return -Mat::Identity(k, k) / s - x * x.transpose() / (s * s * s);
  };
  comp.third = [height, k](const Vec& x) {
    const double s = height(x);
    const double s3 = s * s * s;
    const double s5 = s3 * s * s;
    std::vector<Mat> T(static_cast<size_t>(k), Mat::Zero(k, k));
    for (int l = 0; l < k; ++l) {
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const double sym = (i == j ? x[l] : 0.0) + (i == l ? x[j] : 0.0) + (j == l ? x[i] : 0.0);
          T[static_cast<size_t>(l)](i, j) = -sym / s3 - 3.0 * x[i] * x[j] * x[l] / s5;
        }
      }
    }
    return T;
  };
  return comp;
}

namespace {

struct ParsedPreset {
  std::string name;
  std::vector<double> params;
};

ParsedPreset parse_preset(const std::string& spec) {
  ParsedPreset out;
  const auto brace = spec.find('{');
  out.name = spec.substr(0, brace);
  if (brace == std::string::npos) return out;
  if (spec.back() != '}') {
    throw GeometryError(ErrorKind::UnknownPreset, "unterminated parameter list in '" + spec + "'");
  }
  std::stringstream body(spec.substr(brace + 1, spec.size() - brace - 2));
  std::string item;
  while (std::getline(body, item, ',')) {
    try {
      size_t used = 0;
      out.params.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw GeometryError(ErrorKind::UnknownPreset, "bad preset parameter '" + item + "'");
    }
  }
  return out;
}

void require_dim(const std::string& name, int expected, int actual) {
  if (expected != actual) {
    throw GeometryError(ErrorKind::UnknownPreset,
                        "preset '" + name + "' lives in R^" + std::to_string(expected) +
                            " but the Zermelo data has dimension " + std::to_string(actual));
  }
}

Mat diag2(double a, double b) {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = a;
  A(1, 1) = b;
  return A;
}

}  // namespace

std::vector<PresetInfo> preset_registry() {
  return {
      {"hyperplane", "graph x_n = s.x of a linear function in R^n; params: slopes (default 0)"},
      {"sphere", "upper hemisphere chart of the round sphere of radius r in R^n; params: {r}"},
      {"saddle", "graph z = x^2 - y^2 in R^3"},
      {"graph-poly", "graph z = p(x) in R^3; params: coefficients of p (default {0,0,0,1})"},
      {"cylinder-graph", "graph x_4 = g(x_1) in R^4 (h-flat); params: coefficients of g"},
      {"quadric-r4", "graph x_4 = x^T A x / 2 in R^4 with a fixed generic A"},
      {"saddle-r4", "codimension-two surface (x, y, x^2 - y^2, x y) in R^4"},
      {"indicatrix", "unit sphere of h translated by W (the indicatrix of F) in R^n"},
  };
}

Immersion make_preset(const std::string& spec, const ZermeloData& Z) {
  const ParsedPreset p = parse_preset(spec);
  const int n = Z.dim();
  const auto& prm = p.params;

  if (p.name == "hyperplane") {
    if (n < 2) throw GeometryError(ErrorKind::UnknownPreset, "hyperplane needs n >= 2");
    const int k = n - 1;
    Vec slopes = Vec::Zero(k);
    if (!prm.empty()) {
      if (static_cast<int>(prm.size()) != k) {
        throw GeometryError(ErrorKind::UnknownPreset, "hyperplane takes n-1 slopes");
      }
      for (int i = 0; i < k; ++i) slopes[i] = prm[static_cast<size_t>(i)];
    }
    return Immersion::graph(spec, k, {cubic_component(0.0, slopes, Mat(), {})},
                            ChartBox{Vec::Zero(k), 1.0});
  }
  if (p.name == "sphere") {
    if (n < 2) throw GeometryError(ErrorKind::UnknownPreset, "sphere needs n >= 2");
    const double r = prm.empty() ? 1.0 : prm[0];
    if (!(r > 0.0)) throw GeometryError(ErrorKind::UnknownPreset, "sphere radius must be positive");
    const int k = n - 1;
    return Immersion::graph(spec, k, {hemisphere_component(k, r)},
                            ChartBox{Vec::Zero(k), 0.6 * r / std::sqrt(double(k))});
  }
  if (p.name == "saddle") {
    require_dim(p.name, 3, n);
    return Immersion::graph(spec, 2, {cubic_component(0.0, Vec::Zero(2), diag2(2.0, -2.0), {})},
                            ChartBox{Vec::Zero(2), 1.0});
  }
  if (p.name == "graph-poly") {
    require_dim(p.name, 3, n);
    std::vector<double> coeffs = prm.empty() ? std::vector<double>{0, 0, 0, 1} : prm;
    return Immersion::graph(spec, 2, {univariate_poly_component(2, coeffs)},
                            ChartBox{Vec::Zero(2), 1.0});
  }
  if (p.name == "cylinder-graph") {
    require_dim(p.name, 4, n);
    std::vector<double> coeffs = prm.empty() ? std::vector<double>{0, 0, 0.5, 0.2} : prm;
    return Immersion::graph(spec, 3, {univariate_poly_component(3, coeffs)},
                            ChartBox{Vec::Zero(3), 1.0});
  }
  if (p.name == "quadric-r4") {
    require_dim(p.name, 4, n);
    Mat A(3, 3);
    A << 1.0, 0.3, -0.2,
         0.3, -0.5, 0.4,
         -0.2, 0.4, 1.5;
    return Immersion::graph(spec, 3, {cubic_component(0.0, Vec::Zero(3), A, {})},
                            ChartBox{Vec::Zero(3), 0.8});
  }
  if (p.name == "saddle-r4") {
    require_dim(p.name, 4, n);
    Mat xy = Mat::Zero(2, 2);
    xy(0, 1) = xy(1, 0) = 1.0;
    return Immersion::graph(spec, 2,
                            {cubic_component(0.0, Vec::Zero(2), diag2(2.0, -2.0), {}),
                             cubic_component(0.0, Vec::Zero(2), xy, {})},
                            ChartBox{Vec::Zero(2), 1.0});
  }
  if (p.name == "indicatrix") {
    if (n < 2) throw GeometryError(ErrorKind::UnknownPreset, "indicatrix needs n >= 2");
    const int k = n - 1;
    // h = L L^T, so x -> L^{-T} x maps the Euclidean unit sphere onto the h-unit sphere.
    const Mat L = Z.h.llt().matrixL();
    const Mat M = L.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
    const Immersion unit = Immersion::graph("unit-hemisphere", k, {hemisphere_component(k, 1.0)},
                                            ChartBox{Vec::Zero(k), 0.6 / std::sqrt(double(k))});
    return Immersion::affine_image(unit, Z.W, M, spec);
  }
  throw GeometryError(ErrorKind::UnknownPreset, "unknown preset '" + p.name + "'");
}

}  // namespace flagcurv

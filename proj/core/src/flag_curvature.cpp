#include "flagcurv/flag_curvature.hpp"

#include <algorithm>
#include <limits>

namespace flagcurv {
namespace {

constexpr double kOnIndicatrixTol = 1e-10;
constexpr double kGeodesicTol = 1e-8;

}  // namespace

FlagContext::FlagContext(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v,
                         bool with_third)
    : sp_(Z, imm, x, with_third && imm.has_third()), v_chart_(v) {
  if (v.size() != sp_.param_dim()) {
    throw GeometryError(ErrorKind::ZeroVector, "flagpole has wrong dimension");
  }
  v_ = sp_.to_ambient(v);
  F_ = zermelo_norm(Z, v_);
  phi_ = flagcurv::phi(Z, v_);
  vu_ = v_ / F_;
  G_ = fundamental_tensor_matrix(Z, v_);
  const Mat& E = sp_.frame().basis;
  g_gram_llt_.compute(E.transpose() * G_ * E);
  if (g_gram_llt_.info() != Eigen::Success) {
    throw GeometryError(ErrorKind::SingularGram, "g_v is not positive definite on T_pS");
  }
  wind_ = sp_.wind_split(v);
}

double FlagContext::cartan(const Vec& a, const Vec& b, const Vec& c) const {
  return cartan_tensor_full(zermelo(), v_, a, b, c);
}

FlagFrame FlagContext::flag_frame(const Vec& u) const {
  const Mat& h = zermelo().h;
  FlagFrame fr;
  fr.x = sp_.x();
  fr.p = sp_.frame().point;
  fr.v = v_;
  fr.u = sp_.to_ambient(u);
  fr.F_v = F_;
  fr.phi_v = phi_;
  fr.u_tilde = fr.u - (inner(h, vu_ - zermelo().W, fr.u) / phi_) * vu_;
  fr.wind = wind_;
  return fr;
}

Vec FlagContext::u_tilde_chart(const Vec& u) const {
  const double c = inner(zermelo().h, vu_ - zermelo().W, sp_.to_ambient(u)) / phi_;
  return u - (c / F_) * v_chart_;
}

Vec FlagContext::sff(const Vec& u, const Vec& w) const {
  const Vec IIp = sp_.sff(u, w);
  return IIp + (inner(zermelo().h, IIp, zermelo().W) / phi_) * (vu_ - wind_.W_top_sigma);
}

Vec FlagContext::xi() const {
  const Vec N = sp_.unit_normal();
  const Vec& W = zermelo().W;
  const double a = inner(zermelo().h, N, W);
  return std::sqrt(phi_ / (1.0 - a * a)) * (N + a * (vu_ - W));
}

double FlagContext::sigma(const Vec& u, const Vec& w) const {
  const Vec N = sp_.unit_normal();
  const double a = inner(zermelo().h, N, zermelo().W);
  return inner(zermelo().h, sp_.sff(u, w), N) / std::sqrt(phi_ * (1.0 - a * a));
}

Vec FlagContext::solve_g(const Vec& rhs) const {
  Vec q = g_gram_llt_.solve(rhs);
  if (!q.allFinite()) throw GeometryError(ErrorKind::SingularGram, "g_v Gram solve failed");
  return q;
}

Vec FlagContext::Q_with_flagpole(const Vec& u) const {
  const Mat& E = sp_.frame().basis;
  const Vec IIvv = sff(v_chart_, v_chart_);
  const Vec ua = sp_.to_ambient(u);
  Vec rhs(E.cols());
  for (Eigen::Index j = 0; j < E.cols(); ++j) rhs[j] = -cartan(IIvv, ua, E.col(j));
  return solve_g(rhs);
}

Vec FlagContext::Q(const Vec& u, const Vec& w) const {
  const Mat& E = sp_.frame().basis;
  const Vec ua = sp_.to_ambient(u);
  const Vec wa = sp_.to_ambient(w);
  const Vec Pu = sp_.to_ambient(Q_with_flagpole(u)) + sff(u, v_chart_);
  const Vec Pw = sp_.to_ambient(Q_with_flagpole(w)) + sff(w, v_chart_);
  Vec rhs(E.cols());
  for (Eigen::Index j = 0; j < E.cols(); ++j) {
    const Vec z = E.col(j);
    const Vec zc = Vec::Unit(E.cols(), j);
    const Vec Pz = sp_.to_ambient(Q_with_flagpole(zc)) + sff(zc, v_chart_);
    rhs[j] = -cartan(Pu, wa, z) - cartan(Pw, z, ua) + cartan(Pz, ua, wa);
  }
  return solve_g(rhs);
}

void FlagContext::check_flag(const Vec& ua) const {
  const double L = F_ * F_;
  const double guu = g(ua, ua);
  const double gvu = g(v_, ua);
  const double D = L * guu - gvu * gvu;
  if (!(D > kDegenerateFlagTol * L * guu)) {
    throw GeometryError(ErrorKind::DegenerateFlag, "u is parallel to the flagpole");
  }
}

double FlagContext::scalar_flag_quantity(const Vec& u) const {
  const Mat& h = zermelo().h;
  const Vec& W = zermelo().W;
  check_flag(sp_.to_ambient(u));
  // Both terms depend only on the plane, so they are evaluated on u_tilde,
  // which stays well separated from v even for nearly degenerate flags.
  const Vec ut = u_tilde_chart(u);
  const Vec uta = sp_.to_ambient(ut);
  const double hut = inner(h, uta, uta);
  const double cross = inner(h, uta, vu_);
  const double prefactor = inner(h, vu_, vu_) - cross * cross / hut;
  const double Kh = sp_.sectional_curvature(v_chart_, ut);

  const Vec m = vu_ - wind_.W_top_sigma;
  const double A = inner(h, m, m);
  const double wuu = inner(h, sp_.sff(ut, ut), W);
  const double wvv = inner(h, sp_.sff(v_chart_, v_chart_), W);
  const double wuv = inner(h, sp_.sff(ut, v_chart_), W);
  return prefactor * Kh + A / (phi_ * phi_ * F_ * F_ * hut) * (wuu * wvv - wuv * wuv);
}

double FlagContext::flag_curvature(const Vec& u) const {
  const Mat& h = zermelo().h;
  const Vec& W = zermelo().W;
  const double riem = scalar_flag_quantity(u);

  const Vec m = vu_ - wind_.W_top_sigma;
  const double A = inner(h, m, m);
  const Vec IIvv = sp_.sff(v_chart_, v_chart_);
  const double wvv = inner(h, IIvv, W);
  const Vec Wt = sp_.to_chart(W);
  const Vec Ws = sp_.to_chart(wind_.W_top_sigma);

  const double bracket = inner(h, sp_.nabla_sff(v_chart_), W) -
                         inner(h, IIvv, sp_.sff(v_chart_, Wt)) +
                         wvv * wvv * (4.0 * phi_ - 2.5 * A) / (phi_ * phi_ * F_) -
                         (4.0 / phi_) * wvv * inner(h, sp_.sff(v_chart_, Ws), W);
  return riem + A / (2.0 * F_ * F_ * F_ * phi_ * phi_) * bracket;
}

double FlagContext::flag_curvature_hypersurface(const Vec& u) const {
  const Mat& h = zermelo().h;
  const Vec& W = zermelo().W;
  const Vec N = sp_.unit_normal();
  check_flag(sp_.to_ambient(u));
  const double a = inner(h, N, W);
  const double b = 1.0 - a * a;

  const Vec ut = u_tilde_chart(u);
  const Vec uta = sp_.to_ambient(ut);
  const double hut = inner(h, uta, uta);
  const double cross = inner(h, uta, vu_);
  const double prefactor = inner(h, vu_, vu_) - cross * cross / hut;
  const double Kh = sp_.sectional_curvature(v_chart_, ut);

  const Vec Ws_amb = W - (phi_ * a / b) * N - (-1.0 + phi_ / b) * (vu_ - W);
  const Vec Ws = sp_.to_chart(Ws_amb);
  const Vec Wt = sp_.to_chart(W);
  auto sp = [&](const Vec& s, const Vec& t) { return inner(h, sp_.sff(s, t), N); };
  const double svv = sp(v_chart_, v_chart_);
  const double nabla = inner(h, sp_.nabla_sff(v_chart_), N);

  const double bracket = nabla * a - svv * sp(v_chart_, Wt) +
                         a * a * svv * svv * (4.0 - 5.0 * phi_ / (2.0 * b)) / (phi_ * F_) -
                         (4.0 / phi_) * a * a * svv * sp(v_chart_, Ws);
  return (prefactor * Kh + bracket / (2.0 * F_ * F_ * F_)) / b;
}

Vec second_fundamental_form_F(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                              const Vec& v, const Vec& u, const Vec& w) {
  return FlagContext(Z, imm, x, v, false).sff(u, w);
}

Vec xi_normal(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v) {
  return FlagContext(Z, imm, x, v, false).xi();
}

double sigma_F(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v,
               const Vec& u, const Vec& w) {
  return FlagContext(Z, imm, x, v, false).sigma(u, w);
}

Vec difference_tensor_Q(const ZermeloData& Z, const Immersion& imm, const Vec& x, const Vec& v,
                        const Vec& u, const Vec& w) {
  return FlagContext(Z, imm, x, v, false).Q(u, w);
}

double flag_curvature_general(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                              const Vec& v, const Vec& u) {
  return FlagContext(Z, imm, x, v, true).flag_curvature(u);
}

double flag_curvature_hypersurface(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                                   const Vec& v, const Vec& u) {
  if (imm.codimension() != 1) {
    throw GeometryError(ErrorKind::CodimensionNotOne, "operation needs a hypersurface");
  }
  return FlagContext(Z, imm, x, v, true).flag_curvature_hypersurface(u);
}

double indicatrix_flag_curvature(const ZermeloData& Z, const Vec& x, const Vec& v, const Vec& u) {
  const Mat& h = Z.h;
  const Vec& W = Z.W;
  if (x.size() != Z.dim() || v.size() != Z.dim() || u.size() != Z.dim()) {
    throw GeometryError(ErrorKind::NotOnIndicatrix, "arguments have wrong dimension");
  }
  const Vec N = -(x - W);
  if (!(std::abs(inner(h, N, N) - 1.0) <= kOnIndicatrixTol)) {
    throw GeometryError(ErrorKind::NotOnIndicatrix, "x is not on the indicatrix");
  }
  const double vn = norm_h(h, v);
  const double un = norm_h(h, u);
  if (std::abs(inner(h, N, v)) > kSigmaTangentTol * vn ||
      std::abs(inner(h, N, u)) > kSigmaTangentTol * un) {
    throw GeometryError(ErrorKind::NotInSigmaTangent, "v and u must be tangent at x");
  }
  const double F = zermelo_norm(Z, v);
  const double ph = phi(Z, v);
  const Vec vu = v / F;
  const Mat G = fundamental_tensor_matrix(Z, v);
  const double guu = u.dot(G * u);
  const double gvu = v.dot(G * u);
  if (!(F * F * guu - gvu * gvu > kDegenerateFlagTol * F * F * guu)) {
    throw GeometryError(ErrorKind::DegenerateFlag, "u is parallel to the flagpole");
  }
  const Vec ut = u - (inner(h, vu - W, u) / ph) * vu;
  const double cross = inner(h, ut, vu);
  const double prefactor = inner(h, vu, vu) - cross * cross / inner(h, ut, ut);

  const double a = inner(h, N, W);
  const double b = 1.0 - a * a;
  const double hvv = inner(h, v, v);
  const double tail = hvv / (2.0 * F * F * F * b) *
                      (-inner(h, v, W) * (1.0 + 3.0 * a * a) + 1.5 / F * a * a * hvv);
  return (prefactor + tail) / b;
}

ScalarFlagReport scalar_flag_check(const ZermeloData& Z, const Immersion& imm, const Vec& x,
                                   const Vec& v, int m, std::uint64_t seed, double tol) {
  if (imm.param_dim() < 2) {
    throw GeometryError(ErrorKind::DegeneratePlane, "scalar flag check needs dim S >= 2");
  }
  if (m < 2) throw GeometryError(ErrorKind::ConfigError, "scalar flag check needs m >= 2");
  const FlagContext ctx(Z, imm, x, v, false);
  const Mat basis = ctx.wind().sigma_basis * std::sqrt(ctx.phi());
  SplitMix64 rng(seed);

  ScalarFlagReport rep;
  rep.flagpole = v;
  rep.samples = m;
  rep.values.reserve(static_cast<size_t>(m));
  for (int s = 0; s < m; ++s) {
    Vec z = rng.normal_vector(basis.cols());
    z /= z.norm();
    const Vec u = ctx.point().to_chart(basis * z);
    rep.values.push_back(ctx.scalar_flag_quantity(u));
  }
  const auto [lo, hi] = std::minmax_element(rep.values.begin(), rep.values.end());
  rep.spread = *hi - *lo;
  double sum = 0.0;
  for (double q : rep.values) sum += q;
  rep.mean = sum / m;
  rep.verdict = rep.spread < tol * (1.0 + std::abs(rep.mean));
  return rep;
}

TotallyGeodesicReport totally_geodesic_sample(const ZermeloData& Z, const Immersion& imm,
                                              const RegionSampler& sampler, int m,
                                              std::uint64_t seed) {
  SplitMix64 rng(seed);
  TotallyGeodesicReport rep;
  const int k = imm.param_dim();
  for (int s = 0; s < m; ++s) {
    const auto [x, v] = sampler(rng);
    const FlagContext ctx(Z, imm, x, v, false);
    const Vec u = rng.normal_vector(k);
    const Vec w = rng.normal_vector(k);
    const double vn = norm_h(Z.h, ctx.v());
    rep.worst_residual =
        std::max(rep.worst_residual, norm_h(Z.h, ctx.sff(v, v)) / (vn * vn));
    const Vec q = ctx.point().to_ambient(ctx.Q(u, w));
    const double uw = norm_h(Z.h, ctx.point().to_ambient(u)) *
                      norm_h(Z.h, ctx.point().to_ambient(w));
    rep.worst_q_residual = std::max(rep.worst_q_residual, norm_h(Z.h, q) / uw);
  }
  rep.totally_geodesic = rep.worst_residual < kGeodesicTol;
  if (!rep.totally_geodesic) rep.worst_q_residual = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace flagcurv

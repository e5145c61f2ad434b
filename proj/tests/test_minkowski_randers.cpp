#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>

#include "support.hpp"

using namespace flagcurv;
using namespace flagcurv::testing;

namespace {

ZermeloData plane_wind() { return ZermeloData::make(Mat::Identity(2, 2), vec({0.5, 0.0})); }

}  // namespace

TEST(ZermeloNorm, Examples) {
  const ZermeloData Z0 = ZermeloData::make(Mat::Identity(2, 2), Vec::Zero(2));
  EXPECT_NEAR(zermelo_norm(Z0, vec({3, 4})), 5.0, 1e-15);
  EXPECT_NEAR(zermelo_norm(plane_wind(), vec({1, 0})), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(zermelo_norm(plane_wind(), vec({-1, 0})), 2.0, 1e-15);
}

TEST(ZermeloNorm, HomogeneityAndIndicatrix) {
  SplitMix64 rng(1);
  for (int s = 0; s < 300; ++s) {
    const int n = 2 + s % 3;
    const ZermeloData Z = random_zermelo(n, rng, 0.95);
    const Vec v = rng.normal_vector(n);
    const double F = zermelo_norm(Z, v);
    const Vec m = v / F - Z.W;
    EXPECT_NEAR(inner(Z.h, m, m), 1.0, 1e-12);
    for (double lam : {0.5, 2.0, 10.0}) {
      EXPECT_NEAR(zermelo_norm(Z, lam * v), lam * F, 1e-12 * lam * F);
      EXPECT_NEAR(phi(Z, lam * v), phi(Z, v), 1e-12);
      EXPECT_LT((fundamental_tensor_matrix(Z, lam * v) - fundamental_tensor_matrix(Z, v))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-12 * fundamental_tensor_matrix(Z, v).cwiseAbs().maxCoeff());
    }
  }
}

TEST(ZermeloNorm, Errors) {
  const ZermeloData Z = plane_wind();
  EXPECT_THROW_KIND(zermelo_norm(Z, Vec::Zero(2)), ZeroVector);
  EXPECT_THROW_KIND(zermelo_norm(Z, Vec::Zero(3)), ZeroVector);
  EXPECT_THROW_KIND(ZermeloData::make(Mat::Identity(2, 2), vec({1.0, 0.0})), InvalidZermelo);
  EXPECT_THROW_KIND(ZermeloData::make(Mat::Identity(2, 2), vec({0.6, 0.8})), InvalidZermelo);
  EXPECT_THROW_KIND(ZermeloData::make(diag({1.0, -1.0}), Vec::Zero(2)), InvalidZermelo);
  Mat asym = Mat::Identity(2, 2);
  asym(0, 1) = 0.3;
  EXPECT_THROW_KIND(ZermeloData::make(asym, Vec::Zero(2)), InvalidZermelo);
  EXPECT_THROW_KIND(ZermeloData::make(Mat::Identity(9, 9), Vec::Zero(9)), InvalidZermelo);
  EXPECT_THROW_KIND(ZermeloData::make(Mat::Identity(3, 3), Vec::Zero(2)), InvalidZermelo);
  // Just inside the wind margin is still accepted.
  EXPECT_NO_THROW(ZermeloData::make(Mat::Identity(2, 2), vec({std::sqrt(1.0 - 1e-7), 0.0})));
}

TEST(RandersNorm, Examples) {
  const RandersData R0 = RandersData::make(Mat::Identity(2, 2), Vec::Zero(2));
  EXPECT_NEAR(randers_norm(R0, vec({3, 4})), 5.0, 1e-15);
  const RandersData R = RandersData::make(Mat::Identity(2, 2), vec({0.5, 0.0}));
  EXPECT_NEAR(randers_norm(R, vec({1, 0})), 1.5, 1e-15);
  EXPECT_THROW_KIND(randers_norm(R, Vec::Zero(2)), ZeroVector);
  EXPECT_THROW_KIND(RandersData::make(Mat::Identity(2, 2), vec({1.0, 0.0})), InvalidRanders);
  EXPECT_THROW_KIND(RandersData::make(diag({1.0, 0.0}), Vec::Zero(2)), InvalidRanders);
}

TEST(Conversion, Examples) {
  const RandersData R = RandersData::make(Mat::Identity(2, 2), vec({0.5, 0.0}));
  const ZermeloData Z = randers_to_zermelo(R);
  EXPECT_LT((Z.h - diag({9.0 / 16.0, 0.75})).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((Z.W - vec({-2.0 / 3.0, 0.0})).cwiseAbs().maxCoeff(), 1e-15);

  const RandersData back = zermelo_to_randers(ZermeloData::make(diag({9.0 / 16.0, 0.75}),
                                                                vec({-2.0 / 3.0, 0.0})));
  EXPECT_LT((back.g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((back.B - vec({0.5, 0.0})).cwiseAbs().maxCoeff(), 1e-15);

  const ZermeloData Zt = randers_to_zermelo(RandersData::make(Mat::Identity(3, 3), Vec::Zero(3)));
  EXPECT_EQ(Zt.h, Mat::Identity(3, 3));
  EXPECT_EQ(Zt.W, Vec::Zero(3));
}

TEST(Conversion, RoundTripAndNormAgreement) {
  SplitMix64 rng(2);
  for (int s = 0; s < 200; ++s) {
    const int n = 2 + s % 3;
    const RandersData R = random_randers(n, rng);
    const RandersData R2 = zermelo_to_randers(randers_to_zermelo(R));
    EXPECT_LT((R2.g - R.g).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((R2.B - R.B).cwiseAbs().maxCoeff(), 1e-12);

    const ZermeloData Z = random_zermelo(n, rng);
    const RandersData RZ = zermelo_to_randers(Z);
    for (int d = 0; d < 5; ++d) {
      const Vec v = rng.normal_vector(n);
      EXPECT_NEAR(randers_norm(RZ, v), zermelo_norm(Z, v), 1e-12 * zermelo_norm(Z, v));
    }
  }
}

TEST(Phi, Examples) {
  SplitMix64 rng(3);
  const ZermeloData Z0 = ZermeloData::make(random_spd(3, rng), Vec::Zero(3));
  EXPECT_NEAR(phi(Z0, rng.normal_vector(3)), 1.0, 1e-14);
  EXPECT_NEAR(phi(plane_wind(), vec({1, 0})), 1.5, 1e-15);
  EXPECT_NEAR(phi(plane_wind(), vec({0, 1})), 0.75, 1e-15);
  EXPECT_THROW_KIND(phi(plane_wind(), Vec::Zero(2)), ZeroVector);
}

TEST(SigmaDecompose, ExamplesAndReconstruction) {
  const ZermeloData Z = plane_wind();
  const Vec v = vec({0.3, 0.8});
  const auto dv = sigma_decompose(Z, v, v);
  EXPECT_NEAR(dv.lambda, zermelo_norm(Z, v), 1e-14);
  EXPECT_LT(dv.a_sigma.norm(), 1e-14);

  const Vec m = v / zermelo_norm(Z, v) - Z.W;
  const Vec t = vec({-m[1], m[0]});  // h-orthogonal to m
  const auto dt = sigma_decompose(Z, v, t);
  EXPECT_NEAR(dt.lambda, 0.0, 1e-15);
  EXPECT_LT((dt.a_sigma - t).norm(), 1e-15);

  SplitMix64 rng(4);
  for (int s = 0; s < 200; ++s) {
    const int n = 2 + s % 4;
    const ZermeloData Zr = random_zermelo(n, rng);
    const Vec vr = rng.normal_vector(n);
    const Vec a = rng.normal_vector(n);
    const auto d = sigma_decompose(Zr, vr, a);
    EXPECT_LT((d.a_sigma + d.lambda * d.v_unit - a).cwiseAbs().maxCoeff(), 1e-14 * (1 + a.norm()));
    EXPECT_NEAR(inner(Zr.h, d.v_unit - Zr.W, d.a_sigma), 0.0, 1e-13 * (1 + a.norm()));
  }
}

TEST(FundamentalTensor, Examples) {
  const ZermeloData Z = plane_wind();
  const Vec v = vec({1, 0});
  EXPECT_NEAR(fundamental_tensor(Z, v, vec({0, 1}), vec({0, 1})), 2.0 / 3.0, 1e-15);
  const double F = zermelo_norm(Z, v);
  EXPECT_NEAR(fundamental_tensor(Z, v, v / F, Z.W), 1.0 / 3.0, 1e-15);

  SplitMix64 rng(5);
  const Mat h = random_spd(3, rng);
  const ZermeloData Z0 = ZermeloData::make(h, Vec::Zero(3));
  const Vec a = rng.normal_vector(3), b = rng.normal_vector(3), w = rng.normal_vector(3);
  EXPECT_NEAR(fundamental_tensor(Z0, w, a, b), inner(h, a, b), 1e-13);
}

TEST(FundamentalTensor, LemmaIdentities) {
  SplitMix64 rng(6);
  for (int s = 0; s < 1000; ++s) {
    const int n = 2 + s % 3;
    const ZermeloData Z = random_zermelo(n, rng, 0.9);
    const Vec v = rng.normal_vector(n);
    const double F = zermelo_norm(Z, v);
    const double ph = phi(Z, v);
    const Mat G = fundamental_tensor_matrix(Z, v);

    Eigen::SelfAdjointEigenSolver<Mat> eig(G, Eigen::EigenvaluesOnly);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);

    EXPECT_NEAR(v.dot(G * v), F * F, 1e-12 * F * F);
    // g_v(v, .) = F (1/phi) h(v/F - W, .)
    const Vec form = G * v;
    const Vec expect = F / ph * (Z.h * (v / F - Z.W));
    EXPECT_LT((form - expect).cwiseAbs().maxCoeff(), 1e-12 * (1 + expect.cwiseAbs().maxCoeff()));
    // g_v(v/F, W) = (phi - 1)/phi
    EXPECT_NEAR((v / F).dot(G * Z.W), (ph - 1.0) / ph, 1e-12);

    // h(v, u) = phi^2 F g_v(u, W) for g_v(v, u) = 0
    Vec u = rng.normal_vector(n);
    u -= (v.dot(G * u) / (F * F)) * v;
    EXPECT_NEAR(inner(Z.h, v, u), ph * ph * F * u.dot(G * Z.W), 1e-10);

    // matrix form agrees with the bilinear evaluation
    const Vec a = rng.normal_vector(n), b = rng.normal_vector(n);
    EXPECT_NEAR(a.dot(G * b), fundamental_tensor(Z, v, a, b), 1e-12 * (1 + a.norm() * b.norm()));
  }
}

TEST(FundamentalTensor, MatchesFiniteDifferenceHessian) {
  SplitMix64 rng(7);
  for (int s = 0; s < 50; ++s) {
    const int n = 2 + s % 3;
    const ZermeloData Z = random_zermelo(n, rng);
    const Vec v = rng.normal_vector(n);
    const Vec a = rng.normal_vector(n), b = rng.normal_vector(n);
    auto L = [&](double p, double q) {
      const double F = zermelo_norm(Z, v + p * a + q * b);
      return F * F;
    };
    const double hs = 1e-4 * v.norm();
    const double fd = 0.5 * (L(hs, hs) - L(hs, -hs) - L(-hs, hs) + L(-hs, -hs)) / (4 * hs * hs);
    EXPECT_NEAR(fundamental_tensor(Z, v, a, b), fd, 1e-5 * (1 + std::abs(fd)));
  }
}

TEST(CartanTensor, Examples) {
  const ZermeloData Z = plane_wind();
  const Vec v = vec({0, 1});
  const Vec u = vec({std::sqrt(3.0) / 2.0, 0.5});
  EXPECT_NEAR(cartan_tensor_sigma(Z, v, u, u, u), -1.0, 1e-14);

  EXPECT_NEAR(cartan_tensor_full(Z, v, v, u, u), 0.0, 1e-15);
  EXPECT_NEAR(cartan_tensor_full(Z, v, u, u, u), -1.0, 1e-14);
  EXPECT_THROW_KIND(cartan_tensor_sigma(Z, v, v, u, u), NotInSigmaTangent);

  SplitMix64 rng(8);
  const Mat h = random_spd(3, rng);
  const ZermeloData Z0 = ZermeloData::make(h, Vec::Zero(3));
  for (int s = 0; s < 20; ++s) {
    EXPECT_NEAR(cartan_tensor_full(Z0, rng.normal_vector(3), rng.normal_vector(3),
                                   rng.normal_vector(3), rng.normal_vector(3)),
                0.0, 1e-13);
  }
}

TEST(CartanTensor, SymmetryAndFiniteDifference) {
  SplitMix64 rng(9);
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 3;
    const ZermeloData Z = random_zermelo(n, rng);
    const Vec v = rng.normal_vector(n);
    const std::array<Vec, 3> x = {rng.normal_vector(n), rng.normal_vector(n),
                                  rng.normal_vector(n)};
    std::array<Vec, 3> p;
    for (int i = 0; i < 3; ++i) p[i] = sigma_decompose(Z, v, x[i]).a_sigma;
    const double c = cartan_tensor_sigma(Z, v, p[0], p[1], p[2]);
    EXPECT_NEAR(cartan_tensor_sigma(Z, v, p[1], p[0], p[2]), c, 1e-14 * (1 + std::abs(c)));
    EXPECT_NEAR(cartan_tensor_sigma(Z, v, p[2], p[1], p[0]), c, 1e-14 * (1 + std::abs(c)));
    EXPECT_NEAR(cartan_tensor_sigma(Z, v, p[0], p[2], p[1]), c, 1e-14 * (1 + std::abs(c)));
    EXPECT_NEAR(cartan_tensor_sigma(Z, v, p[1], p[2], p[0]), c, 1e-14 * (1 + std::abs(c)));
    EXPECT_NEAR(cartan_tensor_sigma(Z, v, p[2], p[0], p[1]), c, 1e-14 * (1 + std::abs(c)));
    EXPECT_NEAR(cartan_tensor_full(Z, v, x[0], x[1], x[2]), c, 1e-12 * (1 + std::abs(c)));

    // (1/2) d/dt g_{v+tc}(a,b), central difference
    const double t = 1e-5 * v.norm();
    const double fd = 0.5 *
                      (fundamental_tensor(Z, v + t * x[2], x[0], x[1]) -
                       fundamental_tensor(Z, v - t * x[2], x[0], x[1])) /
                      (2 * t);
    EXPECT_NEAR(cartan_tensor_full(Z, v, x[0], x[1], x[2]), fd, 1e-6 * (1 + std::abs(fd)));
  }
}

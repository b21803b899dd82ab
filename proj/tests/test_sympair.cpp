#include <gtest/gtest.h>

#include "polarrep/catalog.hpp"
#include "support.hpp"

using namespace polarrep;
using polarrep::testing::max_residual;
using polarrep::testing::sl2_g;
using polarrep::testing::sl2_v;

namespace {

Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

// sl(2) + sl(2) in the basis H1 E1 F1 H2 E2 F2 with the swap and X -> -X^T.
struct Sl2Pair {
  LieAlgebraModel alg;
  Mat swap = Mat::Zero(6, 6);
  Mat theta = Mat::Zero(6, 6);

  Sl2Pair() {
    std::vector<Mat> mats;
    const Mat h = unit(2, 0, 0) - unit(2, 1, 1), e = unit(2, 0, 1), f = unit(2, 1, 0);
    for (int c = 0; c < 2; ++c)
      for (const Mat* g : {&h, &e, &f}) {
        Mat x = Mat::Zero(4, 4);
        x.block(2 * c, 2 * c, 2, 2) = *g;
        mats.push_back(x);
      }
    alg = LieAlgebraModel::from_matrices({"H1", "E1", "F1", "H2", "E2", "F2"}, mats);
    for (int c = 0; c < 2; ++c) {
      const int o = 3 * c, s = 3 * (1 - c);
      for (int i = 0; i < 3; ++i) swap(s + i, o + i) = 1;
      theta(o, o) = -1;
      theta(o + 2, o + 1) = -1;
      theta(o + 1, o + 2) = -1;
    }
  }
};

// Real dimension of {x in R^n : a x = ea x, b x = eb x} for real a, b.
int joint_dim(const Mat& a, double ea, const Mat& b, double eb) {
  const int n = static_cast<int>(a.rows());
  Mat stacked(2 * n, n);
  stacked << a - ea * Mat::Identity(n, n), b - eb * Mat::Identity(n, n);
  return n - rank_with_tol(stacked);
}

}  // namespace

TEST(BuildPair, Sl2SwapDimensionsMatchJointEigenspaces) {
  Sl2Pair in;
  const auto pair = build_pair(in.alg, in.swap, AntiLinear::conjugation(6), AntiLinear{in.theta}, "sl2");
  // The basis is real, so theta acts on real coordinates by the real matrix in.theta.
  EXPECT_EQ(pair.dim_g(), joint_dim(in.swap, 1, in.swap, 1));
  EXPECT_EQ(pair.dim_v(), joint_dim(in.swap, -1, in.swap, -1));
  EXPECT_EQ(pair.dim_k, joint_dim(in.swap, 1, in.theta, 1));
  EXPECT_EQ(pair.dim_p, joint_dim(in.swap, 1, in.theta, -1));
  EXPECT_EQ(pair.dim_vw, joint_dim(in.swap, -1, in.theta, 1));
  EXPECT_EQ(pair.dim_viw, joint_dim(in.swap, -1, in.theta, -1));
  EXPECT_EQ(pair.dim_k, 1);
  EXPECT_EQ(pair.dim_p, 2);
  EXPECT_EQ(pair.dim_vw, 1);
  EXPECT_EQ(pair.dim_viw, 2);
  EXPECT_LE(max_residual(pair.residuals), 1e-9);
}

TEST(BuildPair, IdentityTauGivesEmptyVWithWarning) {
  Sl2Pair in;
  const auto pair =
      build_pair(in.alg, Mat::Identity(6, 6), AntiLinear::conjugation(6), AntiLinear{in.theta}, "trivial");
  EXPECT_EQ(pair.dim_v(), 0);
  EXPECT_EQ(pair.dim_g(), 6);
  EXPECT_FALSE(pair.warnings.empty());
}

TEST(BuildPair, NonCommutingInvolutionsNamed) {
  Sl2Pair in;
  // Conjugate theta by exp(i t (E1 + E2)), which commutes with the swap but not with sigma.
  Vec h = Vec::Zero(6);
  h(1) = h(4) = 1;
  const Mat a = expm(cd(0, 0.3) * ad_matrix(in.alg, h));
  const Mat bent = a * in.theta * a.inverse().conjugate();
  try {
    build_pair(in.alg, in.swap, AntiLinear::conjugation(6), AntiLinear{bent}, "bent");
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("sigma∘theta − theta∘sigma"), std::string::npos) << e.what();
  }
}

TEST(BuildPair, SlnSonDimensions) {
  for (int n : {2, 3, 4}) {
    const auto rep = catalog_representation("sln-son:n=" + std::to_string(n), 1);
    EXPECT_EQ(rep.dim_g(), n * (n - 1) / 2);
    EXPECT_EQ(rep.dim_v(), n * (n + 1) / 2 - 1);
    EXPECT_EQ(rep.pair->dim_p, 0);
    EXPECT_EQ(rep.pair->dim_vw, 0);
  }
}

TEST(BuildPair, SupqDimensions) {
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
    const std::string spec = "supq:p=" + std::to_string(p) + ",q=" + std::to_string(q);
    const auto rep = catalog_representation(spec, 1);
    EXPECT_EQ(rep.dim_g(), p * p + q * q - 1) << spec;
    EXPECT_EQ(rep.dim_v(), 2 * p * q) << spec;
    EXPECT_EQ(rep.pair->dim_k + rep.pair->dim_p, rep.dim_g());
    // s(u(p) + u(q)) is compact, and V is the noncompact part of su(p, q).
    EXPECT_EQ(rep.pair->dim_p, 0);
    EXPECT_EQ(rep.pair->dim_viw, 2 * p * q);
    const auto compact = catalog_representation(spec + ",r=" + std::to_string(p) + ",s=" + std::to_string(q), 1);
    EXPECT_EQ(compact.pair->dim_vw, 2 * p * q) << "compact variant";
  }
}

TEST(Isotropy, Sl2AdjointFormIsTwiceKilling) {
  const auto rep = catalog_representation("sl2-adjoint", 1);
  EXPECT_EQ(rep.pair->dim(), 6);
  EXPECT_EQ(rep.dim_v(), 3);
  const Vec h = sl2_v(rep, 1, 0, 0), e = sl2_v(rep, 0, 1, 0), f = sl2_v(rep, 0, 0, 1);
  // Killing of sl(2) is 4 tr(XY): beta(H,H) = 8 and beta(E,F) = 4; the antidiagonal doubles it.
  EXPECT_NEAR(std::abs((h.transpose() * rep.form * h)(0) - 16.0), 0, 1e-10);
  EXPECT_NEAR(std::abs((e.transpose() * rep.form * f)(0) - 8.0), 0, 1e-10);
  EXPECT_NEAR(std::abs((e.transpose() * rep.form * e)(0)), 0, 1e-10);
  // The action is the adjoint one: [H, E] = 2E.
  const Vec hg = sl2_g(rep, 1, 0, 0);
  EXPECT_LT((rep.act(hg) * e - 2.0 * e).norm(), 1e-10);
}

TEST(Isotropy, SlnSonActsByCommutator) {
  const int n = 3;
  const auto rep = catalog_representation("sln-son:n=3", 1);
  const auto mats = polarrep::testing::sl_mats(n);
  auto to_matrix = [&](const Vec& ambient) {
    const Vec c = rep.pair->to_input * ambient;
    Mat m = Mat::Zero(n, n);
    for (std::size_t i = 0; i < mats.size(); ++i) m += c(i) * mats[i];
    return m;
  };
  auto rng = make_rng(3, 0);
  for (int t = 0; t < 5; ++t) {
    const Vec x = gaussian(rng, rep.dim_g()).cast<cd>(), v = gaussian(rng, rep.dim_v()).cast<cd>();
    Vec xa = Vec::Zero(rep.pair->dim()), va = Vec::Zero(rep.pair->dim()), wa = Vec::Zero(rep.pair->dim());
    xa.head(rep.dim_g()) = x;
    va.tail(rep.dim_v()) = v;
    wa.tail(rep.dim_v()) = rep.act(x) * v;
    const Mat xm = to_matrix(xa), vm = to_matrix(va);
    EXPECT_LT((xm + xm.transpose()).norm(), 1e-10) << "g is so(n)";
    EXPECT_LT((vm - vm.transpose()).norm(), 1e-10) << "V is symmetric";
    EXPECT_LT(std::abs(vm.trace()), 1e-10);
    EXPECT_LT((to_matrix(wa) - (xm * vm - vm * xm)).norm(), 1e-10);
  }
}

TEST(Isotropy, CatalogInvariantsHold) {
  for (const std::string spec : {"sl2-adjoint", "sln-son:n=3", "sln-sopq:n=3,p=2", "supq:p=1,q=1",
                                 "supq:p=1,q=1,r=1,s=1", "supq:p=2,q=1", "torus-c3", "so3-r3"}) {
    const auto rep = catalog_representation(spec, 1);
    EXPECT_LE(max_residual(check_representation(rep, 1)), 1e-9) << spec;
    if (rep.pair) EXPECT_LE(max_residual(rep.pair->residuals), 1e-9) << spec;
  }
}

TEST(Isotropy, CombinedDecompositionIsDirect) {
  const auto rep = catalog_representation("supq:p=2,q=1", 1);
  const auto d = combined_decomposition(*rep.pair);
  EXPECT_EQ(d.k_r.cols() + d.p_r.cols() + d.v_w.cols() + d.v_iw.cols(), rep.pair->dim());
}

TEST(Catalog, UnknownNameAndBadParameters) {
  try {
    catalog_representation("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
  EXPECT_THROW(catalog_representation("sln-son:n=x"), Error);
  EXPECT_THROW(catalog_representation("sl2-adjoint:n=3"), Error);
  const auto [name, params] = parse_builtin("supq:p=2,q=1");
  EXPECT_EQ(name, "supq");
  EXPECT_EQ(params.at("p"), 2);
  EXPECT_EQ(params.at("q"), 1);
}

TEST(Restriction, So3VersusSo2OrbitDimensions) {
  const auto rep = catalog_representation("so3-r3", 1);
  const auto sub = restrict_representation(rep, Mat::Identity(3, 3).col(2), "so2", 1);
  EXPECT_EQ(rep.generic_orbit_dim, 2);
  EXPECT_EQ(sub.generic_orbit_dim, 1);
  EXPECT_LE(max_residual(check_representation(sub, 1)), 1e-9);
}

TEST(CartanPair, AlreadyCommutingIsFixed) {
  const auto rep = catalog_representation("sl2-adjoint", 1);
  const auto cp = construct_cartan_pair(rep, rep.theta_g, rep.theta_v);
  EXPECT_LT((cp.phi - Mat::Identity(rep.dim_g(), rep.dim_g())).norm(), 1e-10);
  EXPECT_LT((cp.phi_tilde - Mat::Identity(rep.dim_v(), rep.dim_v())).norm(), 1e-10);
  EXPECT_LT((cp.eta.m - rep.theta_g.m).norm(), 1e-10);
  EXPECT_LE(max_residual(cp.residuals), 1e-9);
}

TEST(CartanPair, RandomConjugateCommutesWithSigma) {
  const auto rep = catalog_representation("sl2-adjoint", 1);
  for (int t = 0; t < 10; ++t) {
    auto rng = make_rng(17, t);
    const Vec x = 0.5 * (gaussian(rng, rep.dim_g()).cast<cd>() + cd(0, 1) * gaussian(rng, rep.dim_g()).cast<cd>());
    const Mat ag = expm(ad_matrix(rep.algebra, x)), av = expm(rep.act(x));
    const AntiLinear mu{ag * rep.theta_g.m * ag.inverse().conjugate()};
    const AntiLinear mu_t{av * rep.theta_v.m * av.inverse().conjugate()};
    // The input really is moved off sigma.
    if (t == 0) EXPECT_GT((rep.sigma_g.m * mu.m.conjugate() - mu.m * rep.sigma_g.m.conjugate()).norm(), 1e-3);
    const auto cp = construct_cartan_pair(rep, mu, mu_t);
    const Mat& e = cp.eta_tilde.m;
    EXPECT_LT((rep.sigma_v.m * e.conjugate() - e * rep.sigma_v.m.conjugate()).norm(), 1e-9);
    EXPECT_LT((e * e.conjugate() - Mat::Identity(rep.dim_v(), rep.dim_v())).norm(), 1e-9);
    EXPECT_LE(max_residual(cp.residuals), 1e-9);
  }
}

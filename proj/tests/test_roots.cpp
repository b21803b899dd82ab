#include <gtest/gtest.h>

#include "polarrep/roots.hpp"
#include "support.hpp"

using namespace polarrep;
using namespace polarrep::testing;

namespace {

const RepresentationModel& sl2() {
  static const RepresentationModel rep = catalog_representation("sl2-adjoint", 1);
  return rep;
}

const RepresentationModel& sl3() {
  static const RepresentationModel rep = catalog_representation("sln-son:n=3", 1);
  return rep;
}

double value(const ResidualList& r, const std::string& key) {
  for (const auto& [k, v] : r)
    if (k == key) return v;
  ADD_FAILURE() << "missing check " << key;
  return 1e300;
}

// Dimensions of the +1 and -1 eigenspaces of a linear involution on span(basis).
std::pair<int, int> involution_dims(const Mat& basis, const Mat& inv) {
  const Mat q = orth(basis);
  const Mat restricted = q.adjoint() * inv * q;
  const int n = static_cast<int>(q.cols());
  return {n - rank_with_tol(restricted - Mat::Identity(n, n)), n - rank_with_tol(restricted + Mat::Identity(n, n))};
}

}  // namespace

TEST(Roots, Sl2SplitCartan) {
  const Vec h = sl2_v(sl2(), 1, 0, 0);
  const auto c = make_record(sl2(), h);
  const auto r = compute_roots(sl2(), c, 1);
  ASSERT_EQ(r.roots.size(), 1u);
  const auto& a = r.roots[0];
  EXPECT_EQ(a.hyperplane.cols(), 0);
  EXPECT_EQ(a.multiplicity, 2);
  // v_alpha = +-H / <H, H>^{1/2} with <H, H> = 16.
  EXPECT_LT(distance_to_span(h, a.coroot), 1e-10);
  EXPECT_NEAR(std::abs((a.coroot.transpose() * sl2().form * a.coroot)(0) - 1.0), 0, 1e-10);
  EXPECT_NEAR(std::abs(a(sl2(), h)), 4.0, 1e-10);
  EXPECT_GT(a(sl2(), r.chamber_point).real(), 0);
  // Root space is span{E, F} of the diagonal copy.
  Mat ef(3, 2);
  ef << sl2_g(sl2(), 0, 1, 0), sl2_g(sl2(), 0, 0, 1);
  EXPECT_LT(distance_to_span(ef, a.root_space), 1e-9);
  EXPECT_LT(distance_to_span(a.root_space, ef), 1e-9);
  // omega = sigma theta on span{E, F}: E -> -F, F -> -E, so one +1 and one -1 direction.
  const auto [plus, minus] = involution_dims(a.root_space, sl2().omega_g());
  EXPECT_EQ(a.omega_plus_dim, plus);
  EXPECT_EQ(a.omega_minus_dim, minus);
  EXPECT_EQ(plus, 1);
  EXPECT_EQ(minus, 1);
  EXPECT_EQ(a.type, RootType::Real);
  // A real root is compact when g_alpha^{-omega} != 0.
  EXPECT_EQ(a.subtype, RootSubtype::Compact);
}

TEST(Roots, Sl2CompactCartan) {
  const auto c = make_record(sl2(), sl2_v(sl2(), 0, 1, -1));
  const auto r = compute_roots(sl2(), c, 1);
  ASSERT_EQ(r.roots.size(), 1u);
  const auto& a = r.roots[0];
  EXPECT_EQ(a.type, RootType::Imaginary);
  const auto [plus, minus] = involution_dims(a.root_space, sl2().omega_g());
  EXPECT_EQ(plus, 0);
  EXPECT_EQ(minus, 2);
  EXPECT_EQ(a.subtype, RootSubtype::Noncompact);
}

TEST(Roots, SlnSonThreeHyperplanes) {
  const auto c = cartan_space_at(sl3(), sln_diag(sl3(), {1.0, 0.3, -1.3}));
  const auto r = compute_roots(sl3(), c, 1);
  ASSERT_EQ(r.roots.size(), 3u);
  // Co-roots are the normals of {v_i = v_j}: multiples of e_ii - e_jj.
  std::vector<Vec> expected = {sln_diag(sl3(), {1, -1, 0}), sln_diag(sl3(), {1, 0, -1}), sln_diag(sl3(), {0, 1, -1})};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& a : r.roots) found = found || distance_to_span(a.coroot, e) < 1e-8;
    EXPECT_TRUE(found);
  }
  for (const auto& a : r.roots) {
    EXPECT_EQ(a.multiplicity, 1);
    EXPECT_EQ(a.hyperplane.cols(), 1);
    EXPECT_EQ(a.type, RootType::Real);
    EXPECT_EQ(a.subtype, RootSubtype::Noncompact);
    // g_alpha is the rotation in the (i, j) plane, which kills the normal's hyperplane.
    const Mat x = sln_matrix(sl3(), 3, a.hyperplane.col(0));
    EXPECT_LT((sl3().orbit_map(a.hyperplane.col(0)) * a.root_space).norm(), 1e-9 * x.norm());
  }
  EXPECT_EQ(singular_hyperplanes(sl3(), c, 1).size(), 3u);
}

TEST(Roots, CompactRankOneHasOneHyperplane) {
  const auto rep = catalog_representation("supq:p=1,q=1,r=1,s=1", 1);
  auto rng = make_rng(1, 0);
  const Vec v = gaussian(rng, rep.dim_v()).cast<cd>();
  const auto c = cartan_space_at(rep, v);
  EXPECT_EQ(singular_hyperplanes(rep, c, 1).size(), 1u);
}

TEST(Roots, SingularMarginVanishesOnHyperplanes) {
  // Ray-scan oracle: the margin dips to zero exactly where the centralizer jumps.
  const auto c = cartan_space_at(sl3(), sln_diag(sl3(), {1.0, 0.3, -1.3}));
  const auto r = compute_roots(sl3(), c, 1);
  for (const auto& a : r.roots) EXPECT_LT(singular_margin(sl3(), r.m, a.hyperplane.col(0)), 1e-10);
  // The chamber point is a random sample accepted at margin 1e-6.
  EXPECT_GT(singular_margin(sl3(), r.m, r.chamber_point), 1e-6);
  int dips = 0;
  const Vec p = sln_diag(sl3(), {1, 0, -1}), q = sln_diag(sl3(), {0.2, 1, -1.2});
  double prev = singular_margin(sl3(), r.m, p);
  bool falling = false;
  for (int s = 1; s <= 400; ++s) {
    const double t = M_PI * s / 400;
    const double m = singular_margin(sl3(), r.m, std::cos(t) * p + std::sin(t) * q);
    if (m > prev && falling) ++dips;
    falling = m < prev;
    prev = m;
  }
  // A half circle in the 2-plane crosses each of the three lines once.
  EXPECT_EQ(dips, 3);
}

TEST(Roots, OrthogonalityAndDimensionChecks) {
  for (const std::string spec : {"sl2-adjoint", "sln-son:n=3", "supq:p=1,q=1", "sln-sopq:n=3,p=2", "supq:p=2,q=1"}) {
    const auto rep = catalog_representation(spec, 1);
    const auto t = enumerate_classes(rep, 40, 1);
    for (const auto& c : t.representatives) {
      const auto r = compute_roots(rep, c, 1);
      EXPECT_LE(value(r.checks, "<c, g.c>"), 1e-8) << spec;
      EXPECT_LE(value(r.checks, "<g_a.c, g_b.c>, a != b"), 1e-8) << spec;
      EXPECT_LE(value(r.checks, "dim V - dim c - sum dim g_a.c"), 0.0) << spec;
      EXPECT_LE(value(r.checks, "sigma_tilde permutes roots"), 1e-6) << spec;
    }
  }
}

TEST(Roots, ComplexRootsComeInSigmaPairs) {
  const auto rep = catalog_representation("sln-sopq:n=3,p=2", 1);
  const auto t = enumerate_classes(rep, 40, 1);
  int complex_roots = 0;
  for (const auto& c : t.representatives) {
    const auto r = compute_roots(rep, c, 1);
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
      const auto& a = r.roots[i];
      if (a.type != RootType::Complex) continue;
      ++complex_roots;
      ASSERT_GE(a.sigma_partner, 0);
      ASSERT_NE(a.sigma_partner, static_cast<int>(i));
      EXPECT_EQ(r.roots[a.sigma_partner].sigma_partner, static_cast<int>(i));
    }
  }
  EXPECT_GT(complex_roots, 0);
}

TEST(Roots, TypeMultisetIsSorted) {
  const auto c = cartan_space_at(sl3(), sln_diag(sl3(), {1.0, 0.3, -1.3}));
  const auto keys = root_type_multiset(compute_roots(sl3(), c, 1));
  ASSERT_EQ(keys.size(), 3u);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_EQ(keys[0], "real/noncompact/1");
}

#include <gtest/gtest.h>

#include "polarrep/cayley.hpp"
#include "support.hpp"

using namespace polarrep;
using namespace polarrep::testing;

namespace {

const RepresentationModel& sl2() {
  static const RepresentationModel rep = catalog_representation("sl2-adjoint", 1);
  return rep;
}

// On sl(2) the Killing form is positive on hyperbolic and negative on elliptic lines.
double form_sign(const CartanSubspaceRecord& c) {
  const Vec w = c.real_points.col(0);
  return (w.transpose() * sl2().form * w)(0).real();
}

}  // namespace

TEST(Cayley, CompactToSplitOnSl2) {
  const auto c = make_record(sl2(), sl2_v(sl2(), 0, 1, -1));
  EXPECT_LT(form_sign(c), 0);
  const auto roots = compute_roots(sl2(), c, 1);
  ASSERT_EQ(roots.roots.size(), 1u);
  const auto rec = cayley_transform(sl2(), c, roots.roots[0], CayleyKind::NoncompactImaginary);
  EXPECT_EQ(rec.target.signature(), std::make_pair(0, 1));
  EXPECT_TRUE(rec.target.standard());
  EXPECT_GT(form_sign(rec.target), 0);
  const auto h = make_record(sl2(), sl2_v(sl2(), 1, 0, 0));
  EXPECT_EQ(conjugacy_test(sl2(), rec.target, h, 1).verdict, Conjugacy::Conjugate);
  // op^2 = -id on c = C v_alpha, checked directly.
  const Vec v = c.basis.col(0);
  EXPECT_LT((rec.op * rec.op * v + v).norm() / v.norm(), 1e-9);
  EXPECT_LE(max_residual(rec.residuals), 1e-9);
}

TEST(Cayley, RoundTripReturnsToCompactClass) {
  const auto c = make_record(sl2(), sl2_v(sl2(), 0, 1, -1));
  const auto nc = cayley_transform(sl2(), c, compute_roots(sl2(), c, 1).roots[0], CayleyKind::NoncompactImaginary);
  const auto back_roots = compute_roots(sl2(), nc.target, 1);
  ASSERT_EQ(back_roots.roots.size(), 1u);
  const auto back = cayley_transform(sl2(), nc.target, back_roots.roots[0], CayleyKind::CompactReal);
  EXPECT_EQ(back.target.signature(), std::make_pair(1, 0));
  EXPECT_LT(form_sign(back.target), 0);
  EXPECT_EQ(conjugacy_test(sl2(), back.target, c, 1).verdict, Conjugacy::Conjugate);
}

TEST(Cayley, WrongKindRejected) {
  const auto c = make_record(sl2(), sl2_v(sl2(), 1, 0, 0));
  const auto roots = compute_roots(sl2(), c, 1);
  try {
    cayley_transform(sl2(), c, roots.roots[0], CayleyKind::NoncompactImaginary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotApplicable);
  }
  const auto rep = catalog_representation("sln-son:n=3", 1);
  const auto cs = cartan_space_at(rep, sln_diag(rep, {1.0, 0.3, -1.3}));
  const auto rs = compute_roots(rep, cs, 1);
  EXPECT_THROW(cayley_transform(rep, cs, rs.roots[0], CayleyKind::CompactReal), Error);
}

TEST(Extremal, Sl2FromCompactSeed) {
  const auto c = make_record(sl2(), sl2_v(sl2(), 0, 1, -1));
  const auto ex = extremal_search(sl2(), ExtremalDirection::MaxNoncompact, c, 1);
  EXPECT_EQ(ex.record.signature(), std::make_pair(0, 1));
  EXPECT_LE(ex.steps, 1);
  const auto again = extremal_search(sl2(), ExtremalDirection::MaxNoncompact, ex.record, 1);
  EXPECT_EQ(again.steps, 0);
  EXPECT_LT(distance_to_span(again.record.basis, ex.record.basis), 1e-12);
}

TEST(RestrictedPolar, Sl2Split) {
  const auto c = make_record(sl2(), sl2_v(sl2(), 1, 0, 0));
  const auto r = restricted_polar_check(sl2(), c, 1);
  EXPECT_TRUE(r.passed) << r.note;
  EXPECT_EQ(r.k_orbit_dim, 1);
  EXPECT_EQ(r.section_dim, 1);
  EXPECT_EQ(r.target_dim, 2);
  EXPECT_LE(r.orthogonality, 1e-8);
}

TEST(RestrictedPolar, SlnSonDimensionCount) {
  const auto rep = catalog_representation("sln-son:n=3", 1);
  const auto c = cartan_space_at(rep, sln_diag(rep, {1.0, 0.3, -1.3}));
  const auto r = restricted_polar_check(rep, c, 1);
  EXPECT_TRUE(r.passed) << r.note;
  EXPECT_EQ(r.section_dim, 2);
  EXPECT_EQ(r.k_orbit_dim, 3);
  EXPECT_EQ(r.target_dim, 5);
  EXPECT_LE(r.orthogonality, 1e-8);
}

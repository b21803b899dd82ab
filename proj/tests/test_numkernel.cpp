#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <limits>

#include "polarrep/numkernel.hpp"

using namespace polarrep;

namespace {

// Singular values from the eigenvalues of A^* A, independent of the SVD path.
std::vector<double> gram_singular_values(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a);
  std::vector<double> s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  std::sort(s.rbegin(), s.rend());
  return s;
}

Mat random_mat(std::uint64_t stream, int r, int c) {
  auto rng = make_rng(42, stream);
  Mat m(r, c);
  for (int j = 0; j < c; ++j) m.col(j) = gaussian(rng, r).cast<cd>() + cd(0, 1) * gaussian(rng, r).cast<cd>();
  return m;
}

}  // namespace

TEST(Rank, IdentityAndZero) {
  EXPECT_EQ(rank_with_tol(Mat::Identity(3, 3)), 3);
  EXPECT_EQ(rank_with_tol(Mat::Zero(4, 2)), 0);
}

TEST(Rank, SmallSingularValueDropped) {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-14;
  const auto oracle = gram_singular_values(d);
  int expected = 0;
  for (double s : oracle) expected += s > 1e-8 * oracle[0];
  EXPECT_EQ(expected, 1);
  EXPECT_EQ(rank_with_tol(d, TolerancePolicy{1e-8, 1e-7, 1e-8}), expected);
}

TEST(Rank, NonFiniteRejected) {
  Mat m = Mat::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    rank_with_tol(m);
    FAIL() << "expected invalid-input";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Rank, AgreesWithGramOracleOnRandomProducts) {
  for (int t = 0; t < 5; ++t) {
    const Mat a = random_mat(10 + t, 6, 3) * random_mat(20 + t, 3, 5);
    const auto sv = singular_values(a);
    const auto oracle = gram_singular_values(a);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(sv[i], oracle[i], 1e-8 * oracle[0]);
    EXPECT_EQ(rank_with_tol(a), 3);
  }
}

TEST(Subspaces, IntersectionAndComplement) {
  const Mat e1 = Mat::Identity(3, 3).col(0);
  const Mat e12 = Mat::Identity(3, 3).leftCols(2);
  const Mat cap = span_intersection(e1, e12);
  ASSERT_EQ(cap.cols(), 1);
  EXPECT_LT(distance_to_span(e1, cap), 1e-12);

  const Mat c = bilinear_complement(Mat::Identity(2, 2).col(0), Mat::Identity(2, 2));
  ASSERT_EQ(c.cols(), 1);
  EXPECT_LT(distance_to_span(Mat::Identity(2, 2).col(1), c), 1e-12);
}

TEST(Subspaces, KillingComplementOfHInSl2) {
  // ad matrices of sl(2) in the basis (H, E, F), written out by hand.
  Mat adh = Mat::Zero(3, 3), ade = Mat::Zero(3, 3), adf = Mat::Zero(3, 3);
  adh(1, 1) = 2;
  adh(2, 2) = -2;
  ade(0, 2) = 1;   // [E, F] = H
  ade(1, 0) = -2;  // [E, H] = -2E
  adf(0, 1) = -1;  // [F, E] = -H
  adf(2, 0) = 2;   // [F, H] = 2F
  const Mat* ad[3] = {&adh, &ade, &adf};
  Mat gram(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram(i, j) = (*ad[i] * *ad[j]).trace();
  EXPECT_NEAR(gram(0, 0).real(), 8, 1e-12);
  EXPECT_NEAR(gram(1, 2).real(), 4, 1e-12);

  const Mat c = bilinear_complement(Mat::Identity(3, 3).col(0), gram);
  ASSERT_EQ(c.cols(), 2);
  EXPECT_LT(distance_to_span(Mat::Identity(3, 3).rightCols(2), c), 1e-12);
  EXPECT_LT(distance_to_span(c, Mat::Identity(3, 3).rightCols(2)), 1e-12);
}

TEST(Subspaces, DegenerateGramRejected) {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = 1;
  try {
    bilinear_complement(Mat::Identity(2, 2).col(0), g);
    FAIL() << "expected degenerate-form";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateForm);
  }
}

TEST(Spectrum, IdentityNilpotentRotation) {
  auto id = complex_spectrum(Mat::Identity(2, 2));
  ASSERT_EQ(id.clusters.size(), 1u);
  EXPECT_EQ(id.clusters[0].algebraic, 2);
  EXPECT_TRUE(id.diagonalizable);

  Mat n = Mat::Zero(2, 2);
  n(0, 1) = 1;
  auto nil = complex_spectrum(n);
  ASSERT_EQ(nil.clusters.size(), 1u);
  EXPECT_EQ(nil.clusters[0].algebraic, 2);
  EXPECT_EQ(nil.clusters[0].geometric, 1);
  EXPECT_FALSE(nil.diagonalizable);

  Mat r = Mat::Zero(2, 2);
  r(0, 1) = -1;
  r(1, 0) = 1;
  auto rot = complex_spectrum(r);
  ASSERT_EQ(rot.clusters.size(), 2u);
  EXPECT_TRUE(rot.diagonalizable);
  // Roots of the characteristic polynomial x^2 - tr x + det.
  const cd tr = r.trace(), det = r.determinant();
  const cd disc = std::sqrt(tr * tr - 4.0 * det);
  EXPECT_LT(multiset_distance({rot.clusters[0].value, rot.clusters[1].value}, {(tr + disc) / 2.0, (tr - disc) / 2.0}),
            1e-12);
}

TEST(Spectrum, Jordan3IsNotDiagonalizable) {
  Mat n = Mat::Zero(3, 3);
  n(0, 1) = n(1, 2) = 1;
  EXPECT_FALSE(complex_spectrum(n).diagonalizable);
}

TEST(FourthRoot, ScalarAndIdentity) {
  EXPECT_LT((hermitian_fourth_root(Mat::Identity(3, 3), Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm(), 1e-12);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 16;
  d(1, 1) = 81;
  Mat expect = Mat::Zero(2, 2);
  expect(0, 0) = 2;
  expect(1, 1) = 3;
  EXPECT_LT((hermitian_fourth_root(d, Mat::Identity(2, 2)) - expect).norm(), 1e-12);
}

TEST(FourthRoot, RandomCongruenceRoundTrip) {
  for (int t = 0; t < 5; ++t) {
    const Mat a = random_mat(100 + t, 4, 4);
    const Mat gram = a.adjoint() * a + Mat::Identity(4, 4);  // Hermitian positive form
    const Mat b = random_mat(200 + t, 4, 4);
    // m = gram^{-1} (b^* gram b + I) is self-adjoint and positive for (x, y) = y^* gram x.
    const Mat m = gram.inverse() * (b.adjoint() * gram * b + gram);
    const Mat phi = hermitian_fourth_root(m, gram);
    const Mat phi2 = phi * phi;
    EXPECT_LT((phi2 * phi2 - m).norm() / m.norm(), 1e-10);
    EXPECT_LT((gram * phi - (gram * phi).adjoint()).norm(), 1e-9 * gram.norm() * phi.norm());
  }
}

TEST(FourthRoot, NonPositiveRejected) {
  Mat d = Mat::Identity(2, 2);
  d(1, 1) = -1;
  try {
    hermitian_fourth_root(d, Mat::Identity(2, 2));
    FAIL() << "expected not-positive-definite";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(Expm, MatchesTaylorSeries) {
  const Mat a = 0.3 * random_mat(300, 4, 4);
  Mat term = Mat::Identity(4, 4), sum = Mat::Identity(4, 4);
  for (int k = 1; k < 40; ++k) {
    term = term * a / double(k);
    sum += term;
  }
  EXPECT_LT((expm(a) - sum).norm(), 1e-12 * sum.norm());
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  auto a = make_rng(7, 3), b = make_rng(7, 3), c = make_rng(7, 4);
  const RVec x = gaussian(a, 5), y = gaussian(b, 5), z = gaussian(c, 5);
  EXPECT_EQ(x, y);
  EXPECT_GT((x - z).norm(), 1e-6);
}

TEST(Tolerances, ValidateRejectsNonPositive) {
  TolerancePolicy p;
  p.rank_tol = 0;
  EXPECT_THROW(p.validate(), Error);
  TolerancePolicy q;
  EXPECT_NO_THROW(q.validate());
}

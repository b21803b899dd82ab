#include "polarrep/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace polarrep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DegenerateForm: return "degenerate-form";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::SearchFailure: return "search-failure";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::Inconsistent: return "inconsistent";
    case ErrorKind::FlowFailure: return "flow-failure";
  }
  return "unknown";
}

void TolerancePolicy::validate() const {
  if (!(rank_tol > 0 && rank_tol < 1 && eig_tol > 0 && flow_tol > 0))
    throw Error(ErrorKind::InvalidInput, "tolerances must be positive and rank_tol < 1");
}

Mat AntiLinear::conjugate_linear(const Mat& lin) const {
  return m * lin.conjugate() * m.inverse();
}

bool all_finite(const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

std::vector<double> singular_values(const Mat& m) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int rank_with_tol(const Mat& m, const TolerancePolicy& pol) {
  if (!all_finite(m)) throw Error(ErrorKind::InvalidInput, "rank_with_tol: non-finite entries");
  auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  const double cut = pol.rank_tol * s.front();
  return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double x) { return x > cut; }));
}

namespace {

double cutoff(const Eigen::VectorXd& s, double rel_tol, double abs_floor) {
  const double top = s.size() ? s(0) : 0.0;
  return std::max(rel_tol * top, abs_floor);
}

}  // namespace

Mat null_space(const Mat& m, double rel_tol, double abs_floor) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Mat::Identity(n, n);
  if (n == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = cutoff(s, rel_tol, abs_floor);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat orth(const Mat& m, double rel_tol, double abs_floor) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = cutoff(s, rel_tol, abs_floor);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Mat orthonormalize(const Mat& basis, const Mat& gram) {
  if (basis.cols() == 0) return basis;
  Mat g = basis.adjoint() * gram * basis;
  g = 0.5 * (g + g.adjoint()).eval();
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "orthonormalize: form not positive on span");
  // basis * L^{-*} has Gram identity.
  Mat linv = llt.matrixL().solve(Mat::Identity(g.rows(), g.cols()));
  return basis * linv.adjoint();
}

Mat span_sum(const Mat& a, const Mat& b, double rel_tol) {
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return orth(ab, rel_tol);
}

Mat span_intersection(const Mat& a, const Mat& b, double rel_tol) {
  Mat oa = orth(a, rel_tol), ob = orth(b, rel_tol);
  if (oa.cols() == 0 || ob.cols() == 0) return Mat(a.rows(), 0);
  Mat ab(oa.rows(), oa.cols() + ob.cols());
  ab << oa, -ob;
  Mat k = null_space(ab, rel_tol);
  return orth(oa * k.topRows(oa.cols()), rel_tol);
}

Mat bilinear_complement(const Mat& a, const Mat& gram, const Mat& within, double rel_tol) {
  if (rank_with_tol(gram, TolerancePolicy{rel_tol, 1e-7, 1e-8}) < gram.rows())
    throw Error(ErrorKind::DegenerateForm, "orthogonal complement w.r.t. a degenerate Gram matrix");
  if (a.cols() == 0) return orth(within, rel_tol);
  Mat cons = a.transpose() * gram * within;
  Mat k = null_space(cons, rel_tol);
  return orth(within * k, rel_tol);
}

Mat bilinear_complement(const Mat& a, const Mat& gram, double rel_tol) {
  return bilinear_complement(a, gram, Mat::Identity(gram.rows(), gram.cols()), rel_tol);
}

Mat hermitian_complement(const Mat& a, const Mat& gram, const Mat& within, double rel_tol) {
  if (a.cols() == 0) return orth(within, rel_tol);
  Mat cons = a.adjoint() * gram * within;
  Mat k = null_space(cons, rel_tol);
  return orth(within * k, rel_tol);
}

Mat coordinates(const Mat& basis, const Mat& x) {
  if (basis.cols() == 0) return Mat(0, x.cols());
  return basis.completeOrthogonalDecomposition().solve(x);
}

double distance_to_span(const Mat& basis, const Mat& x) {
  if (basis.cols() == 0) return x.norm();
  Mat q = orth(basis);
  return (x - q * (q.adjoint() * x)).norm();
}

RMat realify(const Mat& m) {
  RMat r(2 * m.rows(), m.cols());
  r.topRows(m.rows()) = m.real();
  r.bottomRows(m.rows()) = m.imag();
  return r;
}

Mat complexify(const RMat& r) {
  const Eigen::Index n = r.rows() / 2;
  Mat m(n, r.cols());
  m.real() = r.topRows(n);
  m.imag() = r.bottomRows(n);
  return m;
}

namespace {

RMat real_orth_r(const RMat& r, double rel_tol) {
  if (r.cols() == 0) return RMat(r.rows(), 0);
  Eigen::JacobiSVD<RMat> svd(r, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = std::max(rel_tol * (s.size() ? s(0) : 0.0), 1e-12);
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > cut) ++k;
  return svd.matrixU().leftCols(k);
}

RMat real_null_r(const RMat& r, double rel_tol) {
  const Eigen::Index n = r.cols();
  if (n == 0) return RMat(0, 0);
  if (r.rows() == 0) return RMat::Identity(n, n);
  Eigen::JacobiSVD<RMat> svd(r, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(rel_tol * (s.size() ? s(0) : 0.0), 1e-12);
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > cut) ++k;
  return svd.matrixV().rightCols(n - k);
}

}  // namespace

Mat real_null_space(const Mat& m, double rel_tol) {
  if (m.cols() == 0) return Mat(0, 0);
  return real_null_r(realify(m), rel_tol).cast<cd>();
}

Mat real_orth(const Mat& m, double rel_tol) { return complexify(real_orth_r(realify(m), rel_tol)); }

int real_dim(const Mat& m, double rel_tol) {
  return static_cast<int>(real_orth_r(realify(m), rel_tol).cols());
}

Mat real_intersection(const Mat& a, const Mat& b, double rel_tol) {
  RMat ra = real_orth_r(realify(a), rel_tol), rb = real_orth_r(realify(b), rel_tol);
  if (ra.cols() == 0 || rb.cols() == 0) return Mat(a.rows(), 0);
  RMat ab(ra.rows(), ra.cols() + rb.cols());
  ab << ra, -rb;
  RMat k = real_null_r(ab, rel_tol);
  return complexify(real_orth_r(ra * k.topRows(ra.cols()), rel_tol));
}

Mat antilinear_eigenspace(const Mat& basis, const AntiLinear& anti, double sign, double rel_tol) {
  // x = B(a + ib); anti(x) = C(a - ib) with C = M conj(B).
  const Mat c = anti.m * basis.conjugate();
  const Mat p = c - sign * basis;
  const Mat q = c + sign * basis;
  const Eigen::Index d = basis.rows(), k = basis.cols();
  if (k == 0) return Mat(d, 0);
  RMat sys(2 * d, 2 * k);
  sys.topLeftCorner(d, k) = p.real();
  sys.topRightCorner(d, k) = q.imag();
  sys.bottomLeftCorner(d, k) = p.imag();
  sys.bottomRightCorner(d, k) = -q.real();
  RMat ker = real_null_r(sys, rel_tol);
  Mat coeff(k, ker.cols());
  coeff.real() = ker.topRows(k);
  coeff.imag() = ker.bottomRows(k);
  return real_orth(basis * coeff, rel_tol);
}

Mat real_linear_eigenspace(const Mat& real_basis, const Mat& lin, double sign, double rel_tol) {
  if (real_basis.cols() == 0) return real_basis;
  RMat sys = realify(lin * real_basis - sign * real_basis);
  RMat ker = real_null_r(sys, rel_tol);
  return real_orth(real_basis * ker.cast<cd>(), rel_tol);
}

Mat real_antilinear_eigenspace(const Mat& real_basis, const AntiLinear& anti, double sign,
                               double rel_tol) {
  if (real_basis.cols() == 0) return real_basis;
  RMat sys = realify(anti.apply(real_basis) - sign * real_basis);
  RMat ker = real_null_r(sys, rel_tol);
  return real_orth(real_basis * ker.cast<cd>(), rel_tol);
}

// ---------------------------------------------------------------------------

std::vector<cd> sorted_eigenvalues(const Mat& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(ev.begin(), ev.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

Spectrum complex_spectrum(const Mat& m, const TolerancePolicy& pol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "complex_spectrum: non-square");
  if (!all_finite(m)) throw Error(ErrorKind::InvalidInput, "complex_spectrum: non-finite entries");
  Spectrum out;
  const Eigen::Index n = m.rows();
  if (n == 0) return out;
  const double scale = std::max(1.0, m.norm());
  // Defective blocks split eigenvalues by ~eps^{1/k}; cluster at sqrt(eig_tol).
  const double match = std::sqrt(pol.eig_tol) * scale;
  auto ev = sorted_eigenvalues(m);

  // Greedy clustering: each eigenvalue joins the nearest existing cluster
  // centre within `match`, in lexicographic order.
  std::vector<std::vector<cd>> members;
  std::vector<cd> centres;
  for (cd z : ev) {
    int best = -1;
    double bd = match;
    for (size_t c = 0; c < centres.size(); ++c) {
      double dist = std::abs(z - centres[c]);
      if (dist <= bd) { bd = dist; best = static_cast<int>(c); }
    }
    if (best < 0) {
      centres.push_back(z);
      members.push_back({z});
    } else {
      members[best].push_back(z);
      cd s = 0;
      for (cd w : members[best]) s += w;
      centres[best] = s / static_cast<double>(members[best].size());
    }
  }

  const Mat id = Mat::Identity(n, n);
  for (size_t c = 0; c < centres.size(); ++c) {
    EigenCluster cl;
    cl.value = centres[c];
    cl.algebraic = static_cast<int>(members[c].size());
    auto s = singular_values(m - centres[c] * id);
    const double cut = match;
    int small = 0;
    for (double x : s) {
      if (x <= cut) ++small;
      else if (x <= 100.0 * cut) out.borderline = true;
    }
    cl.geometric = std::min(small, cl.algebraic);
    if (cl.geometric < cl.algebraic) out.diagonalizable = false;
    out.clusters.push_back(cl);
  }
  std::sort(out.clusters.begin(), out.clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
    return a.value.real() != b.value.real() ? a.value.real() < b.value.real()
                                            : a.value.imag() < b.value.imag();
  });
  return out;
}

Mat hermitian_power(const Mat& m, const Mat& gram, double p, const TolerancePolicy& pol) {
  if (m.rows() != m.cols() || gram.rows() != m.rows())
    throw Error(ErrorKind::InvalidInput, "hermitian_power: dimension mismatch");
  Mat g = 0.5 * (gram + gram.adjoint());
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "hermitian_power: Gram matrix not positive-definite");
  const Mat l = llt.matrixL();
  // m' = L^* m L^{-*} is Hermitian in the standard sense.
  const Mat lstar = l.adjoint();
  const Mat lstar_inv = lstar.inverse();
  Mat h = lstar * m * lstar_inv;
  const double herm_res = (h - h.adjoint()).norm();
  if (herm_res > 1e3 * pol.eig_tol * std::max(1.0, h.norm()))
    throw Error(ErrorKind::InvalidInput, "hermitian_power: matrix is not Hermitian w.r.t. the form");
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto& lam = es.eigenvalues();
  const double floor = pol.eig_tol * std::max(1.0, std::abs(lam(lam.size() - 1)));
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (!(lam(i) > floor))
      throw Error(ErrorKind::NotPositiveDefinite, "hermitian_power: non-positive eigenvalue");
  Eigen::VectorXd lp = lam.array().pow(p);
  Mat root = es.eigenvectors() * lp.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  return lstar_inv * root * lstar;
}

Mat hermitian_fourth_root(const Mat& m, const Mat& gram, const TolerancePolicy& pol) {
  return hermitian_power(m, gram, 0.25, pol);
}

Mat expm(const Mat& m) {
  if (m.rows() == 0) return m;
  return m.exp();
}

double multiset_distance(std::vector<cd> a, std::vector<cd> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (cd z : a) {
    double bd = std::numeric_limits<double>::infinity();
    size_t bi = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(z - b[j]);
      if (d < bd) { bd = d; bi = j; }
    }
    used[bi] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

RVec gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  RVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

}  // namespace polarrep

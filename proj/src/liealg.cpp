#include "polarrep/liealg.hpp"

#include <sstream>

namespace polarrep {

namespace {

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

}  // namespace

LieAlgebraModel LieAlgebraModel::from_structure_constants(
    std::vector<std::string> labels, const std::vector<std::tuple<int, int, int, cd>>& triples) {
  const int n = static_cast<int>(labels.size());
  LieAlgebraModel alg;
  alg.labels_ = std::move(labels);
  alg.ad_.assign(n, Mat::Zero(n, n));
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const auto& [i, j, k, v] : triples) {
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
      throw Error(ErrorKind::InvalidInput, "structure constant index out of range");
    alg.ad_[i](k, j) = v;
    seen[i][j] = true;
  }
  // Fill antisymmetric partners for pairs given only one way round.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (seen[i][j] && !seen[j][i])
        for (int k = 0; k < n; ++k) alg.ad_[j](k, i) = -alg.ad_[i](k, j);
  return alg;
}

LieAlgebraModel LieAlgebraModel::from_matrices(std::vector<std::string> labels,
                                               std::vector<Mat> mats, double tol) {
  const int n = static_cast<int>(mats.size());
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back("X" + std::to_string(i));
  if (static_cast<int>(labels.size()) != n)
    throw Error(ErrorKind::InvalidInput, "label count does not match basis size");
  LieAlgebraModel alg;
  alg.labels_ = std::move(labels);
  alg.ad_.assign(n, Mat::Zero(n, n));
  if (n == 0) return alg;
  Mat f(mats[0].size(), n);
  for (int i = 0; i < n; ++i) f.col(i) = flatten(mats[i]);
  auto qr = f.completeOrthogonalDecomposition();
  if (qr.rank() < n) throw Error(ErrorKind::Validation, "realization matrices are linearly dependent");
  double scale = 0;
  for (const auto& m : mats) scale = std::max(scale, m.norm());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat br = mats[i] * mats[j] - mats[j] * mats[i];
      Vec coef = qr.solve(flatten(br));
      double res = (f * coef - flatten(br)).norm();
      if (res > tol * std::max(1.0, scale * scale))
        throw Error(ErrorKind::Validation, "realization not closed under commutator");
      alg.ad_[i].col(j) = coef;
    }
  alg.realization_ = std::move(mats);
  return alg;
}

LieAlgebraModel LieAlgebraModel::from_ad(std::vector<std::string> labels, std::vector<Mat> ad,
                                         std::optional<std::vector<Mat>> realization) {
  if (labels.size() != ad.size())
    throw Error(ErrorKind::InvalidInput, "label count does not match basis size");
  for (const auto& m : ad)
    if (m.rows() != static_cast<Eigen::Index>(ad.size()) || m.cols() != m.rows())
      throw Error(ErrorKind::InvalidInput, "ad-matrix has wrong shape");
  LieAlgebraModel alg;
  alg.labels_ = std::move(labels);
  alg.ad_ = std::move(ad);
  alg.realization_ = std::move(realization);
  return alg;
}

Vec LieAlgebraModel::bracket(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim());
  for (int i = 0; i < dim(); ++i)
    if (x(i) != cd(0)) out += x(i) * (ad_[i] * y);
  return out;
}

LieAlgebraModel::Residuals LieAlgebraModel::residuals() const {
  Residuals r;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.antisymmetry = std::max(r.antisymmetry, (ad_[i].col(j) + ad_[j].col(i)).norm());
  // Jacobi in operator form: ad_[X_i, X_j] = [ad_i, ad_j].
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat lhs = Mat::Zero(n, n);
      for (int k = 0; k < n; ++k) lhs += ad_[i](k, j) * ad_[k];
      Mat rhs = ad_[i] * ad_[j] - ad_[j] * ad_[i];
      r.jacobi = std::max(r.jacobi, (lhs - rhs).norm());
    }
  if (realization_) {
    const auto& m = *realization_;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Mat br = m[i] * m[j] - m[j] * m[i];
        for (int k = 0; k < n; ++k) br -= ad_[i](k, j) * m[k];
        r.realization = std::max(r.realization, br.norm());
      }
  }
  return r;
}

void LieAlgebraModel::validate(double tol) const {
  auto r = residuals();
  std::ostringstream msg;
  bool bad = false;
  if (r.antisymmetry > tol) { msg << "antisymmetry residual " << r.antisymmetry << "; "; bad = true; }
  if (r.jacobi > tol) { msg << "Jacobi residual " << r.jacobi << "; "; bad = true; }
  if (r.realization > tol) { msg << "realization commutator residual " << r.realization << "; "; bad = true; }
  if (realization_ && static_cast<int>(realization_->size()) != dim()) {
    msg << "realization size mismatch; ";
    bad = true;
  }
  if (bad) throw Error(ErrorKind::Validation, "Lie algebra: " + msg.str());
}

LieAlgebraModel LieAlgebraModel::subalgebra(const Mat& basis, std::vector<std::string> labels,
                                            double tol) const {
  const int m = static_cast<int>(basis.cols());
  if (labels.empty())
    for (int i = 0; i < m; ++i) labels.push_back("Y" + std::to_string(i));
  LieAlgebraModel sub;
  sub.labels_ = std::move(labels);
  sub.ad_.assign(m, Mat::Zero(m, m));
  auto qr = basis.completeOrthogonalDecomposition();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec br = bracket(basis.col(i), basis.col(j));
      Vec coef = qr.solve(br);
      if ((basis * coef - br).norm() > tol * std::max(1.0, br.norm()))
        throw Error(ErrorKind::Validation, "subalgebra: span not closed under bracket");
      sub.ad_[i].col(j) = coef;
    }
  if (realization_) {
    std::vector<Mat> mats;
    for (int i = 0; i < m; ++i) {
      Mat x = Mat::Zero((*realization_)[0].rows(), (*realization_)[0].cols());
      for (int k = 0; k < dim(); ++k) x += basis(k, i) * (*realization_)[k];
      mats.push_back(x);
    }
    sub.realization_ = std::move(mats);
  }
  return sub;
}

Mat ad_matrix(const LieAlgebraModel& alg, const Vec& v) {
  if (v.size() != alg.dim()) throw Error(ErrorKind::InvalidInput, "ad_matrix: length mismatch");
  Mat out = Mat::Zero(alg.dim(), alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    if (v(i) != cd(0)) out += v(i) * alg.ad_basis()[i];
  return out;
}

Mat killing_form(const LieAlgebraModel& alg) {
  const int n = alg.dim();
  Mat k(n, n);
  const auto& ad = alg.ad_basis();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      k(i, j) = (ad[i] * ad[j]).trace();
      k(j, i) = k(i, j);
    }
  return k;
}

Mat centralizer(const LieAlgebraModel& alg, const Mat& s, const TolerancePolicy& pol) {
  const int n = alg.dim();
  if (s.cols() == 0) return Mat::Identity(n, n);
  // [x, w] = -ad_w x; stack ad_w over the columns of s.
  Mat stacked(n * s.cols(), n);
  for (Eigen::Index j = 0; j < s.cols(); ++j) stacked.middleRows(j * n, n) = ad_matrix(alg, s.col(j));
  return null_space(stacked, pol.rank_tol);
}

Mat center(const LieAlgebraModel& alg, const TolerancePolicy& pol) {
  return centralizer(alg, Mat::Identity(alg.dim(), alg.dim()), pol);
}

bool is_semisimple_element(const LieAlgebraModel& alg, const Vec& v, const TolerancePolicy& pol) {
  if (v.norm() == 0.0) return true;
  return complex_spectrum(ad_matrix(alg, v), pol).diagonalizable;
}

}  // namespace polarrep

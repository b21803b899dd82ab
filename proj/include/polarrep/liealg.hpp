#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "polarrep/numkernel.hpp"

namespace polarrep {

/// [X_i, X_j] = sum_k c(i, j, k) X_k, stored as one ad-matrix per basis
/// element: ad[i](k, j) = c(i, j, k).
class LieAlgebraModel {
public:
  LieAlgebraModel() = default;

  /// Sparse triples (i, j, k, value); antisymmetric partners are filled in.
  static LieAlgebraModel from_structure_constants(
      std::vector<std::string> labels,
      const std::vector<std::tuple<int, int, int, cd>>& triples);

  /// Structure constants of the span of the given matrices (closed under the
  /// commutator, else Validation error). The matrices are kept as realization.
  static LieAlgebraModel from_matrices(std::vector<std::string> labels, std::vector<Mat> mats,
                                       double tol = 1e-9);

  /// ad-matrices given directly (ad[i](k, j) = c(i, j, k)).
  static LieAlgebraModel from_ad(std::vector<std::string> labels, std::vector<Mat> ad,
                                 std::optional<std::vector<Mat>> realization = std::nullopt);

  /// Attach a realization; validated by the caller via validate().
  void set_realization(std::vector<Mat> mats) { realization_ = std::move(mats); }

  int dim() const { return static_cast<int>(ad_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Mat>& ad_basis() const { return ad_; }
  const std::optional<std::vector<Mat>>& realization() const { return realization_; }
  cd c(int i, int j, int k) const { return ad_[i](k, j); }

  Vec bracket(const Vec& x, const Vec& y) const;

  /// Worst residual of antisymmetry, Jacobi on basis triples, and (if
  /// present) the realization's commutators against the constants.
  struct Residuals {
    double antisymmetry = 0, jacobi = 0, realization = 0;
    double max() const { return std::max({antisymmetry, jacobi, realization}); }
  };
  Residuals residuals() const;

  /// Throws Validation listing every identity whose residual exceeds tol.
  void validate(double tol = 1e-9) const;

  /// Change of basis: new basis vectors are the columns of `basis` (which
  /// must span a subalgebra). Returns the structure constants in that basis.
  LieAlgebraModel subalgebra(const Mat& basis, std::vector<std::string> labels = {},
                             double tol = 1e-8) const;

private:
  std::vector<std::string> labels_;
  std::vector<Mat> ad_;
  std::optional<std::vector<Mat>> realization_;
};

/// Matrix of x -> [v, x].
Mat ad_matrix(const LieAlgebraModel& alg, const Vec& v);

/// beta(X_i, X_j) = trace(ad X_i ad X_j).
Mat killing_form(const LieAlgebraModel& alg);

/// {x : [x, w] = 0 for every column w of s}, as an orthonormal basis.
Mat centralizer(const LieAlgebraModel& alg, const Mat& s, const TolerancePolicy& pol = {});

/// Center of the algebra.
Mat center(const LieAlgebraModel& alg, const TolerancePolicy& pol = {});

/// ad_v diagonalizable over C.
bool is_semisimple_element(const LieAlgebraModel& alg, const Vec& v,
                           const TolerancePolicy& pol = {});

}  // namespace polarrep

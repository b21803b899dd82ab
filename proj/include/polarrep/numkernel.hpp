#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polarrep {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

enum class ErrorKind {
  InvalidInput,
  DegenerateForm,
  NotPositiveDefinite,
  Validation,
  Precondition,
  NotFound,
  SearchFailure,
  NotApplicable,
  Inconsistent,
  FlowFailure,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` discriminates the failure.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

struct TolerancePolicy {
  double rank_tol = 1e-8;  ///< relative singular-value cutoff
  double eig_tol = 1e-7;   ///< eigenvalue matching
  double flow_tol = 1e-8;  ///< moment-map residual for the minimal-vector flow

  /// Throws InvalidInput unless all values are positive and rank_tol < 1.
  void validate() const;
};

/// A conjugate-linear map x -> m * conj(x).
struct AntiLinear {
  Mat m;

  Vec operator()(const Vec& x) const { return m * x.conjugate(); }
  Mat apply(const Mat& x) const { return m * x.conjugate(); }
  Eigen::Index dim() const { return m.rows(); }

  /// this ∘ other, which is complex-linear.
  Mat compose(const AntiLinear& other) const { return m * other.m.conjugate(); }
  /// this ∘ lin, conjugate-linear.
  AntiLinear after(const Mat& lin) const { return {m * lin.conjugate()}; }
  /// lin ∘ this, conjugate-linear.
  AntiLinear before(const Mat& lin) const { return {lin * m}; }
  /// Matrix of the linear operator this ∘ lin ∘ this^{-1} (this an involution up to sign).
  Mat conjugate_linear(const Mat& lin) const;

  static AntiLinear conjugation(Eigen::Index n) { return {Mat::Identity(n, n)}; }
};

bool all_finite(const Mat& m);

std::vector<double> singular_values(const Mat& m);

/// Number of singular values above rank_tol * (largest singular value).
int rank_with_tol(const Mat& m, const TolerancePolicy& pol = {});

/// Orthonormal (Euclidean) basis of the null space; cutoff relative to the
/// largest singular value, or `abs_floor` when the matrix is tiny.
Mat null_space(const Mat& m, double rel_tol = 1e-8, double abs_floor = 1e-12);

/// Orthonormal basis of the column span.
Mat orth(const Mat& m, double rel_tol = 1e-8, double abs_floor = 1e-12);

/// Orthonormalise columns w.r.t. the Hermitian form (x, y) = y^* gram x.
Mat orthonormalize(const Mat& basis, const Mat& gram);

Mat span_sum(const Mat& a, const Mat& b, double rel_tol = 1e-8);
Mat span_intersection(const Mat& a, const Mat& b, double rel_tol = 1e-8);

/// {x in span(within) : a^T gram x = 0 for all columns a}. Throws
/// DegenerateForm if gram is singular.
Mat bilinear_complement(const Mat& a, const Mat& gram, const Mat& within,
                        double rel_tol = 1e-8);
Mat bilinear_complement(const Mat& a, const Mat& gram, double rel_tol = 1e-8);

/// {x in span(within) : a^* gram x = 0 for all columns a}.
Mat hermitian_complement(const Mat& a, const Mat& gram, const Mat& within,
                         double rel_tol = 1e-8);

/// Coefficients z minimising |basis z - x| (least squares).
Mat coordinates(const Mat& basis, const Mat& x);

/// Norm of the component of x not in span(basis) (basis orthonormal or not).
double distance_to_span(const Mat& basis, const Mat& x);

// ---------------------------------------------------------------------------
// Real subspaces of C^n. A real subspace is stored as a complex matrix whose
// columns form an R-basis; realify() maps to R^{2n} as [Re; Im].

RMat realify(const Mat& m);
Mat complexify(const RMat& r);
Mat real_orth(const Mat& m, double rel_tol = 1e-8);
int real_dim(const Mat& m, double rel_tol = 1e-8);
Mat real_intersection(const Mat& a, const Mat& b, double rel_tol = 1e-8);
/// R-basis of {x in span_C(basis) : anti(x) = sign * x}.
Mat antilinear_eigenspace(const Mat& basis, const AntiLinear& anti, double sign,
                          double rel_tol = 1e-8);
/// R-basis of {x in span_R(real_basis) : lin x = sign * x}.
Mat real_linear_eigenspace(const Mat& real_basis, const Mat& lin, double sign,
                           double rel_tol = 1e-8);
/// R-basis of {x in R^n : m x = 0} for a complex matrix m.
Mat real_null_space(const Mat& m, double rel_tol = 1e-8);
/// R-basis of {x in span_R(real_basis) : anti(x) = sign * x}.
Mat real_antilinear_eigenspace(const Mat& real_basis, const AntiLinear& anti,
                               double sign, double rel_tol = 1e-8);

// ---------------------------------------------------------------------------

struct EigenCluster {
  cd value;
  int algebraic = 0;
  int geometric = 0;
};

struct Spectrum {
  std::vector<EigenCluster> clusters;  ///< sorted by (real, imag)
  bool diagonalizable = true;
  /// Some cluster had a singular value within a factor 100 of the cutoff.
  bool borderline = false;
};

Spectrum complex_spectrum(const Mat& m, const TolerancePolicy& pol = {});

/// Eigenvalues only, sorted lexicographically.
std::vector<cd> sorted_eigenvalues(const Mat& m);

/// Unique positive φ, Hermitian w.r.t. (x,y) = y^* gram x, with φ^4 = m.
Mat hermitian_fourth_root(const Mat& m, const Mat& gram, const TolerancePolicy& pol = {});

/// Generic positive power m^p for m Hermitian positive-definite w.r.t. gram.
Mat hermitian_power(const Mat& m, const Mat& gram, double p, const TolerancePolicy& pol = {});

Mat expm(const Mat& m);

/// Greedy nearest matching of two multisets; returns max pairing distance
/// (infinity if sizes differ).
double multiset_distance(std::vector<cd> a, std::vector<cd> b);

// ---------------------------------------------------------------------------
// Randomness: every randomized routine takes (seed, stream) and derives its
// own engine, so results do not depend on call order.

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);
RVec gaussian(std::mt19937_64& rng, Eigen::Index n);

}  // namespace polarrep

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "polarrep/liealg.hpp"
#include "polarrep/numkernel.hpp"

namespace polarrep {

using ResidualList = std::vector<std::pair<std::string, double>>;

/// A symmetric pair (ĝ, τ̂) with commuting real structure σ̂ and Cartan
/// involution θ̂. After build_pair the ambient basis is real for σ̂ (so σ̂ is
/// coordinate conjugation), orthonormal for B_θ = -β(·, θ̂·), and ordered
///   k_R | p_R | V_R ∩ W | V_R ∩ iW
/// so that g is the leading dim_g coordinates and V the trailing dim_v ones.
struct SymmetricPairModel {
  std::string name;
  LieAlgebraModel ambient;
  Mat tau_hat;           ///< diag(+1 on g, -1 on V)
  AntiLinear sigma_hat;  ///< identity matrix: x -> conj(x)
  AntiLinear theta_hat;  ///< T conj with T = diag(+1 on k_R, V_R∩W; -1 otherwise)
  Mat killing;           ///< β on the rebased ambient
  Mat to_input;          ///< columns are the rebased basis vectors in input coordinates
  int dim_k = 0, dim_p = 0, dim_vw = 0, dim_viw = 0;
  ResidualList residuals;
  std::vector<std::string> warnings;

  int dim() const { return ambient.dim(); }
  int dim_g() const { return dim_k + dim_p; }
  int dim_v() const { return dim_vw + dim_viw; }
};

/// Validates the involution identities, rebases, and splits. Involutions are
/// given in the input basis: tau linear, sigma/theta as x -> M conj(x).
SymmetricPairModel build_pair(const LieAlgebraModel& alg, const Mat& tau, const AntiLinear& sigma,
                              const AntiLinear& theta, std::string name = "pair",
                              double tol = 1e-9);

/// Real subspaces of the rebased ambient (columns are coordinate vectors).
struct CombinedDecomposition {
  Mat k_r, p_r, v_w, v_iw;
};
CombinedDecomposition combined_decomposition(const SymmetricPairModel& pair);

/// A representation of a real form g_R on V with the structures of a Cartan
/// pair. Bases are real: σ and σ̃ are conjugation, θ = T_g conj, θ̃ = T_v conj,
/// and (x, y) = y^* herm x.
struct RepresentationModel {
  std::string name;
  LieAlgebraModel algebra;
  std::vector<Mat> action;  ///< dτ(X_i) on V
  Mat form;                 ///< ⟨x, y⟩ = x^T form y
  Mat herm;
  AntiLinear sigma_g, theta_g, sigma_v, theta_v;
  Mat beta_g;  ///< invariant form on g (β of ĝ restricted, or the trace form)
  std::shared_ptr<const SymmetricPairModel> pair;  ///< present for isotropy representations
  int generic_orbit_dim = 0;
  std::vector<std::string> warnings;

  int dim_g() const { return algebra.dim(); }
  int dim_v() const { return static_cast<int>(form.rows()); }

  /// Matrix of X -> X · v (dim_v x dim_g).
  Mat orbit_map(const Vec& v) const;
  /// dτ(X) for coordinate vector X.
  Mat act(const Vec& x) const;
  /// Real bases (columns in g coordinates) of k_R = g_R^θ and p_R = g_R^{-θ}.
  Mat k_basis() const;
  Mat p_basis() const;
  /// Real bases of V_R ∩ W and V_R ∩ iW.
  Mat vw_basis() const;
  Mat viw_basis() const;
  /// ω = σθ on g as a linear map.
  Mat omega_g() const { return sigma_g.compose(theta_g); }
  /// Embedding of V into the ambient algebra (requires pair).
  Vec embed(const Vec& v) const;
};

RepresentationModel isotropy_representation(std::shared_ptr<const SymmetricPairModel> pair,
                                            std::uint64_t seed = 0);

/// Builds a representation from explicit data (real bases, orthonormal
/// convention form = -T_v, herm = identity). beta_g defaults to the trace form.
RepresentationModel make_representation(std::string name, LieAlgebraModel algebra,
                                        std::vector<Mat> action, const Mat& t_g, const Mat& t_v,
                                        std::uint64_t seed = 0);

/// Restriction to the subalgebra spanned by the columns of `basis` (real
/// coordinates in g). θ restricts when the subalgebra is θ-stable.
RepresentationModel restrict_representation(const RepresentationModel& rep, const Mat& basis,
                                            std::string name, std::uint64_t seed = 0);

/// Residuals of every representation invariant, by name.
ResidualList check_representation(const RepresentationModel& rep, std::uint64_t seed = 0);

/// Maximal rank of the orbit map over a few random complex points.
int generic_orbit_dimension(const RepresentationModel& rep, std::uint64_t seed);

struct CartanPairResult {
  AntiLinear eta, eta_tilde;
  Mat phi, phi_tilde;  ///< fourth roots on g and V
  ResidualList residuals;
};

/// Moves a Cartan pair (mu, mu_tilde) to one commuting with (σ, σ̃) via the
/// fourth root of ω² with ω = σμ.
CartanPairResult construct_cartan_pair(const RepresentationModel& rep, const AntiLinear& mu,
                                       const AntiLinear& mu_tilde,
                                       const TolerancePolicy& pol = {});

/// R-basis of the conjugate-linear maps J on V with J(X·v) = η(X)·J(v).
std::vector<Mat> equivariant_real_structures(const RepresentationModel& rep, const AntiLinear& eta,
                                             double tol = 1e-8);

}  // namespace polarrep

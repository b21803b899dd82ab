#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polarrep/sympair.hpp"

namespace polarrep {

/// A Cartan subspace c of V. When c is σ̃-stable the basis is real; when it is
/// also θ̃-stable the basis is [compact part | noncompact part].
struct CartanSubspaceRecord {
  Mat basis;
  bool sigma_stable = false;
  bool theta_stable = false;
  Mat real_points;      ///< R-basis of c^σ̃
  Mat compact_part;     ///< R-basis of c^σ̃ ∩ c^θ̃
  Mat noncompact_part;  ///< R-basis of c^σ̃ ∩ c^{-θ̃}
  Mat fixed_part;       ///< c ∩ V^g
  int compact_dim = 0;
  int noncompact_dim = 0;
  int rank = 0;

  int dim() const { return static_cast<int>(basis.cols()); }
  std::pair<int, int> signature() const { return {compact_dim, noncompact_dim}; }
  bool standard() const { return sigma_stable && theta_stable; }
};

/// Classifies span(basis) and fills the record.
CartanSubspaceRecord make_record(const RepresentationModel& rep, const Mat& basis,
                                 const TolerancePolicy& pol = {});

struct Regularity {
  bool semisimple = false;
  bool regular = false;
  int orbit_dim = 0;
};

Regularity regularity(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol = {});

/// c_v = (g·v)^⊥ for regular v.
CartanSubspaceRecord cartan_space_at(const RepresentationModel& rep, const Vec& v,
                                     const TolerancePolicy& pol = {});

struct MinimalVectorResult {
  Vec v1;
  Mat conjugator;        ///< τ(g) on V with v1 = τ(g) v
  Mat conjugator_g;      ///< Ad(g) on g
  bool converged = false;
  bool collapsed = false;  ///< norm went to zero: the orbit is not closed
  double residual = 0;     ///< max_j |(H_j v1, v1)| / |v1|^2 over a basis of i u
  int iterations = 0;
};

/// Descends |g·v|^2 over exp(i u) by damped Newton steps. Does not throw on
/// non-convergence; check `converged` and `collapsed`.
MinimalVectorResult minimal_vector(const RepresentationModel& rep, const Vec& v,
                                   const TolerancePolicy& pol = {}, int max_iter = 10000);

/// A σ̃-stable Cartan subspace containing the semisimple real point x.
CartanSubspaceRecord cartan_containing(const RepresentationModel& rep, const Vec& x,
                                       std::uint64_t seed, const TolerancePolicy& pol = {});

struct StabilizeResult {
  Mat conjugator;  ///< τ(g), g in G_R; record.basis spans τ(g) c
  CartanSubspaceRecord record;
  ResidualList residuals;
};

/// Moves a σ̃-stable Cartan subspace to a σ̃- and θ̃-stable one in its G_R class.
StabilizeResult stabilize_theta(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                                std::uint64_t seed, const TolerancePolicy& pol = {});

enum class Conjugacy { Conjugate, NotConjugate, Undetermined };
const char* to_string(Conjugacy c);

struct ConjugacyResult {
  Conjugacy verdict = Conjugacy::Undetermined;
  std::string reason;
  double residual = 0;  ///< alignment residual of the best K_R element found
  Mat conjugator;       ///< k in K_R on V, when found
};

/// Signature and root-type invariants, then a search over K_R aligning the
/// real points. Both inputs must be σ̃- and θ̃-stable.
ConjugacyResult conjugacy_test(const RepresentationModel& rep, const CartanSubspaceRecord& c1,
                               const CartanSubspaceRecord& c2, std::uint64_t seed,
                               const TolerancePolicy& pol = {});

struct ConjugacyClassTable {
  std::vector<CartanSubspaceRecord> representatives;
  std::vector<std::pair<int, int>> signatures;
  std::vector<std::string> origin;  ///< "sample" or "cayley"
  int samples_drawn = 0;
  int regular_samples = 0;
  int stabilize_failures = 0;
  int cayley_added = 0;
  bool incomplete = false;
  std::vector<std::string> notes;
};

/// Rejection-samples regular points of V_R, stabilizes, deduplicates, then
/// closes the table under Cayley transforms.
ConjugacyClassTable enumerate_classes(const RepresentationModel& rep, int budget, std::uint64_t seed,
                                      const TolerancePolicy& pol = {});

/// Joint kernel of the action on V (real basis).
Mat invariant_vectors(const RepresentationModel& rep, const TolerancePolicy& pol = {});

/// True when x ∈ V lies on the real points of V.
bool is_real_point(const RepresentationModel& rep, const Vec& x, double tol = 1e-10);

}  // namespace polarrep

#pragma once

#include <cstdint>
#include <string>

#include "polarrep/roots.hpp"

namespace polarrep {

enum class CayleyKind { NoncompactImaginary, CompactReal };
const char* to_string(CayleyKind k);

struct CayleyRecord {
  CayleyKind kind = CayleyKind::NoncompactImaginary;
  RootDatum root;
  Vec generator;  ///< X = iY with Y ∈ p_R ∩ g̃_α, scaled for a unit-speed great circle
  Mat op;         ///< τ(exp((π/2) X)) on V
  CartanSubspaceRecord source, target;
  ResidualList residuals;
};

/// Cayley transform along a noncompact imaginary root, or its dual along a
/// compact real root. Throws NotApplicable when the root has the wrong type
/// or g̃_α^θ ∩ g̃_α^{-σ} = 0.
CayleyRecord cayley_transform(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                              const RootDatum& root, CayleyKind kind,
                              const TolerancePolicy& pol = {});

enum class ExtremalDirection { MaxCompact, MaxNoncompact };

struct ExtremalResult {
  CartanSubspaceRecord record;
  int steps = 0;
};

/// Applies Cayley transforms greedily in report order until none applies.
ExtremalResult extremal_search(const RepresentationModel& rep, ExtremalDirection dir,
                               const CartanSubspaceRecord& seed_c, std::uint64_t seed,
                               const TolerancePolicy& pol = {});

struct RestrictedPolarReport {
  bool passed = false;
  bool vacuous = false;
  int section_dim = 0;       ///< dim c^σ̃ ∩ c^{-θ̃}
  int k_orbit_dim = 0;       ///< dim k_R · v2
  int target_dim = 0;        ///< dim V_R ∩ iW
  double orthogonality = 0;  ///< max |⟨k_R·v2, section⟩|
  double containment = 0;    ///< distance of p·v1 from k·v2
  double ambient = 0;        ///< distance of k_R·v2 from V_R ∩ iW
  std::string note;
};

/// (K_R, V_R ∩ iW) with section c^σ̃ ∩ c^{-θ̃} at a generic v2, for a maximally
/// noncompact c.
RestrictedPolarReport restricted_polar_check(const RepresentationModel& rep,
                                             const CartanSubspaceRecord& c, std::uint64_t seed,
                                             const TolerancePolicy& pol = {});

}  // namespace polarrep

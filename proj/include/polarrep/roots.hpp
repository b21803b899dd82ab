#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarrep/cartan.hpp"

namespace polarrep {

enum class RootType { Real, Imaginary, Complex };
enum class RootSubtype { Compact, Noncompact, NotApplicable };
const char* to_string(RootType t);
const char* to_string(RootSubtype t);

struct RootDatum {
  Mat hyperplane;  ///< complex basis of c_α
  Vec coroot;      ///< v_α ∈ c^{-θ̃}, ⟨v_α, v_α⟩ = 1
  RootType type = RootType::Complex;
  RootSubtype subtype = RootSubtype::NotApplicable;
  Mat root_space;  ///< g̃_α, columns in g coordinates
  int multiplicity = 0;
  int omega_plus_dim = -1;   ///< dim g̃_α^ω (noncomplex roots)
  int omega_minus_dim = -1;  ///< dim g̃_α^{-ω}
  int sigma_partner = -1;    ///< index of |σ̃α|
  double chamber_value = 0;  ///< α at the chamber point

  /// α(x) = ⟨x, v_α⟩, complex-linear in x.
  cd operator()(const RepresentationModel& rep, const Vec& x) const;
};

struct RootSystemReport {
  std::vector<RootDatum> roots;
  Mat m;               ///< centralizer of c in g
  Mat section;         ///< orthonormal R-basis of c^{-θ̃}: [i·compact | noncompact]
  Vec chamber_point;   ///< generic point of c^{-θ̃} fixing co-root signs
  ResidualList checks;
};

/// Roots from the joint eigen-decomposition of M(v) = L(v0)^+ L(v) on the
/// complement of m, where L(v) : X -> X·v. c must be σ̃- and θ̃-stable.
RootSystemReport compute_roots(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                               std::uint64_t seed, const TolerancePolicy& pol = {});

/// The hyperplanes c_α of the report.
std::vector<Mat> singular_hyperplanes(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                                      std::uint64_t seed, const TolerancePolicy& pol = {});

/// Unit ⟨⟩-normal of c_α^{-θ̃} in c^{-θ̃}, signed positive at the chamber point.
Vec coroot_from_hyperplane(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                           const Mat& c_alpha, const Vec& chamber_point);

/// Type from vanishing on c^{-σ̃}∩c^{-θ̃} / c^σ̃∩c^{-θ̃}; subtype from g̃_α^{-ω}.
void classify_root(const RepresentationModel& rep, const CartanSubspaceRecord& c, RootDatum& datum,
                   const TolerancePolicy& pol = {});

/// g̃_α: complement of m in the centralizer of c_α.
Mat root_space(const RepresentationModel& rep, const Mat& c_alpha, const Mat& m,
               const TolerancePolicy& pol = {});

/// Centralizer of a subspace of V in g (complex basis).
Mat stabilizer_algebra(const RepresentationModel& rep, const Mat& s, const TolerancePolicy& pol = {});

/// Smallest singular value of L(v) restricted to the complement of m,
/// relative to the largest. Vanishes exactly on the singular hyperplanes.
double singular_margin(const RepresentationModel& rep, const Mat& m, const Vec& v);

/// Multiset key (type, subtype, multiplicity) sorted, for class invariants.
std::vector<std::string> root_type_multiset(const RootSystemReport& r);

}  // namespace polarrep

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarrep/roots.hpp"

namespace polarrep {

/// Real frame of the orbit G_R·v at a real point v.
struct OrbitFrame {
  RMat tangent;  ///< orthonormal basis of g_R·v
  RMat normal;   ///< basis of the ⟨⟩-complement of g_R·v in V_R
  RMat lift;     ///< tangent = L(v) lift, columns in g coordinates
  int metric_plus = 0, metric_minus = 0, metric_zero = 0;
  bool degenerate = false;
};

/// Throws Precondition for non-real v.
OrbitFrame orbit_frame(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol = {});

/// Eigenvalues of a real operator grouped into real values and conjugate pairs.
struct BlockSpectrum {
  std::vector<double> real_values;
  std::vector<cd> complex_pairs;  ///< one representative per pair, Im > 0
  std::vector<cd> all;            ///< sorted
  bool diagonalizable = true;
  bool borderline = false;
};

BlockSpectrum block_spectrum(const RMat& a, const TolerancePolicy& pol = {});

struct WeingartenResult {
  RMat op;  ///< A_ξ in the frame's tangent basis
  BlockSpectrum spectrum;
  double self_adjoint_residual = 0;  ///< |G A - (G A)^T| with G the induced metric
};

/// A_ξ(X·v) = -tan(X·ξ) for ξ normal at v. Throws DegenerateForm when the
/// induced metric is degenerate and Precondition when ξ is not normal.
WeingartenResult weingarten_operator(const RepresentationModel& rep, const Vec& v, const Vec& xi,
                                     const TolerancePolicy& pol = {});

/// II(X·v, Y·v) = nor(X Y v) for X, Y in g_R (coordinate vectors).
RVec second_fundamental_form(const RepresentationModel& rep, const Vec& v, const Vec& x, const Vec& y,
                             const TolerancePolicy& pol = {});

/// Normal part of the central mixed difference of (s, t) -> exp(sX) exp(tY) v.
RVec second_fundamental_form_fd(const RepresentationModel& rep, const Vec& v, const Vec& x, const Vec& y,
                                double h = 1e-5, const TolerancePolicy& pol = {});

/// Connection matrices W_X (ξ -> nor(X ξ) in normal coordinates) for the
/// equivariant normal frame, one per basis element of g.
std::vector<RMat> normal_connection(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol = {});

struct FlatnessResult {
  bool flat = false;
  double curvature = 0;        ///< max |[W_X, W_Y] + W_[X,Y]|
  double equivariant_gap = 0;  ///< max |W_X|: zero iff equivariant normal fields are parallel
};

FlatnessResult normal_flatness_check(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol = {});

enum class IsoVerdict { Isoparametric, NotIsoparametric, DegenerateMetric };
const char* to_string(IsoVerdict v);

struct IsoparametricReport {
  IsoVerdict verdict = IsoVerdict::NotIsoparametric;
  Vec base_point;
  FlatnessResult flatness;
  std::vector<BlockSpectrum> spectra;  ///< A_ξ at the base point, one per normal basis vector
  double spectrum_drift = 0;           ///< under parallel transport to nearby orbit points
  double commutator = 0;               ///< max |[A_ξ, A_η]|
  double self_adjoint = 0;
  bool diagonalizable = true;
  int samples = 0;
  int metric_plus = 0, metric_minus = 0;
  std::string reason;
};

/// Verdict at a real regular point v from normal flatness, commuting shape
/// operators, diagonalizability and constancy of the spectra of A_ξ along
/// parallel normal fields (transported along exp(tX)·v).
IsoparametricReport isoparametric_verdict(const RepresentationModel& rep, const Vec& v, std::uint64_t seed,
                                          const TolerancePolicy& pol = {}, int samples = 10);

/// Multiset {-α(ξ)/α(v)} with multiplicity dim g̃_α for v, ξ in c.
std::vector<cd> predicted_weingarten_spectrum(const RepresentationModel& rep, const RootSystemReport& roots,
                                              const Vec& v, const Vec& xi);

struct ClosureProbe {
  Vec v, v1;
  bool converged = false, collapsed = false;
  double flow_residual = 0;
  int dim_a = 0, dim_b = 0;
  bool equal = false;
};

/// Flows each sample to a minimal vector for A and compares orbit dimensions
/// of A and B there. Both representations act on the same V.
std::vector<ClosureProbe> orbit_closure_probe(const RepresentationModel& a, const RepresentationModel& b,
                                              const std::vector<Vec>& samples, const TolerancePolicy& pol = {});

}  // namespace polarrep

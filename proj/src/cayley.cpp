#include "polarrep/cayley.hpp"

#include <algorithm>
#include <cmath>

#include <numbers>

namespace polarrep {

const char* to_string(CayleyKind k) {
  return k == CayleyKind::NoncompactImaginary ? "noncompact-imaginary" : "compact-real";
}

CayleyRecord cayley_transform(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                              const RootDatum& root, CayleyKind kind, const TolerancePolicy& pol) {
  if (!c.standard()) throw Error(ErrorKind::Precondition, "cayley_transform: c must be sigma- and theta-stable");
  const bool ni = kind == CayleyKind::NoncompactImaginary;
  if (ni && !(root.type == RootType::Imaginary && root.subtype == RootSubtype::Noncompact))
    throw Error(ErrorKind::NotApplicable, "cayley_transform: root is not noncompact imaginary");
  if (!ni && !(root.type == RootType::Real && root.subtype == RootSubtype::Compact))
    throw Error(ErrorKind::NotApplicable, "cayley_transform: root is not compact real");
  const int dv = rep.dim_v();

  // Y ∈ p_R ∩ g̃_α; the generator is X = iY.
  const Mat& e = root.root_space;
  Mat ce(e.rows(), 2 * e.cols());
  ce << e, cd(0, 1) * e;
  Mat yb = real_intersection(ce, rep.p_basis(), 1e-8);
  if (yb.cols() == 0) throw Error(ErrorKind::NotApplicable, "cayley_transform: p_R meets the root space trivially");
  yb = yb.real().cast<cd>();

  // u real: -a for v_α = i a (noncompact imaginary), b = v_α (compact real).
  Vec u = ni ? Vec(cd(0, 1) * root.coroot) : root.coroot;
  u = u.real().cast<cd>();
  RMat lu(dv, yb.cols());
  for (Eigen::Index j = 0; j < yb.cols(); ++j) lu.col(j) = (rep.act(yb.col(j)) * u).real();
  Eigen::JacobiSVD<RMat> svd(lu, Eigen::ComputeFullV);
  Vec y;
  Mat a;
  double lambda = 0, circle = 1e300;
  for (Eigen::Index j = 0; j < svd.matrixV().cols(); ++j) {
    Vec cand = yb * svd.matrixV().col(j).cast<cd>();
    Mat ac = rep.act(cand);
    Vec au = ac * u;
    if (au.norm() <= 1e-8 * ac.norm()) continue;
    double lam = au.norm() / u.norm();
    // Y ∈ p_R acts symmetrically on V_R, so the circle condition is A^2 u = λ^2 u.
    double r = (ac * au - lam * lam * u).norm() / (lam * lam * u.norm());
    if (r < circle) {
      circle = r;
      y = cand / lam;
      a = ac / lam;
      lambda = lam;
    }
    if (r < 1e-8) break;
  }
  if (lambda == 0) throw Error(ErrorKind::Inconsistent, "cayley_transform: generator does not move the co-root");
  CayleyRecord out;
  out.kind = kind;
  out.root = root;
  out.generator = cd(0, 1) * y;
  const double half_pi = std::numbers::pi / 2;
  out.op = expm(cd(0, half_pi) * a);
  const Mat id = Mat::Identity(dv, dv);
  const Vec& va = root.coroot;
  Mat op2 = out.op * out.op;
  out.residuals.emplace_back("great circle: A^2 u - u", circle);
  out.residuals.emplace_back("op^2 v_alpha + v_alpha", (op2 * va + va).norm());
  if (root.hyperplane.cols())
    out.residuals.emplace_back("op^2 - id on c_alpha", ((op2 - id) * root.hyperplane).norm());
  out.residuals.emplace_back("theta_tilde op theta_tilde - op",
                             (rep.theta_v.m * out.op.conjugate() * rep.theta_v.m.conjugate() - out.op).norm());
  out.residuals.emplace_back("sigma_tilde op sigma_tilde - op^{-1}",
                             (rep.sigma_v.m * out.op.conjugate() * rep.sigma_v.m.conjugate() - out.op.inverse()).norm());
  out.residuals.emplace_back("form preserved", (out.op.transpose() * rep.form * out.op - rep.form).norm());

  Vec dir = ni ? Vec(out.op * va) : Vec(cd(0, 1) * (out.op * va));
  out.residuals.emplace_back("new direction real", dir.imag().norm());
  dir = dir.real().cast<cd>();
  Mat tb(dv, root.hyperplane.cols() + 1);
  tb << root.hyperplane, dir;
  out.source = c;
  out.target = make_record(rep, tb, pol);
  const auto& t = out.target;
  out.residuals.emplace_back("target standard", t.standard() ? 0.0 : 1.0);
  const int dc = ni ? 0 : 1, dn = ni ? 1 : 0;
  out.residuals.emplace_back("signature shift",
                             std::abs(t.compact_dim - c.compact_dim + dn - dc) +
                                 std::abs(t.noncompact_dim - c.noncompact_dim - dn + dc) + 0.0);
  // The target must itself be a Cartan subspace: c_w = target for generic real w.
  double cartan_res = 1.0;
  if (t.sigma_stable) {
    auto rng = make_rng(0x63617961ULL, static_cast<std::uint64_t>(t.dim()));
    Vec w = t.real_points * gaussian(rng, t.real_points.cols()).cast<cd>();
    auto reg = regularity(rep, w, pol);
    if (reg.regular) cartan_res = distance_to_span(cartan_space_at(rep, w, pol).basis, t.basis);
  }
  out.residuals.emplace_back("target is a Cartan subspace", cartan_res);
  if (!t.standard() || cartan_res > 1e-6)
    throw Error(ErrorKind::Inconsistent, "cayley_transform: target is not a standard Cartan subspace");
  return out;
}

ExtremalResult extremal_search(const RepresentationModel& rep, ExtremalDirection dir,
                               const CartanSubspaceRecord& seed_c, std::uint64_t seed,
                               const TolerancePolicy& pol) {
  ExtremalResult out;
  out.record = seed_c;
  const bool to_noncompact = dir == ExtremalDirection::MaxNoncompact;
  for (int step = 0; step <= seed_c.dim(); ++step) {
    auto roots = compute_roots(rep, out.record, seed, pol);
    const RootDatum* pick = nullptr;
    for (const auto& r : roots.roots) {
      if (to_noncompact && r.type == RootType::Imaginary && r.subtype == RootSubtype::Noncompact) pick = &r;
      if (!to_noncompact && r.type == RootType::Real && r.subtype == RootSubtype::Compact) pick = &r;
      if (pick) break;
    }
    if (!pick) return out;
    auto rec = cayley_transform(rep, out.record, *pick,
                                to_noncompact ? CayleyKind::NoncompactImaginary : CayleyKind::CompactReal, pol);
    out.record = rec.target;
    ++out.steps;
  }
  throw Error(ErrorKind::Inconsistent, "extremal_search: more steps than dim c");
}

RestrictedPolarReport restricted_polar_check(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                                             std::uint64_t seed, const TolerancePolicy& pol) {
  if (!c.standard()) throw Error(ErrorKind::Precondition, "restricted_polar_check: c must be standard");
  RestrictedPolarReport out;
  const Mat target = rep.viw_basis();
  out.target_dim = static_cast<int>(target.cols());
  out.section_dim = c.noncompact_dim;
  if (out.target_dim == 0) {
    out.vacuous = true;
    out.passed = out.section_dim == 0;
    out.note = "V_R ∩ iW = 0";
    return out;
  }
  const int dv = rep.dim_v();
  auto rng = make_rng(seed, 0x72706f6cULL);
  const Mat kb = rep.k_basis(), pb = rep.p_basis();
  Vec v2 = c.noncompact_part.cols() ? Vec(c.noncompact_part * gaussian(rng, c.noncompact_part.cols()).cast<cd>())
                                    : Vec(Vec::Zero(dv));
  Mat kv2(dv, kb.cols());
  for (Eigen::Index j = 0; j < kb.cols(); ++j) kv2.col(j) = rep.act(kb.col(j)) * v2;
  Mat kv2o = kv2.cols() ? orth(kv2, pol.rank_tol) : Mat(dv, 0);
  out.k_orbit_dim = static_cast<int>(kv2o.cols());
  if (kv2o.cols() && c.noncompact_part.cols())
    out.orthogonality = (kv2o.transpose() * rep.form * c.noncompact_part).cwiseAbs().maxCoeff();
  out.ambient = kv2o.cols() ? distance_to_span(target, kv2o) : 0.0;
  if (c.compact_part.cols()) {
    Vec v1 = c.compact_part * gaussian(rng, c.compact_part.cols()).cast<cd>();
    for (Eigen::Index j = 0; j < pb.cols(); ++j) {
      Vec pv = rep.act(pb.col(j)) * v1;
      if (pv.norm() > 0) out.containment = std::max(out.containment, distance_to_span(kv2o, pv) / pv.norm());
    }
  }
  out.passed = out.k_orbit_dim + out.section_dim == out.target_dim && out.orthogonality <= 1e-8 &&
               out.ambient <= 1e-8 && out.containment <= 1e-8;
  return out;
}

}  // namespace polarrep

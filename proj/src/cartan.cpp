#include "polarrep/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "polarrep/cayley.hpp"
#include "polarrep/roots.hpp"

namespace polarrep {

namespace {

constexpr double kStableTol = 1e-6;

bool sigma_is_conjugation(const RepresentationModel& rep) {
  return (rep.sigma_v.m - Mat::Identity(rep.dim_v(), rep.dim_v())).norm() == 0.0;
}

Mat clean_real(const RepresentationModel& rep, const Mat& x) {
  if (!sigma_is_conjugation(rep)) return x;
  return x.real().cast<cd>();
}

Vec random_real_point(const Mat& real_basis, std::mt19937_64& rng) {
  return real_basis * gaussian(rng, real_basis.cols()).cast<cd>();
}

}  // namespace

const char* to_string(Conjugacy c) {
  switch (c) {
    case Conjugacy::Conjugate: return "conjugate";
    case Conjugacy::NotConjugate: return "not-conjugate";
    case Conjugacy::Undetermined: return "undetermined";
  }
  return "undetermined";
}

Mat invariant_vectors(const RepresentationModel& rep, const TolerancePolicy& pol) {
  const int dv = rep.dim_v();
  if (rep.dim_g() == 0) return Mat::Identity(dv, dv);
  Mat stack(dv * rep.dim_g(), dv);
  for (int i = 0; i < rep.dim_g(); ++i) stack.middleRows(i * dv, dv) = rep.action[i];
  return null_space(stack, pol.rank_tol);
}

bool is_real_point(const RepresentationModel& rep, const Vec& x, double tol) {
  return (rep.sigma_v(x) - x).norm() <= tol * std::max(1.0, x.norm());
}

CartanSubspaceRecord make_record(const RepresentationModel& rep, const Mat& basis,
                                 const TolerancePolicy& pol) {
  CartanSubspaceRecord rec;
  Mat c = orth(basis, pol.rank_tol);
  const int d = static_cast<int>(c.cols());
  rec.real_points = clean_real(rep, antilinear_eigenspace(c, rep.sigma_v, 1.0, 1e-7));
  rec.sigma_stable = rec.real_points.cols() == d;
  rec.theta_stable = d == 0 || distance_to_span(c, rep.theta_v.apply(c)) <= kStableTol * std::sqrt(d);
  if (rec.sigma_stable && rec.theta_stable && d > 0) {
    // θ̃ restricted to c^σ̃ in an orthonormal real basis; split by eigenvalue sign.
    const Mat& r = rec.real_points;
    RMat th = coordinates(r, rep.theta_v.apply(r)).real();
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (th + th.transpose()));
    std::vector<Eigen::Index> plus, minus;
    for (Eigen::Index i = 0; i < d; ++i) (es.eigenvalues()(i) > 0 ? plus : minus).push_back(i);
    rec.compact_part = Mat(rep.dim_v(), plus.size());
    rec.noncompact_part = Mat(rep.dim_v(), minus.size());
    for (size_t i = 0; i < plus.size(); ++i) rec.compact_part.col(i) = r * es.eigenvectors().col(plus[i]).cast<cd>();
    for (size_t i = 0; i < minus.size(); ++i) rec.noncompact_part.col(i) = r * es.eigenvectors().col(minus[i]).cast<cd>();
    rec.compact_dim = static_cast<int>(plus.size());
    rec.noncompact_dim = static_cast<int>(minus.size());
    rec.basis = Mat(rep.dim_v(), d);
    rec.basis << rec.compact_part, rec.noncompact_part;
  } else if (rec.sigma_stable) {
    rec.compact_part = clean_real(rep, real_antilinear_eigenspace(rec.real_points, rep.theta_v, 1.0, 1e-7));
    rec.noncompact_part = clean_real(rep, real_antilinear_eigenspace(rec.real_points, rep.theta_v, -1.0, 1e-7));
    rec.compact_dim = static_cast<int>(rec.compact_part.cols());
    rec.noncompact_dim = static_cast<int>(rec.noncompact_part.cols());
    rec.basis = rec.real_points;
  } else {
    rec.basis = c;
  }
  rec.fixed_part = span_intersection(rec.basis, invariant_vectors(rep, pol), pol.rank_tol);
  rec.rank = d - static_cast<int>(rec.fixed_part.cols());
  return rec;
}

Regularity regularity(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol) {
  Regularity r;
  if (v.size() != rep.dim_v()) throw Error(ErrorKind::InvalidInput, "regularity: length mismatch");
  r.orbit_dim = v.norm() == 0.0 ? 0 : rank_with_tol(rep.orbit_map(v), pol);
  if (rep.pair) {
    r.semisimple = is_semisimple_element(rep.pair->ambient, rep.embed(v), pol);
  } else {
    auto mv = minimal_vector(rep, v, pol);
    r.semisimple = mv.converged && !mv.collapsed;
  }
  r.regular = r.semisimple && r.orbit_dim == rep.generic_orbit_dim;
  return r;
}

CartanSubspaceRecord cartan_space_at(const RepresentationModel& rep, const Vec& v,
                                     const TolerancePolicy& pol) {
  auto reg = regularity(rep, v, pol);
  if (!reg.regular)
    throw Error(ErrorKind::Precondition, reg.semisimple ? "cartan_space_at: v is not regular"
                                                        : "cartan_space_at: v is not semisimple");
  Mat tangent = orth(rep.orbit_map(v), pol.rank_tol);
  Mat c = bilinear_complement(tangent, rep.form, pol.rank_tol);
  if (c.cols() != rep.dim_v() - reg.orbit_dim)
    throw Error(ErrorKind::Inconsistent, "cartan_space_at: form degenerate on the orbit tangent");
  return make_record(rep, c, pol);
}

// ---------------------------------------------------------------------------

MinimalVectorResult minimal_vector(const RepresentationModel& rep, const Vec& v,
                                   const TolerancePolicy& pol, int max_iter) {
  const int dv = rep.dim_v(), dg = rep.dim_g();
  MinimalVectorResult out;
  out.v1 = v;
  out.conjugator = Mat::Identity(dv, dv);
  out.conjugator_g = Mat::Identity(dg, dg);
  const double v0 = std::sqrt(std::abs((v.adjoint() * rep.herm * v)(0)));
  if (v0 == 0.0) {
    out.converged = true;
    return out;
  }
  // Directions of i u: p_R acts Hermitian, i k_R too. For real v the k_R
  // directions have zero gradient and are skipped so the flow stays in G_R.
  std::vector<Mat> hs;
  std::vector<Vec> ys;
  const Mat pb = rep.p_basis();
  for (Eigen::Index j = 0; j < pb.cols(); ++j) {
    hs.push_back(rep.act(pb.col(j)));
    ys.push_back(pb.col(j));
  }
  if (!is_real_point(rep, v, 1e-14)) {
    const Mat kb = rep.k_basis();
    for (Eigen::Index j = 0; j < kb.cols(); ++j) {
      hs.push_back(cd(0, 1) * rep.act(kb.col(j)));
      ys.push_back(cd(0, 1) * kb.col(j));
    }
  }
  const int nd = static_cast<int>(hs.size());
  auto norm2 = [&](const Vec& w) { return std::real((w.adjoint() * rep.herm * w)(0)); };
  Vec w = v;
  double f = norm2(w);
  for (int it = 0; it <= max_iter; ++it) {
    out.iterations = it;
    RVec g(nd);
    std::vector<Vec> u(nd);
    for (int j = 0; j < nd; ++j) {
      u[j] = hs[j] * w;
      g(j) = std::real((w.adjoint() * rep.herm * u[j])(0));
    }
    out.residual = nd ? g.cwiseAbs().maxCoeff() / f : 0.0;
    if (out.residual < pol.flow_tol) {
      out.converged = true;
      break;
    }
    if (std::sqrt(f) < 1e-6 * v0) {
      out.collapsed = true;
      break;
    }
    if (it == max_iter) break;
    RMat hess(nd, nd);
    for (int j = 0; j < nd; ++j)
      for (int k = j; k < nd; ++k) {
        hess(j, k) = 4.0 * std::real((u[j].adjoint() * rep.herm * u[k])(0));
        hess(k, j) = hess(j, k);
      }
    const RVec grad = 2.0 * g;
    RVec c = -hess.completeOrthogonalDecomposition().solve(grad);
    double slope = grad.dot(c);
    if (!(slope < 0)) {
      c = -grad / std::max(1e-300, hess.norm());
      slope = grad.dot(c);
    }
    Mat d = Mat::Zero(dv, dv);
    Vec y = Vec::Zero(dg);
    for (int j = 0; j < nd; ++j) {
      d += c(j) * hs[j];
      y += c(j) * ys[j];
    }
    double s = 1.0;
    Mat step;
    Vec wn;
    double fn = f;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, s *= 0.5) {
      step = expm(s * d);
      wn = step * w;
      fn = norm2(wn);
      if (fn <= f + 1e-4 * s * slope + 1e-15 * f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    w = wn;
    f = fn;
    out.conjugator = step * out.conjugator;
    out.conjugator_g = expm(s * ad_matrix(rep.algebra, y)) * out.conjugator_g;
  }
  out.v1 = w;
  return out;
}

// ---------------------------------------------------------------------------

CartanSubspaceRecord cartan_containing(const RepresentationModel& rep, const Vec& x,
                                       std::uint64_t seed, const TolerancePolicy& pol) {
  if (!is_real_point(rep, x, 1e-9)) throw Error(ErrorKind::Precondition, "cartan_containing: x is not real");
  auto reg = regularity(rep, x, pol);
  if (!reg.semisimple) throw Error(ErrorKind::Precondition, "cartan_containing: x is not semisimple");
  if (reg.regular) return cartan_space_at(rep, x, pol);

  // Slice at x: the stabilizer g_x acting on N_x = (g·x)^⊥.
  const int dv = rep.dim_v();
  const int cdim = dv - rep.generic_orbit_dim;
  Mat tangent = x.norm() == 0.0 ? Mat(dv, 0) : orth(rep.orbit_map(x), pol.rank_tol);
  Mat slice = bilinear_complement(tangent, rep.form, pol.rank_tol);
  if (slice.cols() + tangent.cols() != dv)
    throw Error(ErrorKind::Precondition, "cartan_containing: form degenerate on g·x (x not semisimple)");
  Mat stab = x.norm() == 0.0 ? Mat::Identity(rep.dim_g(), rep.dim_g()) : real_null_space(rep.orbit_map(x), pol.rank_tol);
  Mat slice_real = clean_real(rep, antilinear_eigenspace(slice, rep.sigma_v, 1.0, 1e-7));
  auto rng = make_rng(seed, 0x736c6963ULL);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Vec y = random_real_point(slice_real, rng);
    Mat sy(dv, stab.cols());
    for (Eigen::Index j = 0; j < stab.cols(); ++j) sy.col(j) = rep.act(stab.col(j)) * y;
    Mat sy_o = sy.cols() ? orth(sy, pol.rank_tol) : Mat(dv, 0);
    Mat c = bilinear_complement(sy_o, rep.form, slice, pol.rank_tol);
    if (c.cols() != cdim) continue;
    auto rec = make_record(rep, c, pol);
    if (!rec.sigma_stable) continue;
    // Validate: a generic point of c is regular with c_w = c.
    Vec w = random_real_point(rec.real_points, rng);
    auto regw = regularity(rep, w, pol);
    if (!regw.regular) continue;
    auto cw = cartan_space_at(rep, w, pol);
    if (distance_to_span(cw.basis, rec.basis) > kStableTol * std::sqrt(cdim)) continue;
    if (distance_to_span(rec.basis, x) > kStableTol * std::max(1.0, x.norm())) continue;
    return rec;
  }
  throw Error(ErrorKind::SearchFailure, "cartan_containing: no regular slice point found in 20 attempts");
}

// ---------------------------------------------------------------------------

StabilizeResult stabilize_theta(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                                std::uint64_t seed, const TolerancePolicy& pol) {
  if (!c.sigma_stable) throw Error(ErrorKind::Precondition, "stabilize_theta: c is not sigma-stable");
  StabilizeResult out;
  const int dv = rep.dim_v();
  if (c.theta_stable) {
    out.conjugator = Mat::Identity(dv, dv);
    out.record = c;
    return out;
  }
  auto rng = make_rng(seed, 0x73746162ULL);
  Vec x;
  bool found = false;
  for (int attempt = 0; attempt < 20 && !found; ++attempt) {
    x = random_real_point(c.real_points, rng);
    found = regularity(rep, x, pol).regular;
  }
  if (!found) throw Error(ErrorKind::SearchFailure, "stabilize_theta: no regular real point in c");
  TolerancePolicy tight = pol;
  tight.flow_tol = std::min(pol.flow_tol, 1e-12);
  auto mv = minimal_vector(rep, x, tight);
  if (!mv.converged && !mv.collapsed && mv.residual < pol.flow_tol) mv.converged = true;
  if (!mv.converged) {
    std::ostringstream msg;
    msg << "stabilize_theta: minimal-vector flow did not converge (residual " << mv.residual
        << ", iterations " << mv.iterations << (mv.collapsed ? ", norm collapsed" : "") << ")";
    throw Error(ErrorKind::SearchFailure, msg.str());
  }
  auto c1 = cartan_space_at(rep, mv.v1, pol);
  if (!c1.theta_stable || !c1.sigma_stable)
    throw Error(ErrorKind::SearchFailure, "stabilize_theta: c at the minimal vector is not theta-stable");
  out.conjugator = mv.conjugator;
  out.record = c1;
  out.residuals.emplace_back("transported c vs c at minimal vector",
                             distance_to_span(c1.basis, mv.conjugator * c.basis));
  out.residuals.emplace_back("flow moment-map residual", mv.residual);
  // The pulled-back pair (mu, mu_tilde) fixes c and already commutes with
  // (sigma, sigma_tilde); the construction must return it unchanged.
  const Mat& h = mv.conjugator;
  const Mat& hg = mv.conjugator_g;
  AntiLinear mu_t{h.inverse() * rep.theta_v.m * h.conjugate()};
  AntiLinear mu{hg.inverse() * rep.theta_g.m * hg.conjugate()};
  out.residuals.emplace_back("mu_tilde preserves c", distance_to_span(c.basis, mu_t.apply(c.basis)));
  auto cp = construct_cartan_pair(rep, mu, mu_t, pol);
  out.residuals.emplace_back("cartan pair fixed by construction",
                             (cp.eta_tilde.m - mu_t.m).norm() + (cp.eta.m - mu.m).norm());
  for (const auto& [k, r] : cp.residuals) out.residuals.emplace_back("cartan pair: " + k, r);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

RMat projector(const Mat& real_basis) {
  if (real_basis.cols() == 0) return RMat::Zero(real_basis.rows(), real_basis.rows());
  RMat b = real_basis.real();
  Eigen::HouseholderQR<RMat> qr(b);
  RMat q = qr.householderQ() * RMat::Identity(b.rows(), b.cols());
  return q * q.transpose();
}

struct KSearch {
  double residual = 1e300;
  RMat k;
};

// Minimizes |P2c - k P1c k^T|^2 + |P2n - k P1n k^T|^2 over k = exp(k_R).
KSearch k_search(const RepresentationModel& rep, const CartanSubspaceRecord& c1,
                 const CartanSubspaceRecord& c2, std::uint64_t seed) {
  const int dv = rep.dim_v();
  const RMat p1c = projector(c1.compact_part), p1n = projector(c1.noncompact_part);
  const RMat p2c = projector(c2.compact_part), p2n = projector(c2.noncompact_part);
  const Mat kb = rep.k_basis();
  std::vector<RMat> gens;
  for (Eigen::Index j = 0; j < kb.cols(); ++j) gens.push_back(rep.act(kb.col(j)).real());
  auto cost = [&](const RMat& k) {
    return (p2c - k * p1c * k.transpose()).squaredNorm() + (p2n - k * p1n * k.transpose()).squaredNorm();
  };
  KSearch best;
  best.k = RMat::Identity(dv, dv);
  best.residual = std::sqrt(cost(best.k));
  if (gens.empty() || best.residual < 1e-9) return best;
  auto rng = make_rng(seed, 0x6b736561ULL);
  const int nd = static_cast<int>(gens.size());
  for (int restart = 0; restart < 12 && best.residual >= 1e-9; ++restart) {
    RMat k = RMat::Identity(dv, dv);
    if (restart > 0) {
      RVec t = gaussian(rng, nd) * 2.0;
      RMat a = RMat::Zero(dv, dv);
      for (int j = 0; j < nd; ++j) a += t(j) * gens[j];
      k = a.exp();
    }
    double f = cost(k);
    for (int it = 0; it < 400 && f > 1e-20; ++it) {
      const RMat qc = k * p1c * k.transpose(), qn = k * p1n * k.transpose();
      RVec g(nd);
      for (int j = 0; j < nd; ++j) {
        const RMat& a = gens[j];
        g(j) = -2.0 * ((p2c * (a * qc - qc * a)).trace() + (p2n * (a * qn - qn * a)).trace());
      }
      if (g.norm() < 1e-14) break;
      RMat dir = RMat::Zero(dv, dv);
      for (int j = 0; j < nd; ++j) dir -= g(j) * gens[j];
      // Coarse line search over s = 4 s0 2^-j; stops once the cost rises again.
      double s = 4.0 / std::max(1.0, dir.norm());
      double best_f = f;
      RMat best_k;
      bool ok = false;
      for (int bt = 0; bt < 40; ++bt, s *= 0.5) {
        RMat kn = (s * dir).exp() * k;
        double fn = cost(kn);
        if (fn < best_f) {
          best_f = fn;
          best_k = kn;
          ok = true;
        } else if (ok) {
          break;
        }
      }
      if (ok) {
        k = best_k;
        f = best_f;
      }
      if (!ok) break;
    }
    if (std::sqrt(f) < best.residual) {
      best.residual = std::sqrt(f);
      best.k = k;
    }
  }
  return best;
}

}  // namespace

ConjugacyResult conjugacy_test(const RepresentationModel& rep, const CartanSubspaceRecord& c1,
                               const CartanSubspaceRecord& c2, std::uint64_t seed,
                               const TolerancePolicy& pol) {
  if (!c1.standard() || !c2.standard())
    throw Error(ErrorKind::Precondition, "conjugacy_test: inputs must be sigma- and theta-stable");
  ConjugacyResult out;
  if (c1.dim() != c2.dim()) {
    out.verdict = Conjugacy::NotConjugate;
    out.reason = "dimensions differ";
    return out;
  }
  if (c1.signature() != c2.signature()) {
    out.verdict = Conjugacy::NotConjugate;
    out.reason = "signatures differ";
    return out;
  }
  auto r1 = compute_roots(rep, c1, seed, pol);
  auto r2 = compute_roots(rep, c2, seed, pol);
  if (root_type_multiset(r1) != root_type_multiset(r2)) {
    out.verdict = Conjugacy::NotConjugate;
    out.reason = "root-type multisets differ";
    return out;
  }
  auto ks = k_search(rep, c1, c2, seed);
  out.residual = ks.residual;
  if (ks.residual < 1e-6) {
    out.verdict = Conjugacy::Conjugate;
    out.reason = "K_R conjugator found";
    out.conjugator = ks.k.cast<cd>();
  } else {
    out.verdict = Conjugacy::Undetermined;
    out.reason = "invariants agree but no K_R conjugator found";
  }
  return out;
}

// ---------------------------------------------------------------------------

ConjugacyClassTable enumerate_classes(const RepresentationModel& rep, int budget, std::uint64_t seed,
                                      const TolerancePolicy& pol) {
  if (budget < 0) throw Error(ErrorKind::InvalidInput, "enumerate_classes: negative budget");
  ConjugacyClassTable table;
  std::vector<std::vector<std::string>> invariants;
  const Mat vr = Mat::Identity(rep.dim_v(), rep.dim_v());

  // Returns true when c was added as a new class.
  auto classify = [&](const CartanSubspaceRecord& c, const std::string& origin, std::uint64_t sub) {
    auto inv = root_type_multiset(compute_roots(rep, c, seed, pol));
    bool undetermined = false;
    for (size_t i = 0; i < table.representatives.size(); ++i) {
      const auto& r = table.representatives[i];
      if (r.dim() != c.dim() || r.signature() != c.signature() || invariants[i] != inv) continue;
      auto ks = k_search(rep, r, c, seed ^ sub);
      if (ks.residual < 1e-6) return false;
      undetermined = true;
    }
    if (undetermined) {
      table.incomplete = true;
      table.notes.push_back("undetermined conjugacy for a " + origin + " candidate; not added");
      return false;
    }
    table.representatives.push_back(c);
    table.signatures.push_back(c.signature());
    table.origin.push_back(origin);
    invariants.push_back(inv);
    return true;
  };

  for (int i = 0; i < budget; ++i) {
    auto rng = make_rng(seed, 1000 + static_cast<std::uint64_t>(i));
    Vec x = random_real_point(vr, rng);
    ++table.samples_drawn;
    if (!regularity(rep, x, pol).regular) continue;
    ++table.regular_samples;
    try {
      auto c = cartan_space_at(rep, x, pol);
      auto st = stabilize_theta(rep, c, seed + static_cast<std::uint64_t>(i), pol);
      classify(st.record, "sample", static_cast<std::uint64_t>(i));
    } catch (const Error& e) {
      ++table.stabilize_failures;
      table.incomplete = true;
      table.notes.push_back(std::string("sample ") + std::to_string(i) + ": " + e.what());
    }
  }

  // Cayley closure: every class reachable by a transform must be present.
  for (size_t i = 0; i < table.representatives.size() && i < 64; ++i) {
    const auto src = table.representatives[i];
    auto roots = compute_roots(rep, src, seed, pol);
    for (const auto& r : roots.roots) {
      CayleyKind kind;
      if (r.type == RootType::Imaginary && r.subtype == RootSubtype::Noncompact) kind = CayleyKind::NoncompactImaginary;
      else if (r.type == RootType::Real && r.subtype == RootSubtype::Compact) kind = CayleyKind::CompactReal;
      else continue;
      try {
        auto rec = cayley_transform(rep, src, r, kind, pol);
        if (classify(rec.target, "cayley", 0xcafe + i)) ++table.cayley_added;
      } catch (const Error& e) {
        table.notes.push_back(std::string("cayley from class ") + std::to_string(i) + ": " + e.what());
      }
    }
  }
  if (table.representatives.empty()) {
    table.incomplete = true;
    table.notes.push_back("no regular real sample found");
  }
  return table;
}

}  // namespace polarrep

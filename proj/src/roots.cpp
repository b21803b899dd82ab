#include "polarrep/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace polarrep {

namespace {

constexpr double kVanish = 1e-6;

// [i·compact | noncompact]: an orthonormal R-basis of c^{-θ̃} spanning c over C.
Mat section_basis(const CartanSubspaceRecord& c) {
  Mat e(c.basis.rows(), c.compact_dim + c.noncompact_dim);
  e << cd(0, 1) * c.compact_part, c.noncompact_part;
  return e;
}

RMat section_gram(const RepresentationModel& rep, const Mat& e) {
  return (e.transpose() * rep.form * e).real();
}

// Unit ⟨⟩-normal in the section for the functional r -> f·r.
Vec coroot_from_values(const RepresentationModel& rep, const Mat& e, const RVec& f) {
  const RMat ge = section_gram(rep, e);
  RVec y = ge.ldlt().solve(f);
  Vec v = e * y.cast<cd>();
  const double n2 = std::real((v.transpose() * rep.form * v)(0));
  if (!(n2 > 0)) throw Error(ErrorKind::DegenerateForm, "roots: form not positive on c^{-theta_tilde}");
  return v / std::sqrt(n2);
}

Mat hyperplane_of(const RepresentationModel& rep, const CartanSubspaceRecord& c, const Vec& coroot) {
  Mat row = (c.basis.transpose() * rep.form * coroot).transpose();
  return orth(c.basis * null_space(row, 1e-10), 1e-10);
}

// Signs of an involution restricted to an invariant subspace with orthonormal basis e.
std::pair<int, int> involution_split(const Mat& lin, const Mat& e) {
  if (e.cols() == 0) return {0, 0};
  Mat r = e.adjoint() * lin * e;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r + r.adjoint()));
  int plus = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) plus += es.eigenvalues()(i) > 0;
  return {plus, static_cast<int>(e.cols()) - plus};
}

}  // namespace

const char* to_string(RootType t) {
  switch (t) {
    case RootType::Real: return "real";
    case RootType::Imaginary: return "imaginary";
    case RootType::Complex: return "complex";
  }
  return "complex";
}

const char* to_string(RootSubtype t) {
  switch (t) {
    case RootSubtype::Compact: return "compact";
    case RootSubtype::Noncompact: return "noncompact";
    case RootSubtype::NotApplicable: return "n/a";
  }
  return "n/a";
}

cd RootDatum::operator()(const RepresentationModel& rep, const Vec& x) const {
  return (x.transpose() * rep.form * coroot)(0);
}

Mat stabilizer_algebra(const RepresentationModel& rep, const Mat& s, const TolerancePolicy& pol) {
  const int dv = rep.dim_v(), dg = rep.dim_g();
  if (s.cols() == 0) return Mat::Identity(dg, dg);
  Mat stack(dv * s.cols(), dg);
  for (Eigen::Index j = 0; j < s.cols(); ++j) stack.middleRows(j * dv, dv) = rep.orbit_map(s.col(j));
  return null_space(stack, pol.rank_tol);
}

Mat root_space(const RepresentationModel& rep, const Mat& c_alpha, const Mat& m, const TolerancePolicy& pol) {
  const int dg = rep.dim_g();
  Mat z = stabilizer_algebra(rep, c_alpha, pol);
  if (m.cols() == 0) return z;
  return hermitian_complement(m, Mat::Identity(dg, dg), z, pol.rank_tol);
}

double singular_margin(const RepresentationModel& rep, const Mat& m, const Vec& v) {
  const int dg = rep.dim_g();
  Mat q = m.cols() ? null_space(m.adjoint(), 1e-10) : Mat(Mat::Identity(dg, dg));
  if (q.cols() == 0) return 1.0;
  auto sv = singular_values(rep.orbit_map(v) * q);
  if (sv.empty() || sv.front() == 0.0) return 0.0;
  return sv.back() / sv.front();
}

Vec coroot_from_hyperplane(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                           const Mat& c_alpha, const Vec& chamber_point) {
  const Mat e = section_basis(c);
  Mat z = coordinates(c.basis, c_alpha);
  Mat l = null_space(z.transpose(), 1e-8);
  if (l.cols() != 1) throw Error(ErrorKind::InvalidInput, "coroot_from_hyperplane: not a hyperplane of c");
  Vec f = (l.transpose() * coordinates(c.basis, e)).transpose();
  Eigen::Index imax = 0;
  f.cwiseAbs().maxCoeff(&imax);
  f *= std::conj(f(imax)) / std::abs(f(imax));
  Vec v = coroot_from_values(rep, e, f.real());
  if (std::real((chamber_point.transpose() * rep.form * v)(0)) < 0) v = -v;
  return v;
}

void classify_root(const RepresentationModel& rep, const CartanSubspaceRecord& c, RootDatum& d,
                   const TolerancePolicy& pol) {
  (void)pol;
  double on_compact = 0, on_noncompact = 0;
  for (Eigen::Index j = 0; j < c.compact_part.cols(); ++j)
    on_compact = std::max(on_compact, std::abs(d(rep, cd(0, 1) * c.compact_part.col(j))));
  for (Eigen::Index j = 0; j < c.noncompact_part.cols(); ++j)
    on_noncompact = std::max(on_noncompact, std::abs(d(rep, c.noncompact_part.col(j))));
  const bool real = on_compact <= kVanish, imag = on_noncompact <= kVanish;
  if (real && imag) throw Error(ErrorKind::Inconsistent, "classify_root: root vanishes on c");
  d.type = real ? RootType::Real : imag ? RootType::Imaginary : RootType::Complex;
  const Mat omega = rep.omega_g();
  const bool stable = d.root_space.cols() == 0 ||
                      distance_to_span(d.root_space, omega * d.root_space) <= 1e-7 * std::sqrt(d.root_space.cols());
  if (stable) {
    std::tie(d.omega_plus_dim, d.omega_minus_dim) = involution_split(omega, d.root_space);
  } else {
    d.omega_plus_dim = d.omega_minus_dim = -1;
  }
  if (d.type == RootType::Complex) {
    d.subtype = RootSubtype::NotApplicable;
  } else if (d.type == RootType::Imaginary) {
    d.subtype = d.omega_minus_dim > 0 ? RootSubtype::Noncompact : RootSubtype::Compact;
  } else {
    d.subtype = d.omega_minus_dim > 0 ? RootSubtype::Compact : RootSubtype::Noncompact;
  }
}

RootSystemReport compute_roots(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                               std::uint64_t seed, const TolerancePolicy& pol) {
  if (!c.standard()) throw Error(ErrorKind::Precondition, "compute_roots: c must be sigma- and theta-stable");
  const int dg = rep.dim_g();
  const int d = c.dim();
  RootSystemReport out;
  out.section = section_basis(c);
  out.m = stabilizer_algebra(rep, c.basis, pol);
  const Mat& e = out.section;
  if (e.cols() != d) throw Error(ErrorKind::Inconsistent, "compute_roots: section does not span c");
  Mat q = out.m.cols() ? null_space(out.m.adjoint(), 1e-10) : Mat(Mat::Identity(dg, dg));
  const int nq = static_cast<int>(q.cols());

  std::vector<Mat> lk(d);
  for (int k = 0; k < d; ++k) lk[k] = rep.orbit_map(e.col(k)) * q;
  auto rng = make_rng(seed, 0x726f6f74ULL);

  struct Cluster {
    RVec f;
    Mat space;
  };
  std::vector<Cluster> clusters;
  double image_res = 0, scalar_res = 0, imag_res = 0;
  bool ok = nq == 0;
  for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
    RVec r0 = gaussian(rng, d);
    out.chamber_point = e * r0.cast<cd>();
    Mat l0 = rep.orbit_map(out.chamber_point) * q;
    auto sv = singular_values(l0);
    if (sv.back() <= 1e-6 * sv.front()) continue;
    auto cod = l0.completeOrthogonalDecomposition();
    std::vector<Mat> mk(d);
    image_res = 0;
    for (int k = 0; k < d; ++k) {
      mk[k] = cod.solve(lk[k]);
      image_res = std::max(image_res, (l0 * mk[k] - lk[k]).norm() / std::max(1.0, lk[k].norm()));
    }
    RVec r = gaussian(rng, d);
    Mat mm = Mat::Zero(nq, nq);
    for (int k = 0; k < d; ++k) mm += r(k) * mk[k];
    Eigen::ComplexEigenSolver<Mat> es(mm);
    const Vec ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<int> used(nq, 0);
    clusters.clear();
    scalar_res = imag_res = 0;
    bool joint = true;
    for (int i = 0; i < nq && joint; ++i) {
      if (used[i]) continue;
      std::vector<int> idx;
      for (int j = i; j < nq; ++j)
        if (!used[j] && std::abs(ev(j) - ev(i)) <= 1e-6 * scale) {
          used[j] = 1;
          idx.push_back(j);
        }
      Mat vecs(nq, idx.size());
      for (size_t t = 0; t < idx.size(); ++t) vecs.col(t) = es.eigenvectors().col(idx[t]);
      Mat sp = orth(vecs, 1e-8);
      if (sp.cols() != static_cast<Eigen::Index>(idx.size())) {
        joint = false;
        break;
      }
      Cluster cl;
      cl.f = RVec(d);
      for (int k = 0; k < d; ++k) {
        Mat rk = sp.adjoint() * mk[k] * sp;
        cd fk = rk.trace() / static_cast<double>(sp.cols());
        double res = (mk[k] * sp - fk * sp).norm() / std::max(1.0, mk[k].norm());
        scalar_res = std::max(scalar_res, res);
        imag_res = std::max(imag_res, std::abs(fk.imag()));
        cl.f(k) = fk.real();
      }
      cl.space = sp;
      clusters.push_back(cl);
    }
    ok = joint && scalar_res <= 1e-6;
  }
  if (!ok) throw Error(ErrorKind::SearchFailure, "compute_roots: no joint eigen-decomposition found");

  // α and 2α share a hyperplane and a root space g̃_α.
  std::vector<RootDatum> roots;
  std::vector<RVec> dirs;
  for (const auto& cl : clusters) {
    RVec dir = cl.f / cl.f.norm();
    bool merged = false;
    for (size_t i = 0; i < roots.size(); ++i)
      if ((dirs[i] - dir).norm() < 1e-6) {
        Mat both(nq, roots[i].root_space.cols() + cl.space.cols());
        both << roots[i].root_space, cl.space;
        roots[i].root_space = both;
        merged = true;
        break;
      }
    if (merged) continue;
    RootDatum rd;
    rd.root_space = cl.space;
    rd.coroot = coroot_from_values(rep, e, cl.f);
    dirs.push_back(dir);
    roots.push_back(rd);
  }
  double dual_res = 0, coroot_res = 0;
  for (auto& rd : roots) {
    rd.root_space = orth(q * rd.root_space, 1e-10);
    rd.multiplicity = static_cast<int>(rd.root_space.cols());
    rd.hyperplane = hyperplane_of(rep, c, rd.coroot);
    rd.chamber_value = rd(rep, out.chamber_point).real();
    Mat z = stabilizer_algebra(rep, rd.hyperplane, pol);
    dual_res = std::max(dual_res, std::abs(static_cast<double>(z.cols() - out.m.cols() - rd.multiplicity)));
    if (rd.hyperplane.cols() > 0) {
      Vec v2 = coroot_from_hyperplane(rep, c, rd.hyperplane, out.chamber_point);
      coroot_res = std::max(coroot_res, (v2 - rd.coroot).norm());
    }
    classify_root(rep, c, rd, pol);
  }

  // σ̃α(x) = conj(α(conj x)): co-root conj(v_α) restricted to c.
  double sigma_res = 0;
  const Mat ct = c.basis.transpose() * rep.form;
  for (size_t i = 0; i < roots.size(); ++i) {
    Vec target = ct * rep.sigma_v.m.conjugate() * roots[i].coroot.conjugate();
    double best = 1e300;
    for (size_t j = 0; j < roots.size(); ++j) {
      Vec cand = ct * roots[j].coroot;
      double r = std::min((target - cand).norm(), (target + cand).norm());
      if (r < best) {
        best = r;
        roots[i].sigma_partner = static_cast<int>(j);
      }
    }
    sigma_res = std::max(sigma_res, best);
  }
  out.roots = std::move(roots);

  // Orthogonality of c and the g̃_α·c.
  double c_gc = 0, cross = 0;
  int total = d;
  std::vector<Mat> images;
  for (const auto& rd : out.roots) {
    Mat w(rep.dim_v(), rd.root_space.cols() * d);
    for (Eigen::Index a = 0; a < rd.root_space.cols(); ++a) {
      Mat act = rep.act(rd.root_space.col(a));
      for (int k = 0; k < d; ++k) w.col(a * d + k) = act * c.basis.col(k);
    }
    images.push_back(orth(w, pol.rank_tol));
    total += static_cast<int>(images.back().cols());
  }
  for (int i = 0; i < dg; ++i) {
    Vec x = Vec::Unit(dg, i);
    Mat a = rep.act(x);
    const double an = std::max(1e-300, a.norm());
    c_gc = std::max(c_gc, (c.basis.transpose() * rep.form * a * c.basis).cwiseAbs().maxCoeff() / an);
  }
  for (size_t i = 0; i < images.size(); ++i)
    for (size_t j = i + 1; j < images.size(); ++j)
      if (images[i].cols() && images[j].cols())
        cross = std::max(cross, (images[i].transpose() * rep.form * images[j]).cwiseAbs().maxCoeff());
  out.checks.emplace_back("L(v0)^+ L(v) image consistency", image_res);
  out.checks.emplace_back("joint eigenvectors: M_k scalar on clusters", scalar_res);
  out.checks.emplace_back("root values real on the section", imag_res);
  out.checks.emplace_back("dual route: dim z(c_alpha) - dim m - mult", dual_res);
  out.checks.emplace_back("co-root from hyperplane vs eigenvalues", coroot_res);
  out.checks.emplace_back("sigma_tilde permutes roots", sigma_res);
  out.checks.emplace_back("<c, g.c>", c_gc);
  out.checks.emplace_back("<g_a.c, g_b.c>, a != b", cross);
  out.checks.emplace_back("dim V - dim c - sum dim g_a.c", std::abs(static_cast<double>(rep.dim_v() - total)));
  return out;
}

std::vector<Mat> singular_hyperplanes(const RepresentationModel& rep, const CartanSubspaceRecord& c,
                                      std::uint64_t seed, const TolerancePolicy& pol) {
  std::vector<Mat> out;
  for (const auto& r : compute_roots(rep, c, seed, pol).roots) out.push_back(r.hyperplane);
  return out;
}

std::vector<std::string> root_type_multiset(const RootSystemReport& r) {
  std::vector<std::string> keys;
  for (const auto& d : r.roots) {
    std::ostringstream s;
    s << to_string(d.type) << "/" << to_string(d.subtype) << "/" << d.multiplicity;
    keys.push_back(s.str());
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace polarrep

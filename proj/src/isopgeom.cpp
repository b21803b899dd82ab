#include "polarrep/isopgeom.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace polarrep {

namespace {

constexpr double kGeomTol = 1e-6;

RMat real_null(const RMat& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return RMat::Identity(n, n);
  Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(rel_tol * (s.size() ? s(0) : 0.0), 1e-14);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

// Splits vectors of V_R along [tangent | normal].
struct Splitter {
  RMat basis;
  Eigen::PartialPivLU<RMat> lu;
  Eigen::Index nt = 0;

  explicit Splitter(const OrbitFrame& f) : nt(f.tangent.cols()) {
    basis.resize(f.tangent.rows(), f.tangent.cols() + f.normal.cols());
    basis << f.tangent, f.normal;
    lu.compute(basis);
  }
  RMat coords(const RMat& x) const { return lu.solve(x); }
  RMat tangent_coords(const RMat& x) const { return coords(x).topRows(nt); }
  RMat normal_coords(const RMat& x) const { return coords(x).bottomRows(basis.cols() - nt); }
};

void require_real(const RepresentationModel& rep, const Vec& v, const char* what) {
  if (!is_real_point(rep, v, 1e-9)) throw Error(ErrorKind::Precondition, std::string(what) + ": point is not real");
}

double spectral_scale(const std::vector<cd>& ev) {
  double s = 1.0;
  for (const auto& z : ev) s = std::max(s, std::abs(z));
  return s;
}

}  // namespace

const char* to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::Isoparametric: return "isoparametric";
    case IsoVerdict::NotIsoparametric: return "not-isoparametric";
    case IsoVerdict::DegenerateMetric: return "degenerate-metric";
  }
  return "not-isoparametric";
}

OrbitFrame orbit_frame(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol) {
  require_real(rep, v, "orbit_frame");
  OrbitFrame f;
  const int dv = rep.dim_v();
  const RMat l = rep.orbit_map(v).real();
  const RMat form = rep.form.real();
  Eigen::JacobiSVD<RMat> svd(l, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > pol.rank_tol * s(0) && s(r) > 1e-14) ++r;
  f.tangent = svd.matrixU().leftCols(r);
  f.lift = svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal();
  f.normal = r ? real_null(f.tangent.transpose() * form, 1e-10) : RMat(RMat::Identity(dv, dv));
  if (r == 0) return f;
  const RMat g = f.tangent.transpose() * form * f.tangent;
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (g + g.transpose()));
  const double gs = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double e = es.eigenvalues()(i);
    if (std::abs(e) <= 1e-8 * gs) ++f.metric_zero;
    else if (e > 0) ++f.metric_plus;
    else ++f.metric_minus;
  }
  f.degenerate = f.metric_zero > 0 || f.normal.cols() + r != dv;
  return f;
}

BlockSpectrum block_spectrum(const RMat& a, const TolerancePolicy& pol) {
  BlockSpectrum out;
  if (a.rows() == 0) return out;
  auto sp = complex_spectrum(a.cast<cd>(), pol);
  out.diagonalizable = sp.diagonalizable;
  out.borderline = sp.borderline;
  out.all = sorted_eigenvalues(a.cast<cd>());
  const double scale = spectral_scale(out.all);
  for (const auto& z : out.all) {
    if (std::abs(z.imag()) <= std::sqrt(pol.eig_tol) * scale) out.real_values.push_back(z.real());
    else if (z.imag() > 0) out.complex_pairs.push_back(z);
  }
  return out;
}

WeingartenResult weingarten_operator(const RepresentationModel& rep, const Vec& v, const Vec& xi,
                                     const TolerancePolicy& pol) {
  require_real(rep, xi, "weingarten_operator");
  const OrbitFrame f = orbit_frame(rep, v, pol);
  if (f.degenerate) throw Error(ErrorKind::DegenerateForm, "weingarten_operator: induced metric is degenerate");
  const RMat form = rep.form.real();
  const RVec x = xi.real();
  if ((f.tangent.transpose() * form * x).norm() > 1e-8 * std::max(1.0, x.norm()) * std::max(1.0, form.norm()))
    throw Error(ErrorKind::Precondition, "weingarten_operator: xi is not normal at v");
  const Splitter split(f);
  WeingartenResult out;
  out.op = -split.tangent_coords(rep.orbit_map(xi).real() * f.lift);
  out.spectrum = block_spectrum(out.op, pol);
  const RMat g = f.tangent.transpose() * form * f.tangent;
  const RMat ga = g * out.op;
  out.self_adjoint_residual = (ga - ga.transpose()).norm() / std::max(1.0, g.norm() * out.op.norm());
  return out;
}

RVec second_fundamental_form(const RepresentationModel& rep, const Vec& v, const Vec& x, const Vec& y,
                             const TolerancePolicy& pol) {
  const OrbitFrame f = orbit_frame(rep, v, pol);
  if (f.degenerate) throw Error(ErrorKind::DegenerateForm, "second_fundamental_form: induced metric is degenerate");
  const Splitter split(f);
  const RVec w = (rep.act(x) * (rep.act(y) * v)).real();
  return f.normal * split.normal_coords(w);
}

RVec second_fundamental_form_fd(const RepresentationModel& rep, const Vec& v, const Vec& x, const Vec& y, double h,
                                const TolerancePolicy& pol) {
  const OrbitFrame f = orbit_frame(rep, v, pol);
  if (f.degenerate) throw Error(ErrorKind::DegenerateForm, "second_fundamental_form_fd: induced metric is degenerate");
  const Splitter split(f);
  const RMat ax = rep.act(x).real(), ay = rep.act(y).real();
  // F(h,h) - F(h,-h) - F(-h,h) + F(-h,-h) factored so the differences are
  // taken on the exponentials rather than on nearly equal points.
  const RMat dx = RMat(h * ax).exp() - RMat(-h * ax).exp();
  const RMat dy = RMat(h * ay).exp() - RMat(-h * ay).exp();
  const RVec w = dx * (dy * v.real()) / (4 * h * h);
  return f.normal * split.normal_coords(w);
}

std::vector<RMat> normal_connection(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol) {
  const OrbitFrame f = orbit_frame(rep, v, pol);
  if (f.degenerate) throw Error(ErrorKind::DegenerateForm, "normal_connection: induced metric is degenerate");
  const Splitter split(f);
  std::vector<RMat> w;
  for (int j = 0; j < rep.dim_g(); ++j) w.push_back(split.normal_coords(rep.action[j].real() * f.normal));
  return w;
}

FlatnessResult normal_flatness_check(const RepresentationModel& rep, const Vec& v, const TolerancePolicy& pol) {
  FlatnessResult out;
  const auto w = normal_connection(rep, v, pol);
  const int dg = rep.dim_g();
  double scale = 1.0;
  for (const auto& a : rep.action) scale = std::max(scale, a.norm());
  for (const auto& wj : w) out.equivariant_gap = std::max(out.equivariant_gap, wj.norm() / scale);
  for (int j = 0; j < dg; ++j)
    for (int k = j + 1; k < dg; ++k) {
      const RVec br = rep.algebra.bracket(Vec::Unit(dg, j), Vec::Unit(dg, k)).real();
      RMat r = w[j] * w[k] - w[k] * w[j];
      for (int l = 0; l < dg; ++l) r += br(l) * w[l];
      out.curvature = std::max(out.curvature, r.norm() / (scale * scale));
    }
  out.flat = out.curvature <= 1e-8;
  return out;
}

IsoparametricReport isoparametric_verdict(const RepresentationModel& rep, const Vec& v, std::uint64_t seed,
                                          const TolerancePolicy& pol, int samples) {
  require_real(rep, v, "isoparametric_verdict");
  if (!regularity(rep, v, pol).regular)
    throw Error(ErrorKind::Precondition, "isoparametric_verdict: v is not regular");
  IsoparametricReport out;
  out.base_point = v;
  const OrbitFrame f = orbit_frame(rep, v, pol);
  out.metric_plus = f.metric_plus;
  out.metric_minus = f.metric_minus;
  if (f.degenerate) {
    out.verdict = IsoVerdict::DegenerateMetric;
    out.reason = "induced metric on the orbit is degenerate";
    return out;
  }
  out.flatness = normal_flatness_check(rep, v, pol);
  const int nn = static_cast<int>(f.normal.cols());
  std::vector<RMat> ops;
  for (int i = 0; i < nn; ++i) {
    auto wr = weingarten_operator(rep, v, f.normal.col(i).cast<cd>(), pol);
    out.spectra.push_back(wr.spectrum);
    out.diagonalizable = out.diagonalizable && wr.spectrum.diagonalizable;
    out.self_adjoint = std::max(out.self_adjoint, wr.self_adjoint_residual);
    ops.push_back(wr.op);
  }
  for (int i = 0; i < nn; ++i)
    for (int j = i + 1; j < nn; ++j) {
      const double s = std::max(1.0, ops[i].norm() * ops[j].norm());
      out.commutator = std::max(out.commutator, (ops[i] * ops[j] - ops[j] * ops[i]).norm() / s);
    }

  // Parallel transport along exp(tX)·v: ξ(t) = exp(tX)·(exp(-t W_X) ξ0).
  const auto w = normal_connection(rep, v, pol);
  auto rng = make_rng(seed, 0x69736f70ULL);
  const int dg = rep.dim_g();
  for (int s = 0; s < samples; ++s) {
    const RVec coef = gaussian(rng, nn);
    const RVec xi0 = f.normal * coef;
    const auto base = weingarten_operator(rep, v, xi0.cast<cd>(), pol).spectrum.all;
    const RVec t = 0.5 * gaussian(rng, dg);
    RMat wx = RMat::Zero(nn, nn);
    Vec x = Vec::Zero(dg);
    for (int j = 0; j < dg; ++j) {
      wx += t(j) * w[j];
      x(j) = t(j);
    }
    const RMat g = rep.act(x).real().exp();
    const RVec eta = g * (f.normal * (RMat(-wx).exp() * coef));
    const Vec v2 = (g * v.real()).cast<cd>();
    const OrbitFrame f2 = orbit_frame(rep, v2, pol);
    if (f2.degenerate) {
      out.verdict = IsoVerdict::DegenerateMetric;
      out.reason = "induced metric degenerate at a transported point";
      return out;
    }
    const auto moved = weingarten_operator(rep, v2, eta.cast<cd>(), pol).spectrum.all;
    out.spectrum_drift = std::max(out.spectrum_drift, multiset_distance(base, moved) / spectral_scale(base));
    ++out.samples;
  }
  if (!out.flatness.flat) out.reason = "normal bundle is not flat";
  else if (out.commutator > kGeomTol) out.reason = "shape operators do not commute";
  else if (!out.diagonalizable) out.reason = "a shape operator is not diagonalizable";
  else if (out.spectrum_drift > kGeomTol) out.reason = "principal curvatures vary along parallel normal fields";
  out.verdict = out.reason.empty() ? IsoVerdict::Isoparametric : IsoVerdict::NotIsoparametric;
  return out;
}

std::vector<cd> predicted_weingarten_spectrum(const RepresentationModel& rep, const RootSystemReport& roots,
                                              const Vec& v, const Vec& xi) {
  std::vector<cd> out;
  for (const auto& r : roots.roots) {
    const cd av = r(rep, v);
    if (std::abs(av) == 0.0) throw Error(ErrorKind::Precondition, "predicted_weingarten_spectrum: v is singular");
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(-r(rep, xi) / av);
  }
  return out;
}

std::vector<ClosureProbe> orbit_closure_probe(const RepresentationModel& a, const RepresentationModel& b,
                                              const std::vector<Vec>& samples, const TolerancePolicy& pol) {
  if (a.dim_v() != b.dim_v()) throw Error(ErrorKind::InvalidInput, "orbit_closure_probe: V dimensions differ");
  std::vector<ClosureProbe> out;
  for (const auto& s : samples) {
    ClosureProbe p;
    p.v = s;
    auto mv = minimal_vector(a, s, pol);
    p.v1 = mv.v1;
    p.converged = mv.converged;
    p.collapsed = mv.collapsed;
    p.flow_residual = mv.residual;
    if (p.v1.norm() > 0) {
      p.dim_a = rank_with_tol(a.orbit_map(p.v1), pol);
      p.dim_b = rank_with_tol(b.orbit_map(p.v1), pol);
    }
    p.equal = p.dim_a == p.dim_b;
    out.push_back(p);
  }
  return out;
}

}  // namespace polarrep

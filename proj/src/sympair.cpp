#include "polarrep/sympair.hpp"

#include <sstream>

namespace polarrep {

namespace {

RMat real_null(const RMat& m, double rel_tol = 1e-9) {
  const Eigen::Index n = m.cols();
  Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(rel_tol * (s.size() ? s(0) : 0.0), 1e-12);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

// Columns orthonormal for the real positive-definite form b.
RMat b_orthonormalize(const RMat& x, const RMat& b) {
  if (x.cols() == 0) return x;
  RMat g = x.transpose() * b * x;
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::LLT<RMat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::Validation, "B_theta not positive-definite on an eigenspace");
  RMat linv = llt.matrixL().solve(RMat::Identity(g.rows(), g.cols()));
  return x * linv.transpose();
}

double imag_norm(const Mat& m) { return m.imag().norm(); }

std::vector<Mat> real_parts(const std::vector<Mat>& ms, double tol, const char* what) {
  std::vector<Mat> out;
  for (const auto& m : ms) {
    if (imag_norm(m) > tol * std::max(1.0, m.norm()))
      throw Error(ErrorKind::Validation, std::string(what) + ": structure constants not real after rebasing");
    out.push_back(m.real().cast<cd>());
  }
  return out;
}

std::string fmt_residual(const std::string& name, double r) {
  std::ostringstream s;
  s << name << " residual " << r;
  return s.str();
}

Mat diag_pm(int plus, int minus) {
  Eigen::VectorXcd d(plus + minus);
  d.head(plus).setConstant(1.0);
  d.tail(minus).setConstant(-1.0);
  return d.asDiagonal();
}

LieAlgebraModel change_basis_real(const LieAlgebraModel& alg, const Mat& basis,
                                  std::vector<std::string> labels, double tol) {
  LieAlgebraModel sub = alg.subalgebra(basis, labels, 1e-7);
  auto ad = real_parts(sub.ad_basis(), tol, "rebasing");
  return LieAlgebraModel::from_ad(std::move(labels), std::move(ad), sub.realization());
}

}  // namespace

SymmetricPairModel build_pair(const LieAlgebraModel& alg, const Mat& tau, const AntiLinear& sigma,
                              const AntiLinear& theta, std::string name, double tol) {
  const int n = alg.dim();
  if (tau.rows() != n || tau.cols() != n || sigma.m.rows() != n || sigma.m.cols() != n ||
      theta.m.rows() != n || theta.m.cols() != n)
    throw Error(ErrorKind::InvalidInput, "involution matrices must be dim x dim");
  for (const Mat* m : {&tau, &sigma.m, &theta.m})
    if (!all_finite(*m)) throw Error(ErrorKind::InvalidInput, "involution matrix has non-finite entries");

  SymmetricPairModel pair;
  pair.name = std::move(name);
  const Mat id = Mat::Identity(n, n);
  const Mat& s = sigma.m;
  const Mat& t = theta.m;
  auto& res = pair.residuals;
  res.emplace_back("tau∘tau − id", (tau * tau - id).norm());
  res.emplace_back("sigma∘sigma − id", (s * s.conjugate() - id).norm());
  res.emplace_back("theta∘theta − id", (t * t.conjugate() - id).norm());
  res.emplace_back("tau∘sigma − sigma∘tau", (tau * s - s * tau.conjugate()).norm());
  res.emplace_back("tau∘theta − theta∘tau", (tau * t - t * tau.conjugate()).norm());
  res.emplace_back("sigma∘theta − theta∘sigma", (s * t.conjugate() - t * s.conjugate()).norm());

  double adscale = 1.0;
  for (const auto& a : alg.ad_basis()) adscale = std::max(adscale, a.norm());
  double br_tau = 0, br_sigma = 0, br_theta = 0;
  for (int i = 0; i < n; ++i) {
    const Mat& ad = alg.ad_basis()[i];
    br_tau = std::max(br_tau, (tau * ad - ad_matrix(alg, tau.col(i)) * tau).norm());
    br_sigma = std::max(br_sigma, (s * ad.conjugate() - ad_matrix(alg, s.col(i)) * s).norm());
    br_theta = std::max(br_theta, (t * ad.conjugate() - ad_matrix(alg, t.col(i)) * t).norm());
  }
  res.emplace_back("tau bracket preservation", br_tau / adscale);
  res.emplace_back("sigma bracket preservation", br_sigma / adscale);
  res.emplace_back("theta bracket preservation", br_theta / adscale);
  auto lie = alg.residuals();
  res.emplace_back("Jacobi", lie.jacobi / adscale);
  res.emplace_back("antisymmetry", lie.antisymmetry / adscale);
  res.emplace_back("realization commutators", lie.realization);

  const double scale = std::max({1.0, tau.norm(), s.norm(), t.norm()});
  std::ostringstream bad;
  for (const auto& [k, r] : res)
    if (!(r <= tol * scale * scale)) bad << fmt_residual(k, r) << "; ";
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "invalid symmetric pair: " + bad.str());

  // Rebase so that sigma_hat is coordinate conjugation.
  Mat p = antilinear_eigenspace(id, sigma, 1.0, 1e-8);
  if (p.cols() != n) throw Error(ErrorKind::Validation, "sigma_hat is not a real structure");
  std::vector<std::string> tmp_labels(n);
  LieAlgebraModel alg1 = change_basis_real(alg, p, tmp_labels, 1e-7);
  const Mat pinv = p.inverse();
  const Mat tau1c = pinv * tau * p;
  const Mat t1c = pinv * t * p.conjugate();
  if (imag_norm(tau1c) > 1e-7 * scale || imag_norm(t1c) > 1e-7 * scale)
    throw Error(ErrorKind::Validation, "involutions not real on the sigma-fixed points");
  const RMat tau1 = tau1c.real(), t1 = t1c.real();

  const RMat k1 = killing_form(alg1).real();
  if (rank_with_tol(k1.cast<cd>(), TolerancePolicy{1e-9, 1e-7, 1e-8}) < n)
    throw Error(ErrorKind::DegenerateForm,
                "Killing form of the ambient algebra is degenerate (non-semisimple input; "
                "a reductive ambient needs a declared center form)");
  RMat b = -k1 * t1;
  if ((b - b.transpose()).norm() > 1e-7 * std::max(1.0, b.norm()))
    throw Error(ErrorKind::Validation, "B_theta is not symmetric: theta_hat is not an automorphism");
  b = 0.5 * (b + b.transpose()).eval();
  if (Eigen::LLT<RMat>(b).info() != Eigen::Success)
    throw Error(ErrorKind::Validation, "theta_hat is not a Cartan involution (B_theta not positive-definite)");

  const RMat idr = RMat::Identity(n, n);
  std::vector<RMat> blocks;
  const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (const auto& sg : signs) {
    RMat stack(2 * n, n);
    stack << tau1 - sg[0] * idr, t1 - sg[1] * idr;
    blocks.push_back(b_orthonormalize(real_null(stack), b));
  }
  pair.dim_k = static_cast<int>(blocks[0].cols());
  pair.dim_p = static_cast<int>(blocks[1].cols());
  pair.dim_vw = static_cast<int>(blocks[2].cols());
  pair.dim_viw = static_cast<int>(blocks[3].cols());
  if (pair.dim_k + pair.dim_p + pair.dim_vw + pair.dim_viw != n)
    throw Error(ErrorKind::Validation, "tau_hat and theta_hat are not simultaneously diagonalizable");
  RMat q(n, n);
  q << blocks[0], blocks[1], blocks[2], blocks[3];

  std::vector<std::string> labels;
  const char* prefix[4] = {"k", "p", "vk", "vp"};
  for (int bk = 0; bk < 4; ++bk)
    for (Eigen::Index i = 0; i < blocks[bk].cols(); ++i) labels.push_back(prefix[bk] + std::to_string(i + 1));
  pair.ambient = change_basis_real(alg1, q.cast<cd>(), labels, 1e-7);
  const int dg = pair.dim_g();
  pair.tau_hat = diag_pm(dg, pair.dim_v());
  pair.sigma_hat = AntiLinear::conjugation(n);
  Eigen::VectorXcd td(n);
  for (int i = 0; i < n; ++i) {
    const bool plus = i < pair.dim_k || (i >= dg && i < dg + pair.dim_vw);
    td(i) = plus ? 1.0 : -1.0;
  }
  pair.theta_hat = AntiLinear{td.asDiagonal()};
  pair.killing = killing_form(pair.ambient);
  pair.to_input = p * q.cast<cd>();
  if (pair.dim_v() == 0) pair.warnings.push_back("tau_hat is the identity: V = {0}");
  return pair;
}

CombinedDecomposition combined_decomposition(const SymmetricPairModel& pair) {
  const int n = pair.dim();
  const Mat id = Mat::Identity(n, n);
  CombinedDecomposition d;
  int at = 0;
  d.k_r = id.middleCols(at, pair.dim_k);
  at += pair.dim_k;
  d.p_r = id.middleCols(at, pair.dim_p);
  at += pair.dim_p;
  d.v_w = id.middleCols(at, pair.dim_vw);
  at += pair.dim_vw;
  d.v_iw = id.middleCols(at, pair.dim_viw);
  return d;
}

// ---------------------------------------------------------------------------

Mat RepresentationModel::orbit_map(const Vec& v) const {
  Mat l(dim_v(), dim_g());
  for (int i = 0; i < dim_g(); ++i) l.col(i) = action[i] * v;
  return l;
}

Mat RepresentationModel::act(const Vec& x) const {
  Mat out = Mat::Zero(dim_v(), dim_v());
  for (int i = 0; i < dim_g(); ++i)
    if (x(i) != cd(0)) out += x(i) * action[i];
  return out;
}

Mat RepresentationModel::k_basis() const {
  return real_linear_eigenspace(Mat::Identity(dim_g(), dim_g()), theta_g.m, 1.0);
}
Mat RepresentationModel::p_basis() const {
  return real_linear_eigenspace(Mat::Identity(dim_g(), dim_g()), theta_g.m, -1.0);
}
Mat RepresentationModel::vw_basis() const {
  return real_linear_eigenspace(Mat::Identity(dim_v(), dim_v()), theta_v.m, 1.0);
}
Mat RepresentationModel::viw_basis() const {
  return real_linear_eigenspace(Mat::Identity(dim_v(), dim_v()), theta_v.m, -1.0);
}

Vec RepresentationModel::embed(const Vec& v) const {
  if (!pair) throw Error(ErrorKind::Precondition, "representation has no ambient algebra");
  Vec out = Vec::Zero(pair->dim());
  out.tail(dim_v()) = v;
  return out;
}

int generic_orbit_dimension(const RepresentationModel& rep, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x6f726269ULL);
  int best = 0;
  for (int s = 0; s < 4; ++s) {
    Vec v(rep.dim_v());
    v.real() = gaussian(rng, rep.dim_v());
    v.imag() = gaussian(rng, rep.dim_v());
    best = std::max(best, rank_with_tol(rep.orbit_map(v)));
  }
  return best;
}

RepresentationModel isotropy_representation(std::shared_ptr<const SymmetricPairModel> pair,
                                            std::uint64_t seed) {
  if (!pair) throw Error(ErrorKind::InvalidInput, "null pair");
  const int dg = pair->dim_g(), dv = pair->dim_v();
  RepresentationModel rep;
  rep.name = pair->name;
  std::vector<Mat> ad_g;
  std::vector<std::string> labels;
  for (int i = 0; i < dg; ++i) {
    const Mat& ad = pair->ambient.ad_basis()[i];
    ad_g.push_back(ad.topLeftCorner(dg, dg));
    rep.action.push_back(ad.bottomRightCorner(dv, dv));
    labels.push_back(pair->ambient.labels()[i]);
  }
  std::optional<std::vector<Mat>> real;
  if (pair->ambient.realization()) {
    const auto& r = *pair->ambient.realization();
    real = std::vector<Mat>(r.begin(), r.begin() + dg);
  }
  rep.algebra = LieAlgebraModel::from_ad(std::move(labels), std::move(ad_g), std::move(real));
  rep.form = pair->killing.bottomRightCorner(dv, dv);
  rep.beta_g = pair->killing.topLeftCorner(dg, dg);
  rep.herm = Mat::Identity(dv, dv);
  rep.sigma_g = AntiLinear::conjugation(dg);
  rep.sigma_v = AntiLinear::conjugation(dv);
  rep.theta_g = AntiLinear{pair->theta_hat.m.topLeftCorner(dg, dg)};
  rep.theta_v = AntiLinear{pair->theta_hat.m.bottomRightCorner(dv, dv)};
  rep.pair = pair;
  rep.warnings = pair->warnings;
  if (dv > 0 && rank_with_tol(rep.form) < dv)
    throw Error(ErrorKind::DegenerateForm, "Killing form degenerate on V");
  rep.generic_orbit_dim = dv > 0 ? generic_orbit_dimension(rep, seed) : 0;
  return rep;
}

RepresentationModel make_representation(std::string name, LieAlgebraModel algebra,
                                        std::vector<Mat> action, const Mat& t_g, const Mat& t_v,
                                        std::uint64_t seed) {
  RepresentationModel rep;
  rep.name = std::move(name);
  const int dg = algebra.dim();
  const int dv = static_cast<int>(t_v.rows());
  if (static_cast<int>(action.size()) != dg)
    throw Error(ErrorKind::InvalidInput, "one action matrix per basis element required");
  rep.algebra = std::move(algebra);
  rep.action = std::move(action);
  rep.form = -t_v;
  rep.herm = Mat::Identity(dv, dv);
  rep.sigma_g = AntiLinear::conjugation(dg);
  rep.sigma_v = AntiLinear::conjugation(dv);
  rep.theta_g = AntiLinear{t_g};
  rep.theta_v = AntiLinear{t_v};
  rep.beta_g = Mat(dg, dg);
  for (int i = 0; i < dg; ++i)
    for (int j = 0; j < dg; ++j) rep.beta_g(i, j) = (rep.action[i] * rep.action[j]).trace();
  rep.generic_orbit_dim = generic_orbit_dimension(rep, seed);
  return rep;
}

RepresentationModel restrict_representation(const RepresentationModel& rep, const Mat& basis,
                                            std::string name, std::uint64_t seed) {
  RepresentationModel sub;
  sub.name = std::move(name);
  sub.algebra = rep.algebra.subalgebra(basis);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) sub.action.push_back(rep.act(basis.col(j)));
  const Mat pinv = basis.completeOrthogonalDecomposition().pseudoInverse();
  const Mat tb = rep.theta_g.m * basis.conjugate();
  const Mat coef = pinv * tb;
  if ((basis * coef - tb).norm() > 1e-8 * std::max(1.0, tb.norm()))
    throw Error(ErrorKind::Precondition, "subalgebra is not theta-stable");
  const int m = static_cast<int>(basis.cols());
  sub.sigma_g = AntiLinear::conjugation(m);
  sub.theta_g = AntiLinear{coef};
  sub.beta_g = basis.transpose() * rep.beta_g * basis;
  sub.form = rep.form;
  sub.herm = rep.herm;
  sub.sigma_v = rep.sigma_v;
  sub.theta_v = rep.theta_v;
  sub.generic_orbit_dim = generic_orbit_dimension(sub, seed);
  return sub;
}

ResidualList check_representation(const RepresentationModel& rep, std::uint64_t seed) {
  (void)seed;
  ResidualList out;
  const int dg = rep.dim_g(), dv = rep.dim_v();
  double hom = 0, inv = 0, seq = 0, teq = 0, unit = 0;
  for (int i = 0; i < dg; ++i) {
    const Mat& a = rep.action[i];
    for (int j = i + 1; j < dg; ++j) {
      Mat lhs = a * rep.action[j] - rep.action[j] * a;
      for (int k = 0; k < dg; ++k) lhs -= rep.algebra.c(i, j, k) * rep.action[k];
      hom = std::max(hom, lhs.norm());
    }
    inv = std::max(inv, (a.transpose() * rep.form + rep.form * a).norm());
    seq = std::max(seq, (rep.sigma_v.m * a.conjugate() - rep.act(rep.sigma_g.m.col(i)) * rep.sigma_v.m).norm());
    teq = std::max(teq, (rep.theta_v.m * a.conjugate() - rep.act(rep.theta_g.m.col(i)) * rep.theta_v.m).norm());
  }
  // u = k_R + i p_R acts skew-Hermitian for (·,·).
  const Mat kb = rep.k_basis(), pb = rep.p_basis();
  for (Eigen::Index j = 0; j < kb.cols(); ++j) {
    Mat a = rep.act(kb.col(j));
    unit = std::max(unit, (a.adjoint() * rep.herm + rep.herm * a).norm());
  }
  for (Eigen::Index j = 0; j < pb.cols(); ++j) {
    Mat a = rep.act(pb.col(j));
    unit = std::max(unit, (a.adjoint() * rep.herm - rep.herm * a).norm());
  }
  out.emplace_back("action homomorphism", hom);
  out.emplace_back("form symmetry", (rep.form - rep.form.transpose()).norm());
  out.emplace_back("form invariance", inv);
  const Mat& sv = rep.sigma_v.m;
  out.emplace_back("sigma_tilde form compatibility", (sv.transpose() * rep.form * sv - rep.form.conjugate()).norm());
  out.emplace_back("theta_tilde hermitian compatibility",
                   ((rep.theta_v.m.adjoint() * rep.herm).transpose() + rep.form).norm());
  out.emplace_back("sigma equivariance", seq);
  out.emplace_back("theta equivariance", teq);
  out.emplace_back("unitary compatibility", unit);
  double neg = 0;
  if (dv > 0) {
    Mat fixed = antilinear_eigenspace(Mat::Identity(dv, dv), rep.theta_v, 1.0);
    Mat g = fixed.transpose() * rep.form * fixed;
    neg = g.imag().norm();
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (g.real() + g.real().transpose()));
    if (es.eigenvalues().size()) neg += std::max(0.0, es.eigenvalues().maxCoeff());
    if (fixed.cols() != dv) neg += 1.0;
  }
  out.emplace_back("form negative-definite on V^theta_tilde", neg);
  return out;
}

// ---------------------------------------------------------------------------

CartanPairResult construct_cartan_pair(const RepresentationModel& rep, const AntiLinear& mu,
                                       const AntiLinear& mu_tilde, const TolerancePolicy& pol) {
  const int dg = rep.dim_g(), dv = rep.dim_v();
  if (mu.m.rows() != dg || mu_tilde.m.rows() != dv)
    throw Error(ErrorKind::InvalidInput, "construct_cartan_pair: dimension mismatch");
  CartanPairResult out;
  auto root = [&](const Mat& omega, const Mat& gram, const char* where) {
    try {
      return hermitian_fourth_root(omega * omega, gram, pol);
    } catch (const Error& e) {
      throw Error(ErrorKind::Inconsistent, std::string("omega^2 not positive-definite w.r.t. B_mu on ") +
                                               where + ": " + e.what());
    }
  };
  const Mat omega = rep.sigma_g.m * mu.m.conjugate();
  const Mat gram_g = -mu.m.transpose() * rep.beta_g;
  out.phi = root(omega, gram_g, "g");
  out.eta = AntiLinear{out.phi * mu.m * out.phi.inverse().conjugate()};

  const Mat omega_t = rep.sigma_v.m * mu_tilde.m.conjugate();
  const Mat gram_v = -mu_tilde.m.transpose() * rep.form;
  out.phi_tilde = root(omega_t, gram_v, "V");
  out.eta_tilde = AntiLinear{out.phi_tilde * mu_tilde.m * out.phi_tilde.inverse().conjugate()};

  const Mat& e = out.eta.m;
  const Mat& et = out.eta_tilde.m;
  const Mat& s = rep.sigma_g.m;
  const Mat& st = rep.sigma_v.m;
  auto& r = out.residuals;
  r.emplace_back("eta∘sigma − sigma∘eta", (s * e.conjugate() - e * s.conjugate()).norm());
  r.emplace_back("eta_tilde∘sigma_tilde − sigma_tilde∘eta_tilde", (st * et.conjugate() - et * st.conjugate()).norm());
  r.emplace_back("eta∘eta − id", (e * e.conjugate() - Mat::Identity(dg, dg)).norm());
  r.emplace_back("eta_tilde∘eta_tilde − id", (et * et.conjugate() - Mat::Identity(dv, dv)).norm());
  double eq = 0;
  for (int i = 0; i < dg; ++i)
    eq = std::max(eq, (et * rep.action[i].conjugate() - rep.act(e.col(i)) * et).norm());
  r.emplace_back("equivariance", eq);
  Mat fixed = antilinear_eigenspace(Mat::Identity(dv, dv), out.eta_tilde, 1.0, 1e-7);
  double neg = fixed.cols() == dv ? 0.0 : 1.0;
  if (fixed.cols() > 0) {
    Mat g = fixed.transpose() * rep.form * fixed;
    neg += g.imag().norm();
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (g.real() + g.real().transpose()));
    neg += std::max(0.0, es.eigenvalues().maxCoeff());
  }
  r.emplace_back("form negative-definite on V^eta_tilde", neg);
  return out;
}

std::vector<Mat> equivariant_real_structures(const RepresentationModel& rep, const AntiLinear& eta,
                                             double tol) {
  const int dg = rep.dim_g(), dv = rep.dim_v();
  // J conj(A_i) - B_i J = 0 with B_i = act(eta(X_i)); vec(J) column-major.
  const Mat id = Mat::Identity(dv, dv);
  Mat sys(dg * dv * dv, dv * dv);
  for (int i = 0; i < dg; ++i) {
    const Mat ai = rep.action[i].conjugate();
    const Mat bi = rep.act(eta.m.col(i));
    Mat blk = Mat::Zero(dv * dv, dv * dv);
    // vec(J A) = (A^T ⊗ I) vec(J); vec(B J) = (I ⊗ B) vec(J)
    for (int p = 0; p < dv; ++p)
      for (int q = 0; q < dv; ++q) {
        blk.block(p * dv, q * dv, dv, dv) += ai(q, p) * id;
        if (p == q) blk.block(p * dv, q * dv, dv, dv) -= bi;
      }
    sys.middleRows(i * dv * dv, dv * dv) = blk;
  }
  Mat ker = null_space(sys, tol);
  std::vector<Mat> out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    Mat j = Eigen::Map<const Mat>(ker.col(c).data(), dv, dv);
    out.push_back(j);
    out.push_back(cd(0, 1) * j);
  }
  return out;
}

}  // namespace polarrep

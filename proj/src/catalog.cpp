#include "polarrep/catalog.hpp"

#include <functional>
#include <sstream>

namespace polarrep {

namespace {

using MatFn = std::function<Mat(const Mat&)>;

Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

// Pair from a basis of the real form ĝ_R (so σ̂ is conjugation in these
// coordinates), a linear tau and a conjugate-linear theta on matrices.
SymmetricPairModel pair_from_real_form(const std::string& name, std::vector<std::string> labels,
                                       std::vector<Mat> basis, const MatFn& tau, const MatFn& theta) {
  const int n = static_cast<int>(basis.size());
  Mat f(basis[0].size(), n);
  for (int i = 0; i < n; ++i) f.col(i) = flatten(basis[i]);
  auto solver = f.completeOrthogonalDecomposition();
  auto coords = [&](const Mat& x) {
    Vec c = solver.solve(flatten(x));
    if ((f * c - flatten(x)).norm() > 1e-10 * std::max(1.0, x.norm()))
      throw Error(ErrorKind::Validation, name + ": involution leaves the algebra");
    return c;
  };
  Mat t(n, n), th(n, n);
  for (int i = 0; i < n; ++i) {
    t.col(i) = coords(tau(basis[i]));
    th.col(i) = coords(theta(basis[i]));
  }
  LieAlgebraModel alg = LieAlgebraModel::from_matrices(std::move(labels), std::move(basis));
  return build_pair(alg, t, AntiLinear::conjugation(n), AntiLinear{th}, name);
}

// Real basis of sl(n, R).
void sl_basis(int n, std::vector<Mat>& mats, std::vector<std::string>& labels) {
  for (int k = 0; k + 1 < n; ++k) {
    mats.push_back(unit(n, k, k) - unit(n, k + 1, k + 1));
    labels.push_back("H" + std::to_string(k + 1));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        mats.push_back(unit(n, i, j));
        labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
      }
}

Mat minus_adjoint(const Mat& x) { return -x.adjoint(); }

int param(const CatalogParams& p, const std::string& key, int def, bool required = false) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) throw Error(ErrorKind::InvalidInput, "missing catalog parameter " + key);
    return def;
  }
  return it->second;
}

void check_params(const std::string& name, const CatalogParams& p, std::vector<std::string> allowed) {
  for (const auto& [k, v] : p) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw Error(ErrorKind::InvalidInput, name + ": unknown parameter " + k);
  }
}

SymmetricPairModel sl2_adjoint() {
  std::vector<Mat> mats;
  std::vector<std::string> labels;
  const Mat h = (Mat(2, 2) << 1, 0, 0, -1).finished();
  const Mat e = (Mat(2, 2) << 0, 1, 0, 0).finished();
  const Mat f = (Mat(2, 2) << 0, 0, 1, 0).finished();
  const char* names[3] = {"H", "E", "F"};
  const Mat* gens[3] = {&h, &e, &f};
  for (int copy = 0; copy < 2; ++copy)
    for (int i = 0; i < 3; ++i) {
      Mat x = Mat::Zero(4, 4);
      x.block(2 * copy, 2 * copy, 2, 2) = *gens[i];
      mats.push_back(x);
      labels.push_back(std::string(names[i]) + std::to_string(copy + 1));
    }
  auto swap = [](const Mat& x) {
    Mat y = Mat::Zero(4, 4);
    y.topLeftCorner(2, 2) = x.bottomRightCorner(2, 2);
    y.bottomRightCorner(2, 2) = x.topLeftCorner(2, 2);
    return y;
  };
  return pair_from_real_form("sl2-adjoint", labels, mats, swap, minus_adjoint);
}

SymmetricPairModel sln_sopq(int n, int p, const std::string& name) {
  if (n < 2 || n > 8) throw Error(ErrorKind::InvalidInput, name + ": n must be in [2, 8]");
  if (p < 0 || p > n) throw Error(ErrorKind::InvalidInput, name + ": p must be in [0, n]");
  std::vector<Mat> mats;
  std::vector<std::string> labels;
  sl_basis(n, mats, labels);
  Eigen::VectorXcd d(n);
  for (int i = 0; i < n; ++i) d(i) = i < p ? 1.0 : -1.0;
  const Mat ipq = d.asDiagonal();
  auto tau = [ipq](const Mat& x) -> Mat { return -ipq * x.transpose() * ipq; };
  return pair_from_real_form(name, labels, mats, tau, minus_adjoint);
}

SymmetricPairModel supq(int p, int q, int r, int s) {
  const int n = p + q;
  if (p < 1 || q < 1 || n > 8) throw Error(ErrorKind::InvalidInput, "supq: need p, q >= 1 and p + q <= 8");
  if (r < 0 || r > p || s < 0 || s > q) throw Error(ErrorKind::InvalidInput, "supq: need 0 <= r <= p, 0 <= s <= q");
  Eigen::VectorXcd jd(n), dd(n);
  for (int i = 0; i < n; ++i) {
    jd(i) = (i < r || (i >= p && i < p + s)) ? 1.0 : -1.0;
    dd(i) = i < p ? 1.0 : -1.0;
  }
  const Mat j = jd.asDiagonal();
  const Mat dmat = dd.asDiagonal();
  const cd im(0, 1);
  // su(J) = J u(n), traceless.
  std::vector<Mat> mats;
  std::vector<std::string> labels;
  for (int k = 0; k + 1 < n; ++k) {
    mats.push_back(im * (unit(n, k, k) - unit(n, k + 1, k + 1)));
    labels.push_back("iH" + std::to_string(k + 1));
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      mats.push_back(j * (unit(n, a, b) - unit(n, b, a)));
      labels.push_back("A" + std::to_string(a + 1) + std::to_string(b + 1));
      mats.push_back(j * (im * (unit(n, a, b) + unit(n, b, a))));
      labels.push_back("S" + std::to_string(a + 1) + std::to_string(b + 1));
    }
  auto tau = [dmat](const Mat& x) -> Mat { return dmat * x * dmat; };
  std::ostringstream nm;
  nm << "supq:p=" << p << ",q=" << q << ",r=" << r << ",s=" << s;
  return pair_from_real_form(nm.str(), labels, mats, tau, minus_adjoint);
}

Mat rot_generator(int dim, int a, int b, double w) {
  Mat m = Mat::Zero(dim, dim);
  m(b, a) = w;
  m(a, b) = -w;
  return m;
}

RepresentationModel torus_c3(std::uint64_t seed) {
  // Complex lines C_1, C_2, C_3 = R^2 planes (0,1), (2,3), (4,5); weights
  // (1,0), (0,1), (1,1). The form is negative on the first two lines.
  std::vector<Mat> act(2, Mat::Zero(6, 6));
  act[0] += rot_generator(6, 0, 1, 1.0) + rot_generator(6, 4, 5, 1.0);
  act[1] += rot_generator(6, 2, 3, 1.0) + rot_generator(6, 4, 5, 1.0);
  LieAlgebraModel t2 = LieAlgebraModel::from_structure_constants({"T1", "T2"}, {});
  Eigen::VectorXcd tv(6);
  tv << 1, 1, 1, 1, -1, -1;
  return make_representation("torus-c3", t2, act, Mat::Identity(2, 2), Mat(tv.asDiagonal()), seed);
}

RepresentationModel so3_r3(std::uint64_t seed) {
  std::vector<Mat> act = {rot_generator(3, 1, 2, 1.0), rot_generator(3, 2, 0, 1.0), rot_generator(3, 0, 1, 1.0)};
  LieAlgebraModel so3 = LieAlgebraModel::from_matrices({"Lx", "Ly", "Lz"}, act);
  return make_representation("so3-r3", so3, act, Mat::Identity(3, 3), -Mat::Identity(3, 3), seed);
}

}  // namespace

std::pair<std::string, CatalogParams> parse_builtin(const std::string& spec) {
  const auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  CatalogParams params;
  if (colon == std::string::npos) return {name, params};
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::InvalidInput, "builtin parameter must be key=value: " + item);
    try {
      size_t used = 0;
      const std::string val = item.substr(eq + 1);
      int v = std::stoi(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      params[item.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "builtin parameter is not an integer: " + item);
    }
  }
  return {name, params};
}

SymmetricPairModel catalog_pair(const std::string& name, const CatalogParams& params) {
  if (name == "sl2-adjoint") {
    check_params(name, params, {});
    return sl2_adjoint();
  }
  if (name == "sln-son") {
    check_params(name, params, {"n"});
    const int n = param(params, "n", 3);
    return sln_sopq(n, n, "sln-son:n=" + std::to_string(n));
  }
  if (name == "sln-sopq") {
    check_params(name, params, {"n", "p"});
    const int n = param(params, "n", 3, true), p = param(params, "p", 0, true);
    return sln_sopq(n, p, "sln-sopq:n=" + std::to_string(n) + ",p=" + std::to_string(p));
  }
  if (name == "supq") {
    check_params(name, params, {"p", "q", "r", "s"});
    const int p = param(params, "p", 1, true), q = param(params, "q", 1, true);
    return supq(p, q, param(params, "r", p), param(params, "s", 0));
  }
  throw Error(ErrorKind::NotFound, "unknown catalog pair: " + name);
}

bool catalog_is_pair(const std::string& name) {
  return name == "sl2-adjoint" || name == "sln-son" || name == "sln-sopq" || name == "supq";
}

RepresentationModel catalog_representation(const std::string& spec, std::uint64_t seed) {
  auto [name, params] = parse_builtin(spec);
  if (name == "torus-c3") {
    check_params(name, params, {});
    return torus_c3(seed);
  }
  if (name == "so3-r3") {
    check_params(name, params, {});
    return so3_r3(seed);
  }
  auto pair = std::make_shared<const SymmetricPairModel>(catalog_pair(name, params));
  return isotropy_representation(pair, seed);
}

std::vector<std::string> catalog_names() {
  return {"sl2-adjoint", "sln-son", "sln-sopq", "supq", "torus-c3", "so3-r3"};
}

}  // namespace polarrep

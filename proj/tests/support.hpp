#pragma once

#include <gtest/gtest.h>

#include "polarrep/catalog.hpp"

namespace polarrep::testing {

/// V coordinates of an ambient vector given in the catalog's input basis.
inline Vec v_from_input(const RepresentationModel& rep, const Vec& input) {
  const Vec z = rep.pair->to_input.fullPivLu().solve(input);
  EXPECT_LT(z.head(rep.dim_g()).norm(), 1e-10) << "vector has a g component";
  return z.tail(rep.dim_v());
}

/// g coordinates of an ambient vector given in the catalog's input basis.
inline Vec g_from_input(const RepresentationModel& rep, const Vec& input) {
  const Vec z = rep.pair->to_input.fullPivLu().solve(input);
  EXPECT_LT(z.tail(rep.dim_v()).norm(), 1e-10) << "vector has a V component";
  return z.head(rep.dim_g());
}

/// sl2-adjoint input basis is H1 E1 F1 H2 E2 F2; V is the antidiagonal copy.
inline Vec sl2_v(const RepresentationModel& rep, double h, double e, double f) {
  Vec x(6);
  x << h, e, f, -h, -e, -f;
  return v_from_input(rep, x);
}

inline Vec sl2_g(const RepresentationModel& rep, double h, double e, double f) {
  Vec x(6);
  x << h, e, f, h, e, f;
  return g_from_input(rep, x);
}

/// sl(n,R)/so(n): V is symmetric traceless; input basis H_k then E_ij (i != j).
inline Vec sln_diag(const RepresentationModel& rep, const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  Vec x = Vec::Zero(n * n - 1);
  // diag(d) = sum_k c_k (e_kk - e_{k+1,k+1}) with c_k = d_0 + ... + d_k.
  double acc = 0;
  for (int k = 0; k + 1 < n; ++k) {
    acc += d[k];
    x(k) = acc;
  }
  return v_from_input(rep, x);
}

inline Mat unit_matrix(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

/// sl(n) basis in the catalog's order: H_k then E_ij.
inline std::vector<Mat> sl_mats(int n) {
  std::vector<Mat> m;
  for (int k = 0; k + 1 < n; ++k) m.push_back(unit_matrix(n, k, k) - unit_matrix(n, k + 1, k + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) m.push_back(unit_matrix(n, i, j));
  return m;
}

/// Matrix of a V vector of a catalog sl(n) pair.
inline Mat sln_matrix(const RepresentationModel& rep, int n, const Vec& v) {
  const auto mats = sl_mats(n);
  const Vec c = rep.pair->to_input * rep.embed(v);
  Mat m = Mat::Zero(n, n);
  for (std::size_t i = 0; i < mats.size(); ++i) m += c(i) * mats[i];
  return m;
}

inline double max_residual(const ResidualList& r) {
  double m = 0;
  for (const auto& [k, v] : r) m = std::max(m, v);
  return m;
}

}  // namespace polarrep::testing

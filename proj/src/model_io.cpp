#include "polarrep/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "polarrep/catalog.hpp"

namespace polarrep {

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw LoadError(LoadStage::Schema, msg); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (!allowed.count(k)) schema_error(where + ": unknown key \"" + k + "\"");
  }
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double positive(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!(v > 0)) schema_error(where + ": must be positive");
  return v;
}

LoadedModel finish(const std::string& source, std::shared_ptr<const SymmetricPairModel> pair,
                   const TolerancePolicy& pol, std::optional<std::uint64_t> seed) {
  LoadedModel m;
  m.source = source;
  m.pol = pol;
  m.seed = seed;
  m.rep = isotropy_representation(std::move(pair), seed.value_or(0));
  std::ostringstream bad;
  for (const auto& [k, r] : check_representation(m.rep, seed.value_or(0)))
    if (!(r <= 1e-9)) bad << k << " = " << r << "; ";
  if (!bad.str().empty()) throw LoadError(LoadStage::Validation, "representation invariants violated: " + bad.str());
  return m;
}

}  // namespace

json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

cd complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  schema_error(where + ": expected a number or a [re, im] pair");
}

Mat matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where + ": expected an array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  if (rows) {
    if (!j[0].is_array()) schema_error(where + ": expected an array of rows");
    cols = j[0].size();
  }
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) schema_error(where + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

LoadedModel load_builtin(const std::string& spec, std::uint64_t seed) {
  LoadedModel m;
  m.source = "builtin:" + spec;
  try {
    m.rep = catalog_representation(spec, seed);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::DegenerateForm)
      throw LoadError(LoadStage::Validation, e.what());
    throw LoadError(LoadStage::Schema, e.what());
  }
  return m;
}

LoadedModel load_model_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError(LoadStage::Parse, source + ": " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) schema_error(source + ": top level must be an object");
  reject_unknown(doc, {"basis", "structure_constants", "matrix_realization", "involutions", "tolerances", "seed", "name"},
                 "model");
  for (const char* key : {"basis", "structure_constants", "involutions"})
    if (!doc.contains(key)) schema_error(std::string("model: missing key \"") + key + "\"");

  const json& basis = doc["basis"];
  if (!basis.is_array() || basis.empty()) schema_error("basis: expected a non-empty array of labels");
  std::vector<std::string> labels;
  for (const auto& b : basis) {
    if (!b.is_string()) schema_error("basis: labels must be strings");
    labels.push_back(b.get<std::string>());
  }
  const int n = static_cast<int>(labels.size());

  const json& sc = doc["structure_constants"];
  if (!sc.is_array()) schema_error("structure_constants: expected an array of [i, j, k, value]");
  std::vector<std::tuple<int, int, int, cd>> triples;
  for (std::size_t t = 0; t < sc.size(); ++t) {
    const json& e = sc[t];
    const std::string where = "structure_constants[" + std::to_string(t) + "]";
    if (!e.is_array() || e.size() != 4) schema_error(where + ": expected [i, j, k, value]");
    int idx[3];
    for (int q = 0; q < 3; ++q) {
      if (!e[q].is_number_integer()) schema_error(where + ": indices must be integers");
      idx[q] = e[q].get<int>();
      if (idx[q] < 0 || idx[q] >= n) schema_error(where + ": index out of range");
    }
    triples.emplace_back(idx[0], idx[1], idx[2], complex_from_json(e[3], where));
  }
  LieAlgebraModel alg = LieAlgebraModel::from_structure_constants(labels, triples);

  if (doc.contains("matrix_realization")) {
    const json& mr = doc["matrix_realization"];
    if (!mr.is_array() || static_cast<int>(mr.size()) != n)
      schema_error("matrix_realization: expected one matrix per basis element");
    std::vector<Mat> mats;
    for (int i = 0; i < n; ++i) mats.push_back(matrix_from_json(mr[i], "matrix_realization[" + std::to_string(i) + "]"));
    for (const auto& m : mats)
      if (m.rows() != mats[0].rows() || m.cols() != mats[0].cols() || m.rows() != m.cols())
        schema_error("matrix_realization: matrices must be square and of one size");
    alg.set_realization(std::move(mats));
  }

  const json& inv = doc["involutions"];
  if (!inv.is_object()) schema_error("involutions: expected an object");
  reject_unknown(inv, {"tau", "sigma", "theta"}, "involutions");
  Mat inv_m[3];
  const char* names[3] = {"tau", "sigma", "theta"};
  for (int q = 0; q < 3; ++q) {
    if (!inv.contains(names[q])) schema_error(std::string("involutions: missing \"") + names[q] + "\"");
    inv_m[q] = matrix_from_json(inv[names[q]], std::string("involutions.") + names[q]);
    if (inv_m[q].rows() != n || inv_m[q].cols() != n)
      schema_error(std::string("involutions.") + names[q] + ": must be " + std::to_string(n) + "x" + std::to_string(n));
  }

  TolerancePolicy pol;
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) schema_error("tolerances: expected an object");
    reject_unknown(t, {"rank_tol", "eig_tol", "flow_tol"}, "tolerances");
    if (t.contains("rank_tol")) pol.rank_tol = positive(t["rank_tol"], "tolerances.rank_tol");
    if (t.contains("eig_tol")) pol.eig_tol = positive(t["eig_tol"], "tolerances.eig_tol");
    if (t.contains("flow_tol")) pol.flow_tol = positive(t["flow_tol"], "tolerances.flow_tol");
    try {
      pol.validate();
    } catch (const Error& e) {
      schema_error(std::string("tolerances: ") + e.what());
    }
  }
  std::optional<std::uint64_t> seed;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) schema_error("seed: expected a non-negative integer");
    seed = doc["seed"].get<std::uint64_t>();
  }
  std::string name = source;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) schema_error("name: expected a string");
    name = doc["name"].get<std::string>();
  }

  std::shared_ptr<const SymmetricPairModel> pair;
  try {
    pair = std::make_shared<const SymmetricPairModel>(
        build_pair(alg, inv_m[0], AntiLinear{inv_m[1]}, AntiLinear{inv_m[2]}, name));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidInput) schema_error(e.what());
    throw LoadError(LoadStage::Validation, e.what());
  }
  try {
    return finish(source, pair, pol, seed);
  } catch (const Error& e) {
    throw LoadError(LoadStage::Validation, e.what());
  }
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadStage::Parse, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_model_text(buf.str(), path);
}

json export_model(const SymmetricPairModel& pair, std::optional<std::uint64_t> seed) {
  json doc;
  doc["name"] = pair.name;
  doc["basis"] = pair.ambient.labels();
  json sc = json::array();
  const int n = pair.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const cd v = pair.ambient.c(i, j, k);
        if (v != cd(0, 0)) sc.push_back(json::array({i, j, k, complex_to_json(v)}));
      }
  doc["structure_constants"] = sc;
  doc["involutions"] = {{"tau", matrix_to_json(pair.tau_hat)},
                        {"sigma", matrix_to_json(pair.sigma_hat.m)},
                        {"theta", matrix_to_json(pair.theta_hat.m)}};
  if (seed) doc["seed"] = *seed;
  return doc;
}

}  // namespace polarrep

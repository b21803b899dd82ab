#include <gtest/gtest.h>

#include "polarrep/catalog.hpp"
#include "polarrep/report.hpp"
#include "support.hpp"

using namespace polarrep;
using polarrep::testing::max_residual;

namespace {

int load_exit_code(const std::string& text) {
  try {
    load_model_text(text, "test.json");
  } catch (const LoadError& e) {
    return e.exit_code();
  }
  return 0;
}

std::string load_message(const std::string& text) {
  try {
    load_model_text(text, "test.json");
  } catch (const LoadError& e) {
    return e.what();
  }
  return {};
}

json exported_sl2() { return export_model(catalog_pair("sl2-adjoint"), 11); }

}  // namespace

TEST(ModelIo, ComplexValuesRoundTripBitExactly) {
  auto rng = make_rng(31, 0);
  const RVec re = gaussian(rng, 50), im = gaussian(rng, 50);
  Mat m(5, 10);
  for (int i = 0; i < 50; ++i) m(i / 10, i % 10) = cd(re(i) * 1e3, im(i) * 1e-7);
  const Mat back = matrix_from_json(json::parse(matrix_to_json(m).dump()), "m");
  ASSERT_EQ(back.rows(), 5);
  ASSERT_EQ(back.cols(), 10);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 10; ++j) EXPECT_EQ(back(i, j), m(i, j));
}

TEST(ModelIo, ExportedPairLoadsBack) {
  const auto original = catalog_representation("sl2-adjoint", 1);
  const auto doc = exported_sl2();
  const auto loaded = load_model_text(doc.dump(), "sl2.json");
  ASSERT_TRUE(loaded.rep.pair);
  EXPECT_EQ(loaded.seed, std::optional<std::uint64_t>(11));
  EXPECT_EQ(loaded.rep.pair->dim_k, original.pair->dim_k);
  EXPECT_EQ(loaded.rep.pair->dim_p, original.pair->dim_p);
  EXPECT_EQ(loaded.rep.pair->dim_vw, original.pair->dim_vw);
  EXPECT_EQ(loaded.rep.pair->dim_viw, original.pair->dim_viw);
  EXPECT_EQ(loaded.rep.generic_orbit_dim, original.generic_orbit_dim);
  EXPECT_LE(max_residual(loaded.rep.pair->residuals), 1e-9);
  // The Killing form spectra agree up to the change of orthonormal basis.
  EXPECT_LT(multiset_distance(sorted_eigenvalues(loaded.rep.pair->killing), sorted_eigenvalues(original.pair->killing)),
            1e-9);
}

TEST(ModelIo, ParseErrorReportsPosition) {
  const std::string text = "{\n  \"basis\": [\"a\",\n}";
  EXPECT_EQ(load_exit_code(text), 2);
  EXPECT_NE(load_message(text).find("line 3"), std::string::npos) << load_message(text);
}

TEST(ModelIo, SchemaErrors) {
  auto doc = exported_sl2();
  doc["extra"] = 1;
  EXPECT_EQ(load_exit_code(doc.dump()), 3);
  EXPECT_NE(load_message(doc.dump()).find("extra"), std::string::npos);

  auto missing = exported_sl2();
  missing.erase("involutions");
  EXPECT_EQ(load_exit_code(missing.dump()), 3);

  auto bad_index = exported_sl2();
  bad_index["structure_constants"][0][0] = 99;
  EXPECT_EQ(load_exit_code(bad_index.dump()), 3);

  auto bad_seed = exported_sl2();
  bad_seed["seed"] = -1;
  EXPECT_EQ(load_exit_code(bad_seed.dump()), 3);

  auto bad_tol = exported_sl2();
  bad_tol["tolerances"] = {{"rank_tol", 0.0}};
  EXPECT_EQ(load_exit_code(bad_tol.dump()), 3);
}

TEST(ModelIo, NonCommutingInvolutionsAreValidationErrors) {
  auto doc = exported_sl2();
  const auto pair = catalog_pair("sl2-adjoint");
  // Conjugate theta by exp(i t X) for X in k_R: still an involution commuting with tau.
  Vec k = Vec::Zero(pair.dim());
  k(0) = 1;
  const Mat a = expm(cd(0, 0.4) * ad_matrix(pair.ambient, k));
  doc["involutions"]["theta"] = matrix_to_json(a * pair.theta_hat.m * a.inverse().conjugate());
  EXPECT_EQ(load_exit_code(doc.dump()), 4);
  EXPECT_NE(load_message(doc.dump()).find("sigma∘theta − theta∘sigma"), std::string::npos) << load_message(doc.dump());
}

TEST(ModelIo, BuiltinErrorsMapToSchema) {
  try {
    load_builtin("nope");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.exit_code(), 3);
  }
  EXPECT_EQ(load_builtin("sl2-adjoint").rep.pair->dim(), 6);
}

TEST(Report, DeterministicAndComplete) {
  const auto model = load_builtin("sl2-adjoint", 7);
  AnalysisOptions opt;
  opt.seed = 7;
  const auto a = run_analysis(model, opt);
  const auto b = run_analysis(model, opt);
  EXPECT_EQ(dump_report(a.report), dump_report(b.report));
  EXPECT_TRUE(a.stage_errors.empty());
  EXPECT_FALSE(a.incomplete);
  EXPECT_TRUE(a.all_checks_passed());
  EXPECT_EQ(a.report["cartan_classes"]["count"], 2);
  for (const char* key : {"pair", "cartan_classes", "roots", "cayley", "extremal", "restricted_polar", "isoparametric",
                          "checks", "provenance", "stage_errors", "incomplete"})
    EXPECT_TRUE(a.report.contains(key)) << key;
}

TEST(Report, ChecksOnlyKeepsResiduals) {
  const auto model = load_builtin("sln-son:n=3", 1);
  AnalysisOptions opt;
  opt.seed = 1;
  opt.checks_only = true;
  const auto r = run_analysis(model, opt);
  EXPECT_TRUE(r.all_checks_passed());
  EXPECT_FALSE(r.report.contains("roots"));
  EXPECT_TRUE(r.report.contains("checks"));
  EXPECT_GT(r.report["checks"].size(), 10u);
}

TEST(Report, StageFailureIsRecordedNotThrown) {
  const auto model = load_builtin("torus-c3", 1);
  AnalysisOptions opt;
  opt.seed = 1;
  AnalysisResult r;
  ASSERT_NO_THROW(r = run_analysis(model, opt));
  EXPECT_TRUE(r.incomplete);
  ASSERT_FALSE(r.stage_errors.empty());
  EXPECT_EQ(r.report["stage_errors"][0]["stage"], "cartan_classes");
}

TEST(Report, VerbSelectsStages) {
  const auto v = StageSet::for_verb("validate");
  EXPECT_FALSE(v.classes);
  const auto p = StageSet::for_verb("probe-closures");
  EXPECT_TRUE(p.closures);
  EXPECT_FALSE(p.roots);
  const auto a = StageSet::for_verb("analyze");
  EXPECT_TRUE(a.classes && a.roots && a.cayley && a.isoparametric);
}

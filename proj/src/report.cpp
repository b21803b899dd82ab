#include "polarrep/report.hpp"

#include <cmath>
#include <functional>

#include "polarrep/cayley.hpp"
#include "polarrep/isopgeom.hpp"

namespace polarrep {

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json real_matrix(const Mat& m) { return matrix_to_json(m); }

json residuals_json(const ResidualList& r) {
  json out = json::object();
  for (const auto& [k, v] : r) out[k] = num(v);
  return out;
}

json signature_json(const CartanSubspaceRecord& c) { return json::array({c.compact_dim, c.noncompact_dim}); }

json record_json(const CartanSubspaceRecord& c) {
  return {{"dim", c.dim()},
          {"rank", c.rank},
          {"signature", signature_json(c)},
          {"sigma_stable", c.sigma_stable},
          {"theta_stable", c.theta_stable},
          {"basis", real_matrix(c.basis)}};
}

json spectrum_json(const BlockSpectrum& s) {
  json pairs = json::array();
  for (const auto& z : s.complex_pairs) pairs.push_back(complex_to_json(z));
  json reals = json::array();
  for (double x : s.real_values) reals.push_back(num(x));
  return {{"real", reals}, {"complex_pairs", pairs}, {"diagonalizable", s.diagonalizable}, {"borderline", s.borderline}};
}

struct Ctx {
  const LoadedModel& model;
  const AnalysisOptions& opt;
  AnalysisResult& res;

  void check(const std::string& name, double r, double tol) { res.checks.push_back({name, r, tol}); }
  void checks(const std::string& prefix, const ResidualList& list, double tol) {
    for (const auto& [k, v] : list) check(prefix + k, v, tol);
  }
  // Runs a stage, recording any failure instead of propagating it.
  bool stage(const std::string& name, const std::function<void()>& f) {
    try {
      f();
      return true;
    } catch (const std::exception& e) {
      const Error* pe = dynamic_cast<const Error*>(&e);
      res.stage_errors.push_back(name);
      res.report["stage_errors"].push_back(
          {{"stage", name}, {"kind", pe ? to_string(pe->kind()) : "internal"}, {"message", e.what()}});
      res.incomplete = true;
      return false;
    }
  }
};

double roots_check_tol(const std::string& key) {
  if (key.rfind("dim", 0) == 0 || key.rfind("dual route", 0) == 0) return 0.5;
  if (key.front() == '<') return 1e-8;
  if (key.rfind("L(v0)", 0) == 0) return 1e-8;
  return 1e-6;
}

double cayley_check_tol(const std::string& key) {
  if (key == "target standard" || key == "signature shift") return 0.5;
  if (key == "target is a Cartan subspace" || key == "great circle: A^2 u - u") return 1e-6;
  return 1e-9;
}

int match_class(const RepresentationModel& rep, const std::vector<CartanSubspaceRecord>& reps,
                const CartanSubspaceRecord& c, std::uint64_t seed, const TolerancePolicy& pol) {
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (conjugacy_test(rep, c, reps[i], seed, pol).verdict == Conjugacy::Conjugate) return static_cast<int>(i);
  return -1;
}

}  // namespace

StageSet StageSet::for_verb(const std::string& verb) {
  StageSet s;
  if (verb == "validate") {
    s = StageSet{false, false, false, false, false, false, false};
  } else if (verb == "roots") {
    s = StageSet{true, true, false, false, false, false, false};
  } else if (verb == "cayley") {
    s = StageSet{true, true, true, true, true, false, false};
  } else if (verb == "isoparam") {
    s = StageSet{true, true, false, false, false, true, false};
  } else if (verb == "probe-closures") {
    s = StageSet{false, false, false, false, false, false, true};
  }
  return s;
}

bool CheckEntry::passed() const { return std::isfinite(residual) && residual <= tolerance; }

bool AnalysisResult::all_checks_passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

std::vector<CheckEntry> model_checks(const LoadedModel& model, std::uint64_t seed) {
  std::vector<CheckEntry> out;
  const auto& rep = model.rep;
  if (rep.pair)
    for (const auto& [k, v] : rep.pair->residuals) out.push_back({"pair: " + k, v, 1e-9});
  for (const auto& [k, v] : check_representation(rep, seed)) out.push_back({"representation: " + k, v, 1e-9});
  return out;
}

AnalysisResult run_analysis(const LoadedModel& model, const AnalysisOptions& opt) {
  AnalysisResult res;
  Ctx ctx{model, opt, res};
  const auto& rep = model.rep;
  const auto& pol = opt.pol;
  const std::uint64_t seed = opt.seed;
  json& r = res.report;
  r["stage_errors"] = json::array();

  json pair = {{"name", rep.name},
               {"dim_g", rep.dim_g()},
               {"dim_v", rep.dim_v()},
               {"generic_orbit_dim", rep.generic_orbit_dim},
               {"symmetric_pair", rep.pair != nullptr},
               {"warnings", rep.warnings}};
  if (rep.pair) {
    pair["dim_ambient"] = rep.pair->dim();
    pair["dim_k"] = rep.pair->dim_k;
    pair["dim_p"] = rep.pair->dim_p;
    pair["dim_v_w"] = rep.pair->dim_vw;
    pair["dim_v_iw"] = rep.pair->dim_viw;
    pair["labels"] = rep.pair->ambient.labels();
  }
  r["pair"] = pair;
  for (auto& c : model_checks(model, seed)) res.checks.push_back(c);

  const StageSet& st = opt.stages;
  ConjugacyClassTable table;
  bool have_classes = false;
  if (st.classes) {
    have_classes = ctx.stage("cartan_classes", [&] {
      table = enumerate_classes(rep, opt.budget, seed, pol);
      json reps = json::array();
      for (std::size_t i = 0; i < table.representatives.size(); ++i) {
        json e = record_json(table.representatives[i]);
        e["index"] = i;
        e["origin"] = table.origin[i];
        reps.push_back(e);
      }
      r["cartan_classes"] = {{"representatives", reps},
                             {"count", table.representatives.size()},
                             {"samples_drawn", table.samples_drawn},
                             {"regular_samples", table.regular_samples},
                             {"stabilize_failures", table.stabilize_failures},
                             {"cayley_added", table.cayley_added},
                             {"incomplete", table.incomplete},
                             {"notes", table.notes}};
      if (table.incomplete) res.incomplete = true;
      if (table.representatives.empty()) throw Error(ErrorKind::SearchFailure, "no Cartan subspace found");
    });
  }

  std::vector<RootSystemReport> roots(table.representatives.size());
  std::vector<bool> roots_ok(table.representatives.size(), false);
  if (have_classes && st.roots) {
    r["roots"] = json::array();
    for (std::size_t i = 0; i < table.representatives.size(); ++i) {
      const std::string name = "roots[" + std::to_string(i) + "]";
      roots_ok[i] = ctx.stage(name, [&] {
        roots[i] = compute_roots(rep, table.representatives[i], seed, pol);
        json list = json::array();
        for (std::size_t a = 0; a < roots[i].roots.size(); ++a) {
          const auto& d = roots[i].roots[a];
          list.push_back({{"index", a},
                          {"type", to_string(d.type)},
                          {"subtype", to_string(d.subtype)},
                          {"multiplicity", d.multiplicity},
                          {"omega_plus_dim", d.omega_plus_dim},
                          {"omega_minus_dim", d.omega_minus_dim},
                          {"sigma_partner", d.sigma_partner},
                          {"chamber_value", num(d.chamber_value)},
                          {"coroot", vector_to_json(d.coroot)}});
        }
        r["roots"].push_back({{"class", i},
                              {"centralizer_dim", roots[i].m.cols()},
                              {"chamber_point", vector_to_json(roots[i].chamber_point)},
                              {"roots", list},
                              {"checks", residuals_json(roots[i].checks)}});
        for (const auto& [k, v] : roots[i].checks) ctx.check(name + ": " + k, v, roots_check_tol(k));
      });
    }
  }

  if (have_classes && st.cayley) {
    r["cayley"] = json::array();
    for (std::size_t i = 0; i < table.representatives.size(); ++i) {
      if (!roots_ok[i]) continue;
      for (std::size_t a = 0; a < roots[i].roots.size(); ++a) {
        const auto& d = roots[i].roots[a];
        CayleyKind kind;
        if (d.type == RootType::Imaginary && d.subtype == RootSubtype::Noncompact) kind = CayleyKind::NoncompactImaginary;
        else if (d.type == RootType::Real && d.subtype == RootSubtype::Compact) kind = CayleyKind::CompactReal;
        else continue;
        const std::string name = "cayley[" + std::to_string(i) + "," + std::to_string(a) + "]";
        ctx.stage(name, [&] {
          auto rec = cayley_transform(rep, table.representatives[i], d, kind, pol);
          const int target = match_class(rep, table.representatives, rec.target, seed, pol);
          r["cayley"].push_back({{"from_class", i},
                                 {"root", a},
                                 {"kind", to_string(kind)},
                                 {"generator", vector_to_json(rec.generator)},
                                 {"source_signature", signature_json(rec.source)},
                                 {"target_signature", signature_json(rec.target)},
                                 {"target_class", target},
                                 {"residuals", residuals_json(rec.residuals)}});
          for (const auto& [k, v] : rec.residuals) ctx.check(name + ": " + k, v, cayley_check_tol(k));
          ctx.check(name + ": target matches a class", target >= 0 ? 0.0 : 1.0, 0.5);
        });
      }
    }
  }

  CartanSubspaceRecord max_nc;
  bool have_max_nc = false;
  if (have_classes && st.extremal) {
    r["extremal"] = json::object();
    for (auto dir : {ExtremalDirection::MaxNoncompact, ExtremalDirection::MaxCompact}) {
      const std::string key = dir == ExtremalDirection::MaxNoncompact ? "max_noncompact" : "max_compact";
      bool ok = ctx.stage("extremal." + key, [&] {
        auto ex = extremal_search(rep, dir, table.representatives[0], seed, pol);
        r["extremal"][key] = {{"signature", signature_json(ex.record)},
                              {"steps", ex.steps},
                              {"class", match_class(rep, table.representatives, ex.record, seed, pol)}};
        if (dir == ExtremalDirection::MaxNoncompact) max_nc = ex.record;
      });
      if (ok && dir == ExtremalDirection::MaxNoncompact) have_max_nc = true;
    }
  }

  if (have_max_nc && st.restricted_polar) {
    ctx.stage("restricted_polar", [&] {
      auto rp = restricted_polar_check(rep, max_nc, seed, pol);
      r["restricted_polar"] = {{"passed", rp.passed},
                               {"vacuous", rp.vacuous},
                               {"section_dim", rp.section_dim},
                               {"k_orbit_dim", rp.k_orbit_dim},
                               {"target_dim", rp.target_dim},
                               {"orthogonality", num(rp.orthogonality)},
                               {"containment", num(rp.containment)},
                               {"ambient", num(rp.ambient)},
                               {"note", rp.note}};
      ctx.check("restricted polar: dim k.v2 + dim section - dim V_R∩iW",
                std::abs(rp.k_orbit_dim + rp.section_dim - rp.target_dim) + 0.0, 0.5);
      ctx.check("restricted polar: orthogonality", rp.orthogonality, 1e-8);
      ctx.check("restricted polar: k.v2 inside V_R∩iW", rp.ambient, 1e-8);
      ctx.check("restricted polar: p.v1 inside k.v2", rp.containment, 1e-8);
    });
  }

  if (have_classes && st.isoparametric) {
    r["isoparametric"] = json::array();
    for (std::size_t i = 0; i < table.representatives.size(); ++i) {
      const std::string name = "isoparametric[" + std::to_string(i) + "]";
      ctx.stage(name, [&] {
        const auto& c = table.representatives[i];
        auto rng = make_rng(seed, 0x69736f00ULL + i);
        Vec v = c.real_points * gaussian(rng, c.real_points.cols()).cast<cd>();
        auto iso = isoparametric_verdict(rep, v, seed + i, pol, opt.iso_samples);
        json spectra = json::array();
        for (const auto& s : iso.spectra) spectra.push_back(spectrum_json(s));
        json e = {{"class", i},
                  {"base_point", vector_to_json(iso.base_point)},
                  {"verdict", to_string(iso.verdict)},
                  {"reason", iso.reason},
                  {"samples", iso.samples},
                  {"metric_signature", json::array({iso.metric_plus, iso.metric_minus})},
                  {"normal_curvature", num(iso.flatness.curvature)},
                  {"spectrum_drift", num(iso.spectrum_drift)},
                  {"commutator", num(iso.commutator)},
                  {"self_adjoint", num(iso.self_adjoint)},
                  {"weingarten_spectra", spectra}};
        if (roots_ok.size() > i && roots_ok[i] && iso.verdict != IsoVerdict::DegenerateMetric) {
          Vec xi = c.real_points * gaussian(rng, c.real_points.cols()).cast<cd>();
          auto w = weingarten_operator(rep, v, xi, pol);
          auto pred = predicted_weingarten_spectrum(rep, roots[i], v, xi);
          const double d = multiset_distance(w.spectrum.all, pred);
          e["root_prediction_distance"] = num(d);
          ctx.check(name + ": Weingarten spectrum vs roots", d, 1e-6);
        }
        ctx.check(name + ": A_xi self-adjoint", iso.self_adjoint, 1e-9);
        r["isoparametric"].push_back(e);
      });
    }
  }

  if (st.closures) {
    ctx.stage("probe_closures", [&] {
      const Mat kb = rep.k_basis();
      if (kb.cols() == 0) throw Error(ErrorKind::Precondition, "k_R = 0: no restriction to probe");
      auto sub = restrict_representation(rep, kb, rep.name + "|k_R", seed);
      Mat target = rep.viw_basis();
      if (target.cols() == 0) target = Mat::Identity(rep.dim_v(), rep.dim_v());
      auto rng = make_rng(seed, 0x70726f62ULL);
      std::vector<Vec> samples;
      for (int s = 0; s < opt.probe_samples; ++s)
        samples.push_back(target * gaussian(rng, target.cols()).cast<cd>());
      json list = json::array();
      for (const auto& p : orbit_closure_probe(rep, sub, samples, pol))
        list.push_back({{"sample", vector_to_json(p.v)},
                        {"converged", p.converged},
                        {"collapsed", p.collapsed},
                        {"flow_residual", num(p.flow_residual)},
                        {"dim_a", p.dim_a},
                        {"dim_b", p.dim_b},
                        {"equal", p.equal}});
      r["probe_closures"] = {{"a", rep.name}, {"b", sub.name}, {"samples", list}};
    });
  }

  json checks = json::object();
  for (const auto& c : res.checks)
    checks[c.name] = {{"residual", num(c.residual)}, {"tolerance", c.tolerance}, {"passed", c.passed()}};
  r["checks"] = checks;
  r["incomplete"] = res.incomplete;
  r["provenance"] = {{"seed", seed},
                     {"source", model.source},
                     {"verb", opt.verb},
                     {"version", kVersion},
                     {"schema_version", kReportSchemaVersion},
                     {"budget", opt.budget},
                     {"tolerances", {{"rank_tol", pol.rank_tol}, {"eig_tol", pol.eig_tol}, {"flow_tol", pol.flow_tol}}}};
  if (opt.checks_only) {
    json slim;
    for (const char* k : {"checks", "incomplete", "provenance", "stage_errors", "pair"}) slim[k] = r[k];
    r = slim;
  }
  return res;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace polarrep

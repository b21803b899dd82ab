// polarrep: analysis of symmetric pairs and their isotropy representations.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "polarrep/report.hpp"

namespace {

constexpr int kUsageExit = 2;

struct Args {
  std::string verb;
  std::string builtin;
  std::string model;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> tol_rank;
  std::optional<double> tol_eig;
  int budget = 200;
  bool checks_only = false;
  bool strict = false;
};

int run(const Args& a) {
  using namespace polarrep;
  LoadedModel model;
  try {
    model = a.model.empty() ? load_builtin(a.builtin, a.seed.value_or(0)) : load_model_file(a.model);
  } catch (const LoadError& e) {
    std::cerr << "polarrep: " << e.what() << "\n";
    return e.exit_code();
  }

  AnalysisOptions opt;
  opt.verb = a.verb;
  opt.stages = StageSet::for_verb(a.verb);
  opt.checks_only = a.checks_only;
  opt.budget = a.budget;
  opt.pol = model.pol;
  if (a.tol_rank) opt.pol.rank_tol = *a.tol_rank;
  if (a.tol_eig) opt.pol.eig_tol = *a.tol_eig;
  try {
    opt.pol.validate();
  } catch (const Error& e) {
    std::cerr << "polarrep: " << e.what() << "\n";
    return kUsageExit;
  }

  const bool randomized = a.verb != "validate";
  if (a.seed) opt.seed = *a.seed;
  else if (model.seed) opt.seed = *model.seed;
  else if (randomized) {
    std::cerr << "polarrep: --seed is required for " << a.verb << " (the model provides none)\n";
    return kUsageExit;
  }

  const AnalysisResult res = run_analysis(model, opt);
  const std::string text = dump_report(res.report);
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f || !(f << text)) {
      std::cerr << "polarrep: cannot write " << a.out << "\n";
      return 1;
    }
  }

  for (const auto& s : res.stage_errors) std::cerr << "polarrep: stage " << s << " failed\n";
  const bool checks_ok = res.all_checks_passed();
  if (!checks_ok)
    for (const auto& c : res.checks)
      if (!c.passed()) std::cerr << "polarrep: check failed: " << c.name << " = " << c.residual << "\n";
  if (a.verb == "validate" && !checks_ok) return 4;
  if (a.checks_only && !checks_ok) return 1;
  if (a.strict && (!res.stage_errors.empty() || res.incomplete)) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan subspaces, roots and orbit geometry of symmetric-pair representations", "polarrep"};
  app.set_version_flag("--version", polarrep::kVersion);
  app.require_subcommand(1, 1);
  Args a;

  for (const char* verb : {"validate", "analyze", "roots", "cayley", "isoparam", "probe-closures"}) {
    static const std::map<std::string, std::string> help = {
        {"validate", "load a model and check its invariants"},
        {"analyze", "run the full pipeline"},
        {"roots", "Cartan classes and their roots"},
        {"cayley", "Cayley transforms, extremal classes and the restricted polar check"},
        {"isoparam", "isoparametric verdicts at sampled regular points"},
        {"probe-closures", "compare orbit closures of g_R and k_R at sampled points"}};
    auto* sub = app.add_subcommand(verb, help.at(verb));
    auto* src = sub->add_option_group("source", "model source");
    src->add_option("--builtin", a.builtin, "builtin fixture, e.g. sl2-adjoint or sln-son:n=3");
    src->add_option("--model", a.model, "model JSON file");
    src->require_option(1);
    sub->add_option("--seed", a.seed, "64-bit seed for randomized stages");
    sub->add_option("--out", a.out, "report path (default stdout)");
    sub->add_option("--tol-rank", a.tol_rank, "relative rank tolerance");
    sub->add_option("--tol-eig", a.tol_eig, "eigenvalue tolerance");
    sub->add_option("--budget", a.budget, "regular-point samples for class enumeration")->check(CLI::PositiveNumber);
    sub->add_flag("--checks-only", a.checks_only, "report only invariant residuals; exit 1 if any fails");
    sub->add_flag("--strict", a.strict, "exit 1 if any stage fails");
    sub->callback([&a, verb] { a.verb = verb; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }
  try {
    return run(a);
  } catch (const std::exception& e) {
    std::cerr << "polarrep: internal error: " << e.what() << "\n";
    return 1;
  }
}

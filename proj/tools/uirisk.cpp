// uirisk: command-line front end for the library.
//
// Exit codes: 0 success, 1 analysis could not conclude, 2 invalid input,
// 3 file I/O failure. Diagnostics are a single line on stderr.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "uirisk/convergence.hpp"
#include "uirisk/folding.hpp"
#include "uirisk/invest.hpp"
#include "uirisk/io.hpp"
#include "uirisk/risk_measure.hpp"
#include "uirisk/ui_diag.hpp"

namespace {

using namespace uirisk;
using io::Json;

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kIo = 3 };

struct Output {
  std::string path;
  std::string format = "json";

  void emit(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
    } else {
      io::write_file(path, text);
    }
  }
};

// Counts accept "1e4" as well as "10000".
std::size_t count(const std::string& text, const char* flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw std::invalid_argument(std::string(flag) + " expects a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> real_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument(std::string(flag) + " expects comma-separated numbers, got '" + text + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(flag) + " is empty");
  return out;
}

// "k=4,iters=1e5,seed=7"
SearchConfig parse_search(const std::string& text) {
  SearchConfig config;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--search entries must be key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "k") {
      config.atoms = static_cast<int>(count(value, "--search k"));
    } else if (key == "iters") {
      config.iterations = count(value, "--search iters");
    } else if (key == "seed") {
      config.seed = count(value, "--search seed");
    } else {
      throw std::invalid_argument("--search: unknown key '" + key + "'");
    }
  }
  return config;
}

DistributionFamily load_family(const std::string& name, std::size_t horizon, std::uint64_t seed,
                               std::optional<DiscreteDistribution>* limit = nullptr) {
  std::error_code ec;
  if (std::filesystem::is_directory(name, ec)) return io::family_from_directory(name, horizon);
  io::BuiltinFamily b = io::builtin_family(name, horizon, seed);
  if (limit) *limit = b.limit;
  return b.family;
}

void add_output(CLI::App* cmd, Output& out, bool csv) {
  cmd->add_option("--out,-o", out.path, "Write the report here instead of stdout");
  if (csv) cmd->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk measures, folding scores and uniform integrability diagnostics"};
  app.require_subcommand(1);
  Output out;

  // risk eval
  auto* risk = app.add_subcommand("risk", "Risk measure evaluation")->require_subcommand(1);
  auto* risk_eval = risk->add_subcommand("eval", "Evaluate a risk measure on a position");
  std::string measure_text;
  std::string dist_text;
  risk_eval->add_option("--measure", measure_text, "Measure spec (JSON text or file)")->required();
  risk_eval->add_option("--dist", dist_text, "Position (JSON/CSV file or JSON text)")->required();
  add_output(risk_eval, out, false);

  // fold score
  auto* fold = app.add_subcommand("fold", "Folding scores")->require_subcommand(1);
  auto* fold_score = fold->add_subcommand("score", "Empirical folding score by seeded search");
  std::string search_text = "k=4,iters=1e5,seed=7";
  fold_score->add_option("--measure", measure_text, "Measure spec (JSON text or file)")->required();
  fold_score->add_option("--search", search_text, "Search settings k=ATOMS,iters=N,seed=S");
  add_output(fold_score, out, false);

  // ui check
  auto* ui = app.add_subcommand("ui", "Uniform integrability diagnostics")->require_subcommand(1);
  auto* ui_check = ui->add_subcommand("check", "Tail envelopes and verdict for a family");
  std::string family_name;
  std::string horizon_text = "1e4";
  std::string grid_text = "dyadic:20";
  std::string distortion_text;
  std::string envelope_path;
  std::string seed_text = "7";
  ui_check->add_option("--family", family_name, "Builtin family name or directory of CSV/JSON laws")->required();
  ui_check->add_option("--horizon", horizon_text, "Number of members N");
  ui_check->add_option("--grid", grid_text, "dyadic:K or a comma list of levels");
  ui_check->add_option("--distortion", distortion_text, "Test distortion in D_c (JSON text or file)");
  ui_check->add_option("--envelope-csv", envelope_path, "Also write the envelope series as CSV");
  ui_check->add_option("--seed", seed_text, "Seed for sampled builtin families");
  add_output(ui_check, out, true);

  // conv lln | es | subseq
  auto* conv = app.add_subcommand("conv", "Convergence experiments")->require_subcommand(1);
  auto* conv_lln = conv->add_subcommand("lln", "Weak law of large numbers experiment");
  std::string gen_text = "coin";
  std::string nmax_text = "1e4";
  std::string reps_text = "200";
  std::string rho_text = R"({"kind":"ies"})";
  std::string rho_prime_text;
  conv_lln->add_option("--gen", gen_text, "coin, pareto:ALPHA or zero");
  conv_lln->add_option("--nmax", nmax_text, "Largest sample size");
  conv_lln->add_option("--reps", reps_text, "Replications");
  conv_lln->add_option("--seed", seed_text, "Seed");
  conv_lln->add_option("--rho", rho_text, "Measure for the upper envelope");
  conv_lln->add_option("--rho-prime", rho_prime_text, "Measure for the lower envelope (default: --rho)");
  add_output(conv_lln, out, true);

  auto* conv_es = conv->add_subcommand("es", "ES errors along a convergent family");
  std::string levels_text = "0.5,0.9,0.99";
  std::string limit_text;
  conv_es->add_option("--family", family_name, "Builtin family name or directory")->required();
  conv_es->add_option("--horizon", horizon_text, "Number of members");
  conv_es->add_option("--levels", levels_text, "Comma list of ES levels");
  conv_es->add_option("--limit", limit_text, "Limit law (required for directories)");
  conv_es->add_option("--seed", seed_text, "Seed for sampled builtin families");
  add_output(conv_es, out, true);

  auto* conv_subseq = conv->add_subcommand("subseq", "Greedy w1-convergent subsequence");
  std::string max_levels_text = "20";
  conv_subseq->add_option("--family", family_name, "Builtin family name or directory")->required();
  conv_subseq->add_option("--horizon", horizon_text, "Number of members");
  conv_subseq->add_option("--levels", max_levels_text, "Maximum number of nesting levels");
  conv_subseq->add_option("--seed", seed_text, "Seed for sampled builtin families");
  add_output(conv_subseq, out, false);

  // invest solve | prop61
  auto* invest = app.add_subcommand("invest", "Constrained utility maximization")->require_subcommand(1);
  auto* invest_solve = invest->add_subcommand("solve", "eps-optimizer for one instance");
  std::string spec_text;
  std::string eps_text = "1e-3";
  invest_solve->add_option("--spec", spec_text, "Problem spec (JSON text or file); defaults otherwise");
  invest_solve->add_option("--eps", eps_text, "Target accuracy");
  invest_solve->add_option("--seed", seed_text, "Seed");
  add_output(invest_solve, out, true);

  auto* invest_prop = invest->add_subcommand("prop61", "Sample-approximation convergence experiment");
  std::string prop_levels_text = "8";
  invest_prop->add_option("--spec", spec_text, "Problem spec (JSON text or file); defaults otherwise");
  invest_prop->add_option("--levels", prop_levels_text, "Number of sample sizes 100·2^(n-1)");
  invest_prop->add_option("--seed", seed_text, "Seed");
  add_output(invest_prop, out, false);

  // gallery
  auto* gallery = app.add_subcommand("gallery", "Measures with infinite or divergent folding scores");
  gallery->add_option("--seed", seed_text, "Seed");
  add_output(gallery, out, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    for (char& c : what) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "uirisk: usage error: " << what << "\n";
    return kInvalid;
  }

  try {
    const std::uint64_t seed = count(seed_text, "--seed");
    if (risk_eval->parsed()) {
      const RiskMeasure rho = io::measure_from_json(io::parse_json(measure_text));
      const auto first = dist_text.find_first_not_of(" \t");
      const Position x = (first != std::string::npos && dist_text[first] == '{')
                             ? io::position_from_json(io::parse_json(dist_text))
                             : io::load_position(dist_text);
      const ExtendedReal value = evaluate(rho, x);
      Json report = {{"measure", io::to_json(rho)}, {"name", rho.name()}, {"value", io::to_json(value)}};
      out.emit(io::dump(report));
    } else if (fold_score->parsed()) {
      const RiskMeasure rho = io::measure_from_json(io::parse_json(measure_text));
      const SearchConfig config = parse_search(search_text);
      Json report = {{"measure", io::to_json(rho)}, {"name", rho.name()}};
      report["search"] = {{"atoms", config.atoms}, {"iterations", config.iterations}, {"seed", config.seed}};
      report["report"] = io::to_json(empirical_folding_score(rho, config));
      out.emit(io::dump(report));
    } else if (ui_check->parsed()) {
      const DistributionFamily family = load_family(family_name, count(horizon_text, "--horizon"), seed);
      const UIReport r = tail_envelope(family, parse_grid(grid_text));
      if (!envelope_path.empty()) io::write_file(envelope_path, io::envelope_csv(r));
      if (out.format == "csv") {
        out.emit(io::envelope_csv(r));
      } else {
        Json report = io::to_json(r);
        if (!distortion_text.empty()) {
          const DistortionFunction h = io::distortion_from_json(io::parse_json(distortion_text));
          report["distortion_test"] = {{"h", io::to_json(h)}, {"growth", io::to_json(ui_from_distortion(family, h))}};
        }
        out.emit(io::dump(report));
      }
    } else if (conv_lln->parsed()) {
      LlnConfig config;
      config.generator = SampleGenerator::parse(gen_text);
      config.n_max = count(nmax_text, "--nmax");
      config.reps = count(reps_text, "--reps");
      config.seed = seed;
      const RiskMeasure rho = io::measure_from_json(io::parse_json(rho_text));
      const RiskMeasure rho_prime =
          rho_prime_text.empty() ? rho : io::measure_from_json(io::parse_json(rho_prime_text));
      const LlnReport r = lln_experiment(config, rho, rho_prime);
      if (out.format == "csv") {
        out.emit(io::lln_csv(r));
      } else {
        Json report = {{"generator", config.generator.name()}, {"reps", config.reps}, {"seed", config.seed}};
        report["result"] = io::to_json(r);
        out.emit(io::dump(report));
      }
    } else if (conv_es->parsed()) {
      std::optional<DiscreteDistribution> limit;
      const DistributionFamily family = load_family(family_name, count(horizon_text, "--horizon"), seed, &limit);
      if (!limit_text.empty()) {
        const Position p = io::load_position(limit_text);
        limit = std::holds_alternative<DiscreteDistribution>(p) ? std::get<DiscreteDistribution>(p)
                                                                : std::get<StateVector>(p).law();
      }
      if (!limit) throw std::invalid_argument("family '" + family_name + "' has no known limit; pass --limit");
      std::vector<DiscreteDistribution> sequence;
      for (std::size_t n = 1; n <= family.horizon(); ++n) sequence.push_back(family.member(n));
      const EsConvergenceReport r = es_convergence_experiment(sequence, *limit, real_list(levels_text, "--levels"));
      out.emit(out.format == "csv" ? io::es_convergence_csv(r) : io::dump(io::to_json(r)));
    } else if (conv_subseq->parsed()) {
      const DistributionFamily family = load_family(family_name, count(horizon_text, "--horizon"), seed);
      const SubsequenceReport r =
          subsequence_extract(family, static_cast<int>(std::min<std::size_t>(count(max_levels_text, "--levels"), 60)));
      out.emit(io::dump(io::to_json(r)));
    } else if (invest_solve->parsed() || invest_prop->parsed()) {
      io::InvestSpec spec;
      if (!spec_text.empty()) spec = io::invest_spec_from_json(io::parse_json(spec_text));
      const InvestProblem& p = spec.problem;
      Json problem = {{"n", p.n}, {"utility", io::to_json(p.u)}, {"rho", io::to_json(p.rho)},
                      {"price", io::to_json(p.price)}, {"r0", p.r0}, {"x0", p.x0}};
      if (invest_solve->parsed()) {
        const double eps = real_list(eps_text, "--eps").front();
        const SolveReport r = solve_eps(p, spec.background, eps, seed);
        if (out.format == "csv") {
          out.emit(io::solution_csv(r));
        } else {
          out.emit(io::dump({{"problem", problem}, {"eps", eps}, {"seed", seed}, {"solution", io::to_json(r)}}));
        }
      } else {
        const Prop61Report r = prop61_experiment(p, spec.background, count(prop_levels_text, "--levels"), seed);
        out.emit(io::dump({{"problem", problem}, {"seed", seed}, {"result", io::to_json(r)}}));
      }
    } else if (gallery->parsed()) {
      Json entries = Json::array();
      for (const auto& e : counterexample_gallery(seed)) entries.push_back(io::to_json(e));
      out.emit(io::dump({{"seed", seed}, {"entries", entries}}));
    }
  } catch (const io::IoError& e) {
    std::cerr << "uirisk: I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const io::SpecError& e) {
    std::cerr << "uirisk: malformed spec: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "uirisk: invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "uirisk: invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "uirisk: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}

#include "uirisk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "uirisk/random.hpp"

namespace uirisk::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

Json parse_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] != '{' && text[first] != '[') {
    return load_json(text);
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
}

Json load_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw SpecError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(std::string("missing field '") + key + "'");
  return *it;
}

double real(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double real_or(const Json& j, const char* key, double fallback) { return j.contains(key) ? real(j, key) : fallback; }

std::vector<double> reals(const Json& v, const char* key) {
  if (!v.is_array()) throw SpecError(std::string("field '") + key + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw SpecError(std::string("field '") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> reals(const Json& j, const char* key, bool) { return reals(field(j, key), key); }

std::string kind_of(const Json& j) {
  const Json& k = field(j, "kind");
  if (!k.is_string()) throw SpecError("field 'kind' must be a string");
  return k.get<std::string>();
}

std::optional<distortion::GeometricTail> tail_from_json(const Json& j) {
  if (!j.contains("tail") || j["tail"].is_null()) return std::nullopt;
  const Json& t = j["tail"];
  const double first = real(t, "first_index");
  if (first != std::floor(first) || first < 0 || first > 1000) throw SpecError("tail first_index must be an integer");
  return distortion::GeometricTail{real(t, "scale"), static_cast<int>(first)};
}

template <class F>
auto rethrow_as_spec(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(e.what());
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  } catch (const std::domain_error& e) {
    throw SpecError(e.what());
  }
}

DistortionFunction distortion_impl(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "identity") return DistortionFunction::identity();
  if (kind == "es_clip") return DistortionFunction::es_clip(real(j, "p"));
  if (kind == "power") return DistortionFunction::power(real(j, "alpha"));
  if (kind == "ies") return DistortionFunction::ies();
  if (kind == "piecewise_linear") {
    return DistortionFunction::piecewise_linear(reals(j, "t", true), reals(j, "v", true));
  }
  if (kind == "es_level_sum") return DistortionFunction::es_level_sum(reals(j, "levels", true), tail_from_json(j));
  if (kind == "normalized_sum") {
    const Json& parts = field(j, "components");
    if (!parts.is_array()) throw SpecError("field 'components' must be an array");
    std::vector<DistortionFunction> components;
    for (const auto& p : parts) components.push_back(distortion_impl(p));
    return DistortionFunction::normalized_sum(reals(j, "coefficients", true), std::move(components),
                                              tail_from_json(j));
  }
  if (kind == "pointwise_min") {
    const Json& parts = field(j, "parts");
    if (!parts.is_array() || parts.size() != 2) throw SpecError("pointwise_min needs exactly two parts");
    return DistortionFunction::pointwise_min(distortion_impl(parts[0]), distortion_impl(parts[1]));
  }
  throw SpecError("unknown distortion kind '" + kind + "'");
}

}  // namespace

DistortionFunction distortion_from_json(const Json& j) {
  return rethrow_as_spec([&] { return distortion_impl(j); });
}

Json to_json(const DistortionFunction& h) {
  return std::visit(
      [&](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, distortion::Identity>) {
          return {{"kind", "identity"}};
        } else if constexpr (std::is_same_v<T, distortion::EsClip>) {
          return {{"kind", "es_clip"}, {"p", s.p}};
        } else if constexpr (std::is_same_v<T, distortion::Power>) {
          return {{"kind", "power"}, {"alpha", s.alpha}};
        } else if constexpr (std::is_same_v<T, distortion::Ies>) {
          return {{"kind", "ies"}};
        } else if constexpr (std::is_same_v<T, distortion::PiecewiseLinear>) {
          return {{"kind", "piecewise_linear"}, {"t", s.t}, {"v", s.v}};
        } else if constexpr (std::is_same_v<T, distortion::NormalizedSum>) {
          Json parts = Json::array();
          for (const auto& c : s.components) parts.push_back(to_json(c));
          Json out = {{"kind", "normalized_sum"}, {"coefficients", s.coefficients}, {"components", parts}};
          if (s.tail) out["tail"] = {{"scale", s.tail->scale}, {"first_index", s.tail->first_index}};
          return out;
        } else {
          return {{"kind", "pointwise_min"}, {"parts", {to_json(s.parts[0]), to_json(s.parts[1])}}};
        }
      },
      h.spec());
}

RiskMeasure measure_from_json(const Json& j) {
  return rethrow_as_spec([&]() -> RiskMeasure {
    const std::string kind = kind_of(j);
    if (kind == "distortion") return RiskMeasure::distortion(distortion_impl(field(j, "h")));
    if (kind == "entropic") return RiskMeasure::entropic(real(j, "beta"));
    if (kind == "scenario_sup") {
      const Json& list = field(j, "scenarios");
      if (!list.is_array()) throw SpecError("field 'scenarios' must be an array");
      std::vector<std::vector<double>> scenarios;
      for (const auto& s : list) scenarios.push_back(reals(s, "scenarios"));
      return RiskMeasure::scenario_sup(std::move(scenarios));
    }
    if (kind == "capacity") {
      const double cells = real(j, "cells");
      if (cells != std::floor(cells) || cells < 1 || cells > 20) throw SpecError("capacity cells must be 1..20");
      return RiskMeasure::capacity(static_cast<std::size_t>(cells), reals(j, "nu", true));
    }
    if (kind == "kusuoka_sup") {
      const Json& list = field(j, "members");
      if (!list.is_array()) throw SpecError("field 'members' must be an array");
      std::vector<DistortionFunction> members;
      for (const auto& m : list) members.push_back(distortion_impl(m));
      return RiskMeasure::kusuoka_sup(std::move(members));
    }
    return RiskMeasure::distortion(distortion_impl(j));
  });
}

Json to_json(const RiskMeasure& rho) {
  return std::visit(
      [&](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, measure::Distortion>) {
          return to_json(s.h);
        } else if constexpr (std::is_same_v<T, measure::Entropic>) {
          return {{"kind", "entropic"}, {"beta", s.beta}};
        } else if constexpr (std::is_same_v<T, measure::ScenarioSup>) {
          return {{"kind", "scenario_sup"}, {"scenarios", s.scenarios}};
        } else if constexpr (std::is_same_v<T, measure::Capacity>) {
          return {{"kind", "capacity"}, {"cells", s.cells}, {"nu", s.nu}};
        } else {
          Json members = Json::array();
          for (const auto& m : s.members) members.push_back(to_json(m));
          return {{"kind", "kusuoka_sup"}, {"members", members}};
        }
      },
      rho.spec());
}

DiscreteDistribution distribution_from_json(const Json& j) {
  return rethrow_as_spec([&] {
    std::vector<double> atoms = reals(j, "atoms", true);
    if (atoms.empty()) throw SpecError("distribution needs at least one atom");
    if (!j.contains("weights")) return DiscreteDistribution::uniform_over(atoms);
    return DiscreteDistribution(std::move(atoms), reals(j, "weights", true));
  });
}

Json to_json(const DiscreteDistribution& x) {
  return {{"atoms", std::vector<double>(x.atoms().begin(), x.atoms().end())},
          {"weights", std::vector<double>(x.weights().begin(), x.weights().end())}};
}

Position position_from_json(const Json& j) {
  if (j.is_object() && j.contains("values")) {
    return rethrow_as_spec([&]() -> Position {
      std::vector<double> values = reals(j, "values", true);
      if (!j.contains("probabilities")) return StateVector(std::move(values));
      return StateVector(std::move(values), reals(j, "probabilities", true));
    });
  }
  return distribution_from_json(j);
}

Json to_json(const Position& x) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&x)) return to_json(*d);
  const auto& s = std::get<StateVector>(x);
  return {{"values", s.values}, {"probabilities", s.probabilities}};
}

namespace {

std::optional<double> parse_real(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '"' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

DiscreteDistribution distribution_from_csv(const std::string& text) {
  std::vector<double> atoms;
  std::vector<double> weights;
  int columns = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    const int here = comma == std::string::npos ? 1 : 2;
    const auto first = parse_real(std::string_view(line).substr(0, comma));
    std::optional<double> second;
    if (here == 2) second = parse_real(std::string_view(line).substr(comma + 1));
    if (!first || (here == 2 && !second)) {
      if (atoms.empty() && columns == 0) {
        columns = -1;  // header
        continue;
      }
      throw SpecError("CSV line " + std::to_string(number) + " is not numeric");
    }
    if (columns <= 0) columns = here;
    if (here != columns) throw SpecError("CSV line " + std::to_string(number) + " has the wrong column count");
    atoms.push_back(*first);
    if (here == 2) weights.push_back(*second);
  }
  if (atoms.empty()) throw SpecError("CSV holds no samples");
  return rethrow_as_spec([&] {
    if (columns == 1) return from_samples(atoms);
    return DiscreteDistribution(std::move(atoms), std::move(weights));
  });
}

Position load_position(const fs::path& path) {
  if (path.extension() == ".json") return position_from_json(load_json(path));
  return distribution_from_csv(read_file(path));
}

Utility utility_from_json(const Json& j) {
  return rethrow_as_spec([&] {
    const Json& family = field(j, "family");
    if (!family.is_string()) throw SpecError("field 'family' must be a string");
    const std::string name = family.get<std::string>();
    const double a = real_or(j, "a", 1.0);
    const double b = real_or(j, "b", 0.5);
    if (name == "tanh") return Utility::tanh(a, b);
    if (name == "linear") return Utility::linear(a, b);
    if (name == "piecewise_linear") return Utility::piecewise_linear(a, b, reals(j, "x", true), reals(j, "y", true));
    throw SpecError("unknown utility family '" + name + "'");
  });
}

Json to_json(const Utility& u) {
  Json out = {{"family", u.name()}, {"a", u.a()}, {"b", u.b()}, {"lipschitz", u.lipschitz()}};
  if (!u.knots_x().empty()) {
    out["x"] = u.knots_x();
    out["y"] = u.knots_y();
  }
  return out;
}

InvestSpec invest_spec_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("invest spec must be a JSON object");
  InvestSpec spec;
  InvestProblem& p = spec.problem;
  if (j.contains("n")) {
    const double n = real(j, "n");
    if (n != std::floor(n) || n < 1 || n > 1e6) throw SpecError("n must be a positive integer");
    p.n = static_cast<std::size_t>(n);
  }
  if (j.contains("utility")) p.u = utility_from_json(j["utility"]);
  if (j.contains("rho")) p.rho = distortion_from_json(j["rho"]);
  if (j.contains("price")) p.price = distortion_from_json(j["price"]);
  p.r0 = real_or(j, "r0", p.r0);
  p.x0 = real_or(j, "x0", p.x0);
  if (j.contains("background")) {
    const Json& y = j["background"];
    if (y.is_object() && y.contains("grid")) {
      const double points = real(y, "grid");
      if (points != std::floor(points) || points < 2 || points > 1e6) throw SpecError("grid must be an integer >= 2");
      spec.background = default_background(static_cast<std::size_t>(points));
    } else {
      spec.background = distribution_from_json(y);
    }
  }
  rethrow_as_spec([&] {
    p.validate();
    return 0;
  });
  return spec;
}

// Families -------------------------------------------------------------------

std::vector<std::string> builtin_family_names() {
  return {"nbernoulli", "single", "bounded", "shifted", "alternating", "ab", "empirical"};
}

namespace {

DiscreteDistribution base_law() {
  const std::vector<double> atoms{-2.0, -1.0, 0.0, 1.0, 2.0};
  const std::vector<double> weights{0.1, 0.2, 0.4, 0.2, 0.1};
  return DiscreteDistribution(atoms, weights);
}

}  // namespace

BuiltinFamily builtin_family(const std::string& name, std::size_t horizon, std::uint64_t seed) {
  if (horizon == 0) throw SpecError("horizon must be positive");
  if (name == "nbernoulli") {
    return {DistributionFamily(
                "nbernoulli",
                [](std::size_t n) {
                  const double dn = static_cast<double>(n);
                  return DiscreteDistribution::bernoulli(1.0 / dn, dn);
                },
                horizon),
            DiscreteDistribution::point_mass(0.0)};
  }
  if (name == "single") {
    return {DistributionFamily(
                "single", [](std::size_t) { return base_law(); }, horizon),
            base_law()};
  }
  if (name == "bounded") {
    return {DistributionFamily(
                "bounded",
                [](std::size_t n) {
                  const double c = 1.0 + 1.0 / static_cast<double>(n);
                  return DiscreteDistribution::uniform_over(std::vector<double>{-c, c});
                },
                horizon),
            DiscreteDistribution::uniform_over(std::vector<double>{-1.0, 1.0})};
  }
  if (name == "shifted") {
    return {DistributionFamily(
                "shifted", [](std::size_t n) { return shift(base_law(), 1.0 / static_cast<double>(n)); }, horizon),
            base_law()};
  }
  if (name == "alternating") {
    return {DistributionFamily(
                "alternating",
                [](std::size_t n) { return DiscreteDistribution::point_mass(n % 2 == 0 ? 1.0 : -1.0); }, horizon),
            std::nullopt};
  }
  if (name == "ab") {
    return {DistributionFamily(
                "ab",
                [](std::size_t n) {
                  return n % 2 == 1 ? base_law() : DiscreteDistribution::uniform_over(std::vector<double>{3.0, 5.0});
                },
                horizon),
            std::nullopt};
  }
  if (name == "empirical") {
    const QuantileFunction q = base_law().quantile();
    return {DistributionFamily(
                "empirical",
                [q, seed](std::size_t n) {
                  auto rng = make_rng(seed, "io.builtin_family.empirical", n);
                  std::vector<double> draws(n);
                  for (double& d : draws) d = q(uniform01_open_left(rng));
                  return from_samples(draws);
                },
                horizon),
            base_law()};
  }
  throw SpecError("unknown family '" + name + "'");
}

DistributionFamily family_from_directory(const fs::path& dir, std::size_t horizon) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string());
  std::sort(files.begin(), files.end());
  if (files.size() > horizon) files.resize(horizon);
  if (files.empty()) throw IoError("no files in " + dir.string());
  std::vector<DiscreteDistribution> members;
  for (const auto& f : files) {
    const Position p = load_position(f);
    if (const auto* d = std::get_if<DiscreteDistribution>(&p)) {
      members.push_back(*d);
    } else {
      members.push_back(std::get<StateVector>(p).law());
    }
  }
  return DistributionFamily(dir.filename().string(), std::move(members));
}

// Reports --------------------------------------------------------------------

Json to_json(const ExtendedReal& v) {
  if (v.is_positive_infinity()) return "inf";
  if (v.is_negative_infinity()) return "-inf";
  return number(v.value());
}

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

Json to_json(const FoldingReport& r) {
  Json out = {{"ratio", to_json(r.ratio)}};
  out["bound"] = r.bound ? to_json(*r.bound) : Json(nullptr);
  out["rho_abs"] = to_json(r.rho_abs);
  out["rho_pos"] = to_json(r.rho_pos);
  out["rho_neg"] = to_json(r.rho_neg);
  out["witness"] = to_json(r.witness);
  return out;
}

Json to_json(const GalleryEntry& e) {
  Json out = {{"label", e.label}, {"measure", to_json(e.measure)}, {"report", to_json(e.report)}};
  Json family = Json::array();
  for (const auto& [lambda, ratio] : e.family) family.push_back({{"parameter", lambda}, {"ratio", to_json(ratio)}});
  out["family"] = family;
  out["note"] = e.note;
  return out;
}

Json to_json(const UIReport& r) {
  Json out = {{"label", r.label}, {"horizon", r.horizon}, {"verdict", to_string(r.verdict)}, {"reason", r.reason}};
  out["crosscheck_ok"] = r.crosscheck_ok;
  Json env = Json::array();
  for (const auto& e : r.envelope) {
    env.push_back({{"p", e.p}, {"env_abs", number(e.env_abs)}, {"env_pos", number(e.env_pos)},
                   {"env_neg", number(e.env_neg)}});
  }
  out["envelope"] = env;
  if (r.construction) {
    const DvpResult& c = *r.construction;
    out["construction"] = {{"h", to_json(c.h)},
                           {"levels", numbers(c.levels)},
                           {"g_one", number(c.g_one)},
                           {"certified_bound", number(c.certified_bound)},
                           {"attained_sup", number(c.attained_sup)}};
  } else {
    out["construction"] = nullptr;
  }
  return out;
}

Json to_json(const GrowthReport& r) {
  Json cps = Json::array();
  for (const auto& [n, v] : r.checkpoints) cps.push_back({{"n", n}, {"sup", number(v)}});
  return {{"verdict", to_string(r.verdict)}, {"sup", number(r.sup)}, {"reason", r.reason}, {"checkpoints", cps}};
}

Json to_json(const FinitenessReport& r) {
  Json out = {{"expectation_dominated", r.expectation_dominated}, {"constant", to_json(r.constant)}};
  out["terms"] = r.terms;
  out["witness_value"] = number(r.witness_value);
  out["threshold_reached"] = r.threshold_reached;
  out["levels"] = numbers(r.levels);
  out["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return out;
}

Json to_json(const LlnReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"exceedance", numbers(row.exceedance)},
                    {"rho_env", number(row.rho_env)},
                    {"rho_prime_env", number(row.rho_prime_env)}});
  }
  return {{"deltas", numbers(r.deltas)}, {"hypothesis_violated", r.hypothesis_violated}, {"rows", rows}};
}

Json to_json(const EsConvergenceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"p", row.p}, {"error", number(row.error)}});
  Json trends = Json::array();
  for (const auto& t : r.trends) {
    trends.push_back({{"p", t.p},
                      {"log_log_slope", number(t.log_log_slope)},
                      {"monotone_fraction", number(t.monotone_fraction)}});
  }
  return {{"ies_env_pos", number(r.ies_env_pos)}, {"ies_env_neg", number(r.ies_env_neg)}, {"trends", trends},
          {"rows", rows}};
}

Json to_json(const SubsequenceReport& r) {
  return {{"indices", r.indices},     {"radii", numbers(r.radii)},  {"cluster", r.cluster},
          {"max_gap", number(r.max_gap)}, {"candidate", to_json(r.candidate)}};
}

Json to_json(const SolveReport& r) {
  return {{"objective", number(r.objective)},
          {"rho", number(r.values.rho)},
          {"price", number(r.values.price)},
          {"gap", number(r.gap)},
          {"certified", r.certified},
          {"start_objectives", numbers(r.start_objectives)},
          {"x", numbers(r.x)}};
}

Json to_json(const Prop61Report& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"n", s.n},
                     {"sample_size", s.sample_size},
                     {"eps", number(s.eps)},
                     {"w1_y", number(s.w1_y)},
                     {"w1_to_cluster", number(s.w1_to_cluster)},
                     {"w1_to_previous", number(s.w1_to_previous)},
                     {"objective_n", number(s.objective_n)},
                     {"sup_estimate", number(s.sup_estimate)},
                     {"feasibility_excess", number(s.feasibility_excess)},
                     {"chain_holds", s.chain_holds}});
  }
  return {{"candidate_ok", r.candidate_ok},
          {"cluster_objective", number(r.cluster_objective)},
          {"best_known", number(r.best_known)},
          {"lipschitz", number(r.lipschitz)},
          {"solver_tolerance", number(r.solver_tolerance)},
          {"cluster_members", r.cluster_members},
          {"cluster", numbers(r.cluster)},
          {"steps", steps}};
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, end);
}

}  // namespace

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::string envelope_csv(const UIReport& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& e : r.envelope) rows.push_back({e.p, e.env_abs, e.env_pos, e.env_neg});
  return csv({"p", "env_abs", "env_pos", "env_neg"}, rows);
}

std::string lln_csv(const LlnReport& r) {
  std::vector<std::string> header{"n"};
  for (double d : r.deltas) header.push_back("exceed_" + format_number(d));
  header.push_back("rho_env");
  header.push_back("rhoprime_env");
  std::vector<std::vector<double>> rows;
  for (const auto& row : r.rows) {
    std::vector<double> line{static_cast<double>(row.n)};
    line.insert(line.end(), row.exceedance.begin(), row.exceedance.end());
    line.push_back(row.rho_env);
    line.push_back(row.rho_prime_env);
    rows.push_back(std::move(line));
  }
  return csv(header, rows);
}

std::string es_convergence_csv(const EsConvergenceReport& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : r.rows) rows.push_back({static_cast<double>(row.n), row.p, row.error});
  return csv({"n", "p", "error"}, rows);
}

std::string solution_csv(const SolveReport& r) {
  std::vector<std::vector<double>> rows;
  const double n = static_cast<double>(r.x.size());
  for (std::size_t i = 0; i < r.x.size(); ++i) rows.push_back({(static_cast<double>(i) + 0.5) / n, r.x[i]});
  return csv({"level", "quantile"}, rows);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace uirisk::io

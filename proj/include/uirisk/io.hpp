#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uirisk/convergence.hpp"
#include "uirisk/distortion.hpp"
#include "uirisk/distribution.hpp"
#include "uirisk/folding.hpp"
#include "uirisk/invest.hpp"
#include "uirisk/risk_measure.hpp"
#include "uirisk/ui_diag.hpp"

namespace uirisk::io {

using Json = nlohmann::ordered_json;

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed JSON text, or JSON that does not describe a valid object.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Parses JSON text, or reads it from a file when `text` names one.
Json parse_json(const std::string& text);
Json load_json(const std::filesystem::path& path);

// Specs --------------------------------------------------------------------

/// {"kind":"es_clip","p":0.75}, {"kind":"power","alpha":0.5}, {"kind":"ies"},
/// {"kind":"identity"}, {"kind":"piecewise_linear","t":[..],"v":[..]},
/// {"kind":"es_level_sum","levels":[..]},
/// {"kind":"normalized_sum","coefficients":[..],"components":[..],"tail":{"scale":s,"first_index":k}},
/// {"kind":"pointwise_min","parts":[h1,h2]}.
DistortionFunction distortion_from_json(const Json& j);
Json to_json(const DistortionFunction& h);

/// Any distortion spec, or {"kind":"distortion","h":spec}, {"kind":"entropic","beta":b},
/// {"kind":"scenario_sup","scenarios":[[..],..]}, {"kind":"capacity","cells":k,"nu":[..]},
/// {"kind":"kusuoka_sup","members":[spec,..]}.
RiskMeasure measure_from_json(const Json& j);
Json to_json(const RiskMeasure& rho);

/// {"atoms":[..],"weights":[..]} (weights optional, uniform by default).
DiscreteDistribution distribution_from_json(const Json& j);
Json to_json(const DiscreteDistribution& x);

/// A distribution, or a state vector {"values":[..],"probabilities":[..]}.
Position position_from_json(const Json& j);
Json to_json(const Position& x);

/// One float per line (samples), or "atom,weight" rows. Blank lines and a
/// non-numeric header line are skipped.
DiscreteDistribution distribution_from_csv(const std::string& text);

/// .json files hold a distribution or state vector; anything else is CSV.
Position load_position(const std::filesystem::path& path);

Utility utility_from_json(const Json& j);
Json to_json(const Utility& u);

/// {"n":50,"utility":{"family":"tanh","a":1,"b":0.5},"rho":spec,"price":spec,
///  "r0":1,"x0":0.5,"background":distribution or {"grid":201}}. Missing fields
/// keep their defaults.
struct InvestSpec {
  InvestProblem problem;
  DiscreteDistribution background = default_background();
};
InvestSpec invest_spec_from_json(const Json& j);

// Families -----------------------------------------------------------------

struct BuiltinFamily {
  DistributionFamily family;
  /// The limit law for families that converge in w1.
  std::optional<DiscreteDistribution> limit;
};

/// nbernoulli (n·Bernoulli(1/n)), single (one law repeated), bounded
/// (±(1 + 1/n)), shifted (a fixed law plus 1/n), alternating (δ_{(−1)^n}),
/// ab (two laws alternating, the first at odd n), empirical (n-sample of a
/// fixed law, seeded).
BuiltinFamily builtin_family(const std::string& name, std::size_t horizon, std::uint64_t seed = 7);
std::vector<std::string> builtin_family_names();

/// Every file in `dir` in lexicographic order, one member per file.
DistributionFamily family_from_directory(const std::filesystem::path& dir, std::size_t horizon);

// Reports ------------------------------------------------------------------

/// Finite values as numbers, infinities as "inf" / "-inf".
Json to_json(const ExtendedReal& v);
/// NaN as null.
Json number(double v);

Json to_json(const FoldingReport& r);
Json to_json(const GalleryEntry& e);
Json to_json(const UIReport& r);
Json to_json(const GrowthReport& r);
Json to_json(const FinitenessReport& r);
Json to_json(const LlnReport& r);
Json to_json(const EsConvergenceReport& r);
Json to_json(const SubsequenceReport& r);
Json to_json(const SolveReport& r);
Json to_json(const Prop61Report& r);

/// RFC 4180 CSV with a header row and CRLF line ends. Numbers use the
/// shortest round-trip form.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

std::string envelope_csv(const UIReport& r);
std::string lln_csv(const LlnReport& r);
std::string es_convergence_csv(const EsConvergenceReport& r);
std::string solution_csv(const SolveReport& r);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

}  // namespace uirisk::io

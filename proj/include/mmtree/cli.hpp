#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmtree/coefficients.hpp"
#include "mmtree/model_crr.hpp"
#include "mmtree/pricer.hpp"
#include "mmtree/tree_model.hpp"

namespace mmtree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitUnsupported = 3;
inline constexpr int kExitRegime = 4;

/// Invalid run configuration; `field` names the offending JSON key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct PayoffConfig {
  std::string kind = "call";  // call | put | constant
  double strike = 0.0;
  double value = 0.0;  // constant payoff level

  Payoff to_payoff() const;
};

struct RunConfig {
  double spot = 0.0;
  PayoffConfig payoff;
  double maturity = 0.0;
  int steps = 0;
  ModelKind model = ModelKind::kCrrTd;
  World world = World::kRiskNeutral;
  MarketCoefficients coefficients{CoefficientCurve::constant(0.0),
                                  CoefficientCurve::constant(0.0),
                                  CoefficientCurve::constant(0.0)};
  std::optional<CoefficientCurve> ksrf_p;

  ModelSetup setup() const;
};

/// {"kind":"constant","value":v} | {"kind":"linear","a":a,"b":b} |
/// {"kind":"piecewise","knots":[[t,v],...]}
CoefficientCurve parse_curve(const nlohmann::json& j, const std::string& field);

/// Validates the whole document. `allow_zero_steps` admits steps = 0, which
/// only the tree dump accepts.
RunConfig parse_config(const nlohmann::json& j, bool allow_zero_steps = false);

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmtree::cli

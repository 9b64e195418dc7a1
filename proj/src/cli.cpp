#include "mmtree/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <variant>

#include "mmtree/error.hpp"
#include "mmtree/verification.hpp"

namespace mmtree::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

double number_field(const json& obj, const std::string& key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) throw ConfigError(field, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(field, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
  return d;
}

const json& object_field(const json& obj, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(key, "must be an object");
  return v;
}

}  // namespace

Payoff PayoffConfig::to_payoff() const {
  if (kind == "call") return Payoff::call(strike);
  if (kind == "put") return Payoff::put(strike);
  return Payoff::constant(value);
}

ModelSetup RunConfig::setup() const {
  ModelSetup s;
  s.kind = model;
  s.coefficients = coefficients;
  if (ksrf_p) s.ksrf_p = *ksrf_p;
  return s;
}

CoefficientCurve parse_curve(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "curve must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(field + ".kind", "missing or not a string");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") return CoefficientCurve::constant(number_field(j, "value", field));
    if (kind == "linear") {
      return CoefficientCurve::linear(number_field(j, "a", field), number_field(j, "b", field));
    }
    if (kind == "piecewise") {
      if (!j.contains("knots") || !j.at("knots").is_array()) {
        throw ConfigError(field + ".knots", "must be an array of [t, v] pairs");
      }
      std::vector<CoefficientCurve::Knot> knots;
      for (const auto& k : j.at("knots")) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ConfigError(field + ".knots", "each knot must be [t, v]");
        }
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      return CoefficientCurve::piecewise(std::move(knots));
    }
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field + ".kind", "unknown curve kind '" + kind + "'");
}

RunConfig parse_config(const json& j, bool allow_zero_steps) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  RunConfig c;

  c.spot = number_field(j, "spot", "");
  if (!(c.spot > 0.0)) throw ConfigError("spot", "must be positive");

  if (!j.contains("model") || !j.at("model").is_string()) {
    throw ConfigError("model", "missing or not a string");
  }
  const auto model = parse_model(j.at("model").get<std::string>());
  if (!model) throw ConfigError("model", "expected crr-td, ksrf-td, tri-classical or tri-new");
  c.model = *model;

  const auto& grid = object_field(j, "grid");
  c.maturity = number_field(grid, "maturity", "grid");
  if (!(c.maturity > 0.0)) throw ConfigError("grid.maturity", "must be positive");
  if (!grid.contains("steps") || !grid.at("steps").is_number_integer()) {
    throw ConfigError("steps", "grid.steps must be an integer");
  }
  const auto steps = grid.at("steps").get<long long>();
  if (steps < (allow_zero_steps ? 0 : 1) || steps > 1'000'000) {
    throw ConfigError("steps", "grid.steps must be at least " +
                                   std::string(allow_zero_steps ? "0" : "1"));
  }
  c.steps = static_cast<int>(steps);

  const auto& payoff = object_field(j, "payoff");
  if (!payoff.contains("kind") || !payoff.at("kind").is_string()) {
    throw ConfigError("payoff.kind", "missing or not a string");
  }
  c.payoff.kind = payoff.at("kind").get<std::string>();
  if (c.payoff.kind == "call" || c.payoff.kind == "put") {
    c.payoff.strike = number_field(payoff, "strike", "payoff");
    if (!(c.payoff.strike >= 0.0)) throw ConfigError("payoff.strike", "must be non-negative");
  } else if (c.payoff.kind == "constant") {
    c.payoff.value = number_field(payoff, "value", "payoff");
  } else {
    throw ConfigError("payoff.kind", "expected call, put or constant");
  }

  if (j.contains("world")) {
    const auto& w = j.at("world");
    if (w == "natural") {
      c.world = World::kNatural;
    } else if (w == "risk-neutral") {
      c.world = World::kRiskNeutral;
    } else {
      throw ConfigError("world", "expected natural or risk-neutral");
    }
  }

  for (const char* key : {"mu", "sigma", "rate"}) {
    if (!j.contains(key)) throw ConfigError(key, "missing");
  }
  c.coefficients = {parse_curve(j.at("mu"), "mu"), parse_curve(j.at("sigma"), "sigma"),
                    parse_curve(j.at("rate"), "rate")};
  const std::pair<const CoefficientCurve*, const char*> curves[] = {
      {&c.coefficients.mu, "mu"}, {&c.coefficients.sigma, "sigma"}, {&c.coefficients.rate, "rate"}};
  for (const auto& [curve, key] : curves) {
    if (!curve->covers(c.maturity)) throw ConfigError(key, "curve does not cover [0, maturity]");
  }
  if (c.steps >= 1) {
    try {
      c.coefficients.validate_on(c.maturity, c.steps);
    } catch (const DomainError& e) {
      const std::string msg = e.what();
      throw ConfigError(msg.rfind("sigma", 0) == 0 ? "sigma" : "rate", msg);
    }
  }

  if (j.contains("p")) {
    if (c.model != ModelKind::kKsrfTd) throw ConfigError("p", "only valid for model ksrf-td");
    c.ksrf_p = parse_curve(j.at("p"), "p");
    if (!c.ksrf_p->covers(c.maturity)) throw ConfigError("p", "curve does not cover [0, maturity]");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Output

namespace {

enum class Format { kTable, kCsv, kJson };

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v, bool full) {
  char buf[64];
  const auto res = full ? std::to_chars(buf, buf + sizeof buf, v)
                        : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 7);
  return std::string(buf, res.ptr);
}

std::string cell_text(const Cell& c, bool full) {
  if (std::holds_alternative<std::monostate>(c)) return full ? "" : "-";
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d, full);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::get<std::string>(c);
}

// `single` prints a one-row table as a JSON object instead of an array.
void render(const Table& t, Format format, bool single, std::ostream& out) {
  switch (format) {
    case Format::kCsv: {
      for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i], true);
        out << '\n';
      }
      return;
    }
    case Format::kJson: {
      json arr = json::array();
      for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
        arr.push_back(std::move(obj));
      }
      out << (single && arr.size() == 1 ? arr.front() : arr).dump(2) << '\n';
      return;
    }
    case Format::kTable:
      break;
  }
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(cell_text(row[i], false));
      width[i] = std::max(width[i], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << cells[i];
    }
    out << '\n';
  };
  emit(t.columns);
  for (const auto& line : text) emit(line);
}

// ---------------------------------------------------------------------------
// Commands

bool oracle_available(const RunConfig& c) {
  if (c.payoff.kind == "constant" || c.payoff.strike <= 0.0) return false;
  for (const auto* curve : {&c.coefficients.sigma, &c.coefficients.rate}) {
    if (curve->kind() == CoefficientCurve::Kind::kPiecewise) return false;
  }
  return true;
}

Table cmd_price(const RunConfig& c) {
  const TimeGrid grid(c.maturity, c.steps);
  const auto payoff = c.payoff.to_payoff();
  const double root = price_model(c.setup(), c.spot, grid, payoff).root_value;
  Cell oracle, error;
  if (oracle_available(c)) {
    const double o = oracle_price(c.coefficients, c.spot, c.maturity, payoff);
    oracle = o;
    error = std::abs(root - o);
  }
  return {{"model", "N", "root_price", "oracle_price", "abs_error"},
          {{std::string(model_name(c.model)), static_cast<long long>(c.steps), root, oracle, error}}};
}

Table cmd_moments(const RunConfig& c, const std::vector<double>& zetas) {
  const TimeGrid grid(c.maturity, c.steps);
  const auto steps = build_steps(c.setup(), grid, c.world);
  const double t1 = grid.time(1);
  const double drift =
      c.world == World::kNatural ? c.coefficients.mu.eval(t1) : c.coefficients.rate.eval(t1);
  const double sigma = c.coefficients.sigma.eval(t1);
  Table t{{"zeta", "lattice_moment", "analytic_moment", "exact_moment", "residual", "dt"}, {}};
  for (double z : zetas) {
    const auto r = moment_report(steps.front(), z, drift, sigma, grid.dt());
    t.rows.push_back({r.zeta, r.lattice_moment, r.analytic_moment, r.exact_moment, r.residual, r.dt});
  }
  return t;
}

Table cmd_converge(const RunConfig& c, const std::vector<int>& step_counts) {
  if (c.payoff.kind == "constant") {
    throw UnsupportedError("convergence study needs a call or put payoff");
  }
  const auto rows =
      convergence_study(c.setup(), c.spot, c.maturity, c.payoff.to_payoff(), step_counts);
  Table t{{"model", "N", "lattice_price", "oracle_price", "abs_error", "order"}, {}};
  for (const auto& r : rows) {
    Cell order;
    if (r.order) order = *r.order;
    t.rows.push_back({std::string(model_name(c.model)), static_cast<long long>(r.steps),
                      r.lattice_price, r.oracle_price, r.abs_error, order});
  }
  return t;
}

Table cmd_hedge(const RunConfig& c) {
  const auto nodes = hedge_model(c.setup(), c.spot, TimeGrid(c.maturity, c.steps),
                                 c.payoff.to_payoff());
  Table t{{"n", "j", "S", "value", "psi", "psi_replicating"}, {}};
  for (const auto& h : nodes) {
    t.rows.push_back({static_cast<long long>(h.n), static_cast<long long>(h.j), h.spot, h.value,
                      h.psi, h.psi_replicating});
  }
  return t;
}

Table cmd_tree(const RunConfig& c, bool with_probabilities) {
  Table t{{"n", "j", "S"}, {}};
  if (with_probabilities) t.columns.push_back("prob");
  if (c.steps == 0) {
    t.rows.push_back({0LL, 0LL, c.spot});
    if (with_probabilities) t.rows.back().push_back(1.0);
    return t;
  }
  const auto lattice = build_lattice(c.setup(), c.spot, TimeGrid(c.maturity, c.steps), c.world);
  std::vector<std::vector<double>> probs;
  if (with_probabilities) probs = node_probabilities(lattice, probabilities_of(lattice.steps_spec()));
  const int shift = lattice.is_binomial() ? 0 : 1;
  for (int n = 0; n <= lattice.steps(); ++n) {
    const auto level = lattice.level(n);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const long long j = static_cast<long long>(i) - shift * n;
      t.rows.push_back({static_cast<long long>(n), j, level[i]});
      if (with_probabilities) t.rows.back().push_back(probs[static_cast<std::size_t>(n)][i]);
    }
  }
  return t;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& option) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ConfigError(option, "cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(option, "empty list");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Binomial and trinomial lattice pricer with moment-matching diagnostics", "mmtree"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format_name = "table";
  std::string model_override;
  std::string zetas_text = "0.5,1,2,3,4";
  std::string steps_text = "100,200,400,800";
  bool with_probabilities = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--format", format_name, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--model", model_override, "override the configured model");
  };
  auto* price = app.add_subcommand("price", "price the configured option");
  auto* moments = app.add_subcommand("moments", "one-step moments against GBM");
  auto* converge = app.add_subcommand("converge", "error against the closed form per step count");
  auto* hedge = app.add_subcommand("hedge", "hedge ratio at every node (binomial models)");
  auto* tree = app.add_subcommand("tree", "dump lattice node values");
  for (auto* sub : {price, moments, converge, hedge, tree}) add_common(sub);
  moments->add_option("--zetas", zetas_text, "comma-separated moment orders");
  converge->add_option("--steps-list", steps_text, "comma-separated ascending step counts");
  tree->add_flag("--probabilities", with_probabilities, "append forward node probabilities");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const Format format = format_name == "csv"    ? Format::kCsv
                        : format_name == "json" ? Format::kJson
                                                : Format::kTable;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config", "cannot open '" + config_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!model_override.empty()) doc["model"] = model_override;
    const RunConfig config = parse_config(doc, tree->parsed());

    if (price->parsed()) {
      render(cmd_price(config), format, true, out);
    } else if (moments->parsed()) {
      render(cmd_moments(config, parse_list<double>(zetas_text, "zetas")), format, false, out);
    } else if (converge->parsed()) {
      render(cmd_converge(config, parse_list<int>(steps_text, "steps-list")), format, false, out);
    } else if (hedge->parsed()) {
      render(cmd_hedge(config), format, false, out);
    } else {
      render(cmd_tree(config, with_probabilities), format, false, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const RegimeError& e) {
    err << "parameter regime: " << e.what() << '\n';
    return kExitRegime;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mmtree::cli

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmtree/cli.hpp"
#include "mmtree/error.hpp"
#include "mmtree/model_crr.hpp"
#include "mmtree/model_ksrf.hpp"
#include "mmtree/model_trinomial.hpp"
#include "mmtree/pricer.hpp"
#include "mmtree/tree_model.hpp"
#include "mmtree/verification.hpp"

using namespace mmtree;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

MarketCoefficients flat(double mu, double sigma, double rate) {
  return {CoefficientCurve::constant(mu), CoefficientCurve::constant(sigma),
          CoefficientCurve::constant(rate)};
}

ModelSetup setup(ModelKind kind, MarketCoefficients mc, double p = 0.5) {
  ModelSetup s;
  s.kind = kind;
  s.coefficients = std::move(mc);
  s.ksrf_p = CoefficientCurve::constant(p);
  return s;
}

// mu = 0.1 throughout; the risk-neutral price does not depend on it.
const MarketCoefficients kStandard = flat(0.1, 0.2, 0.05);
constexpr double kSpot = 100.0, kStrike = 100.0, kMaturity = 1.0;

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double price(const ModelSetup& s, int N, const Payoff& payoff = Payoff::call(kStrike)) {
  return price_model(s, kSpot, TimeGrid(kMaturity, N), payoff).root_value;
}

// ---------------------------------------------------------------------------

Outcome crr_oracle() {
  Outcome o;
  const double oracle = bs_price(kSpot, kStrike, kMaturity, 0.05, 0.2, OptionKind::kCall);
  double p = 0.0;
  const double t = seconds([&] { p = price(setup(ModelKind::kCrrTd, kStandard), 2000); });
  const double err = std::abs(p - oracle);
  o.detail << "oracle=" << fmt(oracle) << " price(2000)=" << fmt(p) << " err=" << fmt(err)
           << " runtime=" << fmt(t) << "s";
  o.require(std::abs(oracle - 10.4506) < 5e-5, "oracle recomputes to 10.4506");
  o.require(err <= 0.01, "err <= 0.01");
  o.require(t < 1.0, "runtime < 1 s");
  return o;
}

Outcome ksrf_oracle() {
  Outcome o;
  const double oracle = bs_price(kSpot, kStrike, kMaturity, 0.05, 0.2, OptionKind::kCall);
  double worst = 0.0;
  const double t = seconds([&] {
    for (double p : {0.3, 0.5, 0.7}) {
      const double v = price(setup(ModelKind::kKsrfTd, kStandard, p), 2000);
      o.detail << "p=" << p << ":err=" << fmt(std::abs(v - oracle)) << " ";
      worst = std::max(worst, std::abs(v - oracle));
    }
  });
  o.detail << "runtime=" << fmt(t) << "s";
  o.require(worst <= 0.02, "err <= 0.02 for every p");
  o.require(t < 3.0, "runtime < 3 s");
  return o;
}

Outcome trinomial_oracle() {
  Outcome o;
  const double oracle = bs_price(kSpot, kStrike, kMaturity, 0.05, 0.2, OptionKind::kCall);
  double p_new = 0.0, p_classical = 0.0;
  const double t_new = seconds([&] { p_new = price(setup(ModelKind::kTrinomialNew, kStandard), 2000); });
  const double t_cls =
      seconds([&] { p_classical = price(setup(ModelKind::kTrinomialClassical, kStandard), 2000); });
  o.detail << "new: err=" << fmt(std::abs(p_new - oracle)) << " runtime=" << fmt(t_new)
           << "s; classical: err=" << fmt(std::abs(p_classical - oracle))
           << " runtime=" << fmt(t_cls) << "s";
  o.require(std::abs(p_new - oracle) <= 0.01, "new trinomial err <= 0.01");
  o.require(std::abs(p_classical - oracle) <= 0.01, "classical trinomial err <= 0.01");
  o.require(t_new < 2.0 && t_cls < 2.0, "runtime < 2 s");

  // Error-vs-N curves of both schemes through the converge command.
  const auto cfg_path = std::filesystem::temp_directory_path() / "mmtree_acceptance_c3.json";
  std::ofstream(cfg_path) << R"({"spot":100,"payoff":{"kind":"call","strike":100},
    "grid":{"maturity":1,"steps":100},"model":"tri-new",
    "mu":{"kind":"constant","value":0.1},"sigma":{"kind":"constant","value":0.2},
    "rate":{"kind":"constant","value":0.05}})";
  for (const char* model : {"tri-new", "tri-classical"}) {
    std::ostringstream out, err;
    const int code = cli::run({"mmtree", "converge", "--config", cfg_path.string(), "--model",
                               model, "--format", "csv", "--steps-list", "125,250,500,1000,2000"},
                              out, err);
    o.require(code == 0, std::string("converge emitted for ") + model);
    std::cout << "    converge " << model << ":\n";
    std::istringstream lines(out.str());
    for (std::string line; std::getline(lines, line);) std::cout << "      " << line << '\n';
  }
  std::filesystem::remove(cfg_path);
  return o;
}

Outcome time_dependent_oracle() {
  Outcome o;
  const MarketCoefficients td{CoefficientCurve::constant(0.1), CoefficientCurve::linear(0.15, 0.1),
                              CoefficientCurve::linear(0.03, 0.02)};
  const auto avg = averaged_coefficients(td, kMaturity);
  const double sigma_sq = avg.sigma * avg.sigma;
  const double oracle = bs_price(kSpot, kStrike, kMaturity, avg.rate, avg.sigma, OptionKind::kCall);
  double p = 0.0;
  const double t = seconds([&] { p = price(setup(ModelKind::kCrrTd, td), 2000); });
  o.detail << "rbar=" << fmt(avg.rate) << " sigmabar^2=" << fmt(sigma_sq) << " oracle=" << fmt(oracle)
           << " price(2000)=" << fmt(p) << " err=" << fmt(std::abs(p - oracle))
           << " runtime=" << fmt(t) << "s";
  o.require(std::abs(avg.rate - 0.04) < 1e-15, "rbar = 0.04");
  o.require(std::abs(sigma_sq - 0.0408333333333333) < 1e-15, "sigmabar^2 = 0.0408333");
  o.require(std::abs(p - oracle) <= 0.02, "err <= 0.02");
  o.require(t < 1.0, "runtime < 1 s");
  return o;
}

Outcome all_moments() {
  Outcome o;
  const double mu = 0.1, sigma = 0.2, r = 0.05;
  const double dts[] = {1e-2, 1e-3, 1e-4};
  const double zetas[] = {0.5, 1.0, 2.0, 3.0, 4.0};
  double min_binomial = 1e300, min_trinomial = 1e300;

  // residual sequence over dts; exact cancellation (below rounding) counts as matched
  auto check = [&](const std::function<StepSpec(double)>& make, double drift, double need,
                   double& min_ratio, const std::string& label) {
    for (double z : zetas) {
      std::vector<double> res;
      for (double dt : dts) res.push_back(moment_report(make(dt), z, drift, sigma, dt).residual);
      if (res[0] < 1e-14) {
        o.require(res[1] < 1e-14 && res[2] < 1e-14, label + " exact identity stays exact");
        continue;
      }
      for (std::size_t i = 0; i + 1 < res.size(); ++i) {
        const double ratio = res[i] / res[i + 1];
        min_ratio = std::min(min_ratio, ratio);
        o.require(ratio >= need, label + " zeta=" + fmt(z) + " shrink " + fmt(ratio));
      }
    }
  };
  for (double p : {0.2, 0.5, 0.8}) {
    check([&](double dt) { return ksrf_step(flat(mu, sigma, r), CoefficientCurve::constant(p), dt, dt)
                                      .spec(World::kNatural); },
          mu, 30.0, min_binomial, "KSRF p=" + fmt(p));
  }
  check([&](double dt) { return new_trinomial_natural_step(mu, sigma, dt).spec(); }, mu, 90.0,
        min_trinomial, "new trinomial natural");
  check([&](double dt) { return new_trinomial_risk_neutral_step(r, sigma, dt).spec(); }, r, 90.0,
        min_trinomial, "new trinomial risk-neutral");

  const double spot_residual =
      moment_report(new_trinomial_natural_step(mu, sigma, 0.01).spec(), 2.0, mu, sigma, 0.01).residual;
  o.require(std::abs(spot_residual - 1.02e-6) < 0.05e-6, "spot check residual ~1.0e-6");
  o.detail << "min KSRF shrink/decade=" << fmt(min_binomial)
           << " min trinomial shrink/decade=" << fmt(min_trinomial)
           << " spot(zeta=2,dt=0.01)=" << fmt(spot_residual);
  return o;
}

Outcome martingale() {
  Outcome o;
  const double r = 0.05, sigma = 0.2, mu = 0.1;
  const double dts[] = {1e-2, 1e-3, 1e-4};
  struct Model {
    std::string name;
    std::function<StepSpec(double)> make;
  };
  const std::vector<Model> models = {
      {"crr-td", [&](double dt) { return crr_step(flat(mu, sigma, r), dt, dt).spec(World::kRiskNeutral); }},
      {"ksrf-td p=0.2", [&](double dt) { return ksrf_step(flat(mu, sigma, r), CoefficientCurve::constant(0.2), dt, dt).spec(World::kRiskNeutral); }},
      {"ksrf-td p=0.5", [&](double dt) { return ksrf_step(flat(mu, sigma, r), CoefficientCurve::constant(0.5), dt, dt).spec(World::kRiskNeutral); }},
      {"ksrf-td p=0.8", [&](double dt) { return ksrf_step(flat(mu, sigma, r), CoefficientCurve::constant(0.8), dt, dt).spec(World::kRiskNeutral); }},
      {"tri-classical", [&](double dt) { return classical_trinomial_step(r, sigma, dt).spec(); }},
      {"tri-new", [&](double dt) { return new_trinomial_risk_neutral_step(r, sigma, dt).spec(); }},
  };
  for (const auto& m : models) {
    std::vector<double> res;
    for (double dt : dts) res.push_back(std::abs(std::exp(-r * dt) * lattice_step_moment(m.make(dt), 1.0) - 1.0));
    const double C = res[0] / std::pow(dts[0], 1.5);
    for (std::size_t i = 1; i < res.size(); ++i) {
      o.require(res[i] <= C * std::pow(dts[i], 1.5) + 1e-15, m.name + " dt=" + fmt(dts[i]));
    }
    o.detail << m.name << ":C=" << fmt(C) << " ";
  }
  return o;
}

Outcome replication() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MarketCoefficients td{CoefficientCurve::constant(0.1), CoefficientCurve::linear(0.15, 0.1),
                              CoefficientCurve::linear(0.03, 0.02)};
  double worst = 0.0, worst_closed_form_crr = 0.0;
  std::size_t nodes = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int N = 1 + static_cast<int>(u(rng) * 50);
    const bool ksrf = trial % 2 == 1;
    const bool constant = trial % 4 < 2;
    const auto mc = constant ? kStandard : td;
    const auto s = setup(ksrf ? ModelKind::kKsrfTd : ModelKind::kCrrTd, mc, 0.2 + 0.6 * u(rng));
    // random piecewise-linear payoff with random kinks
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 6; ++k) pts.emplace_back(40 + 120 * u(rng), 50 * u(rng) - 10);
    std::sort(pts.begin(), pts.end());
    const auto payoff = Payoff::custom([pts](double x) {
      if (x <= pts.front().first) return pts.front().second;
      for (std::size_t k = 1; k < pts.size(); ++k) {
        if (x <= pts[k].first) {
          const double w = (x - pts[k - 1].first) / (pts[k].first - pts[k - 1].first);
          return pts[k - 1].second + w * (pts[k].second - pts[k - 1].second);
        }
      }
      return pts.back().second;
    });
    const TimeGrid g(1.0, N);
    for (const auto& h : hedge_model(s, kSpot, g, payoff)) {
      const double scale = std::max({std::abs(h.value_up), std::abs(h.value_down), 1.0});
      auto gap = [&](double psi) {
        return std::abs((-h.value_up + psi * h.spot_up) - (-h.value_down + psi * h.spot_down)) / scale;
      };
      worst = std::max(worst, gap(h.psi_replicating));
      if (ksrf && constant) worst = std::max(worst, gap(h.psi));
      else worst_closed_form_crr = std::max(worst_closed_form_crr, gap(h.psi));
      ++nodes;
    }
  }
  o.detail << nodes << " nodes, worst scaled gap=" << fmt(worst)
           << " (CRR closed-form ratio, informational only: " << fmt(worst_closed_form_crr) << ")";
  o.require(worst <= 1e-10, "replication gap <= 1e-10");
  return o;
}

Outcome brute_force_equivalence() {
  Outcome o;
  const Payoff payoffs[] = {Payoff::call(kStrike), Payoff::put(95.0)};
  auto gap = [&](const ModelSetup& s, int N, const Payoff& f) {
    const TimeGrid g(kMaturity, N);
    const auto lat = build_lattice(s, kSpot, g, World::kRiskNeutral);
    const auto disc = step_discounts(s.coefficients, g);
    const double bi = price_european(lat, probabilities_of(lat.steps_spec()), disc, f).root_value;
    const double bf = brute_force_price(lat.steps_spec(), disc, kSpot, f);
    return std::abs(bf - bi) / std::abs(bf);
  };
  double binomial = 0.0, trinomial = 0.0, td = 0.0;
  for (const auto& f : payoffs) {
    for (int N = 1; N <= 10; ++N) {
      binomial = std::max(binomial, gap(setup(ModelKind::kCrrTd, kStandard), N, f));
      binomial = std::max(binomial, gap(setup(ModelKind::kKsrfTd, kStandard, 0.3), N, f));
    }
    for (int N = 1; N <= 8; ++N) {
      trinomial = std::max(trinomial, gap(setup(ModelKind::kTrinomialNew, kStandard), N, f));
      trinomial = std::max(trinomial, gap(setup(ModelKind::kTrinomialClassical, kStandard), N, f));
    }
  }
  const MarketCoefficients tdc{CoefficientCurve::constant(0.1), CoefficientCurve::linear(0.15, 0.1),
                               CoefficientCurve::constant(0.05)};
  bool td_ok = true;
  for (int N = 2; N <= 10; ++N) {
    const double bound = 2.0 * kMaturity * 0.1 * std::sqrt(kMaturity / N);
    for (const auto& f : payoffs) {
      const double g = gap(setup(ModelKind::kCrrTd, tdc), N, f);
      td = std::max(td, g);
      td_ok = td_ok && g <= bound;
    }
  }
  o.detail << "binomial max rel gap=" << fmt(binomial) << " trinomial max rel gap=" << fmt(trinomial)
           << " time-dependent max rel gap=" << fmt(td);
  o.require(binomial <= 1e-12, "binomial constant-coefficient gap <= 1e-12");
  o.require(trinomial <= 1e-12,
            "trinomial constant-coefficient gap <= 1e-12 (up*down != mid^2, paths do not recombine)");
  o.require(td_ok, "time-dependent gap <= 2 T max|sigma'| sqrt(dt)");
  return o;
}

Outcome q_star_continuity() {
  Outcome o;
  const double theta = 0.25, dt = 0.01, step = 1e-4;
  const double jump_bound = step + theta * std::sqrt(dt) * std::sqrt(step);
  double prev = ksrf_q_star_formula(step, theta, dt);
  const double first = prev;
  double max_jump = 0.0, last_decrease = 0.0, min_q = prev;
  int decreases = 0;
  for (int k = 2; k <= 9999; ++k) {
    const double p = k * step;
    const double q = ksrf_q_star_formula(p, theta, dt);
    max_jump = std::max(max_jump, std::abs(q - prev));
    if (q < prev) {
      ++decreases;
      last_decrease = p;
    }
    min_q = std::min(min_q, q);
    prev = q;
  }
  const double last = prev;

  // CRR contrast: q ignores mu and p entirely
  const double crr_q = crr_step(flat(0.1, 0.2, 0.05), 0.01, 0.01).q_risk_neutral;
  bool crr_invariant = true;
  for (double mu : {0.06, 0.09, 0.1 + 1e-9, 0.3, 1.0}) {
    crr_invariant = crr_invariant && crr_step(flat(mu, 0.2, 0.05), 0.01, 0.01).q_risk_neutral == crr_q;
  }

  o.detail << "q*(1e-4)=" << fmt(first) << " q*(1-1e-4)=" << fmt(last) << " max jump=" << fmt(max_jump)
           << " decreasing steps=" << decreases << " (up to p=" << fmt(last_decrease)
           << ") min q*=" << fmt(min_q) << " CRR q=" << fmt(crr_q);
  o.require(max_jump <= jump_bound, "continuity");
  o.require(first <= 1e-2, "q*(1e-4) <= 1e-2");
  o.require(last >= 0.99, "q*(1-1e-4) >= 0.99");
  o.require(std::abs(crr_q - 0.5075) < 1e-15 && crr_invariant, "CRR q = 0.5075 bitwise invariant in mu");
  o.require(decreases == 0, "monotone in p (q* = p - theta sqrt(p(1-p) dt) falls for p < theta^2 dt / 4)");
  return o;
}

Outcome duality_and_parity() {
  Outcome o;
  const MarketCoefficients td{CoefficientCurve::constant(0.1), CoefficientCurve::linear(0.15, 0.1),
                              CoefficientCurve::linear(0.03, 0.02)};
  const std::vector<std::pair<std::string, ModelSetup>> cases = {
      {"crr-td", setup(ModelKind::kCrrTd, kStandard)},
      {"crr-td(t)", setup(ModelKind::kCrrTd, td)},
      {"ksrf-td p=0.3", setup(ModelKind::kKsrfTd, kStandard, 0.3)},
      {"ksrf-td(t) p=0.7", setup(ModelKind::kKsrfTd, td, 0.7)},
      {"tri-classical", setup(ModelKind::kTrinomialClassical, kStandard)},
      {"tri-new", setup(ModelKind::kTrinomialNew, kStandard)},
  };
  const int Ns[] = {50, 100, 200};
  double worst_duality = 0.0, worst_exact_parity = 0.0;
  for (const auto& [name, s] : cases) {
    const double bond = std::exp(-s.coefficients.rate.integrate(0.0, kMaturity));
    double C = 0.0;
    for (int N : Ns) {
      const TimeGrid g(kMaturity, N);
      const auto lat = build_lattice(s, kSpot, g, World::kRiskNeutral);
      const auto probs = probabilities_of(lat.steps_spec());
      const auto disc = step_discounts(s.coefficients, g);
      double disc_total = 1.0;
      for (double d : disc) disc_total *= d;

      const auto call = Payoff::call(kStrike), put = Payoff::put(kStrike);
      const double c = price_european(lat, probs, disc, call).root_value;
      const double p = price_european(lat, probs, disc, put).root_value;
      double fwd_c = 0.0, mean = 0.0;
      for (const auto& st : forward_probabilities(lat, probs)) {
        fwd_c += st.probability * call(st.value);
        mean += st.probability * st.value;
      }
      worst_duality = std::max(worst_duality, std::abs(fwd_c * disc_total - c) / c);

      // exact discrete identity, then the continuum parity within C dt, C fitted
      // at the coarsest N with a 10% margin
      const double discrete = kSpot * (disc_total * mean / kSpot) - kStrike * disc_total;
      worst_exact_parity = std::max(worst_exact_parity, std::abs((c - p) - discrete) / kSpot);
      const double gap = std::abs((c - p) - (kSpot - kStrike * bond));
      if (N == Ns[0]) C = gap / g.dt();
      o.require(gap <= 1.1 * C * g.dt() + 1e-12, name + " parity N=" + std::to_string(N));
    }
    o.detail << name << ":C=" << fmt(C) << " ";
  }
  o.detail << "duality rel gap=" << fmt(worst_duality) << " discrete parity gap=" << fmt(worst_exact_parity);
  o.require(worst_duality <= 1e-10, "forward/backward duality 1e-10");
  o.require(worst_exact_parity <= 1e-10, "discrete parity identity");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 CRR-td oracle convergence", crr_oracle},
      {"2 KSRF-td oracle convergence, p in {0.3,0.5,0.7}", ksrf_oracle},
      {"3 trinomial oracle convergence (new and classical)", trinomial_oracle},
      {"4 time-dependent CRR-td vs averaged closed form", time_dependent_oracle},
      {"5 all-moments residual scaling", all_moments},
      {"6 risk-neutral martingale residual", martingale},
      {"7 replication exactness", replication},
      {"8 brute-force path enumeration equivalence", brute_force_equivalence},
      {"9 q* continuity and CRR contrast", q_star_continuity},
      {"10 forward/backward duality and put-call parity", duality_and_parity},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

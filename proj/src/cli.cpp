// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include "onebit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "onebit/asymptotics.hpp"
#include "onebit/exact_finite.hpp"
#include "onebit/replica.hpp"
#include "onebit/sweep_contour.hpp"

namespace onebit::cli {

namespace {

using json = nlohmann::ordered_json;

struct KeySpec {
  const char* name;
  const char* help;
  bool flag = false;
};

struct CommandSpec {
  Command command;
  const char* name;
  const char* help;
  std::vector<KeySpec> keys;
};

const KeySpec kRho{"rho", "linear SNR (exclusive with --snr-db)"};
const KeySpec kSnrDb{"snr-db", "SNR in dB, rho = 10^(dB/10)"};
const KeySpec kAlpha{"alpha", "receivers per transmitter N/M"};
const KeySpec kThreads{"threads", "worker threads (0 = all cores)"};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs{
      {Command::Capacity, "capacity", "large-system capacity at one (rho, alpha)", {kRho, kSnrDb, kAlpha}},
      {Command::Saddle,
       "saddle",
       "fixed point of the overlap equations with solver diagnostics",
       {kRho, kSnrDb, kAlpha, {"q0", "single start overlap in [0, 1) (default: two starts)"}}},
      {Command::Sweep,
       "sweep",
       "capacity over a (rho, alpha) grid, alpha outer",
       {{"rho-min", "default 0.1"},
        {"rho-max", "default 10"},
        {"rho-steps", "default 100"},
        {"alpha-min", "default 0.1"},
        {"alpha-max", "default 10"},
        {"alpha-steps", "default 100"},
        {"spacing", "linear | log (default linear)"},
        kThreads}},
      {Command::Contour,
       "contour",
       "SNR on a constant-capacity contour for evenly spaced alpha",
       {{"target", "capacity level in (0, 1)"},
        {"alpha-min", "first alpha"},
        {"alpha-max", "last alpha"},
        {"steps", "number of alphas (default 10)"},
        {"approx", "also emit the closed-form SNR estimate", true},
        kThreads}},
      {Command::Exact,
       "exact",
       "finite-size capacity averaged over random channels",
       {{"m", "transmitters"},
        {"n", "receivers"},
        kRho,
        kSnrDb,
        {"channels", "channel draws (default 100)"},
        {"seed", "RNG seed (default 1)"},
        {"conditional", "closed-form | per-channel (default closed-form)"},
        {"samples", "output samples per channel when enumeration is infeasible (default 4000)"},
        kThreads}},
      {Command::Approx,
       "approx",
       "limiting-regime approximations",
       {{"regime", "high-snr | low-snr | large-alpha | small-alpha | all (default all)"}, kRho, kSnrDb, kAlpha}},
      {Command::Threshold, "threshold", "noise-free saturation ratio alpha*", {}},
      {Command::FitE,
       "fit-e",
       "least-squares refit of the quadratic conjugate-parameter model",
       {{"rho-max", "upper end of the fit range (default 1.5)"}, {"samples", "fit points (default 150)"}}},
      {Command::Figure,
       "figure",
       "plot-ready data sets fig1 .. fig6",
       {{"id", "fig1 .. fig6"},
        {"m", "fig1: transmitters (default 8)"},
        {"channels", "fig1: channel draws per cell (default 100)"},
        {"seed", "fig1: RNG seed (default 1)"},
        {"steps", "grid density override"},
        kThreads}},
  };
  return specs;
}

const CommandSpec& spec_for(Command c) {
  for (const auto& s : command_specs())
    if (s.command == c) return s;
  throw std::logic_error("unknown command");
}

// ---- typed parameter access --------------------------------------------------

class Params {
 public:
  explicit Params(const RunConfig& config) : map_(config.params) {
    const auto& spec = spec_for(config.command);
    std::set<std::string> allowed;
    for (const auto& k : spec.keys) allowed.insert(k.name);
    for (const auto& [key, value] : map_)
      if (!allowed.count(key))
        throw UsageError("unknown parameter --" + key + " for command " + spec.name);
  }

  bool has(const std::string& key) const { return map_.count(key) > 0; }

  const std::string& text(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) throw UsageError("missing required parameter --" + key);
    return it->second;
  }

  double real(const std::string& key) const {
    const std::string& s = text(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw UsageError("--" + key + ": expected a finite number, got '" + s + "'");
    return v;
  }
  double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

  std::uint64_t count(const std::string& key) const {
    const std::string& s = text(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() ||
        v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw UsageError("--" + key + ": expected a non-negative integer, got '" + s + "'");
    return v;
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? count(key) : fallback;
  }

  bool flag(const std::string& key) const {
    if (!has(key)) return false;
    const std::string& s = text(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw UsageError("--" + key + ": expected a boolean, got '" + s + "'");
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> options,
                     const char* fallback) const {
    const std::string v = has(key) ? text(key) : std::string(fallback);
    for (const char* o : options)
      if (v == o) return v;
    throw UsageError("--" + key + ": unsupported value '" + v + "'");
  }

  double positive(const std::string& key) const {
    const double v = real(key);
    if (!(v > 0.0)) throw UsageError("--" + key + " must be > 0");
    return v;
  }
  double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }

  std::optional<double> snr() const {
    if (has("rho") && has("snr-db")) throw UsageError("--rho and --snr-db are mutually exclusive");
    if (has("rho")) {
      const double rho = real("rho");
      if (rho < 0.0) throw UsageError("--rho must be >= 0");
      return rho;
    }
    if (has("snr-db")) return std::pow(10.0, real("snr-db") / 10.0);
    return std::nullopt;
  }
  double require_snr() const {
    const auto v = snr();
    if (!v) throw UsageError("one of --rho or --snr-db is required");
    return *v;
  }

  unsigned threads() const { return static_cast<unsigned>(count("threads", 0)); }

 private:
  const std::map<std::string, std::string>& map_;
};

/// Identifies the cell that failed in a computation.
class CellFailure : public std::runtime_error {
 public:
  CellFailure(const std::string& what, json cell) : std::runtime_error(what), cell_(std::move(cell)) {}
  const json& cell() const { return cell_; }

 private:
  json cell_;
};

template <class F>
auto at_cell(json cell, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const FeasibilityError&) {
    throw;
  } catch (const CellFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw CellFailure(e.what(), std::move(cell));
  }
}

double to_db(double rho) { return 10.0 * std::log10(rho); }

const std::vector<std::string> kCapacityColumns{"snr_linear", "snr_db", "alpha", "c_avg", "q",
                                                "E",          "A",      "saturated", "clipped"};

std::vector<Cell> capacity_row(double rho, double alpha, const CapacityResult& r) {
  return {rho, to_db(rho), alpha, r.c_avg, r.saddle.q, r.saddle.E, r.saddle.A, r.saddle.saturated, r.clipped};
}

std::vector<Cell> empty_capacity_row(double rho, double alpha) {
  return {rho, to_db(rho), alpha, {}, {}, {}, {}, {}, {}};
}

std::unique_ptr<NormalIntegrator> integrator_from_env() {
  const char* env = std::getenv("ONEBIT_QUAD_ORDER");
  if (!env || !*env) return nullptr;
  const std::string s(env);
  std::size_t order = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), order);
  if (ec != std::errc() || ptr != s.data() + s.size() || order < 2 || order > 400)
    throw UsageError("ONEBIT_QUAD_ORDER must be an integer in [2, 400], got '" + s + "'");
  return std::make_unique<NormalIntegrator>(order);
}

// ---- commands ------------------------------------------------------------------

Table cmd_capacity(const Params& p, const NormalIntegrator& integ) {
  const double rho = p.require_snr();
  const double alpha = p.real("alpha");
  const SystemPoint point(rho, alpha);
  Table t{"capacity", {}, kCapacityColumns, {}, {}};
  const auto r = at_cell({{"rho", rho}, {"alpha", alpha}}, [&] { return capacity(point, {}, integ); });
  t.rows.push_back(capacity_row(rho, alpha, r));
  return t;
}

Table cmd_saddle(const Params& p, const NormalIntegrator& integ) {
  const double rho = p.require_snr();
  const double alpha = p.real("alpha");
  const SystemPoint point(rho, alpha);
  Table t{"saddle", {}, kCapacityColumns, {}, {}};
  for (const char* c : {"unclipped", "residual", "iterations", "ambiguous", "alternate_q", "alternate_value"})
    t.columns.emplace_back(c);

  const json cell{{"rho", rho}, {"alpha", alpha}};
  CapacityResult r;
  if (p.has("q0")) {
    const double q0 = p.real("q0");
    if (!(q0 >= 0.0 && q0 < 1.0)) throw UsageError("--q0 must lie in [0, 1)");
    r.saddle = at_cell(cell, [&] { return iterate_saddle(point, q0, {}, integ); });
    r.unclipped = r.saddle.saturated ? 1.0
                                     : at_cell(cell, [&] {
                                         return capacity_expression(point, r.saddle.q, r.saddle.E, integ);
                                       });
    r.clipped = r.saddle.saturated || r.unclipped >= 1.0;
    r.c_avg = r.clipped ? 1.0 : std::max(0.0, r.unclipped);
  } else {
    r = at_cell(cell, [&] { return capacity(point, {}, integ); });
  }
  auto row = capacity_row(rho, alpha, r);
  row.insert(row.end(), {r.unclipped, r.saddle.residual, static_cast<std::int64_t>(r.saddle.iterations),
                         r.saddle.ambiguous});
  auto nan_or = [](double v) -> Cell { return std::isnan(v) ? Cell{} : Cell{v}; };
  row.push_back(nan_or(r.saddle.alternate_q));
  row.push_back(nan_or(r.saddle.alternate_value));
  t.rows.push_back(std::move(row));
  return t;
}

std::vector<double> grid(const Params& p, const std::string& prefix, bool log_spacing) {
  const double lo = p.positive(prefix + "-min", 0.1);
  const double hi = p.positive(prefix + "-max", 10.0);
  const auto steps = p.count(prefix + "-steps", 100);
  if (hi < lo) throw UsageError("--" + prefix + "-max must be >= --" + prefix + "-min");
  if (steps == 0) throw UsageError("--" + prefix + "-steps must be >= 1");
  return log_spacing ? logspace(lo, hi, steps) : linspace(lo, hi, steps);
}

Table sweep_table(const std::string& command, const std::vector<double>& rhos,
                  const std::vector<double>& alphas, unsigned threads, const NormalIntegrator& integ) {
  Table t{command, {}, kCapacityColumns, {}, {}};
  t.columns.emplace_back("status");
  const auto cells = sweep(rhos, alphas, RunOptions{{}, threads}, integ);
  for (const auto& c : cells) {
    auto row = c.ok() ? capacity_row(c.rho, c.alpha, *c.result) : empty_capacity_row(c.rho, c.alpha);
    row.emplace_back(c.ok() ? std::string("ok") : "error: " + c.error);
    t.rows.push_back(std::move(row));
    if (!c.ok() && !t.failure) t.failure = json{{"rho", c.rho}, {"alpha", c.alpha}, {"message", c.error}}.dump();
  }
  return t;
}

Table cmd_sweep(const Params& p, const NormalIntegrator& integ) {
  const bool log_spacing = p.choice("spacing", {"linear", "log"}, "linear") == "log";
  return sweep_table("sweep", grid(p, "rho", log_spacing), grid(p, "alpha", log_spacing), p.threads(), integ);
}

const std::vector<std::string> kContourColumns{"c_target", "alpha", "snr_linear", "snr_db", "c_avg", "status"};

void append_contour(Table& t, const std::vector<ContourPoint>& pts, bool with_approx) {
  for (const auto& pt : pts) {
    std::vector<Cell> row{pt.c_target, pt.alpha};
    if (pt.rho) {
      row.insert(row.end(), {*pt.rho, to_db(*pt.rho), pt.c_achieved, std::string("ok")});
    } else {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, pt.note});
    }
    if (with_approx) {
      if (pt.rho_approx) {
        row.emplace_back(*pt.rho_approx);
        row.emplace_back(pt.rho ? Cell{(*pt.rho_approx - *pt.rho) / *pt.rho} : Cell{});
      } else {
        row.insert(row.end(), {Cell{}, Cell{}});
      }
    }
    t.rows.push_back(std::move(row));
  }
}

Table cmd_contour(const Params& p, const NormalIntegrator& integ) {
  const double target = p.real("target");
  if (!(target > 0.0 && target < 1.0)) throw UsageError("--target must lie in (0, 1)");
  const double lo = p.positive("alpha-min");
  const double hi = p.positive("alpha-max");
  if (hi < lo) throw UsageError("--alpha-max must be >= --alpha-min");
  const auto steps = p.count("steps", 10);
  if (steps == 0) throw UsageError("--steps must be >= 1");
  const bool approx = p.flag("approx");
  ContourOptions opts;
  opts.with_approx = approx;
  opts.run.threads = p.threads();
  Table t{"contour", {}, kContourColumns, {}, {}};
  if (approx) t.columns.insert(t.columns.end(), {"snr_approx", "rel_diff"});
  append_contour(t, contour(target, lo, hi, steps, opts, integ), approx);
  return t;
}

Table cmd_exact(const Params& p, const NormalIntegrator& integ) {
  const auto m = p.count("m");
  const auto n = p.count("n");
  if (m == 0 || n == 0) throw UsageError("--m and --n must be >= 1");
  const double rho = p.require_snr();
  const auto channels = p.count("channels", 100);
  if (channels < 2) throw UsageError("--channels must be >= 2");
  const auto seed = p.count("seed", 1);
  ExactOptions opts;
  opts.conditional = p.choice("conditional", {"closed-form", "per-channel"}, "closed-form") == "per-channel"
                         ? ConditionalEntropy::PerChannel
                         : ConditionalEntropy::ClosedForm;
  opts.output_samples = p.count("samples", opts.output_samples);
  if (opts.output_samples < 2) throw UsageError("--samples must be >= 2");
  opts.threads = p.threads();

  const FiniteSystem system(m, n, rho);
  const auto est = at_cell({{"m", m}, {"n", n}, {"rho", rho}},
                           [&] { return exact_capacity(system, channels, seed, opts, integ); });
  Table t{"exact",
          {},
          {"m", "n", "snr_linear", "snr_db", "channels", "seed", "method", "conditional", "rng", "mean", "std_err"},
          {}, {}};
  t.rows.push_back({static_cast<std::int64_t>(m), static_cast<std::int64_t>(n), rho, to_db(rho),
                    static_cast<std::int64_t>(channels), static_cast<std::int64_t>(seed),
                    std::string(to_string(est.method)), std::string(to_string(est.conditional)),
                    std::string(est.rng_algorithm), est.mean, est.std_err});
  return t;
}

Table cmd_approx(const Params& p, const NormalIntegrator& integ) {
  const std::string regime =
      p.choice("regime", {"high-snr", "low-snr", "large-alpha", "small-alpha", "all"}, "all");
  const double alpha = p.positive("alpha");
  const auto rho = p.snr();
  if (!rho && regime != "high-snr") throw UsageError("one of --rho or --snr-db is required for --regime " + regime);

  Table t{"approx", {}, {"regime", "snr_linear", "snr_db", "alpha", "c_avg", "validity"}, {}, {}};
  auto add = [&](const RegimeApprox& a, std::optional<double> r) {
    t.rows.push_back({std::string(to_string(a.regime)), r ? Cell{*r} : Cell{}, r ? Cell{to_db(*r)} : Cell{},
                      alpha, a.c_avg, a.validity_hint});
  };
  const json cell{{"alpha", alpha}, {"rho", rho ? json(*rho) : json(nullptr)}};
  at_cell(cell, [&] {
    if (regime == "high-snr" || regime == "all") add(high_snr_capacity(alpha, {}, integ), std::nullopt);
    if (regime == "high-snr") return 0;
    const SystemPoint point(*rho, alpha);
    if (regime == "low-snr" || regime == "all") add(low_snr_capacity(point), rho);
    if (regime == "large-alpha" || regime == "all") add(large_alpha_capacity(point, integ), rho);
    if (regime == "small-alpha" || regime == "all") add(small_alpha_capacity(point, integ), rho);
    return 0;
  });
  return t;
}

Table cmd_threshold(const NormalIntegrator& integ) {
  const double a = at_cell(json::object(), [&] { return saturation_alpha(integ); });
  return {"threshold", {}, {"alpha_star"}, {{a}}, {}};
}

Table cmd_fit_e(const Params& p, const NormalIntegrator& integ) {
  const double rho_max = p.positive("rho-max", 1.5);
  const auto samples = p.count("samples", 150);
  if (samples < 2) throw UsageError("--samples must be >= 2");
  const auto f = at_cell({{"rho_max", rho_max}}, [&] { return fit_quadratic_e(rho_max, samples, integ); });
  return {"fit-e",
          {},
          {"rho_max", "samples", "quadratic", "linear", "max_rel_error_fitted", "fixed_quadratic", "fixed_linear",
           "max_rel_error_fixed"},
          {{f.rho_max, static_cast<std::int64_t>(f.samples), f.quadratic, f.linear, f.max_rel_error_fitted,
            kQuadraticCoeff, kLinearCoeff, f.max_rel_error_fixed}}, {}};
}

// ---- figures -------------------------------------------------------------------

void reject_keys(const Params& p, const std::string& id, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (p.has(k)) throw UsageError("--" + std::string(k) + " is not used by " + id);
}

Table figure_1(const Params& p, const NormalIntegrator& integ) {
  reject_keys(p, "fig1", {"steps"});
  const auto m = p.count("m", 8);
  const auto channels = p.count("channels", 100);
  const auto seed = p.count("seed", 1);
  if (m == 0) throw UsageError("--m must be >= 1");
  if (channels < 2) throw UsageError("--channels must be >= 2");
  Table t{"figure fig1", {}, {"m", "n", "alpha", "snr_db", "snr_linear", "exact_mean", "exact_std_err", "c_avg",
                              "abs_diff", "c_avg_le_0.7"}, {}, {}};
  t.notes = {"finite-size capacity against the large-system value, uniform inputs",
             "desk scale: m = " + std::to_string(m) + ", " + std::to_string(channels) +
                 " channel draws per cell, seed " + std::to_string(seed),
             "desk scale: SNR grid 0, 5, ..., 30 dB; alpha = 0.25, 0.5, ..., 1.75"};
  ExactOptions opts;
  opts.threads = p.threads();
  for (int k = 1; k <= 7; ++k) {
    const double alpha = 0.25 * k;
    const auto n = static_cast<std::uint64_t>(std::llround(alpha * static_cast<double>(m)));
    if (n == 0) continue;
    for (int db = 0; db <= 30; db += 5) {
      const double rho = std::pow(10.0, db / 10.0);
      const json cell{{"m", m}, {"n", n}, {"snr_db", db}};
      const auto est = at_cell(cell, [&] {
        return exact_capacity(FiniteSystem(m, n, rho), channels, seed, opts, integ);
      });
      const double eff_alpha = static_cast<double>(n) / static_cast<double>(m);
      const auto c = at_cell(cell, [&] { return capacity(SystemPoint(rho, eff_alpha), {}, integ); });
      t.rows.push_back({static_cast<std::int64_t>(m), static_cast<std::int64_t>(n), eff_alpha,
                        static_cast<double>(db), rho, est.mean, est.std_err, c.c_avg,
                        std::abs(est.mean - c.c_avg), c.c_avg <= 0.7});
    }
  }
  return t;
}

Table figure_2(const Params& p, const NormalIntegrator& integ) {
  reject_keys(p, "fig2", {"m", "channels", "seed"});
  const auto steps = p.count("steps", 100);
  if (steps == 0) throw UsageError("--steps must be >= 1");
  const double hi = 0.1 * static_cast<double>(steps);
  auto t = sweep_table("figure fig2", linspace(0.1, hi, steps), linspace(0.1, hi, steps), p.threads(), integ);
  t.notes = {"capacity over rho and alpha, 0.1 to " + format_number(hi) + " in steps of 0.1, alpha outer"};
  return t;
}

Table contour_figure(const std::string& command, const std::vector<double>& levels, double alpha_lo,
                     double alpha_hi, std::size_t steps, bool approx, unsigned threads,
                     const NormalIntegrator& integ) {
  Table t{command, {}, kContourColumns, {}, {}};
  if (approx) t.columns.insert(t.columns.end(), {"snr_approx", "rel_diff"});
  ContourOptions opts;
  opts.with_approx = approx;
  opts.run.threads = threads;
  for (double level : levels) append_contour(t, contour(level, alpha_lo, alpha_hi, steps, opts, integ), approx);
  return t;
}

Table figure_3(const Params& p, const NormalIntegrator& integ) {
  reject_keys(p, "fig3", {"m", "channels", "seed"});
  const auto steps = p.count("steps", 40);
  if (steps == 0) throw UsageError("--steps must be >= 1");
  auto t = contour_figure("figure fig3", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, 0.1, 4.0, steps, false,
                          p.threads(), integ);
  t.notes = {"constant-capacity contours, levels 0.1 to 0.9",
             "desk scale: " + std::to_string(steps) + " alphas evenly spaced on [0.1, 4]"};
  return t;
}

Table figure_4(const Params& p, const NormalIntegrator& integ) {
  reject_keys(p, "fig4", {"m", "channels", "seed"});
  const auto steps = p.count("steps", 40);
  if (steps == 0) throw UsageError("--steps must be >= 1");
  const auto alphas = linspace(0.1, 4.0, steps);
  Table t{"figure fig4", {}, {"series", "snr_linear", "snr_db", "alpha", "c_avg", "c_approx"}, {}, {}};
  t.notes = {"high-SNR (noise-free) and low-SNR approximations against the full capacity",
             "desk scale: " + std::to_string(steps) + " alphas evenly spaced on [0.1, 4]"};
  for (double alpha : alphas) {
    const json cell{{"alpha", alpha}, {"series", "high-snr"}};
    const double hs = at_cell(cell, [&] { return high_snr_capacity(alpha, {}, integ).c_avg; });
    for (int db : {10, 20, 30}) {
      const double rho = std::pow(10.0, db / 10.0);
      const auto c = at_cell(cell, [&] { return capacity(SystemPoint(rho, alpha), {}, integ); });
      t.rows.push_back({std::string("high-snr"), rho, static_cast<double>(db), alpha, c.c_avg, hs});
    }
  }
  for (double alpha : alphas) {
    const SystemPoint point(0.1, alpha);
    const auto c = at_cell({{"alpha", alpha}, {"series", "low-snr"}}, [&] { return capacity(point, {}, integ); });
    t.rows.push_back({std::string("low-snr"), 0.1, -10.0, alpha, c.c_avg, low_snr_capacity(point).c_avg});
  }
  return t;
}

Table figure_5(const Params& p, const NormalIntegrator& integ) {
  reject_keys(p, "fig5", {"m", "channels", "seed"});
  const auto steps = p.count("steps", 21);
  if (steps == 0) throw UsageError("--steps must be >= 1");
  Table t{"figure fig5", {}, {"series", "snr_linear", "snr_db", "alpha", "c_avg", "c_approx", "rel_diff"}, {}, {}};
  t.notes = {"large-alpha (alpha = 5) and small-alpha (alpha = 1) approximations against the full capacity",
             "desk scale: " + std::to_string(steps) + " SNRs log-spaced on [0.1, 10]"};
  for (const auto& [series, alpha] : {std::pair{"large-alpha", 5.0}, std::pair{"small-alpha", 1.0}}) {
    for (double rho : logspace(0.1, 10.0, steps)) {
      const SystemPoint point(rho, alpha);
      const json cell{{"rho", rho}, {"alpha", alpha}, {"series", series}};
      const double full = at_cell(cell, [&] { return capacity(point, {}, integ).c_avg; });
      const double approx = at_cell(cell, [&] {
        return alpha >= 5.0 ? large_alpha_capacity(point, integ).c_avg : small_alpha_capacity(point, integ).c_avg;
      });
      t.rows.push_back({std::string(series), rho, to_db(rho), alpha, full, approx, (approx - full) / full});
    }
  }
  return t;
}

Table figure_6(const Params& p, const NormalIntegrator& integ) {
  reject_keys(p, "fig6", {"m", "channels", "seed"});
  const auto steps = p.count("steps", 11);
  if (steps == 0) throw UsageError("--steps must be >= 1");
  auto t = contour_figure("figure fig6", {0.6, 0.7, 0.8, 0.9}, 5.0, 10.0, steps, true, p.threads(), integ);
  t.notes = {"contour SNR from the full capacity against the closed-form quadratic-model estimate",
             "desk scale: " + std::to_string(steps) + " alphas evenly spaced on [5, 10]"};
  return t;
}

Table cmd_figure(const Params& p, const NormalIntegrator& integ) {
  const std::string id = p.choice("id", {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}, "");
  if (id == "fig1") return figure_1(p, integ);
  if (id == "fig2") return figure_2(p, integ);
  if (id == "fig3") return figure_3(p, integ);
  if (id == "fig4") return figure_4(p, integ);
  if (id == "fig5") return figure_5(p, integ);
  return figure_6(p, integ);
}

// ---- output --------------------------------------------------------------------

std::string csv_field(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

json json_field(const Cell& c) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(nullptr); }
    json operator()(std::int64_t v) const { return v; }
    json operator()(bool v) const { return v; }
    json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message,
                const json& cell = nullptr) {
  json e{{"error", kind}, {"message", message}};
  if (!cell.is_null()) e["cell"] = cell;
  err << e.dump() << '\n';
}

}  // namespace

std::string_view to_string(Command c) { return spec_for(c).name; }

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& s : command_specs())
    if (name == s.name) return s.command;
  return std::nullopt;
}

std::vector<std::string> allowed_keys(Command c) {
  std::vector<std::string> keys;
  for (const auto& k : spec_for(c).keys) keys.emplace_back(k.name);
  return keys;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view column_unit(std::string_view column) {
  if (column == "c_avg" || column == "c_approx" || column == "c_target" || column == "mean" ||
      column == "std_err" || column == "exact_mean" || column == "exact_std_err" || column == "abs_diff" ||
      column == "unclipped" || column == "alternate_value")
    return "bits_per_transmitter";
  if (column == "snr_linear" || column == "snr_approx" || column == "rho_max") return "snr_linear";
  if (column == "snr_db") return "dB";
  if (column == "alpha" || column == "alpha_star") return "receivers_per_transmitter";
  return "";
}

void write_csv(const Table& t, std::ostream& os) {
  for (const auto& n : t.notes) os << "# " << n << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

void write_json(const Table& t, std::ostream& os) {
  json units = json::object();
  for (const auto& c : t.columns)
    if (auto u = column_unit(c); !u.empty()) units[c] = u;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_field(row[i]);
    rows.push_back(std::move(r));
  }
  json doc{{"command", t.command}, {"units", units}, {"columns", t.columns}, {"rows", rows}};
  if (!t.notes.empty()) doc["notes"] = t.notes;
  os << doc.dump(2) << '\n';
}

Table compute(const RunConfig& config) {
  const Params p(config);
  const auto owned = integrator_from_env();
  const NormalIntegrator& integ = owned ? *owned : default_integrator();
  switch (config.command) {
    case Command::Capacity: return cmd_capacity(p, integ);
    case Command::Saddle: return cmd_saddle(p, integ);
    case Command::Sweep: return cmd_sweep(p, integ);
    case Command::Contour: return cmd_contour(p, integ);
    case Command::Exact: return cmd_exact(p, integ);
    case Command::Approx: return cmd_approx(p, integ);
    case Command::Threshold: return cmd_threshold(integ);
    case Command::FitE: return cmd_fit_e(p, integ);
    case Command::Figure: return cmd_figure(p, integ);
  }
  throw std::logic_error("unhandled command");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Table table;
  try {
    table = compute(config);
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const FeasibilityError& e) {
    emit_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const CellFailure& e) {
    emit_error(err, "numerical", e.what(), e.cell());
    return kExitNumerical;
  } catch (const BoundaryError& e) {
    emit_error(err, "numerical", e.what());
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    emit_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    emit_error(err, "numerical", e.what());
    return kExitNumerical;
  }

  std::ofstream file;
  if (!config.output.empty()) {
    file.open(config.output);
    if (!file) {
      emit_error(err, "usage", "cannot open output file " + config.output);
      return kExitUsage;
    }
  }
  std::ostream& sink = config.output.empty() ? out : file;
  if (config.format == Format::Json)
    write_json(table, sink);
  else
    write_csv(table, sink);
  sink.flush();

  if (table.failure) {
    emit_error(err, "numerical", "one or more cells failed", json::parse(*table.failure));
    return kExitNumerical;
  }
  return kExitOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity of one-bit transceiver arrays in Rayleigh fading", "onebit"};
  app.require_subcommand(1);

  struct Bound {
    const CommandSpec* spec;
    CLI::App* sub;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string format = "csv";
    std::string output;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& spec : command_specs()) {
    auto b = std::make_unique<Bound>();
    b->spec = &spec;
    b->sub = app.add_subcommand(spec.name, spec.help);
    for (const auto& k : spec.keys) {
      const std::string flag = std::string("--") + k.name;
      if (k.flag)
        b->sub->add_flag(flag, b->flags[k.name], k.help);
      else
        b->sub->add_option(flag, b->values[k.name], k.help);
    }
    b->sub->add_option("--format", b->format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    b->sub->add_option("-o,--output", b->output, "output file (default stdout)");
    bound.push_back(std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return kExitUsage;
  }

  for (const auto& b : bound) {
    if (!b->sub->parsed()) continue;
    RunConfig config;
    config.command = b->spec->command;
    config.format = b->format == "json" ? Format::Json : Format::Csv;
    config.output = b->output;
    for (const auto& k : b->spec->keys) {
      const std::string flag = std::string("--") + k.name;
      if (b->sub->get_option(flag)->count() == 0) continue;
      config.params[k.name] = k.flag ? "true" : b->values[k.name];
    }
    return run(config, out, err);
  }
  emit_error(err, "usage", "no command given");
  return kExitUsage;
}

}  // namespace onebit::cli

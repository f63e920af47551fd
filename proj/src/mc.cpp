#include "pitch/mc.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "pitch/bounds.hpp"
#include "pitch/errors.hpp"
#include "pitch/estimators.hpp"
#include "pitch/omt.hpp"
#include "pitch/rng.hpp"
#include "pitch/signal.hpp"

namespace pitch {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNan = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kKnownEstimators = {
    "mmle", "anls", "unstructured", "chs", "mlmap"};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Scenario scenario_from_name(const std::string& name) {
  if (name == "string-beta-sweep") return Scenario::StringBetaSweep;
  if (name == "string-n-sweep") return Scenario::StringNSweep;
  if (name == "stochastic-sigma-sweep") return Scenario::StochasticSigmaSweep;
  if (name == "snr-sweep") return Scenario::SnrSweep;
  throw ConfigError("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::StringBetaSweep: return "string-beta-sweep";
    case Scenario::StringNSweep: return "string-n-sweep";
    case Scenario::StochasticSigmaSweep: return "stochastic-sigma-sweep";
    case Scenario::SnrSweep: return "snr-sweep";
  }
  return "?";
}

std::vector<double> gaussian_bell_amplitudes(std::size_t k_count, double rho) {
  std::vector<double> r(k_count);
  const double mid = static_cast<double>(k_count) / 2.0;
  for (std::size_t k = 1; k <= k_count; ++k) {
    const double d = static_cast<double>(k) - mid;
    r[k - 1] = std::exp(-rho * d * d);
  }
  return r;
}

std::vector<double> SignalSpec::resolve_amplitudes() const {
  if (amplitude_rule == "gaussian-bell")
    return gaussian_bell_amplitudes(k_count, rho);
  if (amplitude_rule == "explicit") {
    if (amplitudes.size() != k_count)
      throw ConfigError("signal.amplitudes must have k entries");
    return amplitudes;
  }
  throw ConfigError("unknown amplitude_rule: " + amplitude_rule);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (sweep.empty()) throw ConfigError("sweep grid must be non-empty");
  if (estimators.empty()) throw ConfigError("estimator list must be non-empty");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  for (const auto& e : estimators) {
    bool known = false;
    for (const auto& k : kKnownEstimators) known = known || k == e;
    if (!known) throw ConfigError("unknown estimator: " + e);
    if (e == "mlmap" && scenario != Scenario::StochasticSigmaSweep)
      throw ConfigError("mlmap requires the stochastic-sigma-sweep scenario");
  }
  if (signal.k_count < 1) throw ConfigError("signal.k must be >= 1");
  if (!(signal.omega0 > 0.0) ||
      !(static_cast<double>(signal.k_count) * signal.omega0 < kPi))
    throw ConfigError("signal.omega0 must satisfy k*omega0 < pi");
  (void)signal.resolve_amplitudes();
  if (signal.phase_rule == "explicit" && signal.phases.size() != signal.k_count)
    throw ConfigError("signal.phases must have k entries");
  if (signal.phase_rule != "explicit" && signal.phase_rule != "random" &&
      signal.phase_rule != "zero")
    throw ConfigError("unknown phase_rule: " + signal.phase_rule);
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");

  switch (scenario) {
    case Scenario::StringBetaSweep:
      for (double b : sweep)
        if (!(b >= 0.0)) throw ConfigError("beta sweep values must be >= 0");
      if (n < 2 * signal.k_count + 2) throw ConfigError("n too small");
      break;
    case Scenario::StringNSweep:
      for (double v : sweep) {
        if (!(v >= static_cast<double>(2 * signal.k_count + 2)) ||
            v != std::floor(v))
          throw ConfigError("n sweep values must be integers >= 2k+2");
      }
      break;
    case Scenario::StochasticSigmaSweep:
      for (double v : sweep)
        if (!(v > 0.0)) throw ConfigError("sigma2_delta sweep values must be > 0");
      if (n < 2 * signal.k_count + 2) throw ConfigError("n too small");
      break;
    case Scenario::SnrSweep:
      if (n < 2 * signal.k_count + 2) throw ConfigError("n too small");
      break;
  }
}

namespace {

struct SweepContext {
  double sweep_value = 0.0;
  std::size_t sweep_index = 0;
  std::size_t n = 0;
  double sigma2 = 0.0;
  double sigma2_delta = 0.0;       // stochastic scenario only
  std::vector<double> det_freqs;   // deterministic scenarios
  bool stochastic = false;
};

struct TrialBounds {
  double mcrlb_exact = std::numeric_limits<double>::quiet_NaN();
  double mcrlb_asymptotic = std::numeric_limits<double>::quiet_NaN();
  double chs_avar = std::numeric_limits<double>::quiet_NaN();
  double hcrlb_w0 = std::numeric_limits<double>::quiet_NaN();
  double hcrlb_w1 = std::numeric_limits<double>::quiet_NaN();
  double mcrlb_mse_w0 = std::numeric_limits<double>::quiet_NaN();
  double mcrlb_mse_w1 = std::numeric_limits<double>::quiet_NaN();
  double chs_mse_w0 = std::numeric_limits<double>::quiet_NaN();
  double chs_mse_w1 = std::numeric_limits<double>::quiet_NaN();
};

struct TrialOutput {
  std::vector<TrialRecord> records;
  TrialBounds bounds;
};

bool wants(const ExperimentConfig& cfg, const std::string& name) {
  for (const auto& e : cfg.estimators)
    if (e == name) return true;
  return false;
}

TrialRecord make_record(const SweepContext& ctx, std::size_t trial,
                        std::string label, double estimate, double reference,
                        bool converged, double wall_ms) {
  TrialRecord r;
  r.sweep_value = ctx.sweep_value;
  r.trial = trial;
  r.estimator = std::move(label);
  r.estimate = estimate;
  r.reference = reference;
  const double diff = estimate - reference;
  r.squared_error = converged ? diff * diff : kNan;
  if (!converged) r.estimate = estimate;  // may be NaN from the estimator
  r.converged = converged;
  r.wall_ms = wall_ms;
  return r;
}

TrialOutput run_trial(const ExperimentConfig& cfg, const SweepContext& ctx,
                      std::size_t trial) {
  TrialOutput out;
  const std::size_t k_count = cfg.signal.k_count;
  const auto amps = cfg.signal.resolve_amplitudes();

  // independent streams per purpose so scenarios share draw layouts
  const std::uint64_t phase_seed = RngStream::derive_key(
      cfg.base_seed, {ctx.sweep_index, trial, 0});
  const std::uint64_t delta_seed = RngStream::derive_key(
      cfg.base_seed, {ctx.sweep_index, trial, 1});
  const std::uint64_t noise_seed = RngStream::derive_key(
      cfg.base_seed, {ctx.sweep_index, trial, 2});

  std::vector<double> phases(k_count, 0.0);
  if (cfg.signal.phase_rule == "random") {
    RngStream rng(phase_seed);
    for (auto& p : phases) p = rng.uniform(-kPi, kPi);
  } else if (cfg.signal.phase_rule == "explicit") {
    phases = cfg.signal.phases;
  }

  std::vector<double> freqs;
  if (ctx.stochastic) {
    StochasticPitchModel model;
    model.omega0 = cfg.signal.omega0;
    model.amplitudes = amps;
    model.phases = phases;
    model.sigma2_delta = ctx.sigma2_delta;
    model.sigma2_noise = ctx.sigma2;
    const auto delta = draw_inharmonicity(model, delta_seed);
    freqs.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
      freqs[k] = static_cast<double>(k + 1) * cfg.signal.omega0 + delta[k];
  } else {
    freqs = ctx.det_freqs;
  }

  auto fail_all = [&](const std::string& why) {
    for (const auto& name : cfg.estimators) {
      out.records.push_back(
          make_record(ctx, trial, name, kNan, kNan, false, 0.0));
      out.records.back().estimator += ":" + why;  // never triggered in practice
    }
  };
  for (std::size_t k = 0; k < k_count; ++k) {
    const bool increasing = k == 0 || freqs[k] > freqs[k - 1];
    if (!(freqs[k] > 0.0) || !(freqs[k] < kPi) || !increasing) {
      fail_all("invalid-frequency-draw");
      return out;
    }
  }

  const auto sinset = SinusoidSet::from_arrays(freqs, amps, phases);
  const ComplexSignal x = synth_sinusoids(sinset, ctx.n);
  const ComplexSignal y = add_noise(x, ctx.sigma2, noise_seed);

  const bool need_pseudo = wants(cfg, "mmle") || wants(cfg, "anls");
  const bool need_chs_ref = wants(cfg, "chs");

  PseudoTrueResult pt;
  if (need_pseudo) {
    pt = pseudo_true(x, k_count, ctx.sigma2);
    out.bounds.mcrlb_exact = mcrlb_exact(pt, x, ctx.sigma2).omega0_bound;
    out.bounds.mcrlb_asymptotic =
        mcrlb_asymptotic(pt.theta0, sinset, ctx.sigma2, ctx.n);
  }
  double chs_ref = kNan;
  if (need_chs_ref) {
    chs_ref = chs(LineSpectrum::from_amplitudes(freqs, amps)).omega0;
    out.bounds.chs_avar = chs_asymptotic_var(sinset, ctx.n, ctx.sigma2).value;
  }
  if (ctx.stochastic) {
    const double w0_true = cfg.signal.omega0;
    const double w1_true = freqs[0];
    if (wants(cfg, "mlmap")) {
      StochasticPitchModel model;
      model.omega0 = w0_true;
      model.amplitudes = amps;
      model.phases = phases;
      model.sigma2_delta = ctx.sigma2_delta;
      model.sigma2_noise = ctx.sigma2;
      const auto h = hcrlb(model, ctx.n);
      out.bounds.hcrlb_w0 = h.omega0_bound;
      out.bounds.hcrlb_w1 = h.omega1_bound;
    }
    if (need_pseudo) {
      out.bounds.mcrlb_mse_w0 =
          mse_misspecified(out.bounds.mcrlb_exact, pt.theta0.omega0, w0_true);
      out.bounds.mcrlb_mse_w1 =
          mse_misspecified(out.bounds.mcrlb_exact, pt.theta0.omega0, w1_true);
    }
    if (need_chs_ref) {
      out.bounds.chs_mse_w0 =
          mse_misspecified(out.bounds.chs_avar, chs_ref, w0_true);
      out.bounds.chs_mse_w1 =
          mse_misspecified(out.bounds.chs_avar, chs_ref, w1_true);
    }
  }

  SearchConfig search;
  for (const auto& name : cfg.estimators) {
    const auto t0 = std::chrono::steady_clock::now();
    EstimateResult est;
    try {
      if (name == "mmle") est = mmle_harmonic(y, k_count, search);
      else if (name == "anls") est = anls(y, k_count, search);
      else if (name == "unstructured") est = unstructured_mle(y, k_count, search);
      else if (name == "chs") est = chs_plugin(y, k_count, search);
      else est = ml_map_hybrid(y, k_count, ctx.sigma2_delta, search);
    } catch (const std::exception& e) {
      est.diagnostics.converged = false;
      est.diagnostics.message = e.what();
      est.omega0_hat = kNan;
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    const bool ok = est.diagnostics.converged;
    const double lowest_freq =
        ok && !est.components.empty() ? est.components.front().frequency : kNan;

    if (!ctx.stochastic) {
      double reference = kNan;
      double estimate = est.omega0_hat;
      if (name == "mmle" || name == "anls") reference = pt.theta0.omega0;
      else if (name == "chs") reference = chs_ref;
      else {  // unstructured: lowest component against the true first frequency
        reference = freqs[0];
        estimate = lowest_freq;
      }
      out.records.push_back(
          make_record(ctx, trial, name, estimate, reference, ok, ms));
    } else {
      const double w0_true = cfg.signal.omega0;
      const double w1_true = freqs[0];
      if (name != "unstructured") {
        out.records.push_back(make_record(ctx, trial, name, est.omega0_hat,
                                          w0_true, ok, ms));
      }
      // first-component target: structured estimators carry their pitch
      // estimate over; unstructured and mlmap use the first fitted component
      const double w1_estimate =
          (name == "unstructured" || name == "mlmap") ? lowest_freq
                                                      : est.omega0_hat;
      out.records.push_back(make_record(ctx, trial, name + "@omega1",
                                        w1_estimate, w1_true, ok, ms));
    }
  }
  return out;
}

struct Accumulator {
  std::size_t n_total = 0;
  std::size_t n_failed = 0;
  double sum_est = 0.0;
  double sum_ref = 0.0;
  double sum_sq_err = 0.0;
  double sum_est2 = 0.0;
};

void append_summary(std::vector<SummaryRow>& rows, const SweepContext& ctx,
                    const std::string& label, const Accumulator& acc,
                    const std::vector<std::pair<std::string, double>>& bounds) {
  SummaryRow base;
  base.sweep_value = ctx.sweep_value;
  base.estimator = label;
  base.n_trials = acc.n_total;
  base.n_failed = acc.n_failed;
  const double m = static_cast<double>(acc.n_total - acc.n_failed);
  if (m > 0) {
    base.mean_estimate = acc.sum_est / m;
    base.reference = acc.sum_ref / m;
    base.mse = acc.sum_sq_err / m;
    base.variance = acc.sum_est2 / m - base.mean_estimate * base.mean_estimate;
    const double b = base.mean_estimate - base.reference;
    base.bias2 = b * b;
  } else {
    base.mean_estimate = base.reference = base.mse = base.variance =
        base.bias2 = kNan;
  }
  for (const auto& [name, value] : bounds) {
    SummaryRow row = base;
    row.bound_name = name;
    row.bound_value = value;
    rows.push_back(std::move(row));
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto amps = cfg.signal.resolve_amplitudes();

  std::vector<SweepContext> contexts(cfg.sweep.size());
  for (std::size_t si = 0; si < cfg.sweep.size(); ++si) {
    SweepContext& ctx = contexts[si];
    ctx.sweep_value = cfg.sweep[si];
    ctx.sweep_index = si;
    ctx.n = cfg.n;
    ctx.stochastic = cfg.scenario == Scenario::StochasticSigmaSweep;
    double snr_db = cfg.snr_db;
    double beta = cfg.beta;
    switch (cfg.scenario) {
      case Scenario::StringBetaSweep: beta = cfg.sweep[si]; break;
      case Scenario::StringNSweep:
        ctx.n = static_cast<std::size_t>(cfg.sweep[si]);
        break;
      case Scenario::StochasticSigmaSweep:
        ctx.sigma2_delta = cfg.sweep[si];
        break;
      case Scenario::SnrSweep: snr_db = cfg.sweep[si]; break;
    }
    ctx.sigma2 = snr_to_noise_var(amps, snr_db);
    if (!ctx.stochastic)
      ctx.det_freqs =
          string_model_frequencies(cfg.signal.omega0, beta, cfg.signal.k_count);
  }

  const std::size_t total = cfg.sweep.size() * cfg.trials;
  std::vector<TrialOutput> outputs(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const std::size_t si = i / cfg.trials;
      const std::size_t ti = i % cfg.trials;
      outputs[i] = run_trial(cfg, contexts[si], ti);
    }
  };
  if (cfg.threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // aggregation is serial and ordered, so summaries are bit-reproducible
  ExperimentResult result;
  for (std::size_t si = 0; si < cfg.sweep.size(); ++si) {
    const SweepContext& ctx = contexts[si];

    std::vector<std::string> labels;
    for (const auto& name : cfg.estimators) {
      if (!ctx.stochastic) {
        labels.push_back(name);
      } else {
        if (name != "unstructured") labels.push_back(name);
        labels.push_back(name + "@omega1");
      }
    }

    std::vector<Accumulator> accs(labels.size());
    TrialBounds bound_sums;
    bound_sums = TrialBounds{};
    double sum_mce = 0.0, sum_mca = 0.0, sum_cav = 0.0;
    double sum_h0 = 0.0, sum_h1 = 0.0;
    double sum_mm0 = 0.0, sum_mm1 = 0.0, sum_cm0 = 0.0, sum_cm1 = 0.0;
    std::size_t n_mc = 0, n_cv = 0, n_h = 0;

    for (std::size_t ti = 0; ti < cfg.trials; ++ti) {
      const TrialOutput& to = outputs[si * cfg.trials + ti];
      for (const auto& rec : to.records) {
        for (std::size_t li = 0; li < labels.size(); ++li) {
          if (rec.estimator != labels[li]) continue;
          Accumulator& acc = accs[li];
          ++acc.n_total;
          if (!rec.converged || !std::isfinite(rec.estimate)) {
            ++acc.n_failed;
          } else {
            acc.sum_est += rec.estimate;
            acc.sum_ref += rec.reference;
            acc.sum_sq_err += rec.squared_error;
            acc.sum_est2 += rec.estimate * rec.estimate;
          }
        }
        result.trials.push_back(rec);
      }
      if (std::isfinite(to.bounds.mcrlb_exact)) {
        sum_mce += to.bounds.mcrlb_exact;
        sum_mca += to.bounds.mcrlb_asymptotic;
        if (ctx.stochastic) {
          sum_mm0 += to.bounds.mcrlb_mse_w0;
          sum_mm1 += to.bounds.mcrlb_mse_w1;
        }
        ++n_mc;
      }
      if (std::isfinite(to.bounds.chs_avar)) {
        sum_cav += to.bounds.chs_avar;
        if (ctx.stochastic) {
          sum_cm0 += to.bounds.chs_mse_w0;
          sum_cm1 += to.bounds.chs_mse_w1;
        }
        ++n_cv;
      }
      if (std::isfinite(to.bounds.hcrlb_w0)) {
        sum_h0 += to.bounds.hcrlb_w0;
        sum_h1 += to.bounds.hcrlb_w1;
        ++n_h;
      }
    }

    const double crlb_h =
        crlb_harmonic_asymptotic(amps, ctx.n, ctx.sigma2);
    const double crlb_u1 =
        crlb_unstructured(amps, ctx.n, ctx.sigma2).freq_var[0];
    const double mce = n_mc ? sum_mce / static_cast<double>(n_mc) : kNan;
    const double mca = n_mc ? sum_mca / static_cast<double>(n_mc) : kNan;
    const double cav = n_cv ? sum_cav / static_cast<double>(n_cv) : kNan;
    const double h0 = n_h ? sum_h0 / static_cast<double>(n_h) : kNan;
    const double h1 = n_h ? sum_h1 / static_cast<double>(n_h) : kNan;
    const double mm0 = n_mc ? sum_mm0 / static_cast<double>(n_mc) : kNan;
    const double mm1 = n_mc ? sum_mm1 / static_cast<double>(n_mc) : kNan;
    const double cm0 = n_cv ? sum_cm0 / static_cast<double>(n_cv) : kNan;
    const double cm1 = n_cv ? sum_cm1 / static_cast<double>(n_cv) : kNan;

    for (std::size_t li = 0; li < labels.size(); ++li) {
      const std::string& label = labels[li];
      std::vector<std::pair<std::string, double>> bounds;
      if (!ctx.stochastic) {
        if (label == "mmle" || label == "anls") {
          bounds = {{"mcrlb_exact", mce},
                    {"mcrlb_asymptotic", mca},
                    {"crlb_harmonic", crlb_h}};
        } else if (label == "chs") {
          bounds = {{"chs_asymptotic_var", cav}, {"crlb_harmonic", crlb_h}};
        } else {
          bounds = {{"crlb_unstructured_omega1", crlb_u1}};
        }
      } else {
        if (label == "mlmap") bounds = {{"hcrlb_omega0", h0}};
        else if (label == "mlmap@omega1")
          bounds = {{"hcrlb_omega1", h1},
                    {"crlb_unstructured_omega1", crlb_u1}};
        else if (label == "mmle" || label == "anls")
          bounds = {{"mcrlb_mse_omega0", mm0}};
        else if (label == "mmle@omega1" || label == "anls@omega1")
          bounds = {{"mcrlb_mse_omega1", mm1},
                    {"crlb_unstructured_omega1", crlb_u1}};
        else if (label == "chs") bounds = {{"chs_var_mse_omega0", cm0}};
        else if (label == "chs@omega1")
          bounds = {{"chs_var_mse_omega1", cm1},
                    {"crlb_unstructured_omega1", crlb_u1}};
        else  // unstructured@omega1
          bounds = {{"crlb_unstructured_omega1", crlb_u1}};
      }
      append_summary(result.summary, ctx, label, accs[li], bounds);
    }
  }
  return result;
}

std::string summary_csv(const ExperimentResult& result) {
  std::string out =
      "sweep_value,estimator,n_trials,n_failed,mean_estimate,reference,"
      "bias2,variance,mse,bound_name,bound_value\n";
  for (const auto& r : result.summary) {
    out += format_double(r.sweep_value);
    out += ',';
    out += r.estimator;
    out += ',';
    out += std::to_string(r.n_trials);
    out += ',';
    out += std::to_string(r.n_failed);
    out += ',';
    out += format_double(r.mean_estimate);
    out += ',';
    out += format_double(r.reference);
    out += ',';
    out += format_double(r.bias2);
    out += ',';
    out += format_double(r.variance);
    out += ',';
    out += format_double(r.mse);
    out += ',';
    out += r.bound_name;
    out += ',';
    out += format_double(r.bound_value);
    out += '\n';
  }
  return out;
}

std::string trials_csv(const ExperimentResult& result) {
  std::string out =
      "sweep_value,trial,estimator,estimate,reference,squared_error,"
      "converged,wall_ms\n";
  for (const auto& r : result.trials) {
    out += format_double(r.sweep_value);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += r.estimator;
    out += ',';
    out += format_double(r.estimate);
    out += ',';
    out += format_double(r.reference);
    out += ',';
    out += format_double(r.squared_error);
    out += ',';
    out += r.converged ? '1' : '0';
    out += ',';
    out += format_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

ExperimentConfig experiment_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.scenario = scenario_from_name(j.at("scenario").get<std::string>());
    if (j.contains("signal")) {
      const auto& s = j.at("signal");
      if (s.contains("k")) cfg.signal.k_count = s.at("k").get<std::size_t>();
      if (s.contains("omega0")) cfg.signal.omega0 = s.at("omega0").get<double>();
      if (s.contains("amplitude_rule"))
        cfg.signal.amplitude_rule = s.at("amplitude_rule").get<std::string>();
      if (s.contains("rho")) cfg.signal.rho = s.at("rho").get<double>();
      if (s.contains("amplitudes")) {
        cfg.signal.amplitudes = s.at("amplitudes").get<std::vector<double>>();
        cfg.signal.amplitude_rule = "explicit";
      }
      if (s.contains("phase_rule"))
        cfg.signal.phase_rule = s.at("phase_rule").get<std::string>();
      if (s.contains("phases")) {
        cfg.signal.phases = s.at("phases").get<std::vector<double>>();
        cfg.signal.phase_rule = "explicit";
      }
    }
    cfg.sweep = j.at("sweep").get<std::vector<double>>();
    if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("snr_db")) cfg.snr_db = j.at("snr_db").get<double>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    cfg.trials = j.at("trials").get<std::size_t>();
    if (j.contains("base_seed"))
      cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    cfg.estimators = j.at("estimators").get<std::vector<std::string>>();
    if (j.contains("output")) cfg.output_path = j.at("output").get<std::string>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

}  // namespace pitch

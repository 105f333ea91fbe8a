// SPDX-License-Identifier: Apache-2.0
#include "ubmc/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ubmc/coupling.hpp"
#include "ubmc/diagnostics.hpp"
#include "ubmc/error.hpp"
#include "ubmc/models/elliptic.hpp"
#include "ubmc/models/sirx.hpp"
#include "ubmc/models/toy.hpp"
#include "ubmc/parallel.hpp"

namespace ubmc::harness {

namespace {

std::uint64_t root_seed(const json& cfg) { return cfg.at("seed").get<std::uint64_t>(); }

std::pair<double, double> window(const json& cfg, const std::string& key) {
  const auto& w = cfg.at("check").at(key);
  return {w.at(0).get<double>(), w.at(1).get<double>()};
}

Check in_window(const std::string& name, double v, std::pair<double, double> w) {
  std::ostringstream os;
  os << "value " << v << " in [" << w.first << ", " << w.second << "]";
  return {name, v >= w.first && v <= w.second, os.str()};
}

json fit_to_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"slope_se", f.slope_se}};
}

std::string value_columns(const std::string& prefix, long n) {
  std::string s;
  for (long j = 0; j < n; ++j) s += "," + prefix + std::to_string(j);
  return s;
}

void append_values(std::ostringstream& os, const Vec& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j) os << ',' << fmt_num(v[j]);
}

// Replicate ids for level-indexed experiments stay disjoint across levels.
std::uint64_t level_replicate(int level, std::size_t r) {
  return (static_cast<std::uint64_t>(level) << 32) | static_cast<std::uint64_t>(r);
}

/// Observation-space forward map at level l, for the forward-rate experiment.
Dvec forward_at(const json& cfg, int level, const Vec& x) {
  const std::string model = cfg.at("model");
  const int l0 = cfg.at("level").at("l0").get<int>();
  if (model == "toy") return ToyModel::level_forward(level, l0) * to_vec2(x);
  if (model == "elliptic") return EllipticModel::observe(level, x, l0);
  return SirxModel::cumulative_at_days(level, x);
}

ExperimentResult forward_rate(const json& cfg) {
  const Vec x = json_to_vec(cfg.at("forward").at("x"));
  const int lmin = cfg.at("levels").at("min");
  const int lmax = cfg.at("levels").at("max");
  ExperimentResult r;
  std::ostringstream os;
  os << "level,squared_difference\n";
  std::vector<std::pair<double, double>> pts;
  Dvec prev = forward_at(cfg, lmin - 1, x);
  json per_level = json::array();
  for (int l = lmin; l <= lmax; ++l) {
    Dvec cur = forward_at(cfg, l, x);
    const double d = (cur - prev).squaredNorm();
    os << l << ',' << fmt_num(d) << '\n';
    pts.emplace_back(l, d);
    per_level.push_back({{"level", l}, {"squared_difference", d}});
    prev = std::move(cur);
  }
  const LineFit fit = fit_rate(pts);
  r.csv = os.str();
  r.summary = {{"levels", per_level}, {"rate_fit", fit_to_json(fit)}};
  r.checks.push_back(in_window("forward_rate_slope", fit.slope, window(cfg, "forward_slope")));
  return r;
}

// Criterion-style cost bound: kernel applications at level l over 2[(2 tau - 1) v (m + tau - 1)].
double cost_bound_ratio(const DiscretizedTarget& t, const LevelRun& run, long m) {
  const double tau = static_cast<double>(run.tau_lm1 < 0 ? run.tau_l : std::max(run.tau_l, run.tau_lm1));
  const double bound = 2.0 * std::max(2.0 * tau - 1.0, static_cast<double>(m) + tau - 1.0);
  return run.cost_units / t.level_cost(run.level) / bound;
}

ExperimentResult increment_rate(const json& cfg, unsigned workers) {
  const TargetPtr target = build_target(cfg);
  const CoupledKernel kernel(target, build_kernel(cfg, target->dim()));
  const EstimatorConfig ec = build_estimator(cfg);
  const Observable phi = build_observable(cfg);
  const auto n = static_cast<std::size_t>(cfg.at("replicates").get<long>());
  const int lmin = cfg.at("levels").at("min");
  const int lmax = cfg.at("levels").at("max");
  const std::uint64_t seed = root_seed(cfg);

  ExperimentResult r;
  std::ostringstream os;
  std::vector<std::vector<std::pair<double, double>>> pts;
  std::vector<double> level_x;
  std::vector<double> mean_tau;
  json per_level = json::array();
  long violations = 0;
  double worst_ratio = 0.0;
  for (int l = lmin; l <= lmax; ++l) {
    const auto est = parallel_map(n, workers, [&](std::size_t i) {
      return fixed_level(kernel, phi, l, ec, {seed, level_replicate(l, i)});
    });
    const long d = est.front().value.size();
    if (l == lmin) {
      os << "level,replicate,tau_l,tau_lm1,stop_time,cost_units" << value_columns("xi_", d) << '\n';
      pts.resize(static_cast<std::size_t>(d));
    }
    Vec second = Vec::Zero(d);
    std::vector<long> taus;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = est[i];
      const auto& run = e.runs.front();
      os << l << ',' << i << ',' << run.tau_l << ',' << run.tau_lm1 << ',' << run.stop_time << ','
         << fmt_num(e.cost_units);
      append_values(os, e.value);
      os << '\n';
      second += e.value.cwiseAbs2() / static_cast<double>(n);
      taus.push_back(std::max(run.tau_l, run.tau_lm1));
      const double ratio = cost_bound_ratio(*target, run, ec.m);
      worst_ratio = std::max(worst_ratio, ratio);
      if (ratio > 1.0) ++violations;
    }
    const MeetingTimeReport mt = meeting_time_report(taus);
    for (long j = 0; j < d; ++j) pts[static_cast<std::size_t>(j)].emplace_back(l, second[j]);
    level_x.push_back(l);
    mean_tau.push_back(mt.mean);
    per_level.push_back({{"level", l},
                         {"second_moment", vec_to_json(second)},
                         {"mean_cost", average_replicates(est).total_cost / static_cast<double>(n)},
                         {"meeting", {{"q50", mt.q50}, {"q90", mt.q90}, {"q99", mt.q99}, {"max", mt.max},
                                      {"mean", mt.mean}, {"tail_fitted", mt.tail_fitted},
                                      {"tail_slope", mt.tail.slope}, {"tail_r_squared", mt.tail.r_squared}}}});
  }
  json fits = json::array();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const LineFit f = fit_rate(pts[j]);
    fits.push_back(fit_to_json(f));
    r.checks.push_back(in_window("increment_slope_" + std::to_string(j), f.slope, window(cfg, "increment_slope")));
  }
  const LineFit trend = fit_line(level_x, mean_tau);
  const double half = 2.0 * trend.slope_se;
  std::ostringstream trend_detail;
  trend_detail << "mean meeting time slope " << trend.slope << " +- " << half;
  r.checks.push_back({"meeting_time_trend", std::abs(trend.slope) <= half, trend_detail.str()});
  r.checks.push_back({"cost_bound", violations == 0,
                      std::to_string(violations) + " violations, worst ratio " + fmt_num(worst_ratio)});
  r.csv = os.str();
  r.summary = {{"levels", per_level},
               {"rate_fits", fits},
               {"meeting_trend", fit_to_json(trend)},
               {"cost_bound", {{"violations", violations}, {"worst_ratio", worst_ratio}}}};
  return r;
}

UnbiasedEstimate one_estimate(const CoupledKernel& k, const Observable& phi, const LevelDistribution& dist,
                              const EstimatorConfig& ec, EstimatorKind kind, ReplicateSeed seed) {
  return kind == EstimatorKind::SingleTerm ? single_term(k, phi, dist, ec, seed) : independent_sum(k, phi, dist, ec, seed);
}

std::string replicate_csv(const std::vector<UnbiasedEstimate>& est) {
  std::ostringstream os;
  os << "replicate,level,tau_l,tau_lm1,cost_units" << value_columns("value_", est.front().value.size()) << '\n';
  for (const auto& e : est) {
    const auto& top = e.runs.back();
    os << e.replicate_id << ',' << e.level << ',' << top.tau_l << ',' << top.tau_lm1 << ',' << fmt_num(e.cost_units);
    append_values(os, e.value);
    os << '\n';
  }
  return os.str();
}

/// Analytic reference for the toy model with phi(x) = x; empty otherwise.
std::optional<Vec> analytic_reference(const json& cfg, const DiscretizedTarget& target) {
  if (cfg.at("model") != "toy" || cfg.at("observable") != "x") return std::nullopt;
  return Vec(static_cast<const ToyModel&>(target).posterior().mean);
}

ExperimentResult estimate(const json& cfg, unsigned workers) {
  const TargetPtr target = build_target(cfg);
  const CoupledKernel kernel(target, build_kernel(cfg, target->dim()));
  const EstimatorConfig ec = build_estimator(cfg);
  const Observable phi = build_observable(cfg);
  const LevelDistribution dist = build_level_distribution(cfg);
  const EstimatorKind kind = build_estimator_kind(cfg);
  const auto n = static_cast<std::size_t>(cfg.at("replicates").get<long>());
  const std::uint64_t seed = root_seed(cfg);
  const auto est = parallel_map(n, workers, [&](std::size_t i) {
    return one_estimate(kernel, phi, dist, ec, kind, {seed, static_cast<std::uint64_t>(i)});
  });
  const ReplicateSummary s = average_replicates(est);
  ExperimentResult r;
  r.csv = replicate_csv(est);
  r.summary = {{"estimator", to_string(kind)},
               {"replicates", n},
               {"mean", vec_to_json(s.mean)},
               {"std_error", s.std_error ? vec_to_json(*s.std_error) : json(nullptr)},
               {"total_cost", s.total_cost},
               {"cap_event_probability", dist.cap_event_probability()}};
  if (const auto ref = analytic_reference(cfg, *target); ref && s.std_error) {
    const double zmax = cfg.at("check").at("z_max").get<double>();
    const Vec z = (s.mean - *ref).cwiseQuotient(*s.std_error);
    r.summary["reference"] = vec_to_json(*ref);
    r.summary["z_scores"] = vec_to_json(z);
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      r.checks.push_back({"unbiased_" + std::to_string(j), std::abs(z[j]) <= zmax,
                          "z = " + fmt_num(z[j]) + ", limit " + fmt_num(zmax)});
    }
  }
  return r;
}

ExperimentResult mse_vs_n(const json& cfg, unsigned workers) {
  const TargetPtr target = build_target(cfg);
  const CoupledKernel kernel(target, build_kernel(cfg, target->dim()));
  const EstimatorConfig ec = build_estimator(cfg);
  const Observable phi = build_observable(cfg);
  const LevelDistribution dist = build_level_distribution(cfg);
  const EstimatorKind kind = build_estimator_kind(cfg);
  const auto ns = cfg.at("mse").at("n_values").get<std::vector<long>>();
  const auto outer = cfg.at("mse").at("outer").get<std::vector<long>>();
  std::size_t pool = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1 || outer[i] < 1) throw Error(ErrorKind::Config, "mse.n_values and mse.outer must be >= 1");
    pool = std::max(pool, static_cast<std::size_t>(ns[i] * outer[i]));
  }
  const std::uint64_t seed = root_seed(cfg);
  // One pool of replicates; each N uses disjoint consecutive batches of it.
  const auto est = parallel_map(pool, workers, [&](std::size_t i) {
    return one_estimate(kernel, phi, dist, ec, kind, {seed, static_cast<std::uint64_t>(i)});
  });
  Vec ref;
  std::string ref_source;
  if (const auto a = analytic_reference(cfg, *target)) {
    ref = *a;
    ref_source = "analytic";
  } else if (!cfg.at("mse").at("reference").is_null()) {
    ref = json_to_vec(cfg.at("mse").at("reference"));
    ref_source = "config";
  } else {
    ref = average_replicates(est).mean;
    ref_source = "pool-mean";
  }
  ExperimentResult r;
  r.csv = replicate_csv(est);
  std::vector<double> lx;
  std::vector<double> ly;
  json rows = json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double mse = 0.0;
    double cost = 0.0;
    for (long b = 0; b < outer[i]; ++b) {
      Vec mean = Vec::Zero(ref.size());
      for (long j = 0; j < ns[i]; ++j) {
        const auto& e = est[static_cast<std::size_t>(b * ns[i] + j)];
        mean += e.value / static_cast<double>(ns[i]);
        cost += e.cost_units;
      }
      mse += (mean - ref).squaredNorm() / static_cast<double>(outer[i]);
    }
    lx.push_back(std::log2(static_cast<double>(ns[i])));
    ly.push_back(std::log2(mse));
    rows.push_back({{"n", ns[i]}, {"outer", outer[i]}, {"mse", mse}, {"mean_cost", cost / static_cast<double>(outer[i])}});
  }
  const LineFit fit = fit_line(lx, ly);
  r.summary = {{"points", rows}, {"reference", vec_to_json(ref)}, {"reference_source", ref_source},
               {"rate_fit", fit_to_json(fit)}};
  r.checks.push_back(in_window("mse_slope", fit.slope, window(cfg, "mse_slope")));
  return r;
}

ExperimentResult sgd(const json& cfg, unsigned workers) {
  const TargetPtr target = build_target(cfg);
  const KernelConfig kc = build_kernel(cfg, target->dim());
  const EstimatorConfig ec = build_estimator(cfg);
  const LevelDistribution dist = build_level_distribution(cfg);
  const SgdConfig sc = build_sgd(cfg);
  const json& s = cfg.at("sgd");
  const auto kind = parse_estimator_kind(s.at("estimator"));
  const auto reps = static_cast<std::size_t>(s.at("repetitions").get<int>());
  const std::uint64_t seed = root_seed(cfg);
  const auto traces = parallel_map(reps, workers, [&](std::size_t rep) {
    const auto score = make_unbiased_score(target, kc, dist, ec, kind, seed,
                                           static_cast<std::uint64_t>(rep + 1) << 32, sc.replicates_per_step);
    return sgd_run(sc, score);
  });
  const long d = sc.theta0.size();
  std::ostringstream os;
  os << "repetition,iteration" << value_columns("theta_", d) << value_columns("grad_", d)
     << ",cost_units,cumulative_cost\n";
  json finals = json::array();
  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (const auto& st : traces[rep]) {
      os << rep << ',' << st.iteration;
      append_values(os, st.theta);
      append_values(os, st.gradient);
      os << ',' << fmt_num(st.cost_units) << ',' << fmt_num(st.cumulative_cost) << '\n';
    }
    finals.push_back(vec_to_json(traces[rep].back().theta));
  }
  ExperimentResult r;
  r.csv = os.str();
  r.summary = {{"repetitions", reps}, {"final_theta", finals}};
  if (cfg.at("model") == "toy" && !sc.map) {
    const double mle = static_cast<const ToyModel&>(*target).mle();
    std::vector<double> err;
    for (const auto& t : traces) err.push_back(std::abs(t.back().theta[0] - mle));
    const double start = std::abs(sc.theta0[0] - mle);
    const double med = quantile(err, 0.5);
    const double limit = cfg.at("check").at("sgd_ratio").get<double>();
    // mean squared error against the MLE along the iterations, for plotting
    json mse = json::array();
    for (long i = 0; i <= sc.iterations; ++i) {
      double acc = 0.0;
      for (const auto& t : traces) acc += std::pow(t[static_cast<std::size_t>(i)].theta[0] - mle, 2);
      mse.push_back(acc / static_cast<double>(reps));
    }
    r.summary["theta_mle"] = mle;
    r.summary["median_abs_error"] = med;
    r.summary["initial_abs_error"] = start;
    r.summary["mse_by_iteration"] = mse;
    r.checks.push_back({"sgd_converges", med < limit * start,
                        "median error " + fmt_num(med) + " vs " + fmt_num(limit) + " x " + fmt_num(start)});
  }
  return r;
}

// Coupling correctness: marginal KS tests, overlap frequency and faithfulness.
ExperimentResult coupling_tests(const json& cfg, unsigned workers) {
  const json& ct = cfg.at("coupling_tests");
  const auto draws = ct.at("draws").get<long>();
  const auto runs = static_cast<std::size_t>(ct.at("runs").get<long>());
  const double alpha = ct.at("alpha").get<double>();
  const std::uint64_t seed = root_seed(cfg);
  ExperimentResult r;
  std::ostringstream os;
  os << "test,configuration,statistic,p_value,pass\n";
  json tests = json::array();
  auto record = [&](const std::string& test, const std::string& conf, double stat, double p, bool pass) {
    os << test << ',' << conf << ',' << fmt_num(stat) << ',' << fmt_num(p) << ',' << (pass ? 1 : 0) << '\n';
    tests.push_back({{"test", test}, {"configuration", conf}, {"statistic", stat}, {"p_value", p}, {"pass", pass}});
  };

  // Marginals of each slot: KS of the first coordinate against its Gaussian proposal.
  bool ks_ok = true;
  auto ks_slots = [&](const std::string& conf, const std::vector<Vec>& centres, double scale,
                      const std::function<std::vector<Vec>(RngStream&)>& draw, std::uint64_t tag) {
    std::vector<std::vector<double>> cols(centres.size());
    RngStream s = derive_stream({seed, tag, StreamTag::Coupling});
    for (long i = 0; i < draws; ++i) {
      const auto out = draw(s);
      for (std::size_t j = 0; j < centres.size(); ++j) cols[j].push_back(out[j][0]);
    }
    for (std::size_t j = 0; j < centres.size(); ++j) {
      const double c = centres[j][0];
      const auto [d, p] = ks_test(cols[j], [&](double v) { return normal_cdf((v - c) / scale); });
      const bool pass = p > alpha;
      ks_ok = ks_ok && pass;
      record("marginal_ks", conf + "/slot" + std::to_string(j), d, p, pass);
    }
  };
  auto v1 = [](double a) { return Vec::Constant(1, a); };
  auto v2 = [](double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
  };
  {
    const auto p = GaussianProposal::rwmh_isotropic(1, 1.0);
    const Vec x = v1(0.0), w = v1(3.0);
    ks_slots("pair-max-N(0,1)-N(3,1)", {x, w}, 1.0,
             [&](RngStream& s) {
               auto d = maximal_pair(p, x, w, s);
               return std::vector<Vec>{d.x_prop, d.w_prop};
             },
             1);
  }
  {
    const auto pl = GaussianProposal::rwmh_isotropic(2, 1.0);
    const auto plm1 = GaussianProposal::rwmh_isotropic(2, 1.0);
    const QuadPositions z{v2(0, 0), v2(1, 0.5), v2(2, -0.5), v2(3, 1)};
    ks_slots("quad-max-rwmh-2d", {z.x_l, z.w_l, z.x_lm1, z.w_lm1}, 1.0,
             [&](RngStream& s) {
               auto d = maximal_quad(pl, plm1, z, s);
               return std::vector<Vec>{d.x_l, d.w_l, d.x_lm1, d.w_lm1};
             },
             2);
  }
  {
    const double rho = 0.9;
    const auto p = GaussianProposal::pcn_isotropic(2, rho, 2.0);
    const QuadPositions z{v2(0.5, 0), v2(-1, 1), v2(1.5, 0.2), v2(0, -2)};
    const double sd = 2.0 * std::sqrt(1.0 - rho * rho);
    ks_slots("reflection-quad-pcn-2d", {rho * z.x_l, rho * z.w_l, rho * z.x_lm1, rho * z.w_lm1}, sd,
             [&](RngStream& s) {
               auto d = reflection_maximal_quad(p, p, z, s);
               return std::vector<Vec>{d.x_l, d.w_l, d.x_lm1, d.w_lm1};
             },
             3);
  }
  r.checks.push_back({"marginal_ks", ks_ok, "all slot marginals p > " + fmt_num(alpha)});

  // Meeting frequency of the maximal pair against the overlap 2 Phi(-1.5).
  {
    const auto p = GaussianProposal::rwmh_isotropic(1, 1.0);
    RngStream s = derive_stream({seed, 4, StreamTag::Coupling});
    long met = 0;
    for (long i = 0; i < draws; ++i) met += maximal_pair(p, v1(0.0), v1(3.0), s).met ? 1 : 0;
    const double freq = static_cast<double>(met) / static_cast<double>(draws);
    const double overlap = 2.0 * normal_cdf(-1.5);
    const double tol = cfg.at("check").at("meeting_tolerance").get<double>();
    const bool pass = std::abs(freq - overlap) <= tol;
    record("meeting_frequency", "pair-max-N(0,1)-N(3,1)", freq, overlap, pass);
    r.checks.push_back({"meeting_frequency", pass, "frequency " + fmt_num(freq) + " vs overlap " + fmt_num(overlap)});
  }

  // Faithfulness: once a pair meets it stays met, over full coupled runs of the configured model.
  {
    const TargetPtr target = build_target(cfg);
    const CoupledKernel kernel(target, build_kernel(cfg, target->dim()));
    EstimatorConfig ec = build_estimator(cfg);
    ec.m = ct.at("run_m").get<long>();
    ec.k = std::min(ec.k, ec.m);
    ec.keep_trajectories = true;
    const Observable phi = build_observable(cfg);
    const int max_level = cfg.at("levels").at("max");
    auto faithful = [](const PairTrajectory& t, long tau) {
      for (std::size_t n = static_cast<std::size_t>(tau); n < t.x.size(); ++n) {
        if (!bitwise_equal(t.x[n].x, t.w[n].x)) return false;
      }
      return true;
    };
    const auto bad = parallel_map(runs, workers, [&](std::size_t i) {
      const int level = static_cast<int>(i % static_cast<std::size_t>(max_level + 1));
      RngStream init = derive_stream({seed, level_replicate(level, i), StreamTag::Init});
      RngStream chain = derive_stream({seed, level_replicate(level, i), StreamTag::Chain});
      const RunRecord rec = run_level(kernel, level, phi, ec, init, chain);
      bool ok = faithful(*rec.upper, rec.tau_l);
      if (rec.lower) ok = ok && faithful(*rec.lower, rec.tau_lm1);
      return ok ? 0 : 1;
    });
    long violations = 0;
    for (int b : bad) violations += b;
    record("faithfulness", cfg.at("model").get<std::string>(), static_cast<double>(violations),
           static_cast<double>(runs), violations == 0);
    r.checks.push_back({"faithfulness", violations == 0,
                        std::to_string(violations) + " violations in " + std::to_string(runs) + " runs"});
  }
  r.csv = os.str();
  r.summary = {{"tests", tests}};
  return r;
}

}  // namespace

ExperimentResult run_experiment(const json& cfg, unsigned workers) {
  const std::string e = cfg.at("experiment");
  ExperimentResult r;
  if (e == "forward-rate") {
    r = forward_rate(cfg);
  } else if (e == "increment-rate") {
    r = increment_rate(cfg, workers);
  } else if (e == "estimate") {
    r = estimate(cfg, workers);
  } else if (e == "mse-vs-n") {
    r = mse_vs_n(cfg, workers);
  } else if (e == "sgd") {
    r = sgd(cfg, workers);
  } else if (e == "coupling-tests") {
    r = coupling_tests(cfg, workers);
  } else {
    throw Error(ErrorKind::Config, "unknown experiment '" + e + "'");
  }
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  r.summary["schema_version"] = kSchemaVersion;
  r.summary["model"] = cfg.at("model");
  r.summary["experiment"] = e;
  r.summary["seed"] = cfg.at("seed");
  r.summary["checks"] = checks;
  return r;
}

void write_outputs(const std::filesystem::path& dir, const json& cfg, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + (dir / name).string());
    out << body;
  };
  write("replicates.csv", result.csv);
  write("summary.json", result.summary.dump(2) + "\n");
  json manifest = {{"schema_version", kSchemaVersion}, {"seed", cfg.at("seed")}, {"config", cfg}};
  if (cfg.at("data").contains("file") && !cfg.at("data").at("file").is_null()) {
    manifest["data_source"] = "file";
  } else {
    manifest["data_source"] = "generated";
  }
  write("manifest.json", manifest.dump(2) + "\n");
}

int check_exit_code(const std::vector<Check>& checks) {
  int code = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (!checks[i].pass) code |= 1 << std::min<std::size_t>(i, 5);
  }
  return code;
}

}  // namespace ubmc::harness

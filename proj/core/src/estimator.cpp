// SPDX-License-Identifier: Apache-2.0
#include "ubmc/estimator.hpp"

#include <cmath>

#include "ubmc/error.hpp"

namespace ubmc {

Observable identity_observable() {
  return [](int, const ChainPoint& p) { return p.x; };
}

Observable score_observable() {
  return [](int, const ChainPoint& p) { return p.density.score; };
}

Observable identity_and_score_observable() {
  return [](int, const ChainPoint& p) {
    const auto d = p.x.size();
    const auto s = p.density.score.size();
    if (d + s > kMaxDim) throw Error(ErrorKind::InvalidDimension, "observable wider than the vector capacity");
    Vec out(d + s);
    out << p.x, p.density.score;
    return out;
  };
}

void EstimatorConfig::validate() const {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 0");
  if (k > m) throw Error(ErrorKind::InvalidArgument, "k must not exceed m");
  if (n_max < m) throw Error(ErrorKind::InvalidArgument, "n_max must be >= m");
}

namespace {

double ramp(long n, long k, long m) {
  return std::min(1.0, static_cast<double>(n - k) / static_cast<double>(m - k + 1));
}

// Streaming form of the time-averaged estimator for one pair.
class TimeAverage {
 public:
  TimeAverage(long k, long m) : k_(k), m_(m) {}

  // W is ignored (pass nullptr) once the pair has met at or before n.
  void observe(long n, const Vec& fx, const Vec* fw) {
    if (sum_.size() == 0) sum_ = Vec::Zero(fx.size());
    if (n >= k_ && n <= m_) sum_ += fx / static_cast<double>(m_ - k_ + 1);
    if (fw != nullptr && n >= k_ + 1) sum_ += ramp(n, k_, m_) * (fx - *fw);
  }

  Vec value() const { return sum_; }

 private:
  long k_;
  long m_;
  Vec sum_;
};

void observe_pair(TimeAverage& acc, const Observable& phi, int level, const PairState& s, long n) {
  const Vec fx = phi(level, s.x);
  if (s.met()) {
    acc.observe(n, fx, nullptr);
  } else {
    const Vec fw = phi(level, s.w);
    acc.observe(n, fx, &fw);
  }
}

void record(std::optional<PairTrajectory>& t, const PairState& s) {
  if (!t) return;
  t->x.push_back(s.x);
  t->w.push_back(s.w);
}

}  // namespace

Vec estimate_fixed_level(const Observable& phi, int level, const PairTrajectory& t, long tau, long k, long m) {
  if (k > m) throw Error(ErrorKind::InvalidArgument, "k must not exceed m");
  const long stop = static_cast<long>(t.x.size()) - 1;
  if (m > stop) throw Error(ErrorKind::InvalidArgument, "trajectory shorter than m");
  if (tau - 1 > stop) throw Error(ErrorKind::InvalidArgument, "trajectory ends before the meeting time");
  Vec out = Vec::Zero(phi(level, t.x[0]).size());
  for (long n = k; n <= m; ++n) out += phi(level, t.x[n]) / static_cast<double>(m - k + 1);
  for (long n = k + 1; n <= tau - 1; ++n) {
    out += ramp(n, k, m) * (phi(level, t.x[n]) - phi(level, t.w[n]));
  }
  return out;
}

Vec estimate_increment(const Observable& phi, const RunRecord& rec, long k, long m) {
  if (!rec.upper || !rec.lower) throw Error(ErrorKind::InvalidArgument, "run record holds no quad trajectories");
  return estimate_fixed_level(phi, rec.level, *rec.upper, rec.tau_l, k, m) -
         estimate_fixed_level(phi, rec.level - 1, *rec.lower, rec.tau_lm1, k, m);
}

RunRecord run_pair(const CoupledKernel& kernel, int level, const Observable& phi, const EstimatorConfig& cfg,
                   RngStream& init, RngStream& chain) {
  cfg.validate();
  CostLedger ledger;
  RunRecord rec;
  rec.level = level;
  if (cfg.keep_trajectories) rec.upper.emplace();

  PairState s = kernel.initial_pair(level, init, ledger);
  TimeAverage acc(cfg.k, cfg.m);
  long n = 0;
  observe_pair(acc, phi, level, s, n);
  record(rec.upper, s);
  while (n < cfg.m || !s.met()) {
    if (n >= cfg.n_max) {
      throw Error(ErrorKind::StopCapExceeded, "pair at level " + std::to_string(level) + " did not meet within " +
                                                  std::to_string(cfg.n_max) + " steps");
    }
    ++n;
    kernel.step_pair(level, s, n, chain, ledger);
    observe_pair(acc, phi, level, s, n);
    record(rec.upper, s);
  }
  rec.tau_l = *s.met_at;
  rec.stop_time = n;
  rec.cost_units = ledger.units();
  rec.value = acc.value();
  return rec;
}

RunRecord run_quad(const CoupledKernel& kernel, int level, const Observable& phi, const EstimatorConfig& cfg,
                   RngStream& init, RngStream& chain) {
  cfg.validate();
  CostLedger ledger;
  RunRecord rec;
  rec.level = level;
  if (cfg.keep_trajectories) {
    rec.upper.emplace();
    rec.lower.emplace();
  }

  QuadState z = kernel.initial_quad(level, init, ledger);
  TimeAverage up(cfg.k, cfg.m);
  TimeAverage lo(cfg.k, cfg.m);
  observe_pair(up, phi, level, z.upper, z.n);
  observe_pair(lo, phi, level - 1, z.lower, z.n);
  record(rec.upper, z.upper);
  record(rec.lower, z.lower);
  while (z.n < cfg.m || !z.upper.met() || !z.lower.met()) {
    if (z.n >= cfg.n_max) {
      throw Error(ErrorKind::StopCapExceeded, "quad at level " + std::to_string(level) + " did not meet within " +
                                                  std::to_string(cfg.n_max) + " steps");
    }
    kernel.step_quad(level, z, chain, ledger);
    observe_pair(up, phi, level, z.upper, z.n);
    observe_pair(lo, phi, level - 1, z.lower, z.n);
    record(rec.upper, z.upper);
    record(rec.lower, z.lower);
  }
  rec.tau_l = *z.upper.met_at;
  rec.tau_lm1 = *z.lower.met_at;
  rec.stop_time = z.n;
  rec.cost_units = ledger.units();
  rec.value = up.value() - lo.value();
  return rec;
}

RunRecord run_level(const CoupledKernel& kernel, int level, const Observable& phi, const EstimatorConfig& cfg,
                    RngStream& init, RngStream& chain) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  if (level == 0) return run_pair(kernel, 0, phi, cfg, init, chain);
  return run_quad(kernel, level, phi, cfg, init, chain);
}

EstimatorKind parse_estimator_kind(const std::string& s) {
  if (s == "single-term") return EstimatorKind::SingleTerm;
  if (s == "independent-sum") return EstimatorKind::IndependentSum;
  if (s == "fixed-level") return EstimatorKind::FixedLevel;
  throw Error(ErrorKind::Config, "unknown estimator kind '" + s + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::SingleTerm: return "single-term";
    case EstimatorKind::IndependentSum: return "independent-sum";
    case EstimatorKind::FixedLevel: return "fixed-level";
  }
  return "unknown";
}

namespace {

struct Streams {
  RngStream level;
  RngStream init;
  RngStream chain;

  explicit Streams(ReplicateSeed s)
      : level(derive_stream({s.root_seed, s.replicate_id, StreamTag::LevelSampler})),
        init(derive_stream({s.root_seed, s.replicate_id, StreamTag::Init})),
        chain(derive_stream({s.root_seed, s.replicate_id, StreamTag::Chain})) {}
};

LevelRun summarize(const RunRecord& r, double weight) {
  return {r.level, r.tau_l, r.tau_lm1, r.stop_time, r.cost_units, weight};
}

}  // namespace

UnbiasedEstimate single_term(const CoupledKernel& kernel, const Observable& phi, const LevelDistribution& dist,
                             const EstimatorConfig& cfg, ReplicateSeed seed) {
  Streams st(seed);
  const int level = dist.sample(st.level);
  const RunRecord r = run_level(kernel, level, phi, cfg, st.init, st.chain);
  const double weight = 1.0 / dist.mass(level);
  UnbiasedEstimate e;
  e.kind = EstimatorKind::SingleTerm;
  e.replicate_id = seed.replicate_id;
  e.level = level;
  e.value = weight * r.value;
  e.cost_units = r.cost_units;
  e.runs.push_back(summarize(r, weight));
  return e;
}

UnbiasedEstimate independent_sum(const CoupledKernel& kernel, const Observable& phi, const LevelDistribution& dist,
                                 const EstimatorConfig& cfg, ReplicateSeed seed) {
  Streams st(seed);
  const int top = dist.sample(st.level);
  UnbiasedEstimate e;
  e.kind = EstimatorKind::IndependentSum;
  e.replicate_id = seed.replicate_id;
  e.level = top;
  for (int l = 0; l <= top; ++l) {
    const RunRecord r = run_level(kernel, l, phi, cfg, st.init, st.chain);
    const double weight = 1.0 / dist.survival(l);
    if (e.value.size() == 0) e.value = Vec::Zero(r.value.size());
    e.value += weight * r.value;
    e.cost_units += r.cost_units;
    e.runs.push_back(summarize(r, weight));
  }
  return e;
}

UnbiasedEstimate fixed_level(const CoupledKernel& kernel, const Observable& phi, int level,
                             const EstimatorConfig& cfg, ReplicateSeed seed) {
  Streams st(seed);
  const RunRecord r = run_level(kernel, level, phi, cfg, st.init, st.chain);
  UnbiasedEstimate e;
  e.kind = EstimatorKind::FixedLevel;
  e.replicate_id = seed.replicate_id;
  e.level = level;
  e.value = r.value;
  e.cost_units = r.cost_units;
  e.runs.push_back(summarize(r, 1.0));
  return e;
}

ReplicateSummary average_values(const std::vector<Vec>& values) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "cannot average an empty replicate list");
  ReplicateSummary s;
  s.count = values.size();
  s.mean = Vec::Zero(values.front().size());
  for (const auto& v : values) s.mean += v;
  s.mean /= static_cast<double>(s.count);
  if (s.count > 1) {
    Vec ss = Vec::Zero(s.mean.size());
    for (const auto& v : values) ss += (v - s.mean).cwiseAbs2();
    const double n = static_cast<double>(s.count);
    s.std_error = (ss / (n - 1.0) / n).cwiseSqrt();
  }
  return s;
}

ReplicateSummary average_replicates(const std::vector<UnbiasedEstimate>& estimates) {
  if (estimates.empty()) throw Error(ErrorKind::EmptyInput, "cannot average an empty replicate list");
  std::vector<Vec> values;
  values.reserve(estimates.size());
  double cost = 0.0;
  for (const auto& e : estimates) {
    values.push_back(e.value);
    cost += e.cost_units;
  }
  ReplicateSummary s = average_values(values);
  s.total_cost = cost;
  return s;
}

}  // namespace ubmc

// SPDX-License-Identifier: Apache-2.0
#include "ubmc/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ubmc/error.hpp"
#include "ubmc/models/elliptic.hpp"
#include "ubmc/models/sirx.hpp"
#include "ubmc/models/toy.hpp"

namespace ubmc::harness {

namespace {

json common_defaults() {
  return json{
      {"schema_version", kSchemaVersion},
      {"experiment", "estimate"},
      {"seed", 1},
      {"workers", 0},
      {"output", "out"},
      {"kernel", {{"kind", "pcn"}, {"init_variance_factor", 1.0}}},
      {"proposal", {{"kind", "pcn"}, {"rho", 0.95}, {"sigma", 1.0}, {"overrides", json::object()}}},
      {"coupling", {{"kind", "reflection-max"}, {"kappa", 0.5}, {"meet", "reflection-max"}}},
      {"hmc",
       {{"epsilon", 0.1},
        {"steps", 10},
        {"kappa", 0.9},
        {"fallback_scale", 1e-4},
        {"fallback_coupling", "reflection-max"}}},
      {"estimator", {{"kind", "single-term"}, {"k", 100}, {"m", 1000}, {"n_max", 100000}}},
      {"observable", "x"},
      {"replicates", 100},
      {"levels", {{"min", 1}, {"max", 6}}},
      {"mse",
       {{"n_values", {64, 128, 256, 512, 1024, 2048, 4096, 8192}},
        {"outer", {160, 120, 80, 60, 40, 30, 25, 20}},
        {"reference", nullptr}}},
      {"sgd",
       {{"alpha1", 0.03},
        {"iterations", 1000},
        {"replicates_per_step", 1},
        {"map", false},
        {"repetitions", 100},
        {"estimator", "single-term"}}},
      {"coupling_tests", {{"draws", 100000}, {"runs", 10000}, {"run_m", 20}, {"alpha", 0.01}}},
      {"check",
       {{"increment_slope", {-5.0, -3.0}},
        {"forward_slope", {-5.0, -3.0}},
        {"mse_slope", {-1.2, -0.8}},
        {"z_max", 4.0},
        {"sgd_ratio", 0.1},
        {"meeting_tolerance", 0.01}}},
  };
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "schema_version", "model",  "experiment", "seed",      "workers",   "output",     "theta",
      "data",           "level",  "kernel",     "proposal",  "coupling",  "hmc",        "estimator",
      "observable",     "replicates", "levels", "forward",   "mse",       "sgd",        "coupling_tests",
      "check"};
  return keys;
}

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> e{"forward-rate", "increment-rate", "mse-vs-n",
                                       "estimate",     "sgd",            "coupling-tests"};
  return e;
}

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

const json& need(const json& j, const std::string& key) {
  if (!j.contains(key)) config_error("missing config key '" + key + "'");
  return j.at(key);
}

// Scalar -> scale * I, flat list -> diagonal, nested list -> lower-triangular factor.
Mat json_to_factor(const json& j, int dim) {
  if (j.is_number()) return j.get<double>() * Mat::Identity(dim, dim);
  if (!j.is_array() || static_cast<int>(j.size()) != dim) config_error("proposal.sigma must be a scalar or have dim entries");
  Mat m = Mat::Zero(dim, dim);
  if (j.front().is_number()) {
    for (int i = 0; i < dim; ++i) m(i, i) = j.at(i).get<double>();
    return m;
  }
  for (int i = 0; i < dim; ++i) {
    if (!j.at(i).is_array() || static_cast<int>(j.at(i).size()) != dim) config_error("proposal.sigma rows must have dim entries");
    for (int c = 0; c < dim; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

GaussianProposal build_proposal(const json& p, const json& base, int dim) {
  const std::string kind = p.value("kind", base.value("kind", std::string("pcn")));
  const double rho = p.value("rho", base.value("rho", 0.95));
  const Mat sigma = json_to_factor(p.contains("sigma") ? p.at("sigma") : base.at("sigma"), dim);
  if (kind == "pcn") return GaussianProposal::pcn(rho, sigma);
  if (kind == "rwmh") return GaussianProposal::rwmh(sigma);
  config_error("unknown proposal kind '" + kind + "'");
}

int model_dim(const std::string& model) { return model == "sirx" ? 3 : 2; }

}  // namespace

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec json_to_vec(const json& j) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim)) {
    config_error("expected a number or a list of 1 to 6 numbers");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  return v;
}

json vec_to_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

json default_config(const std::string& model) {
  json d = common_defaults();
  d["model"] = model;
  if (model == "toy") {
    d["theta"] = {1.0};
    d["data"] = {{"file", nullptr}, {"seed", 7}, {"level", nullptr}, {"x", {2.0, -2.0}}, {"theta", {1.0}}};
    d["level"] = {{"l0", 5}, {"eta", 2.5}, {"cap", 30}};
    d["kernel"]["kind"] = "hmc-mix";
    d["proposal"]["sigma"] = 4.0;
    d["forward"] = {{"x", {2.0, -2.0}}};
    d["sgd"]["theta0"] = {1.0};
  } else if (model == "elliptic") {
    d["theta"] = {0.1};
    d["data"] = {{"file", nullptr}, {"seed", 7}, {"level", 10}, {"x", {0.6, -0.4}}, {"theta", {1.0}}};
    d["level"] = {{"l0", 3}, {"eta", 2.5}, {"cap", 30}};
    d["kernel"]["kind"] = "hmc-mix";
    d["hmc"]["epsilon"] = 0.01;
    d["hmc"]["steps"] = 40;
    d["hmc"]["fallback_scale"] = 0.02;
    d["observable"] = "score";
    d["forward"] = {{"x", {0.6, -0.4}}};
    d["sgd"]["theta0"] = {0.1};
    d["sgd"]["map"] = true;
  } else if (model == "sirx") {
    d["theta"] = {1.0, 1.0};
    d["data"] = {{"file", nullptr}, {"seed", 7}, {"level", 8}, {"x", {0.002, 0.3, 15.0}}, {"theta", {1.0, 1.0}}};
    d["level"] = {{"l0", 0}, {"eta", 4.5}, {"cap", 30}};
    d["kernel"]["kind"] = "rwmh";
    d["proposal"]["kind"] = "rwmh";
    d["proposal"]["sigma"] = {1e-4, 0.01, 1.0};
    d["estimator"]["k"] = 200;
    d["estimator"]["m"] = 2000;
    d["observable"] = "score";
    d["levels"] = {{"min", 1}, {"max", 5}};
    d["forward"] = {{"x", {0.002, 0.3, 15.0}}};
    d["sgd"]["theta0"] = {1.0, 1.0};
    d["check"]["increment_slope"] = {-9.5, -6.5};
    d["check"]["forward_slope"] = {-9.5, -6.5};
  } else {
    config_error("unknown model '" + model + "' (expected toy, elliptic or sirx)");
  }
  return d;
}

json resolve_config(const json& user) {
  if (!user.is_object()) config_error("config must be a JSON object");
  for (const auto& [key, _] : user.items()) {
    if (!known_keys().contains(key)) config_error("unknown config key '" + key + "'");
  }
  if (user.contains("schema_version") && user.at("schema_version") != kSchemaVersion) {
    config_error("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  json cfg = default_config(need(user, "model").get<std::string>());
  cfg.merge_patch(user);

  if (!known_experiments().contains(cfg.at("experiment").get<std::string>())) {
    config_error("unknown experiment '" + cfg.at("experiment").get<std::string>() + "'");
  }
  if (cfg.at("seed").get<long long>() < 0) config_error("seed must be >= 0");
  if (cfg.at("replicates").get<long>() < 1) config_error("replicates must be >= 1");
  const auto lmin = cfg.at("levels").at("min").get<int>();
  const auto lmax = cfg.at("levels").at("max").get<int>();
  if (lmin < 1 || lmax - lmin < 2) config_error("levels need min >= 1 and at least 3 levels");
  const auto& mse = cfg.at("mse");
  if (mse.at("n_values").size() != mse.at("outer").size() || mse.at("n_values").size() < 3) {
    config_error("mse.n_values and mse.outer must have equal length >= 3");
  }

  // Building every component validates it before any compute.
  const TargetPtr target = build_target(cfg);
  build_kernel(cfg, target->dim()).validate(target->dim());
  build_estimator(cfg).validate();
  build_level_distribution(cfg);
  build_observable(cfg);
  build_estimator_kind(cfg);
  if (cfg.at("experiment") == "sgd") build_sgd(cfg).validate();
  if (json_to_vec(cfg.at("forward").at("x")).size() != target->dim()) config_error("forward.x has the wrong dimension");
  return cfg;
}

Dvec read_observations_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open data file " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "index,y") config_error("data file must start with the header 'index,y'");
  std::vector<double> ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) config_error("malformed data row '" + line + "'");
    const long idx = std::stol(line.substr(0, comma));
    if (idx != static_cast<long>(ys.size()) + 1) config_error("data rows must be indexed 1..P in order");
    ys.push_back(std::stod(line.substr(comma + 1)));
  }
  return Eigen::Map<const Dvec>(ys.data(), static_cast<Eigen::Index>(ys.size()));
}

std::string observations_csv(const Dvec& y) {
  std::ostringstream os;
  os << "index,y\n";
  for (Eigen::Index i = 0; i < y.size(); ++i) os << (i + 1) << ',' << fmt_num(y[i]) << '\n';
  return os.str();
}

Dvec load_or_generate_data(const json& cfg) {
  const json& d = need(cfg, "data");
  if (d.contains("file") && !d.at("file").is_null()) return read_observations_csv(d.at("file").get<std::string>());
  const std::string model = cfg.at("model");
  RngStream s = derive_stream({d.at("seed").get<std::uint64_t>(), 0, StreamTag::Init});
  const Vec x = json_to_vec(d.at("x"));
  const Vec theta = json_to_vec(d.at("theta"));
  if (x.size() != model_dim(model)) config_error("data.x has the wrong dimension");
  if (model == "toy") {
    std::optional<int> level;
    if (!d.at("level").is_null()) level = d.at("level").get<int>();
    return ToyModel::generate_data(to_vec2(x), theta[0], level, s);
  }
  if (d.at("level").is_null()) config_error("data.level is required for " + model);
  const int level = d.at("level").get<int>();
  if (model == "elliptic") return EllipticModel::generate_data(x, theta[0], level, s);
  return SirxModel::generate_data(x, theta, level, s);
}

TargetPtr build_target(const json& cfg) {
  const std::string model = need(cfg, "model");
  const Vec theta = json_to_vec(need(cfg, "theta"));
  const int l0 = cfg.at("level").at("l0").get<int>();
  Dvec y = load_or_generate_data(cfg);
  if (model == "toy") {
    if (theta.size() != 1) config_error("toy theta is a scalar");
    return std::make_shared<ToyModel>(std::move(y), theta[0], l0);
  }
  if (model == "elliptic") {
    if (theta.size() != 1) config_error("elliptic theta is a scalar");
    return std::make_shared<EllipticModel>(std::move(y), theta[0], l0);
  }
  if (l0 != 0) config_error("sirx has a fixed schedule; level.l0 must be 0");
  return std::make_shared<SirxModel>(std::move(y), theta);
}

KernelConfig build_kernel(const json& cfg, int dim) {
  KernelConfig kc;
  const json& k = cfg.at("kernel");
  kc.kind = parse_kernel_kind(k.at("kind"));
  kc.init_variance_factor = k.value("init_variance_factor", 1.0);
  const json& p = cfg.at("proposal");
  kc.proposals = ProposalLadder(build_proposal(p, p, dim));
  for (const auto& [lvl, over] : p.at("overrides").items()) {
    kc.proposals.set_override(std::stoi(lvl), build_proposal(over, p, dim));
  }
  const json& c = cfg.at("coupling");
  kc.coupling.kind = parse_coupling_kind(c.at("kind"));
  kc.coupling.kappa = c.at("kappa").get<double>();
  kc.coupling.meet = parse_coupling_kind(c.at("meet"));
  const json& h = cfg.at("hmc");
  kc.hmc.epsilon = h.at("epsilon").get<double>();
  kc.hmc.steps = h.at("steps").get<int>();
  kc.hmc.kappa = h.at("kappa").get<double>();
  kc.hmc.fallback_scale = h.at("fallback_scale").get<double>();
  kc.hmc.fallback_coupling = parse_coupling_kind(h.at("fallback_coupling"));
  kc.validate(dim);
  return kc;
}

EstimatorConfig build_estimator(const json& cfg) {
  const json& e = cfg.at("estimator");
  EstimatorConfig ec;
  ec.k = e.at("k").get<long>();
  ec.m = e.at("m").get<long>();
  ec.n_max = e.at("n_max").get<long>();
  ec.validate();
  return ec;
}

LevelDistribution build_level_distribution(const json& cfg) {
  const json& l = cfg.at("level");
  return LevelDistribution(l.at("eta").get<double>(), l.at("cap").get<int>());
}

Observable build_observable(const json& cfg) {
  const std::string name = cfg.at("observable");
  if (name == "x") return identity_observable();
  if (name == "score") return score_observable();
  if (name == "x+score") return identity_and_score_observable();
  config_error("unknown observable '" + name + "' (expected x, score or x+score)");
}

EstimatorKind build_estimator_kind(const json& cfg) {
  const auto kind = parse_estimator_kind(cfg.at("estimator").at("kind"));
  if (kind == EstimatorKind::FixedLevel) config_error("estimator.kind must be single-term or independent-sum");
  return kind;
}

SgdConfig build_sgd(const json& cfg) {
  const json& s = cfg.at("sgd");
  SgdConfig sc;
  sc.theta0 = json_to_vec(need(s, "theta0"));
  sc.alpha1 = s.at("alpha1").get<double>();
  sc.iterations = s.at("iterations").get<long>();
  sc.replicates_per_step = s.at("replicates_per_step").get<int>();
  sc.map = s.at("map").get<bool>();
  if (s.contains("log_mask")) sc.log_mask = s.at("log_mask").get<std::vector<bool>>();
  if (s.at("repetitions").get<int>() < 1) config_error("sgd.repetitions must be >= 1");
  const auto kind = parse_estimator_kind(s.at("estimator"));
  if (kind == EstimatorKind::FixedLevel) config_error("sgd.estimator must be single-term or independent-sum");
  return sc;
}

}  // namespace ubmc::harness

#include "ipse/harness.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ipse {

namespace {

LearnerConfig learner_defaults_from(const KeyValueConfig& cfg) {
  LearnerConfig lc;
  lc.rollout.rollouts_per_action = int(cfg.get_int("rollouts", 10));
  lc.rollout.rollout_length = int(cfg.get_int("rollout_length", 10));
  lc.rollout.gamma = cfg.get_double("gamma", 1.0);
  lc.lfd.alpha = cfg.get_double("alpha", 0.05);
  lc.lfd.use_alternative_rollout_policy =
      cfg.get_bool("lfd_alternative_policy", true);
  lc.lfd.iteration_cap = int(cfg.get_int("lfd_iteration_cap", 5000));
  lc.schedule_c = cfg.get_double("schedule_c", 5.0);
  lc.window_cap = int(cfg.get_int("window_cap", 100));
  lc.total_iterations = int(cfg.get_int("total_iterations", 400));
  lc.eval_every = int(cfg.get_int("eval_every", 20));
  lc.eval_games = int(cfg.get_int("eval_games", 30));
  lc.eval_step_cap = cfg.get_int("eval_step_cap", 1'000'000);
  lc.cv_folds = int(cfg.get_int("cv_folds", 5));
  return lc;
}

}  // namespace

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg) {
  ExperimentConfig ec;
  ec.replications = int(cfg.get_int("replications", 20));
  ec.master_seed = std::uint64_t(cfg.get_int("master_seed", 0));
  ec.parallelism = int(cfg.get_int("parallel", 1));
  ec.output_dir = cfg.get_string("output_dir", "out");

  LearnerConfig base = learner_defaults_from(cfg);
  std::string variants = cfg.get_string("variants", "ipse");
  std::istringstream in(variants);
  std::string name;
  while (std::getline(in, name, ',')) {
    auto b = name.find_first_not_of(" \t");
    auto e = name.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    name = name.substr(b, e - b + 1);
    auto v = variant_from_name(name);
    if (!v) throw std::runtime_error("unknown variant: " + name);
    LearnerConfig lc = base;
    lc.variant = *v;
    ec.learners.push_back(lc);
  }
  if (ec.learners.empty()) throw std::runtime_error("no variants configured");
  if (ec.replications < 1) throw std::runtime_error("replications must be >= 1");

  auto unknown = cfg.unknown_keys();
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw std::runtime_error(msg);
  }
  return ec;
}

std::pair<Eigen::VectorXd, bool> rescale_weights_for_report(
    const Eigen::VectorXd& beta) {
  double norm = std::abs(beta[tetris::kRowsWithHoles]);
  if (norm == 0) return {beta, false};
  return {beta / norm, true};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string weights_csv_header() {
  std::string h = "variant,replication,iteration,phase,lambda";
  for (auto name : tetris::feature_names()) {
    h += ",beta_";
    h += name;
  }
  h += ",rescaled_flag";
  return h;
}

std::string features_csv_header() {
  std::string h;
  for (auto name : tetris::feature_names()) {
    if (!h.empty()) h += ',';
    h += name;
  }
  return h;
}

namespace {

const char* phase_name(Phase p) { return p == Phase::kLfd ? "LFD" : "M"; }

struct Job {
  int learner_index;
  int replication;
};

void write_outputs(const ExperimentConfig& config,
                   const std::vector<LearningTrace>& traces,
                   const std::vector<Job>& jobs) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  auto path = [&](const char* name) {
    return (fs::path(config.output_dir) / name).string();
  };
  std::ofstream curve(path("learning_curve.csv"));
  std::ofstream weights(path("weights.csv"));
  std::ofstream directions(path("directions.csv"));
  std::ofstream meter(path("meter.csv"));
  if (!curve || !weights || !directions || !meter)
    throw std::runtime_error("cannot write to output dir: " + config.output_dir);

  curve << "variant,replication,iteration,phase,mean_score,std_score,games,"
           "capped_games\n";
  weights << weights_csv_header() << "\n";
  directions << "variant,replication,feature,direction,decided_at_iteration,"
                "n_plus,n_minus\n";
  meter << "variant,replication,iteration,generative_calls\n";

  for (size_t j = 0; j < jobs.size(); ++j) {
    const auto& trace = traces[j];
    const std::string vname = variant_name(trace.variant);
    const int rep = jobs[j].replication;
    for (const auto& row : trace.rows) {
      std::string prefix = vname + "," + std::to_string(rep) + "," +
                           std::to_string(row.iteration) + "," +
                           phase_name(row.phase);
      if (row.eval) {
        curve << prefix << ',' << format_double(row.eval->mean_score) << ','
              << format_double(row.eval->std_score) << ',' << row.eval->games
              << ',' << row.eval->capped_games << '\n';
      }
      auto [beta, rescaled] = rescale_weights_for_report(row.beta);
      weights << prefix << ',' << format_double(row.lambda);
      for (int i = 0; i < int(beta.size()); ++i)
        weights << ',' << format_double(beta[i]);
      weights << ',' << (rescaled ? 1 : 0) << '\n';
      meter << vname << ',' << rep << ',' << row.iteration << ','
            << row.meter_delta << '\n';
    }
    if (trace.lfd) {
      const auto& d = trace.lfd->directions;
      for (int i = 0; i < d.size(); ++i) {
        directions << vname << ',' << rep << ','
                   << tetris::feature_names()[i] << ',' << d.direction[i]
                   << ',' << d.decided_at[i] << ',' << d.n_plus[i] << ','
                   << d.n_minus[i] << '\n';
      }
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  std::vector<Job> jobs;
  for (int li = 0; li < int(config.learners.size()); ++li)
    for (int r = 0; r < config.replications; ++r)
      jobs.push_back({li, r});

  ExperimentResult result;
  result.traces.resize(jobs.size());
  tetris::TetrisEnv env;

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t j = next.fetch_add(1); j < jobs.size();
         j = next.fetch_add(1)) {
      const auto& job = jobs[j];
      CallMeter meter;
      result.traces[j] =
          run_variant(env, config.learners[job.learner_index],
                      config.master_seed, std::uint64_t(job.replication), meter);
    }
  };
  int threads = std::max(1, std::min<int>(config.parallelism, int(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& trace : result.traces)
    if (trace.aborted) result.ok = false;

  write_outputs(config, result.traces, jobs);
  return result;
}

}  // namespace ipse

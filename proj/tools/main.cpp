#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ipse/harness.hpp"

namespace {

using namespace ipse;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<int> replications,
            std::optional<int> parallel) {
  auto kv = KeyValueConfig::parse_file(config_path);
  ExperimentConfig config = experiment_from_config(kv);
  config.output_dir = out_dir;
  if (seed) config.master_seed = *seed;
  if (replications) config.replications = *replications;
  if (parallel) config.parallelism = *parallel;
  auto result = run_experiment(config);
  if (!result.ok) {
    std::cerr << "error: at least one replication aborted\n";
    return 1;
  }
  std::cout << "wrote " << config.output_dir << "/{learning_curve,weights,"
            << "directions,meter}.csv\n";
  return 0;
}

Eigen::VectorXd parse_weights_row(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // skip a header row if present
    if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos)
      continue;
    std::vector<double> vals;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (int(vals.size()) != tetris::kNumFeatures)
      throw std::runtime_error("weights row must have 8 values");
    Eigen::VectorXd beta(tetris::kNumFeatures);
    for (int i = 0; i < tetris::kNumFeatures; ++i) beta[i] = vals[i];
    return beta;
  }
  throw std::runtime_error("no weights row found in " + path);
}

int cmd_eval(const std::string& weights_path, int games, std::uint64_t seed) {
  Eigen::VectorXd beta = parse_weights_row(weights_path);
  tetris::TetrisEnv env;
  Rng rng = make_rng(derive_seed(seed, 0, 0, 0));
  auto res = evaluate_policy(
      env, std::span<const double>(beta.data(), size_t(beta.size())), games,
      rng);
  std::cout << "mean_score,std_score,games,capped_games\n"
            << format_double(res.mean_score) << ','
            << format_double(res.std_score) << ',' << res.games << ','
            << res.capped_games << '\n';
  return 0;
}

int cmd_lfd(double alpha, std::uint64_t seed) {
  tetris::TetrisEnv env;
  LfdConfig cfg;
  cfg.alpha = alpha;
  Rng rng = make_rng(derive_seed(seed, 0, 0, 0));
  CallMeter meter;
  auto res = run_lfd(env, RolloutConfig{}, cfg, rng, meter);
  std::cout << "variant,replication,feature,direction,decided_at_iteration,"
               "n_plus,n_minus\n";
  for (int i = 0; i < res.directions.size(); ++i) {
    std::cout << "lfd,0," << tetris::feature_names()[i] << ','
              << res.directions.direction[i] << ','
              << res.directions.decided_at[i] << ','
              << res.directions.n_plus[i] << ','
              << res.directions.n_minus[i] << '\n';
  }
  if (!res.completed) {
    std::cerr << "error: iteration cap reached with undecided directions\n";
    return 1;
  }
  return 0;
}

int cmd_features(const std::string& board_path, const std::string& piece,
                 int rotation, int column) {
  tetris::BoardState state = tetris::parse_board_file(board_path);
  if (!piece.empty()) {
    auto p = tetris::piece_from_char(piece[0]);
    if (!p || piece.size() != 1)
      throw std::runtime_error("unknown piece: " + piece);
    state.piece = *p;
  }
  auto placed = tetris::simulate_placement(state, {rotation, column});
  if (!placed) throw std::runtime_error("illegal placement");
  auto f = tetris::compute_features(placed->event, placed->post_rows);
  for (int i = 0; i < tetris::kNumFeatures; ++i)
    std::cout << (i ? "," : "") << format_double(f[i]);
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rollout-based Tetris policy learning workbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_replications, run_parallel;
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", run_seed, "master seed override");
  run->add_option("--replications", run_replications, "replication override");
  run->add_option("--parallel", run_parallel, "max concurrent replications");

  std::string weights_path;
  int eval_games = 30;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate a weight vector");
  eval->add_option("--weights", weights_path, "CSV row of 8 weights")->required();
  eval->add_option("--games", eval_games, "number of games");
  eval->add_option("--seed", eval_seed, "seed");

  double lfd_alpha = 0.05;
  std::uint64_t lfd_seed = 0;
  auto* lfd = app.add_subcommand("lfd", "Standalone direction learning");
  lfd->add_option("--alpha", lfd_alpha, "significance threshold")->required();
  lfd->add_option("--seed", lfd_seed, "seed");

  std::string board_path, piece;
  int rotation = 0, column = 0;
  auto* features = app.add_subcommand("features", "Features of one placement");
  features->add_option("--board", board_path, "debug board file")->required();
  features->add_option("--piece", piece, "tetromino (I|O|T|S|Z|L|J)")->required();
  features->add_option("--rotation", rotation, "rotation index")->required();
  features->add_option("--column", column, "leftmost column")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run)
      return cmd_run(config_path, out_dir, run_seed, run_replications,
                     run_parallel);
    if (*eval) return cmd_eval(weights_path, eval_games, eval_seed);
    if (*lfd) return cmd_lfd(lfd_alpha, lfd_seed);
    if (*features) return cmd_features(board_path, piece, rotation, column);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

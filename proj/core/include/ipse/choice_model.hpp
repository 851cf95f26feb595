#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ipse/rng.hpp"

namespace ipse {

/// One rollout decision: the chosen action index plus the feature rows of
/// every available action (K x p, K >= 2).
struct ChoiceSet {
  int chosen_index = 0;
  Eigen::MatrixXd alternatives;
};

/// Append-ordered collection of choice sets with most-recent-window queries.
class ChoiceDataset {
 public:
  void append(ChoiceSet set) { sets_.push_back(std::move(set)); }
  int size() const { return int(sets_.size()); }
  const ChoiceSet& operator[](int i) const { return sets_[i]; }

  /// The most recent n sets (fewer when the dataset is shorter).
  std::span<const ChoiceSet> window(int n) const {
    int take = std::min<int>(n, int(sets_.size()));
    return {sets_.data() + sets_.size() - take, size_t(take)};
  }
  std::span<const ChoiceSet> all() const { return {sets_.data(), sets_.size()}; }

 private:
  std::vector<ChoiceSet> sets_;
};

enum class PenaltyKind { kNone, kStewDirected, kShrinkToDirections };

/// stew_directed: lambda * sum_{i<j} (d_i b_i - d_j b_j)^2, the pairwise
/// shrinkage that pulls direction-adjusted weights toward each other.
/// shrink_to_directions: lambda * ||b - d||^2, a ridge centered at d.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::kNone;
  double lambda = 0;
  Eigen::VectorXd directions;  // entries in {-1,+1}; required unless kNone
};

struct PolicyWeights {
  Eigen::VectorXd beta;
};

/// Conditional-logit negative log-likelihood over a window, with stable
/// log-sum-exp. Returns the value; writes the gradient when `grad` is given.
double nll(const Eigen::VectorXd& beta, std::span<const ChoiceSet> window,
           Eigen::VectorXd* grad = nullptr, Eigen::MatrixXd* hess = nullptr);

double penalty(const Eigen::VectorXd& beta, const PenaltySpec& spec,
               Eigen::VectorXd* grad = nullptr, Eigen::MatrixXd* hess = nullptr);

struct FitOptions {
  double grad_tol = 1e-6;
  int max_iterations = 500;
  double beta_cap = 1e3;  // box on ||beta||_inf; separable-data guard
};

struct FitResult {
  PolicyWeights weights;
  bool converged = false;
  bool norm_capped = false;
  int iterations = 0;
};

/// Minimizes nll + penalty by damped Newton steps with step-halving line
/// search, warm-started at beta_init. The objective is convex; non-convergence
/// only arises from the separable-data norm cap, which is reported via flags.
FitResult fit(std::span<const ChoiceSet> window, const PenaltySpec& spec,
              const Eigen::VectorXd& beta_init, const FitOptions& opts = {});

struct CvOptions {
  int folds = 5;
  std::vector<double> lambda_grid;  // empty -> default 1e-3..1e2, 11 log points
};

std::vector<double> default_lambda_grid();

/// k-fold cross-validation over choice sets scored by held-out NLL; ties go
/// to the larger lambda. Fewer sets than folds -> the largest grid value.
double cross_validate_lambda(std::span<const ChoiceSet> window,
                             const PenaltySpec& spec_template,
                             const CvOptions& opts, Rng& rng);

}  // namespace ipse

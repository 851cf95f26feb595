#include "ipse/choice_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ipse {

double nll(const Eigen::VectorXd& beta, std::span<const ChoiceSet> window,
           Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
  const int p = int(beta.size());
  if (window.empty()) throw std::invalid_argument("nll: empty window");
  double value = 0;
  if (grad) grad->setZero(p);
  if (hess) hess->setZero(p, p);
  for (const auto& set : window) {
    const auto& phi = set.alternatives;  // K x p
    Eigen::VectorXd scores = phi * beta;
    double m = scores.maxCoeff();
    Eigen::VectorXd w = (scores.array() - m).exp();
    double z = w.sum();
    value += m + std::log(z) - scores[set.chosen_index];
    if (grad || hess) {
      Eigen::VectorXd probs = w / z;
      Eigen::VectorXd mean = phi.transpose() * probs;
      if (grad) *grad += mean - phi.row(set.chosen_index).transpose();
      if (hess) {
        *hess += phi.transpose() * probs.asDiagonal() * phi -
                 mean * mean.transpose();
      }
    }
  }
  return value;
}

double penalty(const Eigen::VectorXd& beta, const PenaltySpec& spec,
               Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
  const int p = int(beta.size());
  if (grad) grad->setZero(p);
  if (hess) hess->setZero(p, p);
  if (spec.kind == PenaltyKind::kNone || spec.lambda == 0) return 0;
  if (spec.directions.size() != p)
    throw std::invalid_argument("penalty: directions required");
  const auto& d = spec.directions;
  if (spec.kind == PenaltyKind::kShrinkToDirections) {
    Eigen::VectorXd diff = beta - d;
    if (grad) *grad = 2 * spec.lambda * diff;
    if (hess) *hess = 2 * spec.lambda * Eigen::MatrixXd::Identity(p, p);
    return spec.lambda * diff.squaredNorm();
  }
  // stew_directed: lambda * x^T (p I - 1 1^T) x with x = D beta
  Eigen::VectorXd x = d.cwiseProduct(beta);
  Eigen::VectorXd ax = double(p) * x - Eigen::VectorXd::Constant(p, x.sum());
  if (grad) *grad = 2 * spec.lambda * d.cwiseProduct(ax);
  if (hess) {
    Eigen::MatrixXd a = double(p) * Eigen::MatrixXd::Identity(p, p) -
                        Eigen::MatrixXd::Ones(p, p);
    *hess = 2 * spec.lambda * d.asDiagonal() * a * d.asDiagonal();
  }
  return spec.lambda * x.dot(ax);
}

FitResult fit(std::span<const ChoiceSet> window, const PenaltySpec& spec,
              const Eigen::VectorXd& beta_init, const FitOptions& opts) {
  const int p = int(beta_init.size());
  FitResult res;
  Eigen::VectorXd beta = beta_init;
  Eigen::VectorXd g(p), gp(p);
  Eigen::MatrixXd h(p, p), hp(p, p);

  auto objective = [&](const Eigen::VectorXd& b) {
    return nll(b, window) + penalty(b, spec);
  };
  double f = objective(beta);

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    double fn = nll(beta, window, &g, &h);
    double fpen = penalty(beta, spec, &gp, &hp);
    f = fn + fpen;
    g += gp;
    h += hp;
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol ||
        g.norm() <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    h.diagonal().array() += 1e-9;  // NLL Hessian can be singular
    Eigen::VectorXd dir = h.ldlt().solve(-g);
    if (!dir.allFinite() || g.dot(dir) >= 0) dir = -g;  // damped fallback

    double t = 1.0;
    double slope = g.dot(dir);
    bool moved = false;
    while (t >= 1e-12) {
      Eigen::VectorXd cand = beta + t * dir;
      // separable-data guard: clamp to the box and flag
      for (int i = 0; i < p; ++i) {
        if (cand[i] > opts.beta_cap) { cand[i] = opts.beta_cap; res.norm_capped = true; }
        if (cand[i] < -opts.beta_cap) { cand[i] = -opts.beta_cap; res.norm_capped = true; }
      }
      double fc = objective(cand);
      if (fc <= f + 1e-4 * t * slope || fc < f) {
        beta = cand;
        f = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;  // stuck (typically at the cap); return best iterate
  }
  res.weights.beta = beta;
  return res;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 11; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.5 * i));
  return grid;
}

double cross_validate_lambda(std::span<const ChoiceSet> window,
                             const PenaltySpec& spec_template,
                             const CvOptions& opts, Rng& rng) {
  if (opts.folds < 2)
    throw std::invalid_argument("cross_validate_lambda: need >= 2 folds");
  std::vector<double> grid =
      opts.lambda_grid.empty() ? default_lambda_grid() : opts.lambda_grid;
  std::sort(grid.begin(), grid.end());
  const int n = int(window.size());
  if (n < opts.folds) return grid.back();
  if (window.empty()) throw std::invalid_argument("cross_validate_lambda: empty window");
  const int p = int(window.front().alternatives.cols());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  double best_lambda = grid.back();
  double best_score = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    PenaltySpec spec = spec_template;
    spec.lambda = lambda;
    double held_out = 0;
    for (int fold = 0; fold < opts.folds; ++fold) {
      std::vector<ChoiceSet> train, test;
      for (int i = 0; i < n; ++i) {
        if (order[i] % opts.folds == fold)
          test.push_back(window[i]);
        else
          train.push_back(window[i]);
      }
      auto fitres = fit(train, spec, Eigen::VectorXd::Zero(p));
      held_out += nll(fitres.weights.beta, test);
    }
    double mean = held_out / opts.folds;
    if (mean <= best_score) {  // ties go to the larger lambda (grid ascends)
      best_score = mean;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

}  // namespace ipse

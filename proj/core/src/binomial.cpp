#include "ipse/lfd.hpp"

#include <cmath>

namespace ipse {

double binomial_p_value(int n_plus, int n_minus) {
  const int n = n_plus + n_minus;
  if (n == 0) return 1.0;
  const int m = std::max(n_plus, n_minus);
  // upper tail P[X >= m] under Binomial(n, 1/2), via log binomial coefficients
  const double log_half_n = -n * std::log(2.0);
  double tail = 0;
  for (int k = m; k <= n; ++k) {
    double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                        std::lgamma(n - k + 1.0);
    tail += std::exp(log_choose + log_half_n);
  }
  return std::min(1.0, 2.0 * tail);
}

void update_directions(DirectionState& state, std::span<const int> deltas,
                       double alpha, int iteration) {
  for (int i = 0; i < state.size(); ++i) {
    if (state.direction[i] != 0) continue;  // decided directions are frozen
    if (deltas[i] > 0)
      ++state.n_plus[i];
    else if (deltas[i] < 0)
      ++state.n_minus[i];
    else
      continue;
    if (binomial_p_value(state.n_plus[i], state.n_minus[i]) < alpha) {
      state.direction[i] = state.n_plus[i] > state.n_minus[i] ? 1 : -1;
      state.decided_at[i] = iteration;
    }
  }
}

}  // namespace ipse

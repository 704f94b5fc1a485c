#pragma once

// Limited-memory quasi-Newton minimizer with orthant-wise handling of an L1
// term (OWL-QN). Minimizes f(x) + l1 * ||x||_1 where f is smooth; with
// l1 == 0 it is plain L-BFGS with a backtracking Armijo line search.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace spellvar::optim {

// Returns f(x) and writes its gradient into `grad` (same size as x).
using SmoothObjective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OwlqnOptions {
  double l1 = 0.0;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;  // on the pseudo-gradient 2-norm
  int memory = 10;
  int max_line_search = 60;
  double armijo = 1e-4;
  // Stop when the objective improved by less than delta (relative) over the
  // last delta_window iterations.
  int delta_window = 10;
  double delta = 1e-10;
};

struct OwlqnResult {
  std::vector<double> x;
  double value = 0.0;  // f(x) + l1 * ||x||_1
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> history;  // penalized objective at every accepted iterate
};

// Throws std::runtime_error when the objective is not finite at the start.
OwlqnResult minimize(const SmoothObjective& objective, std::vector<double> x0,
                     const OwlqnOptions& options);

// Steepest-descent direction of f + l1*|x|_1 negated: the minimum-norm
// subgradient, zero where the L1 kink absorbs the smooth gradient.
void pseudo_gradient(std::span<const double> x, std::span<const double> grad, double l1,
                     std::span<double> out);

}  // namespace spellvar::optim

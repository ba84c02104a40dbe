#pragma once

#include <cstdint>
#include <vector>

#include "lvar/ambiguity.hpp"
#include "lvar/capacity.hpp"
#include "lvar/ext_real.hpp"
#include "lvar/lambda_fn.hpp"
#include "lvar/risk_sharing.hpp"
#include "lvar/space.hpp"

/// Brute-force comparators. Slow on purpose and independent of the exact scans.
namespace lvar::oracle {

struct GridSpec {
  double x_resolution = 1e-3;
  double y_resolution = 1e-2;
  std::size_t sample_count = 1000;
  std::uint64_t seed = 20240917;
  /// Slopes per segment in brute_comonotone are multiples of 1/simplex_steps.
  std::size_t simplex_steps = 6;
};

/// First x on a grid over [min - 1, max + 1] of X and L's breakpoints with w(X > x) <= L(x).
/// Feasible at the window floor gives -inf. Never below lambda_var.
ExtReal brute_lambda_var(const Capacity& w, const LambdaFn& L, const RandomVariable& X, const GridSpec& grid = {});

/// Largest lambda_var(Q, L, X) over sampled members Q of the set: two-point densities on every event,
/// then sample_count random densities. Never above the exact worst case.
ExtReal brute_sup_over_ball(const AmbiguitySet& S, const LambdaFn& L, const RandomVariable& X,
                            const GridSpec& grid = {});

/// Least budget x over allocations (X - x) 1_{A_i} + y_i with y_i on the y-grid, every partition of the
/// outcomes, and each agent's tail check verified directly. Never below inf_convolution.
/// At most 3 agents, 6 outcomes, increasing step functions.
ExtReal brute_inf_convolution(const std::vector<Agent>& agents, const RandomVariable& X, const GridSpec& grid = {});

/// Least sum_i lambda_var(w_i, L_i, f_i(X)) over increasing piecewise-linear f_i with f_i(0) = 0,
/// sum_i f_i = id, and slopes on a simplex grid between consecutive knots (values of X and 0).
/// At most 3 agents and 6 distinct values of X.
ExtReal brute_comonotone(const std::vector<Agent>& agents, const RandomVariable& X, const GridSpec& grid = {});

/// max over y_1, ..., y_{n-1} on a grid over [lo, hi] of 1 ^ sum_i L_i(y_i), y_n = x - (y_1 + ... + y_{n-1}).
double brute_lambda_star(const std::vector<LambdaFn>& Ls, double x, double resolution, double lo, double hi);

/// Sup of Q(A) over Y1 <= dQ/dP <= Y2: start at Y1 and spend the remaining mass on A atom by atom.
double greedy_band_capacity(const RandomVariable& y1, const RandomVariable& y2, const ProbabilityMeasure& base,
                            Mask a);

/**
 * Looks for allocations certifying a total below `bound`: a partition of the outcomes, one agent taking
 * y_i = bound - (others), every other agent on the y-grid, and each tail check verified directly.
 */
bool divergence_witness(const std::vector<Agent>& agents, const RandomVariable& X, double bound,
                        const GridSpec& grid = {});

}  // namespace lvar::oracle

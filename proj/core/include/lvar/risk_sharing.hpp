#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvar/ambiguity.hpp"
#include "lvar/capacity.hpp"
#include "lvar/ext_real.hpp"
#include "lvar/lambda_fn.hpp"
#include "lvar/space.hpp"

namespace lvar {

/// One participant: a step function and a capacity.
struct Agent {
  std::string label;
  LambdaFn lambda;
  Capacity capacity;
};

/// One participant described by an ambiguity set instead of a capacity.
struct RobustAgent {
  std::string label;
  LambdaFn lambda;
  AmbiguitySet set;
};

/// Per-agent check w_i({X > x*} n A_i) <= L_i(y_i).
struct CertificateEntry {
  double tail_capacity = 0.0;
  double lambda_at_y = 0.0;
  bool holds = false;
};

struct SharingOptions {
  /// y-grid step used when agents mix increasing and decreasing step functions.
  double grid_resolution = 1e-2;
};

struct SharingResult {
  ExtReal value;
  /// x_star, y_star, partition, allocations and certificate are filled.
  bool has_allocation = false;
  double x_star = 0.0;
  std::vector<double> y_star;
  std::vector<Mask> partition;
  std::vector<RandomVariable> allocations;
  std::vector<CertificateEntry> certificate;
  /// Value comes from the y-grid fallback and may exceed the infimum by at most error_bound.
  bool approximate = false;
  double error_bound = 0.0;
  /// Comonotone sharing only: one of the two sufficient conditions holds.
  bool sufficient_condition_met = true;
  /// Homogeneous route only: the tail could be split across agents atom by atom.
  bool split_feasible = true;
  /// Value from an independent route, when one was computed.
  std::optional<ExtReal> cross_check_value;
  std::string diagnostic;
};

/// Infimum of sum_i lambda_var(w_i, L_i, X_i) over allocations of X, with an optimal allocation.
SharingResult inf_convolution(const std::vector<Agent>& agents, const RandomVariable& X,
                              const SharingOptions& opts = {});

/**
 * 1 ^ sup_{y_1+...+y_n=x} sum_i L_i(y_i) for increasing step functions.
 *
 * The Pareto frontier of (sum of thresholds, sum of values) over level choices is built once.
 */
class SupConvolution {
 public:
  explicit SupConvolution(const std::vector<LambdaFn>& Ls);

  /// sup without the cap at one.
  double uncapped(double x) const;
  double operator()(double x) const;
  /// Cash split summing to x that attains uncapped(x).
  std::vector<double> witness(double x) const;
  /// Finite jump points of uncapped().
  std::vector<double> breakpoints() const;

 private:
  struct Entry {
    double cost;  // -inf when some level has no lower threshold
    double value;
    std::vector<std::size_t> levels;
  };
  std::vector<LambdaFn> Ls_;
  std::vector<Entry> frontier_;
  const Entry& entry_at(double x) const;
};

double lambda_star(const std::vector<LambdaFn>& Ls, double x);

/**
 * Shared base measure P and capacities min(1, E[Y 1_A]):
 * inf{x : E[Y 1_{X > x}] <= uncapped sup-convolution at x}.
 *
 * On atoms the tail may not split across agents; split_feasible reports whether it did.
 * When it did, the value equals inf_convolution on the same agents.
 */
SharingResult inf_convolution_homogeneous(const std::vector<Agent>& agents, const RandomVariable& Y,
                                          const RandomVariable& X);

/**
 * Homogeneous value with y_1, ..., y_{n-1} restricted to multiples of resolution
 * and y_n = x - (y_1 + ... + y_{n-1}). Never below the exact value; refining the grid never increases it.
 */
ExtReal inf_convolution_homogeneous_grid(const std::vector<Agent>& agents, const RandomVariable& Y,
                                         const RandomVariable& X, double resolution);

enum class Finiteness { MinusInfinity, Finite, Boundary };
std::string to_string(Finiteness f);

struct FinitenessReport {
  Finiteness verdict;
  double kappa;
};

/// Classifies the inf-convolution as -inf or finite from the partition ratio kappa.
FinitenessReport finiteness_check(const std::vector<Agent>& agents, const RandomVariable& X);

/// min_i lambda_var(w_i, L_i, X), all of X to the lowest-index minimizer.
SharingResult comonotone_inf_convolution(const std::vector<Agent>& agents, const RandomVariable& X);

/// Inf-convolution of worst-case lambda_var, cross-checked against the transformed route.
SharingResult robust_sharing(const std::vector<RobustAgent>& agents, const RandomVariable& X,
                             const SharingOptions& opts = {});

}  // namespace lvar

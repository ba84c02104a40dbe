#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lvar/ext_real.hpp"

namespace lvar {

enum class Direction { Increasing, Decreasing, Constant };

std::string to_string(Direction d);
/// Parses "increasing", "decreasing" or "constant"; throws DomainError otherwise.
Direction direction_from_string(const std::string& s);

/**
 * Monotone step function from the real line into (0,1].
 *
 * With breakpoints b_1 < ... < b_k the function takes values[0] left of b_1,
 * values[j] between b_j and b_{j+1}, and values[k] right of b_k. Increasing and
 * constant functions are right-continuous (value at b_j is values[j]); decreasing
 * functions are left-continuous (value at b_j is values[j-1]).
 */
class LambdaFn {
 public:
  static LambdaFn constant(double value);
  static LambdaFn step(Direction dir, std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double x) const { return values_[piece_at(x)]; }
  /// Index into values() of the piece containing x.
  std::size_t piece_at(double x) const;

  Direction direction() const { return dir_; }
  bool is_increasing() const { return dir_ != Direction::Decreasing; }
  bool is_decreasing() const { return dir_ != Direction::Increasing; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double lambda_minus() const { return lambda_minus_; }
  double lambda_plus() const { return lambda_plus_; }
  /// All values strictly below one.
  bool below_one() const { return lambda_plus_ < 1.0; }
  /// No change of value anywhere on (-inf, x).
  bool constant_below(double x) const;

  /// inf{y : value(y) >= p - kSetTol} for an increasing or constant function.
  ExtReal lower_inverse(double p) const;
  /// sup{y : value(y) >= p - kSetTol} for a decreasing or constant function.
  ExtReal upper_inverse(double p) const;

  /// Same breakpoints and direction, each value replaced by f(value).
  LambdaFn map_values(const std::function<double(double)>& f) const;

 private:
  LambdaFn(Direction dir, std::vector<double> bps, std::vector<double> vals);
  Direction dir_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double lambda_minus_;
  double lambda_plus_;
};

}  // namespace lvar

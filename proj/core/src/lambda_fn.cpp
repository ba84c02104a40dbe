#include "lvar/lambda_fn.hpp"

#include <algorithm>
#include <cmath>

#include "lvar/errors.hpp"
#include "lvar/space.hpp"

namespace lvar {

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Increasing: return "increasing";
    case Direction::Decreasing: return "decreasing";
    default: return "constant";
  }
}

Direction direction_from_string(const std::string& s) {
  if (s == "increasing") return Direction::Increasing;
  if (s == "decreasing") return Direction::Decreasing;
  if (s == "constant") return Direction::Constant;
  throw DomainError("unknown direction '" + s + "'");
}

LambdaFn LambdaFn::constant(double value) { return step(Direction::Constant, {}, {value}); }

LambdaFn LambdaFn::step(Direction dir, std::vector<double> breakpoints, std::vector<double> values) {
  return LambdaFn(dir, std::move(breakpoints), std::move(values));
}

LambdaFn::LambdaFn(Direction dir, std::vector<double> bps, std::vector<double> vals)
    : dir_(dir), breakpoints_(std::move(bps)), values_(std::move(vals)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw StructuralError("step function needs one more value than breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) throw DomainError("breakpoints must be finite");
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw DomainError("breakpoints must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0 && v <= 1.0)) throw DomainError("step values must lie in (0,1]");
    if (i == 0) continue;
    const double prev = values_[i - 1];
    if (dir_ == Direction::Increasing && v < prev) throw DomainError("increasing step function has a drop");
    if (dir_ == Direction::Decreasing && v > prev) throw DomainError("decreasing step function has a rise");
    if (dir_ == Direction::Constant && v != prev) throw DomainError("constant step function changes value");
  }
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  lambda_minus_ = *lo;
  lambda_plus_ = *hi;
}

std::size_t LambdaFn::piece_at(double x) const {
  if (dir_ == Direction::Decreasing) {
    return static_cast<std::size_t>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                    breakpoints_.begin());
  }
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                  breakpoints_.begin());
}

bool LambdaFn::constant_below(double x) const {
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
    if (breakpoints_[j] < x && values_[j + 1] != values_[j]) return false;
  }
  return true;
}

ExtReal LambdaFn::lower_inverse(double p) const {
  if (dir_ == Direction::Decreasing) throw ContractError("lower_inverse needs an increasing step function");
  if (values_[0] >= p - kSetTol) return ExtReal::neg_inf();
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j] >= p - kSetTol) return ExtReal(breakpoints_[j - 1]);
  }
  return ExtReal::pos_inf();
}

ExtReal LambdaFn::upper_inverse(double p) const {
  if (dir_ == Direction::Increasing) throw ContractError("upper_inverse needs a decreasing step function");
  if (values_.back() >= p - kSetTol) return ExtReal::pos_inf();
  for (std::size_t j = values_.size() - 1; j-- > 0;) {
    if (values_[j] >= p - kSetTol) return ExtReal(breakpoints_[j]);
  }
  return ExtReal::neg_inf();
}

LambdaFn LambdaFn::map_values(const std::function<double(double)>& f) const {
  std::vector<double> v = values_;
  for (double& x : v) x = f(x);
  return LambdaFn(dir_, breakpoints_, std::move(v));
}

}  // namespace lvar

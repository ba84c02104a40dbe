#include "lvar/space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lvar/errors.hpp"

namespace lvar {

SpacePtr FiniteSpace::create(std::vector<std::string> labels) {
  if (labels.empty()) throw StructuralError("space needs at least one outcome");
  if (labels.size() > kMaxOutcomes) {
    throw StructuralError("space has " + std::to_string(labels.size()) + " outcomes, limit is " +
                          std::to_string(kMaxOutcomes));
  }
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw StructuralError("outcome labels must be unique");
  return SpacePtr(new FiniteSpace(std::move(labels)));
}

SpacePtr FiniteSpace::with_size(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
  return create(std::move(labels));
}

std::size_t FiniteSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw StructuralError("unknown outcome label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->labels() == b->labels();
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where) {
  if (!same_space(a, b)) throw StructuralError(std::string(where) + ": objects live on different spaces");
}

Event::Event(SpacePtr space, Mask members) : space_(std::move(space)), members_(members) {
  if (!space_) throw StructuralError("event without a space");
  if ((members_ & ~space_->full_mask()) != 0) throw StructuralError("event has members outside the space");
}

Event Event::from_indices(SpacePtr space, std::initializer_list<std::size_t> idx) {
  Mask m = 0;
  for (std::size_t i : idx) {
    if (i >= 32) throw StructuralError("event index out of range");
    m |= Mask{1} << i;
  }
  return Event(std::move(space), m);
}

RandomVariable::RandomVariable(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw StructuralError("random variable without a space");
  if (values_.size() != space_->size()) {
    throw StructuralError("random variable has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(space_->size()) + " outcomes");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("random variable values must be finite");
  }
}

RandomVariable RandomVariable::constant(SpacePtr space, double c) {
  const std::size_t n = space->size();
  return RandomVariable(std::move(space), std::vector<double>(n, c));
}

Mask RandomVariable::tail_mask(double x) const {
  Mask m = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > x) m |= Mask{1} << i;
  }
  return m;
}

std::vector<double> RandomVariable::distinct_values() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double RandomVariable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RandomVariable::max() const { return *std::max_element(values_.begin(), values_.end()); }

RandomVariable RandomVariable::operator+(double m) const {
  std::vector<double> v = values_;
  for (double& x : v) x += m;
  return RandomVariable(space_, std::move(v));
}

RandomVariable RandomVariable::operator*(double s) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= s;
  return RandomVariable(space_, std::move(v));
}

RandomVariable RandomVariable::operator+(const RandomVariable& o) const {
  require_same_space(space_, o.space_, "RandomVariable::operator+");
  std::vector<double> v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
  return RandomVariable(space_, std::move(v));
}

RandomVariable RandomVariable::operator-(const RandomVariable& o) const {
  require_same_space(space_, o.space_, "RandomVariable::operator-");
  std::vector<double> v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
  return RandomVariable(space_, std::move(v));
}

ProbabilityMeasure::ProbabilityMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw StructuralError("measure without a space");
  if (weights_.size() != space_->size()) {
    throw StructuralError("measure has " + std::to_string(weights_.size()) + " weights for " +
                          std::to_string(space_->size()) + " outcomes");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("measure weights must be finite and nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > kSetTol) {
    throw DomainError("measure weights sum to " + std::to_string(total) + ", expected 1");
  }
}

ProbabilityMeasure ProbabilityMeasure::uniform(SpacePtr space) {
  const std::size_t n = space->size();
  return ProbabilityMeasure(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double ProbabilityMeasure::prob(Mask m) const {
  double s = 0.0;
  for_each_bit(m, [&](std::size_t i) { s += weights_[i]; });
  return s;
}

double ProbabilityMeasure::expectation(const RandomVariable& x) const {
  require_same_space(space_, x.space(), "ProbabilityMeasure::expectation");
  double s = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x[i];
  return s;
}

double ProbabilityMeasure::partial_expectation(const RandomVariable& y, Mask m) const {
  double s = 0.0;
  for_each_bit(m, [&](std::size_t i) { s += weights_[i] * y[i]; });
  return s;
}

}  // namespace lvar

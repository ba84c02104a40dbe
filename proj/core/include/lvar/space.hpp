#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace lvar {

/// Subset of outcome indices, bit i set when outcome i belongs to the set.
using Mask = std::uint32_t;

/// Absolute tolerance used for every set-function comparison.
inline constexpr double kSetTol = 1e-12;
/// Largest supported outcome count.
inline constexpr std::size_t kMaxOutcomes = 24;
/// Largest outcome count for which loops over all subsets are allowed.
inline constexpr std::size_t kMaxExhaustive = 16;

class FiniteSpace;
using SpacePtr = std::shared_ptr<const FiniteSpace>;

/// Finite outcome set with unique labels.
class FiniteSpace {
 public:
  static SpacePtr create(std::vector<std::string> labels);
  /// Outcomes labelled "w0", "w1", ...
  static SpacePtr with_size(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  /// Index of a label; throws StructuralError if absent.
  std::size_t index_of(const std::string& label) const;
  Mask full_mask() const { return size() == 32 ? ~Mask{0} : ((Mask{1} << size()) - 1); }
  Mask complement(Mask m) const { return full_mask() & ~m; }

 private:
  explicit FiniteSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {}
  std::vector<std::string> labels_;
};

/// True when both pointers name the same outcome set (identity or equal labels).
bool same_space(const SpacePtr& a, const SpacePtr& b);
/// Throws StructuralError unless same_space(a, b).
void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where);

/// A set of outcomes of a given space.
class Event {
 public:
  Event(SpacePtr space, Mask members);
  static Event from_indices(SpacePtr space, std::initializer_list<std::size_t> idx);

  const SpacePtr& space() const { return space_; }
  Mask members() const { return members_; }
  bool contains(std::size_t i) const { return (members_ >> i) & 1u; }
  Event complement() const { return Event(space_, space_->complement(members_)); }

 private:
  SpacePtr space_;
  Mask members_;
};

/// Real-valued function on the outcomes.
class RandomVariable {
 public:
  RandomVariable(SpacePtr space, std::vector<double> values);
  static RandomVariable constant(SpacePtr space, double c);

  const SpacePtr& space() const { return space_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Outcomes where the variable exceeds x.
  Mask tail_mask(double x) const;
  /// Sorted distinct values.
  std::vector<double> distinct_values() const;
  double min() const;
  double max() const;

  RandomVariable operator+(double m) const;
  RandomVariable operator*(double s) const;
  RandomVariable operator+(const RandomVariable& o) const;
  RandomVariable operator-(const RandomVariable& o) const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Additive probability on the outcomes.
class ProbabilityMeasure {
 public:
  ProbabilityMeasure(SpacePtr space, std::vector<double> weights);
  static ProbabilityMeasure uniform(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double prob(Mask m) const;
  double expectation(const RandomVariable& x) const;
  /// E[Y 1_A].
  double partial_expectation(const RandomVariable& y, Mask m) const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Iterates the indices of set bits in ascending order.
template <class F>
inline void for_each_bit(Mask m, F&& f) {
  while (m != 0) {
    const int i = __builtin_ctz(m);
    f(static_cast<std::size_t>(i));
    m &= m - 1;
  }
}

inline int popcount(Mask m) { return __builtin_popcount(m); }

}  // namespace lvar

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lvar/space.hpp"

namespace lvar {

/// Increasing map [0,1] -> [0,1] with g(0)=0 and g(1)=1, plus a display name.
struct DistortionFn {
  std::function<double(double)> g;
  std::string name;
  double operator()(double x) const { return g(x); }
};

/**
 * Monotone set function w with w(empty)=0 and w(full)=1.
 *
 * Values are immutable after construction; evaluation is thread-safe.
 */
class Capacity {
 public:
  struct Measure {
    ProbabilityMeasure p;
  };
  /// w(A) = g(P(A)).
  struct Distortion {
    DistortionFn g;
    ProbabilityMeasure base;
  };
  /// w(A) = max_k P_k(A).
  struct SupOfMeasures {
    std::vector<ProbabilityMeasure> measures;
  };
  /// w(A) = min(1, E[Y 1_A]).
  struct ExpectationCap {
    RandomVariable y;
    ProbabilityMeasure base;
  };
  /// w(A) = min(E[Y2 1_A], E[Y1 1_A] + 1 - E[Y1]).
  struct LikelihoodBand {
    RandomVariable y1;
    RandomVariable y2;
    ProbabilityMeasure base;
  };
  /// One value per subset, indexed by mask.
  struct Table {
    std::vector<double> values;
  };
  /// w(A) = 1 - inner(complement of A).
  struct Dual {
    std::shared_ptr<const Capacity> inner;
  };

  using Backend = std::variant<Measure, Distortion, SupOfMeasures, ExpectationCap, LikelihoodBand, Table, Dual>;

  static Capacity measure(ProbabilityMeasure p);
  static Capacity distortion(DistortionFn g, ProbabilityMeasure base);
  static Capacity sup_of_measures(std::vector<ProbabilityMeasure> measures);
  static Capacity expectation_cap(RandomVariable y, ProbabilityMeasure base);
  static Capacity likelihood_band(RandomVariable y1, RandomVariable y2, ProbabilityMeasure base);
  /// Validates normalization, range and monotonicity; requires size <= kMaxExhaustive.
  static Capacity table(SpacePtr space, std::vector<double> values);

  /// Value on a subset of this capacity's space. No space check.
  double operator()(Mask m) const;

  const SpacePtr& space() const { return space_; }
  const Backend& backend() const { return backend_; }
  std::string kind_name() const;

 private:
  Capacity(SpacePtr space, Backend backend) : space_(std::move(space)), backend_(std::move(backend)) {}
  friend Capacity capacity_dual(const Capacity& w);

  SpacePtr space_;
  Backend backend_;
};

/// Checked evaluation: the event must live on the capacity's space.
double capacity_eval(const Capacity& w, const Event& a);

/// Conjugate capacity A -> 1 - w(complement of A). The dual of a dual is the original.
Capacity capacity_dual(const Capacity& w);

struct PairCheckOptions {
  /// Pairs drawn when the space is too large for exhaustive checking.
  std::size_t sampled_pairs = 200000;
  std::uint64_t seed = 0x5eed;
};

/// w(A u B) <= w(A) + w(B) + kSetTol on all pairs (exhaustive up to kMaxExhaustive outcomes).
bool is_subadditive(const Capacity& w, const PairCheckOptions& opts = {});

/// w(A) <= w(A u {i}) + kSetTol on all one-point extensions (sampled above kMaxExhaustive).
bool is_monotone(const Capacity& w, const PairCheckOptions& opts = {});

/// All 2^n values indexed by mask. Requires size <= kMaxExhaustive.
std::vector<double> tabulate(const Capacity& w);

/// Max absolute difference over all events. Requires a shared space of size <= kMaxExhaustive.
double max_pointwise_gap(const Capacity& a, const Capacity& b);

}  // namespace lvar

#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "lvar/capacity.hpp"
#include "lvar/divergence.hpp"
#include "lvar/ext_real.hpp"
#include "lvar/lambda_fn.hpp"
#include "lvar/space.hpp"

namespace lvar {

/// Set of probability measures around a reference measure.
class AmbiguitySet {
 public:
  /// {Q : D_phi(Q || base) <= delta}.
  struct PhiBall {
    PhiFn phi;
    double delta;
    ProbabilityMeasure base;
  };
  /// {Q : Y1 <= dQ/dbase <= Y2}.
  struct LikelihoodBand {
    RandomVariable y1;
    RandomVariable y2;
    ProbabilityMeasure base;
  };

  static AmbiguitySet phi_ball(PhiFn phi, double delta, ProbabilityMeasure base);
  static AmbiguitySet likelihood_band(RandomVariable y1, RandomVariable y2, ProbabilityMeasure base);

  const std::variant<PhiBall, LikelihoodBand>& def() const { return def_; }
  bool is_phi_ball() const { return std::holds_alternative<PhiBall>(def_); }
  const ProbabilityMeasure& base() const;
  const SpacePtr& space() const { return base().space(); }
  /// Distortion curve when the worst case is a distortion of the base measure
  /// (phi-balls, and bands with constant bounds).
  std::optional<DistortionCurve> curve() const;

 private:
  explicit AmbiguitySet(std::variant<PhiBall, LikelihoodBand> d) : def_(std::move(d)) {}
  std::variant<PhiBall, LikelihoodBand> def_;
};

/// Capacity A -> sup over the set of Q(A).
Capacity worst_case_capacity(const AmbiguitySet& S);

struct RobustReport {
  ExtReal value;
  /// Value from the transformed step function under the base measure, when that route applies.
  std::optional<ExtReal> transformed_value;
  /// Some step value equals one, so the transformed route uses g^{-1}(1) = 1.
  bool lambda_touches_one = false;
};

/// Worst-case lambda_var over the set, with the transformed route as a cross-check.
/// Throws ContractError when the two routes differ by more than 1e-9.
RobustReport robust_lambda_var_report(const AmbiguitySet& S, const LambdaFn& L, const RandomVariable& X);

ExtReal robust_lambda_var(const AmbiguitySet& S, const LambdaFn& L, const RandomVariable& X);

/// Choquet integral of X with respect to g o w.
double distortion_rm(const Capacity& w, const std::function<double(double)>& g, const RandomVariable& X);

/// Distortion risk measure of the base under g composed with the ball's worst-case curve.
double robust_distortion_bound(const AmbiguitySet& S, const std::function<double(double)>& g,
                               const RandomVariable& X);

}  // namespace lvar

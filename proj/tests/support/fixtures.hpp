#pragma once

#include <algorithm>
#include <vector>

#include "lvar/capacity.hpp"
#include "lvar/lambda_fn.hpp"
#include "lvar/risk_sharing.hpp"
#include "lvar/space.hpp"

namespace lvar::testing {

/// Three outcomes, X = (0.75, 0.5, 0), L(x) = ((1 - x) v 0.2) ^ 0.8 on a 1e-3 step grid.
struct ThreePointDecreasing {
  SpacePtr space = FiniteSpace::create({"a", "b", "c"});
  RandomVariable X{space, {0.75, 0.5, 0.0}};
  ProbabilityMeasure P1{space, {0.625, 0.125, 0.25}};
  ProbabilityMeasure P2{space, {0.15, 0.7, 0.15}};
  LambdaFn L = make_lambda();

  static LambdaFn make_lambda() {
    std::vector<double> bps;
    for (int i = 200; i <= 800; ++i) bps.push_back(i / 1000.0);
    // Left-continuous: the value at b_j is values[j-1] = 1 - b_j.
    std::vector<double> vals;
    vals.push_back(0.8);
    for (std::size_t j = 1; j < bps.size(); ++j) vals.push_back(std::max(0.2, 1.0 - bps[j]));
    vals.push_back(0.2);
    return LambdaFn::step(Direction::Decreasing, std::move(bps), std::move(vals));
  }
};

/// Two identical agents whose step function changes below zero, X negative.
struct NegativeComonotone {
  SpacePtr space = FiniteSpace::with_size(4);
  ProbabilityMeasure P = ProbabilityMeasure::uniform(space);
  RandomVariable X{space, {-4.0, -3.0, -2.0, -1.0}};
  LambdaFn L = LambdaFn::step(Direction::Increasing, {-1.0}, {0.3, 0.6});
  std::vector<Agent> agents{{"a", L, Capacity::measure(P)}, {"b", L, Capacity::measure(P)}};
  /// Splitting X into X/3 and 2X/3 gives -1 - 4/3 against -2 for either agent alone.
  static constexpr double kGap = 1.0 / 3.0;
};

}  // namespace lvar::testing

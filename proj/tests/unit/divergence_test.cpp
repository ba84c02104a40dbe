#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lvar/divergence.hpp"
#include "lvar/errors.hpp"

namespace lvar {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

PhiFn quadratic() {
  return PhiFn::custom([](double u) { return (u - 1.0) * (u - 1.0); }, "quadratic", true, kInfinity);
}

std::vector<PhiFn> smooth_kinds() { return {PhiFn::kl(), PhiFn::alpha(2.0), PhiFn::alpha(3.5), PhiFn::chi_squared()}; }

TEST(GValue, ChiSquaredClosedForm) {
  EXPECT_NEAR(g_value(PhiFn::chi_squared(), 0.25, 0.2), 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(g_value(PhiFn::chi_squared(), 0.25, 0.9), 1.0);
}

TEST(GValue, Endpoints) {
  for (const PhiFn& phi : smooth_kinds()) {
    EXPECT_EQ(g_value(phi, 0.3, 0.0), 0.0) << phi.name();
    EXPECT_EQ(g_value(phi, 0.3, 1.0), 1.0) << phi.name();
  }
  EXPECT_EQ(g_value(PhiFn::band(0.5, 2.0), 0.3, 0.0), 0.0);
  EXPECT_EQ(g_value(PhiFn::band(0.5, 2.0), 0.3, 1.0), 1.0);
}

TEST(GValue, KlMidpointMatchesFineScan) {
  const double g = g_value(PhiFn::kl(), 0.1, 0.5);
  // Reference root of t ln(2t) + (1-t) ln(2(1-t)) = 0.1, from a 30-digit solve.
  EXPECT_NEAR(g, 0.719794626161409731, 1e-10);
  // Independent bracket: last point of a 1e-6 grid with f <= delta.
  auto f = [](double t) { return t * std::log(2.0 * t) + (1.0 - t) * std::log(2.0 * (1.0 - t)); };
  double last = 0.5;
  for (int k = 500000; k <= 999999; ++k) {
    const double t = k * 1e-6;
    if (f(t) <= 0.1) last = t;
  }
  EXPECT_GE(g, last);
  EXPECT_LT(g, last + 1e-6);
}

TEST(GValue, BandClosedForm) { EXPECT_DOUBLE_EQ(g_value(PhiFn::band(0.5, 2.0), 0.7, 0.25), 0.5); }

TEST(GValue, RejectsNonPositiveRadius) {
  EXPECT_THROW(g_value(PhiFn::kl(), 0.0, 0.5), DomainError);
  EXPECT_THROW(g_value(PhiFn::kl(), -1.0, 0.5), DomainError);
}

TEST(XDelta, KnownThresholds) {
  EXPECT_NEAR(x_delta(PhiFn::kl(), 0.1), std::exp(-0.1), 1e-10);
  EXPECT_NEAR(x_delta(PhiFn::chi_squared(), 0.25), 0.8, 1e-10);
  EXPECT_NEAR(x_delta(PhiFn::alpha(2.0), 0.25), 0.8, 1e-10);
  EXPECT_NEAR(x_delta(PhiFn::alpha(3.0), 0.5), std::pow(1.5, -0.5), 1e-10);
  EXPECT_NEAR(x_delta(quadratic(), 0.25), 0.8, 1e-10);
}

TEST(XDelta, RejectsNonSuperlinear) {
  EXPECT_THROW(x_delta(PhiFn::band(0.5, 2.0), 0.25), ContractError);
  const PhiFn flat = PhiFn::custom([](double u) { return std::fabs(u - 1.0); }, "abs", false, 1.0);
  EXPECT_THROW(x_delta(flat, 0.25), ContractError);
}

TEST(PhiFn, CustomMustBeConvexWithZeroAtOne) {
  EXPECT_THROW(PhiFn::custom([](double u) { return std::sin(u - 1.0); }, "sine", false, 0.0), DomainError);
  EXPECT_THROW(PhiFn::custom([](double u) { return (u - 1.0) * (u - 1.0) + 0.1; }, "shifted", true, kInfinity),
               DomainError);
}

TEST(GInverse, InvertsOnIncreasingPart) {
  for (const PhiFn& phi : smooth_kinds()) {
    const DistortionCurve c(phi, 0.2);
    for (double x = 0.0; x <= c.threshold() - 1e-6; x += 0.01) {
      EXPECT_NEAR(g_inverse(c, c(x)), x, 1e-8) << phi.name() << " at " << x;
    }
    EXPECT_DOUBLE_EQ(g_inverse(c, 1.0), 1.0);
  }
}

TEST(GInverse, ClosedForms) {
  EXPECT_DOUBLE_EQ(g_inverse(DistortionCurve(PhiFn::band(0.5, 2.0), 1.0), 0.5), 0.25);
  EXPECT_NEAR(g_inverse(DistortionCurve(PhiFn::chi_squared(), 0.25), 0.4), 0.2, 1e-12);
}

TEST(GInverse, RestrictedToInvertibleKinds) {
  const PhiFn flat = PhiFn::custom([](double u) { return std::fabs(u - 1.0); }, "abs", false, 1.0);
  const DistortionCurve c(flat, 0.2);
  EXPECT_FALSE(c.invertible());
  EXPECT_THROW(g_inverse(c, 0.5), ContractError);
}

TEST(TransformLambda, ConstantAndBand) {
  const DistortionCurve chi(PhiFn::chi_squared(), 0.25);
  const LambdaFn t = transform_lambda(chi, LambdaFn::constant(0.4));
  EXPECT_EQ(t.direction(), Direction::Constant);
  EXPECT_NEAR(t(0.0), 0.2, 1e-12);
  const LambdaFn step = LambdaFn::step(Direction::Increasing, {1.0}, {0.2, 0.6});
  const LambdaFn b = transform_lambda(DistortionCurve(PhiFn::band(0.5, 2.0), 1.0), step);
  EXPECT_DOUBLE_EQ(b.values()[0], 0.1);
  EXPECT_DOUBLE_EQ(b.values()[1], 0.3);
  EXPECT_EQ(b.breakpoints(), step.breakpoints());
}

TEST(TransformLambda, SmallRadiusKeepsValues) {
  const LambdaFn step = LambdaFn::step(Direction::Increasing, {0.0, 2.0}, {0.1, 0.4, 0.8});
  for (const PhiFn& phi : smooth_kinds()) {
    const LambdaFn t = transform_lambda(DistortionCurve(phi, 1e-6), step);
    for (std::size_t j = 0; j < step.values().size(); ++j) {
      EXPECT_NEAR(t.values()[j], step.values()[j], 1e-3) << phi.name();
    }
  }
}

TEST(DistortionCurve, ShapeOnGrid) {
  for (const PhiFn& phi : smooth_kinds()) {
    for (double delta : {0.01, 0.2, 1.0}) {
      const DistortionCurve c(phi, delta);
      double prev = 0.0;
      for (int k = 0; k <= 1000; ++k) {
        const double x = k * 1e-3;
        const double g = c(x);
        EXPECT_GE(g, prev - 1e-12);
        EXPECT_GE(g, x - 1e-12);
        if (x >= c.threshold()) EXPECT_DOUBLE_EQ(g, 1.0);
        prev = g;
      }
    }
  }
}

TEST(DistortionCurve, LargerRadiusLargerCurve) {
  for (const PhiFn& phi : smooth_kinds()) {
    const DistortionCurve small(phi, 0.05);
    const DistortionCurve large(phi, 0.3);
    for (int k = 0; k <= 1000; ++k) EXPECT_LE(small(k * 1e-3), large(k * 1e-3) + 1e-12);
  }
}

TEST(DistortionCurve, SupCharacterization) {
  for (const PhiFn& phi : smooth_kinds()) {
    const double delta = 0.2;
    const double xd = x_delta(phi, delta);
    for (int k = 1; k < 1000; ++k) {
      const double x = k * 1e-3;
      if (x >= xd) break;
      const double g = g_value(phi, delta, x);
      EXPECT_LE(two_point_divergence(phi, x, g), delta + 1e-9) << phi.name() << " at " << x;
      if (g + 1e-8 <= 1.0) EXPECT_GT(two_point_divergence(phi, x, g + 1e-8), delta) << phi.name() << " at " << x;
    }
  }
}

TEST(DistortionCurve, ClosedFormMatchesBisection) {
  for (double delta : {0.05, 0.25, 1.0}) {
    for (int k = 1; k < 1000; ++k) {
      const double x = k * 1e-3;
      EXPECT_NEAR(g_value(PhiFn::chi_squared(), delta, x), g_value_bisection(quadratic(), delta, x), 1e-9);
    }
  }
}

TEST(Perspective, Conventions) {
  EXPECT_EQ(perspective(PhiFn::kl(), 0.0, 0.0), 0.0);
  EXPECT_EQ(perspective(PhiFn::kl(), 0.0, 0.5), kInfinity);
  EXPECT_DOUBLE_EQ(perspective(PhiFn::band(0.5, 2.0), 0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(phi_divergence(PhiFn::chi_squared(), {0.5, 0.5}, {0.25, 0.75}), 0.25 * 1.0 + 0.75 * (1.0 / 9.0));
}

}  // namespace
}  // namespace lvar

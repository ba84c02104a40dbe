#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lvar/capacity.hpp"
#include "lvar/lambda_fn.hpp"

namespace lvar {

/// Convex generator phi on [0, inf) with phi(1) = 0, possibly taking the value +inf.
class PhiFn {
 public:
  enum class Kind { KL, Alpha, ChiSquared, Band, Custom };

  /// u ln u.
  static PhiFn kl();
  /// u^a - 1, a > 1.
  static PhiFn alpha(double a);
  /// (u - 1)^2.
  static PhiFn chi_squared();
  /// 0 on [k1, k2], +inf elsewhere; 0 <= k1 < 1 < k2.
  static PhiFn band(double k1, double k2);
  /**
   * User-supplied generator. Checked for phi(1)=0 and midpoint convexity on a grid.
   * @param strictly_convex_superlinear declares strict convexity and phi(u)/u -> inf,
   *        which enables the threshold and the inverse distortion.
   * @param recession limit of phi(u)/u as u -> inf (used for 0 * phi(a/0)).
   */
  static PhiFn custom(std::function<double(double)> f, std::string name, bool strictly_convex_superlinear,
                      double recession);

  double operator()(double u) const;
  Kind kind() const { return kind_; }
  double alpha_exponent() const { return a_; }
  double k1() const { return k1_; }
  double k2() const { return k2_; }
  const std::string& name() const { return name_; }
  /// lim phi(u)/u as u -> inf.
  double recession() const;
  /// Strictly convex with superlinear growth.
  bool superlinear_strict() const;

 private:
  PhiFn(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}
  Kind kind_;
  std::string name_;
  double a_ = 0.0;
  double k1_ = 0.0;
  double k2_ = 0.0;
  std::function<double(double)> custom_;
  bool custom_strict_ = false;
  double custom_recession_ = 0.0;
};

/// x phi(t/x) with 0 phi(0/0) = 0 and 0 phi(a/0) = a * recession.
double perspective(const PhiFn& phi, double x, double t);

/// f(x,t) = x phi(t/x) + (1-x) phi((1-t)/(1-x)).
double two_point_divergence(const PhiFn& phi, double x, double t);

/// sum_i p_i phi(q_i / p_i).
double phi_divergence(const PhiFn& phi, const std::vector<double>& q, const std::vector<double>& p);

/// sup{t in [x,1] : f(x,t) <= delta}, closed form where available.
double g_value(const PhiFn& phi, double delta, double x);

/// Same supremum located by bisection for every kind.
double g_value_bisection(const PhiFn& phi, double delta, double x);

/// Root of x phi(1/x) + (1-x) phi(0) = delta in (0,1); needs a strictly convex superlinear phi.
double x_delta(const PhiFn& phi, double delta);

/// The worst-case distortion of a phi-ball with radius delta.
class DistortionCurve {
 public:
  DistortionCurve(PhiFn phi, double delta);

  double operator()(double x) const { return g_value(phi_, delta_, x); }
  /// Largest x with g(x) <= t, so g^{-1}(1) = 1.
  double inverse(double t) const;
  const PhiFn& phi() const { return phi_; }
  double delta() const { return delta_; }
  /// Threshold above which g is 1; 1 when the kind has none.
  double threshold() const { return x_delta_; }
  bool invertible() const;
  DistortionFn as_fn() const;

 private:
  PhiFn phi_;
  double delta_;
  double x_delta_;
};

double g_inverse(const DistortionCurve& curve, double t);

/// Applies g^{-1} to every step value; breakpoints and direction are kept.
LambdaFn transform_lambda(const DistortionCurve& curve, const LambdaFn& L);

}  // namespace lvar

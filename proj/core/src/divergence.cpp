#include "lvar/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lvar/errors.hpp"

namespace lvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisection = 200;
constexpr double kBisectionTol = 1e-10;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("divergence radius must be positive and finite");
}

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0,1]");
}

/// Largest point of [lo, hi] where the nonincreasing-to-false predicate still holds.
/// Assumes pred(lo) and !pred(hi).
template <class Pred>
double bisect_last_true(double lo, double hi, Pred&& pred, const char* what) {
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = lo + (hi - lo) / 2.0;
    if (!(mid > lo && mid < hi)) break;
    const int r = pred(mid);
    if (r < 0) throw NumericError(std::string(what) + ": evaluation produced NaN", hi - lo);
    if (r > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > kBisectionTol) throw NumericError(std::string(what) + ": bisection did not converge", hi - lo);
  return lo;
}

}  // namespace

PhiFn PhiFn::kl() { return PhiFn(Kind::KL, "kl"); }

PhiFn PhiFn::alpha(double a) {
  if (!(a > 1.0) || !std::isfinite(a)) throw DomainError("alpha generator needs an exponent above 1");
  PhiFn p(Kind::Alpha, "alpha(" + fmt(a) + ")");
  p.a_ = a;
  return p;
}

PhiFn PhiFn::chi_squared() { return PhiFn(Kind::ChiSquared, "chi2"); }

PhiFn PhiFn::band(double k1, double k2) {
  if (!(k1 >= 0.0 && k1 < 1.0 && k2 > 1.0 && std::isfinite(k2))) {
    throw DomainError("band generator needs 0 <= k1 < 1 < k2");
  }
  PhiFn p(Kind::Band, "band(" + fmt(k1) + "," + fmt(k2) + ")");
  p.k1_ = k1;
  p.k2_ = k2;
  return p;
}

PhiFn PhiFn::custom(std::function<double(double)> f, std::string name, bool strictly_convex_superlinear,
                    double recession) {
  if (!f) throw DomainError("custom generator without an evaluator");
  if (std::fabs(f(1.0)) > 1e-12) throw DomainError("custom generator must vanish at 1");
  const double h = 1.0 / 32.0;
  for (int i = 0; i + 2 <= 256; ++i) {
    const double a = i * h;
    const double fa = f(a);
    const double fm = f(a + h);
    const double fb = f(a + 2 * h);
    if (std::isnan(fa) || std::isnan(fm) || std::isnan(fb)) throw DomainError("custom generator returned NaN");
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    if (fm > (fa + fb) / 2.0 + 1e-9 * (1.0 + std::fabs(fa) + std::fabs(fb))) {
      throw DomainError("custom generator fails the midpoint convexity check near " + fmt(a + h));
    }
  }
  PhiFn p(Kind::Custom, std::move(name));
  p.custom_ = std::move(f);
  p.custom_strict_ = strictly_convex_superlinear;
  p.custom_recession_ = strictly_convex_superlinear ? kInf : recession;
  return p;
}

double PhiFn::operator()(double u) const {
  if (u < 0.0) {
    if (u < -1e-14) throw DomainError("generator evaluated at a negative ratio");
    u = 0.0;
  }
  switch (kind_) {
    case Kind::KL: return u == 0.0 ? 0.0 : u * std::log(u);
    case Kind::Alpha: return std::pow(u, a_) - 1.0;
    case Kind::ChiSquared: return (u - 1.0) * (u - 1.0);
    case Kind::Band: {
      const double slack = 1e-12 * k2_;
      return (u >= k1_ - slack && u <= k2_ + slack) ? 0.0 : kInf;
    }
    default: return custom_(u);
  }
}

double PhiFn::recession() const { return kind_ == Kind::Custom ? custom_recession_ : kInf; }

bool PhiFn::superlinear_strict() const {
  switch (kind_) {
    case Kind::KL:
    case Kind::Alpha:
    case Kind::ChiSquared: return true;
    case Kind::Band: return false;
    default: return custom_strict_;
  }
}

double perspective(const PhiFn& phi, double x, double t) {
  if (x > 0.0) {
    const double v = phi(t / x);
    return std::isinf(v) ? v : x * v;
  }
  if (t <= 0.0) return 0.0;
  const double r = phi.recession();
  return std::isinf(r) ? r : t * r;
}

double two_point_divergence(const PhiFn& phi, double x, double t) {
  return perspective(phi, x, t) + perspective(phi, 1.0 - x, 1.0 - t);
}

double phi_divergence(const PhiFn& phi, const std::vector<double>& q, const std::vector<double>& p) {
  if (q.size() != p.size()) throw StructuralError("phi_divergence: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += perspective(phi, p[i], q[i]);
  return s;
}

double g_value_bisection(const PhiFn& phi, double delta, double x) {
  require_delta(delta);
  require_unit(x, "g argument");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (two_point_divergence(phi, x, 1.0) <= delta) return 1.0;
  return bisect_last_true(
      x, 1.0,
      [&](double t) {
        const double f = two_point_divergence(phi, x, t);
        if (std::isnan(f)) return -1;
        return f <= delta ? 1 : 0;
      },
      "g_value");
}

double g_value(const PhiFn& phi, double delta, double x) {
  require_delta(delta);
  require_unit(x, "g argument");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  switch (phi.kind()) {
    case PhiFn::Kind::ChiSquared: {
      if (x >= 1.0 / (1.0 + delta)) return 1.0;
      return std::min(1.0, x + std::sqrt(delta * x * (1.0 - x)));
    }
    case PhiFn::Kind::Band: return std::min(phi.k2() * x, phi.k1() * x + 1.0 - phi.k1());
    default: return g_value_bisection(phi, delta, x);
  }
}

double x_delta(const PhiFn& phi, double delta) {
  require_delta(delta);
  if (!phi.superlinear_strict()) {
    throw ContractError("threshold defined only for strictly convex superlinear generators");
  }
  // f(x,1) decreases from +inf at x=0 to 0 at x=1; the threshold is the crossing with delta.
  const double lo = bisect_last_true(
      0.0, 1.0,
      [&](double x) {
        const double h = two_point_divergence(phi, x, 1.0);
        if (std::isnan(h)) return -1;
        return h > delta ? 1 : 0;
      },
      "x_delta");
  double hi = std::nextafter(lo, 2.0);
  // Return the side where g already equals 1.
  return two_point_divergence(phi, lo, 1.0) <= delta ? lo : hi;
}

DistortionCurve::DistortionCurve(PhiFn phi, double delta) : phi_(std::move(phi)), delta_(delta) {
  require_delta(delta_);
  x_delta_ = phi_.superlinear_strict() ? x_delta(phi_, delta_) : 1.0;
  if (phi_.kind() == PhiFn::Kind::Band && phi_.k1() == 0.0) x_delta_ = 1.0 / phi_.k2();
}

bool DistortionCurve::invertible() const {
  return phi_.kind() == PhiFn::Kind::Band || phi_.superlinear_strict();
}

double DistortionCurve::inverse(double t) const {
  require_unit(t, "inverse argument");
  if (!invertible()) {
    throw ContractError("inverse distortion needs a strictly monotone curve; " + phi_.name() + " is not declared so");
  }
  if (t == 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (phi_.kind() == PhiFn::Kind::Band) {
    const double k1 = phi_.k1();
    const double k2 = phi_.k2();
    if (k1 == 0.0) return std::min(t / k2, 1.0);
    return std::clamp(std::max(t / k2, (t - 1.0 + k1) / k1), 0.0, 1.0);
  }
  if (phi_.kind() == PhiFn::Kind::ChiSquared) {
    // Smaller root of (1+d) x^2 - (2t+d) x + t^2 = 0.
    const double d = delta_;
    const double b = 2.0 * t + d;
    const double disc = std::max(0.0, b * b - 4.0 * (1.0 + d) * t * t);
    const double root = (b - std::sqrt(disc)) / (2.0 * (1.0 + d));
    return std::clamp(root, 0.0, x_delta_);
  }
  return bisect_last_true(
      0.0, x_delta_, [&](double x) { return (*this)(x) <= t ? 1 : 0; }, "g_inverse");
}

DistortionFn DistortionCurve::as_fn() const {
  DistortionCurve copy = *this;
  return DistortionFn{[copy](double x) { return copy(x); }, phi_.name() + "@" + fmt(delta_)};
}

double g_inverse(const DistortionCurve& curve, double t) { return curve.inverse(t); }

LambdaFn transform_lambda(const DistortionCurve& curve, const LambdaFn& L) {
  return L.map_values([&](double v) { return curve.inverse(v); });
}

}  // namespace lvar

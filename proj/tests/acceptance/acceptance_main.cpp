// Acceptance gate: one check per criterion, PASS/FAIL per line, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "lvar/ambiguity.hpp"
#include "lvar/divergence.hpp"
#include "lvar/lambda_var.hpp"
#include "lvar/oracle.hpp"
#include "lvar/risk_sharing.hpp"

namespace {

using namespace lvar;
using lvar::testing::Gen;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kClosedFormTol = 1e-9;
constexpr double kChiThresholdTol = 1e-10;
constexpr double kKlThresholdTol = 1e-9;
constexpr double kChiRuntimeSeconds = 2.0;
constexpr double kSamplingRuntimeSeconds = 10.0;
constexpr double kCertificateTol = 1e-9;
constexpr double kComonotoneTol = 1e-9;
constexpr double kPropertyTol = 1e-9;
constexpr double kKappaMargin = 0.05;
constexpr double kBandTol = 1e-10;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  int checked = 0;

  void fail(const std::string& why) {
    if (pass) detail << " " << why << ";";
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool le_tol(const ExtReal& a, const ExtReal& b, double tol) {
  if (a == b || a.is_neg_inf() || b.is_pos_inf()) return true;
  if (!a.is_finite() || !b.is_finite()) return false;
  return a.value() <= b.value() + tol;
}

PhiFn quadratic() {
  return PhiFn::custom([](double u) { return (u - 1.0) * (u - 1.0); }, "quadratic", true,
                       std::numeric_limits<double>::infinity());
}

double max_spacing(const std::vector<double>& grid) {
  double s = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) s = std::max(s, grid[k] - grid[k - 1]);
  return s;
}

std::string describe(const RandomVariable& X) {
  std::ostringstream o;
  o << "X=(";
  for (std::size_t k = 0; k < X.size(); ++k) o << (k ? "," : "") << X[k];
  o << ")";
  return o.str();
}

// 1. Chi-squared closed form against generic bisection on (u-1)^2; threshold 1/(1+delta).
Outcome chi_squared_closed_form() {
  Outcome out;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double delta : {0.05, 0.25, 1.0}) {
    const double xd = x_delta(PhiFn::chi_squared(), delta);
    if (std::fabs(xd - 1.0 / (1.0 + delta)) > kChiThresholdTol) out.fail("threshold off at delta " + std::to_string(delta));
    for (int k = 1; k * 1e-3 <= xd; ++k) {
      const double x = k * 1e-3;
      const double gap = std::fabs(g_value(PhiFn::chi_squared(), delta, x) - g_value_bisection(quadratic(), delta, x));
      worst = std::max(worst, gap);
      ++out.checked;
    }
  }
  const double secs = seconds_since(t0);
  if (worst > kClosedFormTol) out.fail("max gap " + std::to_string(worst));
  if (secs >= kChiRuntimeSeconds) out.fail("runtime " + std::to_string(secs) + " s");
  out.detail << " points=" << out.checked << " max_gap=" << worst << " runtime_s=" << secs;
  return out;
}

// 2. KL threshold equals e^{-delta}.
Outcome kl_threshold() {
  Outcome out;
  double worst = 0.0;
  for (double delta : {0.01, 0.1, 0.5, 1.0}) {
    worst = std::max(worst, std::fabs(x_delta(PhiFn::kl(), delta) - std::exp(-delta)));
    ++out.checked;
  }
  if (worst > kKlThresholdTol) out.fail("max gap " + std::to_string(worst));
  out.detail << " radii=" << out.checked << " max_gap=" << worst;
  return out;
}

// 3. Distortion-capacity route equals the transformed step function under the base, exactly.
Outcome robust_equivalence() {
  Outcome out;
  const char* names[] = {"kl", "alpha", "chi_squared", "band", "custom"};
  for (int kind = 0; kind < 5; ++kind) {
    Gen gen(3000 + static_cast<std::uint64_t>(kind));
    for (int rep = 0; rep < 200; ++rep) {
      const SpacePtr s = gen.space(4, 8);
      const ProbabilityMeasure P = gen.measure(s, true);
      const DistortionCurve curve(gen.phi(kind), gen.real(0.01, 1.0));
      const LambdaFn L = gen.lambda(Direction::Increasing, 3, -4, 6, gen.coin(0.3) ? 1.0 : 0.95);
      const RandomVariable X = gen.variable(s);
      const ExtReal a = lambda_var(Capacity::distortion(curve.as_fn(), P), L, X);
      const ExtReal b = lambda_var(Capacity::measure(P), transform_lambda(curve, L), X);
      ++out.checked;
      if (!(a == b)) out.fail(std::string(names[kind]) + " rep " + std::to_string(rep) + ": " + a.to_string() + " vs " + b.to_string());
    }
  }
  out.detail << " fixtures=" << out.checked << " (200 per kind)";
  return out;
}

// 4. Sup of measures equals the max of per-measure values; the decreasing three-point fixture breaks it.
Outcome sup_closure() {
  Outcome out;
  Gen gen(4000);
  for (int rep = 0; rep < 200; ++rep) {
    const SpacePtr s = gen.space(2, 8);
    std::vector<ProbabilityMeasure> ms;
    const int k = gen.integer(1, 5);
    for (int i = 0; i < k; ++i) ms.push_back(gen.measure(s, true));
    const LambdaFn L = gen.increasing();
    const RandomVariable X = gen.variable(s);
    ExtReal best = ExtReal::neg_inf();
    for (const ProbabilityMeasure& m : ms) best = max(best, lambda_var(Capacity::measure(m), L, X));
    const ExtReal sup = lambda_var(Capacity::sup_of_measures(ms), L, X);
    ++out.checked;
    if (!(sup == best)) out.fail("rep " + std::to_string(rep) + ": " + sup.to_string() + " vs " + best.to_string());
  }
  const lvar::testing::ThreePointDecreasing f;
  const ExtReal v1 = lambda_var(Capacity::measure(f.P1), f.L, f.X);
  const ExtReal v2 = lambda_var(Capacity::measure(f.P2), f.L, f.X);
  const ExtReal vs = lambda_var(Capacity::sup_of_measures({f.P1, f.P2}), f.L, f.X);
  if (!(v1 == ExtReal(0.0) && v2 == ExtReal(0.5) && vs == ExtReal(0.75))) {
    out.fail("three-point fixture gave " + v1.to_string() + ", " + v2.to_string() + ", " + vs.to_string());
  }
  if (max(v1, v2) == vs) out.fail("three-point fixture does not separate");
  out.detail << " fixtures=" << out.checked << " three_point=" << v1 << "/" << v2 << "/" << vs;
  return out;
}

// 5. Sampled members of the set never beat the analytic worst case and come within one grid spacing.
Outcome sampling_sandwich() {
  Outcome out;
  oracle::GridSpec grid;
  grid.sample_count = 1000;
  grid.seed = 20240917;
  const char* names[] = {"kl", "alpha", "chi_squared", "band_const", "custom", "band"};
  double slowest = 0.0;
  double worst_gap_ratio = 0.0;
  for (int batch = 0; batch < 6; ++batch) {
    Gen gen(5000 + static_cast<std::uint64_t>(batch));
    const auto t0 = Clock::now();
    for (int rep = 0; rep < 10; ++rep) {
      const SpacePtr s = gen.space(3, 6);
      const ProbabilityMeasure P = gen.measure(s);
      AmbiguitySet S = batch == 5 ? gen.band(s, P) : AmbiguitySet::phi_ball(gen.phi(batch), gen.real(0.05, 0.5), P);
      if (batch == 3) {
        S = AmbiguitySet::likelihood_band(RandomVariable::constant(s, gen.real(0.1, 0.9)),
                                          RandomVariable::constant(s, gen.real(1.2, 3.0)), P);
      }
      const LambdaFn L = gen.increasing();
      const RandomVariable X = gen.variable(s);
      const ExtReal robust = robust_lambda_var(S, L, X);
      const ExtReal brute = oracle::brute_sup_over_ball(S, L, X, grid);
      const double spacing = max_spacing(merged_grid(X, L));
      ++out.checked;
      const std::string tag = std::string(names[batch]) + " rep " + std::to_string(rep) + ": ";
      if (!(brute <= robust)) out.fail(tag + "sample " + brute.to_string() + " above " + robust.to_string());
      if (robust.is_finite() && brute.is_finite()) {
        const double gap = robust.value() - brute.value();
        if (spacing > 0.0) worst_gap_ratio = std::max(worst_gap_ratio, gap / spacing);
        if (gap > spacing + 1e-12) out.fail(tag + "gap " + std::to_string(gap) + " over spacing " + std::to_string(spacing));
      } else if (!(robust == brute)) {
        out.fail(tag + robust.to_string() + " vs " + brute.to_string());
      }
    }
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    if (secs >= kSamplingRuntimeSeconds) out.fail(std::string(names[batch]) + " batch took " + std::to_string(secs) + " s");
  }
  out.detail << " fixtures=" << out.checked << " batches=6 samples=1000 max_gap/spacing=" << worst_gap_ratio
             << " slowest_batch_s=" << slowest;
  return out;
}

// 6. Exact inf-convolution against the brute oracle, with certificates.
Outcome inf_convolution_vs_oracle() {
  Outcome out;
  Gen gen(6000);
  oracle::GridSpec grid;
  int finite = 0;
  int unbounded = 0;
  for (int rep = 0; finite < 100 && rep < 1000; ++rep) {
    const SpacePtr s = gen.space(2, 6);
    const int n = gen.integer(2, 3);
    std::vector<Agent> agents;
    for (int i = 0; i < n; ++i) agents.push_back({"a" + std::to_string(i), gen.increasing(2), gen.capacity(s)});
    const RandomVariable X = gen.variable(s);
    const SharingResult r = inf_convolution(agents, X);
    const ExtReal brute = oracle::brute_inf_convolution(agents, X, grid);
    const std::string tag = "rep " + std::to_string(rep) + " " + describe(X) + ": ";
    ++out.checked;
    if (r.value.is_neg_inf()) {
      ++unbounded;
      if (!brute.is_neg_inf()) out.fail(tag + "oracle finite " + brute.to_string());
      if (!oracle::divergence_witness(agents, X, X.min() - 100.0, grid)) out.fail(tag + "no divergence witness");
      continue;
    }
    if (!r.value.is_finite()) {
      out.fail(tag + "value " + r.value.to_string());
      continue;
    }
    ++finite;
    const double v = r.value.value();
    if (!brute.is_finite() || brute.value() < v - 1e-9 || brute.value() > v + n * grid.y_resolution + 1e-9) {
      out.fail(tag + "exact " + r.value.to_string() + " oracle " + brute.to_string());
    }
    if (!r.has_allocation) {
      out.fail(tag + "no allocation");
      continue;
    }
    ExtReal total(0.0);
    double cash = 0.0;
    std::vector<double> sum(X.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      total = total + lambda_var(agents[i].capacity, agents[i].lambda, r.allocations[i]);
      cash += r.y_star[i];
      for (std::size_t k = 0; k < X.size(); ++k) sum[k] += r.allocations[i][k];
      if (!r.certificate[i].holds) out.fail(tag + "certificate entry fails");
    }
    if (!total.is_finite() || std::fabs(total.value() - v) > kCertificateTol) out.fail(tag + "certificate total " + total.to_string());
    if (std::fabs(cash - r.x_star) > kCertificateTol) out.fail(tag + "cash does not add to x*");
    for (std::size_t k = 0; k < X.size(); ++k) {
      if (std::fabs(sum[k] - X[k]) > kCertificateTol) out.fail(tag + "allocations do not add to X");
    }
  }
  if (finite < 100) out.fail("only " + std::to_string(finite) + " finite fixtures");
  out.detail << " fixtures=" << out.checked << " finite=" << finite << " minus_inf=" << unbounded;
  return out;
}

// 7. Constant levels on a shared uniform measure collapse to one quantile at the summed level.
Outcome constant_level_collapse() {
  Outcome out;
  Gen gen(7000);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = gen.integer(3, 10);
    const SpacePtr s = FiniteSpace::with_size(static_cast<std::size_t>(m));
    const ProbabilityMeasure P = ProbabilityMeasure::uniform(s);
    const Capacity w = Capacity::measure(P);
    const int n = gen.integer(2, std::min(4, m - 1));
    std::vector<Agent> agents;
    int used = 0;
    for (int i = 0; i < n; ++i) {
      const int left = (m - 1) - used - (n - 1 - i);
      const int k = gen.integer(1, std::max(1, std::min(left, 3)));
      used += k;
      agents.push_back({"a" + std::to_string(i), LambdaFn::constant(static_cast<double>(k) / m), w});
    }
    const RandomVariable X = gen.variable(s);
    const ExtReal shared = inf_convolution(agents, X).value;
    const ExtReal quantile = choquet_quantile(w, static_cast<double>(used) / m, X);
    ++out.checked;
    if (!(shared == quantile)) out.fail("rep " + std::to_string(rep) + ": " + shared.to_string() + " vs " + quantile.to_string());
  }
  out.detail << " fixtures=" << out.checked;
  return out;
}

// 8. A vanishing radius gives the plus variant, within one merged-grid index.
Outcome small_radius_limit() {
  Outcome out;
  Gen gen(8000);
  const int kinds[] = {0, 1, 2, 4};
  int exact = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const SpacePtr s = gen.space(2, 6);
    const ProbabilityMeasure P = gen.measure(s);
    const AmbiguitySet S = AmbiguitySet::phi_ball(gen.phi(kinds[rep % 4]), 1e-8, P);
    const LambdaFn L = gen.increasing();
    const RandomVariable X = gen.variable(s);
    const ExtReal robust = robust_lambda_var(S, L, X);
    const ExtReal plus = lambda_var_plus(Capacity::measure(P), L, X);
    ++out.checked;
    const std::string tag = "rep " + std::to_string(rep) + ": ";
    if (!robust.is_finite() || !plus.is_finite()) {
      if (!(robust == plus)) out.fail(tag + robust.to_string() + " vs " + plus.to_string());
      continue;
    }
    const std::vector<double> g = merged_grid(X, L);
    auto index_of = [&](double v) {
      return static_cast<long>(std::lower_bound(g.begin(), g.end(), v - 1e-12) - g.begin());
    };
    if (std::labs(index_of(robust.value()) - index_of(plus.value())) > 1) {
      out.fail(tag + robust.to_string() + " vs " + plus.to_string());
    }
    if (robust == plus) ++exact;
  }
  out.detail << " fixtures=" << out.checked << " exact=" << exact;
  return out;
}

// 9. Comonotone sharing is the min over agents; the oracle never undercuts it; the negative fixture is undercut.
Outcome comonotone_sharing() {
  Outcome out;
  Gen gen(9000);
  for (int rep = 0; rep < 60; ++rep) {
    const bool three = rep % 2 == 1;
    const bool nonnegative = (rep / 2) % 2 == 0;
    const int n = three ? 3 : 2;
    const int distinct = three ? 3 : 4;
    const SpacePtr s = gen.space(2, 6);
    std::vector<double> pool;
    while (static_cast<int>(pool.size()) < distinct) {
      const double v = nonnegative ? gen.integer(0, 10) / 2.0 : gen.integer(-8, 8) / 2.0;
      if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
    }
    std::vector<double> xs(s->size());
    for (double& v : xs) v = pool[static_cast<std::size_t>(gen.integer(0, distinct - 1))];
    const RandomVariable X(s, xs);
    std::vector<Agent> agents;
    for (int i = 0; i < n; ++i) {
      // Without a sign on X, keep every step function flat below zero.
      const LambdaFn L = nonnegative ? gen.increasing(2) : gen.lambda(Direction::Increasing, 2, 0, 6);
      agents.push_back({"a" + std::to_string(i), L, gen.capacity(s)});
    }
    const SharingResult r = comonotone_inf_convolution(agents, X);
    ExtReal best = ExtReal::pos_inf();
    for (const Agent& a : agents) best = min(best, lambda_var(a.capacity, a.lambda, X));
    oracle::GridSpec grid;
    grid.simplex_steps = three ? 3 : 6;
    const ExtReal brute = oracle::brute_comonotone(agents, X, grid);
    ++out.checked;
    const std::string tag = "rep " + std::to_string(rep) + " " + describe(X) + ": ";
    if (!r.sufficient_condition_met) out.fail(tag + "condition flagged as unmet");
    if (!(r.value == best)) out.fail(tag + "value " + r.value.to_string() + " min " + best.to_string());
    if (!le_tol(r.value, brute, kComonotoneTol)) out.fail(tag + "oracle " + brute.to_string() + " undercuts " + r.value.to_string());
  }
  const lvar::testing::NegativeComonotone f;
  const SharingResult r = comonotone_inf_convolution(f.agents, f.X);
  const ExtReal brute = oracle::brute_comonotone(f.agents, f.X);
  if (r.sufficient_condition_met) out.fail("negative fixture flagged as meeting the condition");
  if (!r.value.is_finite() || !brute.is_finite() || brute.value() > r.value.value() - f.kGap + kComonotoneTol) {
    out.fail("negative fixture: oracle " + brute.to_string() + " against min " + r.value.to_string());
  }
  out.detail << " fixtures=" << out.checked << " negative_fixture min=" << r.value << " oracle=" << brute
             << " required_gap=" << f.kGap;
  return out;
}

// 10. Monotonicity, ordering in L, quasi-star-shapedness and cash behavior for both variants.
Outcome property_suites() {
  Outcome out;
  using Fn = std::function<ExtReal(const Capacity&, const LambdaFn&, const RandomVariable&)>;
  const Fn variants[] = {lambda_var, lambda_var_plus};
  const char* variant_names[] = {"lambda_var", "lambda_var_plus"};
  int violations = 0;
  auto violate = [&](const std::string& what) {
    ++violations;
    out.fail(what);
  };
  Gen gen(10000);
  for (int rep = 0; rep < 500; ++rep) {
    const SpacePtr s = gen.space(1, 7);
    const Capacity w = gen.capacity(s);
    const Direction dir = gen.coin() ? Direction::Increasing : Direction::Decreasing;
    const LambdaFn L = gen.lambda(dir);
    const LambdaFn Linc = gen.increasing();
    const RandomVariable X = gen.variable(s);
    std::vector<double> up = X.values();
    for (double& u : up) u += gen.integer(0, 3) / 2.0;
    const RandomVariable Y(s, up);
    const double t = gen.integer(1, 5) / 10.0;
    const LambdaFn higher = L.map_values([t](double v) { return v + (1.0 - v) * t; });
    const double lam = gen.integer(0, 4) / 4.0;
    const double c = gen.integer(-10, 14) / 2.0;
    const double m = gen.integer(0, 6) / 2.0;
    for (int v = 0; v < 2; ++v) {
      const Fn& f = variants[v];
      const std::string tag = std::string(variant_names[v]) + " rep " + std::to_string(rep) + ": ";
      if (!le_tol(f(w, L, X), f(w, L, Y), kPropertyTol)) violate(tag + "monotonicity");
      if (!le_tol(f(w, higher, X), f(w, L, X), kPropertyTol)) violate(tag + "ordering in L");
      const ExtReal mixed = f(w, Linc, X * lam + (1.0 - lam) * c);
      if (!le_tol(mixed, max(f(w, Linc, X), ExtReal(c)), kPropertyTol)) violate(tag + "quasi-star-shapedness");
      const ExtReal shifted = f(w, L, X + m);
      const ExtReal base = f(w, L, X) + ExtReal(m);
      if (dir == Direction::Increasing && !le_tol(shifted, base, kPropertyTol)) violate(tag + "cash-subadditivity");
      if (dir == Direction::Decreasing && !le_tol(base, shifted, kPropertyTol)) violate(tag + "cash-supadditivity");
      out.checked += 4;
    }
  }
  out.detail << " fixtures=500 per property, checks=" << out.checked << " violations=" << violations;
  return out;
}

// 11. Finiteness verdict against the divergence witness and the exact value.
Outcome finiteness_classifier() {
  Outcome out;
  Gen gen(11000);
  int minus = 0;
  int finite = 0;
  for (int rep = 0; minus + finite < 50 && rep < 20000; ++rep) {
    const SpacePtr s = gen.space(2, 5);
    const int n = gen.integer(2, 3);
    std::vector<Agent> agents;
    for (int i = 0; i < n; ++i) agents.push_back({"a" + std::to_string(i), gen.increasing(2), gen.capacity(s, true)});
    const RandomVariable X = gen.variable(s);
    const FinitenessReport rep_k = finiteness_check(agents, X);
    if (std::fabs(rep_k.kappa - 1.0) < kKappaMargin) continue;
    const bool wants_minus = rep_k.verdict == Finiteness::MinusInfinity;
    // Keep the two verdicts balanced.
    if (wants_minus ? minus >= 25 : finite >= 25) continue;
    (wants_minus ? minus : finite) += 1;
    double low = X.min();
    for (const Agent& a : agents) {
      for (double b : a.lambda.breakpoints()) low = std::min(low, n * b);
    }
    const double bound = low - 100.0;
    const bool witness = oracle::divergence_witness(agents, X, bound);
    const bool exact_minus = inf_convolution(agents, X).value.is_neg_inf();
    ++out.checked;
    const std::string tag = "rep " + std::to_string(rep) + " kappa " + std::to_string(rep_k.kappa) + ": ";
    if (witness != wants_minus) out.fail(tag + "witness disagrees");
    if (exact_minus != wants_minus) out.fail(tag + "exact value disagrees");
  }
  if (minus + finite < 50) out.fail("only " + std::to_string(minus + finite) + " fixtures");
  out.detail << " fixtures=" << out.checked << " minus_inf=" << minus << " finite=" << finite;
  return out;
}

// 12. Band worst case equals the greedy density on every event.
Outcome band_worst_case() {
  Outcome out;
  Gen gen(12000);
  double worst = 0.0;
  int events = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const SpacePtr s = gen.space(2, 10);
    const ProbabilityMeasure P = gen.measure(s);
    const AmbiguitySet S = gen.band(s, P);
    const auto& b = std::get<AmbiguitySet::LikelihoodBand>(S.def());
    const Capacity w = worst_case_capacity(S);
    for (Mask m = 0; m <= s->full_mask(); ++m) {
      worst = std::max(worst, std::fabs(w(m) - oracle::greedy_band_capacity(b.y1, b.y2, P, m)));
      ++events;
    }
    ++out.checked;
  }
  if (worst > kBandTol) out.fail("max gap " + std::to_string(worst));
  out.detail << " fixtures=" << out.checked << " events=" << events << " max_gap=" << worst;
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "chi-squared closed form vs bisection", chi_squared_closed_form},
      {2, "KL threshold", kl_threshold},
      {3, "robust equivalence identity", robust_equivalence},
      {4, "sup-closure", sup_closure},
      {5, "sampling sandwich", sampling_sandwich},
      {6, "inf-convolution vs oracle", inf_convolution_vs_oracle},
      {7, "constant-level collapse", constant_level_collapse},
      {8, "small-radius limit", small_radius_limit},
      {9, "comonotone sharing", comonotone_sharing},
      {10, "property suites", property_suites},
      {11, "finiteness classifier", finiteness_classifier},
      {12, "likelihood-band worst case", band_worst_case},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %2d %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}

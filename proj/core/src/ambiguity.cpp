#include "lvar/ambiguity.hpp"

#include <algorithm>
#include <cmath>

#include "lvar/errors.hpp"
#include "lvar/lambda_var.hpp"

namespace lvar {

namespace {

bool is_constant(const RandomVariable& y) {
  return std::all_of(y.values().begin(), y.values().end(), [&](double v) { return v == y[0]; });
}

}  // namespace

AmbiguitySet AmbiguitySet::phi_ball(PhiFn phi, double delta, ProbabilityMeasure base) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("ball radius must be positive and finite");
  return AmbiguitySet(PhiBall{std::move(phi), delta, std::move(base)});
}

AmbiguitySet AmbiguitySet::likelihood_band(RandomVariable y1, RandomVariable y2, ProbabilityMeasure base) {
  require_same_space(y1.space(), base.space(), "likelihood_band");
  require_same_space(y2.space(), base.space(), "likelihood_band");
  for (std::size_t i = 0; i < y1.size(); ++i) {
    if (y1[i] < 0.0 || y1[i] > y2[i]) throw DomainError("likelihood band needs 0 <= Y1 <= Y2");
  }
  const double e1 = base.expectation(y1);
  const double e2 = base.expectation(y2);
  if (!(e1 < 1.0 && e2 > 1.0)) throw DomainError("likelihood band needs E[Y1] < 1 < E[Y2]");
  return AmbiguitySet(LikelihoodBand{std::move(y1), std::move(y2), std::move(base)});
}

const ProbabilityMeasure& AmbiguitySet::base() const {
  return std::visit([](const auto& d) -> const ProbabilityMeasure& { return d.base; }, def_);
}

std::optional<DistortionCurve> AmbiguitySet::curve() const {
  if (const auto* b = std::get_if<PhiBall>(&def_)) return DistortionCurve(b->phi, b->delta);
  const auto& band = std::get<LikelihoodBand>(def_);
  if (is_constant(band.y1) && is_constant(band.y2)) {
    // The radius plays no role for the band generator.
    return DistortionCurve(PhiFn::band(band.y1[0], band.y2[0]), 1.0);
  }
  return std::nullopt;
}

Capacity worst_case_capacity(const AmbiguitySet& S) {
  if (const auto* b = std::get_if<AmbiguitySet::PhiBall>(&S.def())) {
    return Capacity::distortion(DistortionCurve(b->phi, b->delta).as_fn(), b->base);
  }
  const auto& band = std::get<AmbiguitySet::LikelihoodBand>(S.def());
  const bool lower_zero =
      std::all_of(band.y1.values().begin(), band.y1.values().end(), [](double v) { return v == 0.0; });
  if (lower_zero) return Capacity::expectation_cap(band.y2, band.base);
  if (auto c = S.curve()) return Capacity::distortion(c->as_fn(), band.base);
  return Capacity::likelihood_band(band.y1, band.y2, band.base);
}

RobustReport robust_lambda_var_report(const AmbiguitySet& S, const LambdaFn& L, const RandomVariable& X) {
  if (!L.is_increasing()) throw ContractError("robust_lambda_var needs an increasing step function");
  RobustReport out;
  out.value = lambda_var(worst_case_capacity(S), L, X);
  out.lambda_touches_one = L.lambda_plus() >= 1.0;
  const std::optional<DistortionCurve> c = S.curve();
  if (c && c->invertible()) {
    out.transformed_value = lambda_var(Capacity::measure(S.base()), transform_lambda(*c, L), X);
    if (!approx_equal(out.value, *out.transformed_value, 1e-9)) {
      throw ContractError("robust routes disagree: capacity route " + out.value.to_string() + ", transformed route " +
                          out.transformed_value->to_string());
    }
  }
  return out;
}

ExtReal robust_lambda_var(const AmbiguitySet& S, const LambdaFn& L, const RandomVariable& X) {
  return robust_lambda_var_report(S, L, X).value;
}

double distortion_rm(const Capacity& w, const std::function<double(double)>& g, const RandomVariable& X) {
  require_same_space(w.space(), X.space(), "distortion_rm");
  const std::vector<double> v = X.distinct_values();
  double total = v.front();
  for (std::size_t j = 0; j + 1 < v.size(); ++j) total += (v[j + 1] - v[j]) * g(w(X.tail_mask(v[j])));
  return total;
}

double robust_distortion_bound(const AmbiguitySet& S, const std::function<double(double)>& g,
                               const RandomVariable& X) {
  const auto* b = std::get_if<AmbiguitySet::PhiBall>(&S.def());
  if (!b) throw ContractError("robust_distortion_bound needs a phi-ball");
  const DistortionCurve curve(b->phi, b->delta);
  return distortion_rm(Capacity::measure(b->base), [&](double p) { return g(curve(p)); }, X);
}

}  // namespace lvar

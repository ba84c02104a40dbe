#include "lvar/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lvar/errors.hpp"

namespace lvar {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_nonnegative(const RandomVariable& y, const char* what) {
  for (double v : y.values()) {
    if (v < 0.0) throw DomainError(std::string(what) + " must be nonnegative");
  }
}

}  // namespace

Capacity Capacity::measure(ProbabilityMeasure p) {
  SpacePtr s = p.space();
  return Capacity(std::move(s), Measure{std::move(p)});
}

Capacity Capacity::distortion(DistortionFn g, ProbabilityMeasure base) {
  if (!g.g) throw DomainError("distortion without an evaluator");
  if (std::fabs(g(0.0)) > kSetTol || std::fabs(g(1.0) - 1.0) > kSetTol) {
    throw DomainError("distortion must satisfy g(0)=0 and g(1)=1");
  }
  SpacePtr s = base.space();
  return Capacity(std::move(s), Distortion{std::move(g), std::move(base)});
}

Capacity Capacity::sup_of_measures(std::vector<ProbabilityMeasure> measures) {
  if (measures.empty()) throw DomainError("sup of an empty family of measures");
  for (const auto& m : measures) require_same_space(measures.front().space(), m.space(), "sup_of_measures");
  SpacePtr s = measures.front().space();
  return Capacity(std::move(s), SupOfMeasures{std::move(measures)});
}

Capacity Capacity::expectation_cap(RandomVariable y, ProbabilityMeasure base) {
  require_same_space(y.space(), base.space(), "expectation_cap");
  require_nonnegative(y, "expectation cap density");
  // E[Y] >= 1 keeps w(full) = 1.
  if (base.expectation(y) < 1.0 - kSetTol) throw DomainError("expectation cap needs E[Y] >= 1");
  SpacePtr s = base.space();
  return Capacity(std::move(s), ExpectationCap{std::move(y), std::move(base)});
}

Capacity Capacity::likelihood_band(RandomVariable y1, RandomVariable y2, ProbabilityMeasure base) {
  require_same_space(y1.space(), base.space(), "likelihood_band");
  require_same_space(y2.space(), base.space(), "likelihood_band");
  require_nonnegative(y1, "lower density bound");
  for (std::size_t i = 0; i < y1.size(); ++i) {
    if (y1[i] > y2[i]) throw DomainError("likelihood band needs Y1 <= Y2");
  }
  if (base.expectation(y1) > 1.0 + kSetTol || base.expectation(y2) < 1.0 - kSetTol) {
    throw DomainError("likelihood band needs E[Y1] <= 1 <= E[Y2]");
  }
  SpacePtr s = base.space();
  return Capacity(std::move(s), LikelihoodBand{std::move(y1), std::move(y2), std::move(base)});
}

Capacity Capacity::table(SpacePtr space, std::vector<double> values) {
  const std::size_t n = space->size();
  if (n > kMaxExhaustive) throw StructuralError("table capacity limited to 16 outcomes");
  if (values.size() != (std::size_t{1} << n)) throw StructuralError("table capacity needs 2^n values");
  for (double v : values) {
    if (!std::isfinite(v) || v < -kSetTol || v > 1.0 + kSetTol) throw DomainError("table values must lie in [0,1]");
  }
  if (std::fabs(values.front()) > kSetTol) throw DomainError("table capacity needs w(empty)=0");
  if (std::fabs(values.back() - 1.0) > kSetTol) throw DomainError("table capacity needs w(full)=1");
  const Mask full = space->full_mask();
  for (Mask m = 0; m <= full; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const Mask bit = Mask{1} << i;
      if ((m & bit) == 0 && values[m] > values[m | bit] + kSetTol) {
        throw DomainError("table capacity is not monotone");
      }
    }
  }
  return Capacity(std::move(space), Table{std::move(values)});
}

double Capacity::operator()(Mask m) const {
  return std::visit(
      Overloaded{
          [&](const Measure& b) { return b.p.prob(m); },
          [&](const Distortion& b) { return b.g(std::clamp(b.base.prob(m), 0.0, 1.0)); },
          [&](const SupOfMeasures& b) {
            double best = 0.0;
            for (const auto& p : b.measures) best = std::max(best, p.prob(m));
            return best;
          },
          [&](const ExpectationCap& b) { return std::min(1.0, b.base.partial_expectation(b.y, m)); },
          [&](const LikelihoodBand& b) {
            const double upper = b.base.partial_expectation(b.y2, m);
            const double slack = 1.0 - b.base.partial_expectation(b.y1, space_->complement(m));
            return std::min(upper, slack);
          },
          [&](const Table& b) { return b.values[m]; },
          [&](const Dual& b) { return 1.0 - (*b.inner)(space_->complement(m)); },
      },
      backend_);
}

std::string Capacity::kind_name() const {
  return std::visit(Overloaded{
                        [](const Measure&) { return std::string("measure"); },
                        [](const Distortion& b) { return "distortion(" + b.g.name + ")"; },
                        [](const SupOfMeasures&) { return std::string("sup_of_measures"); },
                        [](const ExpectationCap&) { return std::string("expectation_cap"); },
                        [](const LikelihoodBand&) { return std::string("likelihood_band"); },
                        [](const Table&) { return std::string("table"); },
                        [](const Dual& b) { return "dual(" + b.inner->kind_name() + ")"; },
                    },
                    backend_);
}

double capacity_eval(const Capacity& w, const Event& a) {
  require_same_space(w.space(), a.space(), "capacity_eval");
  return w(a.members());
}

Capacity capacity_dual(const Capacity& w) {
  if (const auto* d = std::get_if<Capacity::Dual>(&w.backend())) return *d->inner;
  return Capacity(w.space(), Capacity::Dual{std::make_shared<const Capacity>(w)});
}

std::vector<double> tabulate(const Capacity& w) {
  const std::size_t n = w.space()->size();
  if (n > kMaxExhaustive) throw ContractError("tabulate limited to 16 outcomes");
  std::vector<double> t(std::size_t{1} << n);
  for (Mask m = 0; m < t.size(); ++m) t[m] = w(m);
  return t;
}

bool is_subadditive(const Capacity& w, const PairCheckOptions& opts) {
  const std::size_t n = w.space()->size();
  const Mask full = w.space()->full_mask();
  if (n <= kMaxExhaustive) {
    // For a monotone w, disjoint pairs suffice: w(A u B) = w(A u (B\A)) and w(B\A) <= w(B).
    const std::vector<double> t = tabulate(w);
    for (Mask a = 0; a <= full; ++a) {
      const Mask rest = full & ~a;
      for (Mask b = rest;; b = (b - 1) & rest) {
        if (t[a | b] > t[a] + t[b] + kSetTol) return false;
        if (b == 0) break;
      }
    }
    return true;
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<Mask> pick(0, full);
  for (std::size_t k = 0; k < opts.sampled_pairs; ++k) {
    const Mask a = pick(rng);
    const Mask b = pick(rng);
    if (w(a | b) > w(a) + w(b) + kSetTol) return false;
  }
  return true;
}

bool is_monotone(const Capacity& w, const PairCheckOptions& opts) {
  const std::size_t n = w.space()->size();
  const Mask full = w.space()->full_mask();
  auto check = [&](Mask m) {
    const double v = w(m);
    for (std::size_t i = 0; i < n; ++i) {
      const Mask bit = Mask{1} << i;
      if ((m & bit) == 0 && v > w(m | bit) + kSetTol) return false;
    }
    return true;
  };
  if (n <= kMaxExhaustive) {
    for (Mask m = 0; m <= full; ++m) {
      if (!check(m)) return false;
    }
    return true;
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<Mask> pick(0, full);
  for (std::size_t k = 0; k < opts.sampled_pairs; ++k) {
    if (!check(pick(rng))) return false;
  }
  return true;
}

double max_pointwise_gap(const Capacity& a, const Capacity& b) {
  require_same_space(a.space(), b.space(), "max_pointwise_gap");
  if (a.space()->size() > kMaxExhaustive) throw ContractError("max_pointwise_gap limited to 16 outcomes");
  double gap = 0.0;
  const Mask full = a.space()->full_mask();
  for (Mask m = 0; m <= full; ++m) gap = std::max(gap, std::fabs(a(m) - b(m)));
  return gap;
}

}  // namespace lvar

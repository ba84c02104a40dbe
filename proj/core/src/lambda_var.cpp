#include "lvar/lambda_var.hpp"

#include "grid_scan.hpp"
#include "lvar/errors.hpp"

namespace lvar {

std::vector<double> merged_grid(const RandomVariable& X, const LambdaFn& L) {
  return detail::merge_grid(X.distinct_values(), L.breakpoints());
}

ExtReal lambda_var(const Capacity& w, const LambdaFn& L, const RandomVariable& X) {
  require_same_space(w.space(), X.space(), "lambda_var");
  return detail::scan_infimum(merged_grid(X, L),
                              [&](double x) { return w(X.tail_mask(x)) <= L(x) + kSetTol; });
}

ExtReal lambda_var_plus(const Capacity& w, const LambdaFn& L, const RandomVariable& X) {
  require_same_space(w.space(), X.space(), "lambda_var_plus");
  return detail::scan_supremum(merged_grid(X, L),
                               [&](double x) { return w(X.tail_mask(x)) >= L(x) - kSetTol; });
}

ExtReal choquet_quantile(const Capacity& w, double p, const RandomVariable& X) {
  return lambda_var(w, LambdaFn::constant(p), X);
}

ExtReal lambda_var_via_choquet(const Capacity& w, const LambdaFn& L, const RandomVariable& X) {
  if (!L.is_increasing()) throw ContractError("lambda_var_via_choquet needs an increasing step function");
  require_same_space(w.space(), X.space(), "lambda_var_via_choquet");
  ExtReal best = ExtReal::pos_inf();
  for (const detail::Region& r : detail::regions_of(merged_grid(X, L))) {
    const ExtReal q = choquet_quantile(w, L(r.rep), X);
    // On a region L is constant, so the infimum of max(q, x) sits at the left end.
    const ExtReal cand = r.unbounded_left ? q : max(q, ExtReal(r.lo));
    best = min(best, cand);
  }
  return best;
}

}  // namespace lvar

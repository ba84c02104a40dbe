#pragma once

#include <vector>

#include "lvar/capacity.hpp"
#include "lvar/ext_real.hpp"
#include "lvar/lambda_fn.hpp"
#include "lvar/space.hpp"

namespace lvar {

/// inf{x : w(X > x) <= L(x)}, exact.
ExtReal lambda_var(const Capacity& w, const LambdaFn& L, const RandomVariable& X);

/// sup{x : w(X > x) >= L(x)}, exact.
ExtReal lambda_var_plus(const Capacity& w, const LambdaFn& L, const RandomVariable& X);

/// lambda_var with the constant level p.
ExtReal choquet_quantile(const Capacity& w, double p, const RandomVariable& X);

/// inf over x of max(choquet_quantile(w, L(x), X), x). L must be increasing.
ExtReal lambda_var_via_choquet(const Capacity& w, const LambdaFn& L, const RandomVariable& X);

/// Sorted distinct values of X together with the breakpoints of L.
std::vector<double> merged_grid(const RandomVariable& X, const LambdaFn& L);

}  // namespace lvar

#pragma once

#include <functional>
#include <vector>

#include "lvar/capacity.hpp"
#include "lvar/ext_real.hpp"
#include "lvar/lambda_fn.hpp"
#include "lvar/space.hpp"

namespace lvar {

/// Outcome count up to which downsets are stored as explicit membership tables.
inline constexpr std::size_t kMaxExplicitDownset = 12;

/// Collection of events containing the empty set and closed under subsets.
class Downset {
 public:
  /// table[m] tells whether mask m belongs; needs 2^n entries.
  static Downset from_table(SpacePtr space, std::vector<bool> table);
  static Downset from_predicate(SpacePtr space, std::function<bool(Mask)> pred);
  /// {A : w(A) <= level}.
  static Downset sublevel(const Capacity& w, double level);

  bool contains(Mask m) const { return table_.empty() ? pred_(m) : table_[m]; }
  bool is_explicit() const { return !table_.empty(); }
  const SpacePtr& space() const { return space_; }
  /// Contains the empty set and is closed under subsets (enumerated, n <= kMaxExplicitDownset).
  bool is_downward_closed() const;
  /// Every member of this set is a member of other (enumerated, n <= kMaxExplicitDownset).
  bool subset_of(const Downset& other) const;

 private:
  Downset(SpacePtr space, std::vector<bool> table, std::function<bool(Mask)> pred)
      : space_(std::move(space)), table_(std::move(table)), pred_(std::move(pred)) {}
  SpacePtr space_;
  std::vector<bool> table_;
  std::function<bool(Mask)> pred_;
};

enum class FamilyMonotonicity { Increasing, DecreasingLeftContinuous };

/**
 * Downsets indexed by the real line, piecewise constant on a threshold grid.
 *
 * With thresholds t_0 < ... < t_{k-1} there are 2k+1 cells: cell 0 is (-inf, t_0),
 * cell 2j+1 is the point t_j, cell 2j+2 is the gap (t_j, t_{j+1}) and cell 2k is (t_{k-1}, inf).
 */
class DownsetFamily {
 public:
  /// Validates downward closure and the monotonicity flag when the space has at most
  /// kMaxExplicitDownset outcomes.
  DownsetFamily(SpacePtr space, std::vector<double> thresholds, std::vector<Downset> cells,
                FamilyMonotonicity mono);

  /// A_x = {A : w(A) <= L(x)} on the breakpoint grid of L.
  static DownsetFamily from_lambda(const Capacity& w, const LambdaFn& L);

  std::size_t cell_index(double x) const;
  const Downset& at(double x) const { return cells_[cell_index(x)]; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<Downset>& cells() const { return cells_; }
  FamilyMonotonicity monotonicity() const { return mono_; }
  const SpacePtr& space() const { return space_; }

 private:
  SpacePtr space_;
  std::vector<double> thresholds_;
  std::vector<Downset> cells_;
  FamilyMonotonicity mono_;
};

/// inf{x : {X > x} in A_x}.
ExtReal induced_rho(const DownsetFamily& F, const RandomVariable& X);

}  // namespace lvar

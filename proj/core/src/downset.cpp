#include "lvar/downset.hpp"

#include <algorithm>
#include <cmath>

#include "grid_scan.hpp"
#include "lvar/errors.hpp"

namespace lvar {

Downset Downset::from_table(SpacePtr space, std::vector<bool> table) {
  const std::size_t n = space->size();
  if (n > kMaxExplicitDownset) throw StructuralError("explicit downsets limited to 12 outcomes");
  if (table.size() != (std::size_t{1} << n)) throw StructuralError("downset table needs 2^n entries");
  return Downset(std::move(space), std::move(table), {});
}

Downset Downset::from_predicate(SpacePtr space, std::function<bool(Mask)> pred) {
  if (!pred) throw StructuralError("downset without a predicate");
  return Downset(std::move(space), {}, std::move(pred));
}

Downset Downset::sublevel(const Capacity& w, double level) {
  SpacePtr s = w.space();
  if (s->size() <= kMaxExplicitDownset) {
    std::vector<bool> t(std::size_t{1} << s->size());
    for (Mask m = 0; m < t.size(); ++m) t[m] = w(m) <= level + kSetTol;
    return from_table(std::move(s), std::move(t));
  }
  return from_predicate(std::move(s), [w, level](Mask m) { return w(m) <= level + kSetTol; });
}

bool Downset::is_downward_closed() const {
  const std::size_t n = space_->size();
  if (n > kMaxExplicitDownset) throw ContractError("downset enumeration limited to 12 outcomes");
  if (!contains(0)) return false;
  const Mask full = space_->full_mask();
  for (Mask m = 1; m <= full; ++m) {
    if (!contains(m)) continue;
    bool ok = true;
    for_each_bit(m, [&](std::size_t i) { ok = ok && contains(m & ~(Mask{1} << i)); });
    if (!ok) return false;
  }
  return true;
}

bool Downset::subset_of(const Downset& other) const {
  if (space_->size() > kMaxExplicitDownset) throw ContractError("downset enumeration limited to 12 outcomes");
  const Mask full = space_->full_mask();
  for (Mask m = 0; m <= full; ++m) {
    if (contains(m) && !other.contains(m)) return false;
  }
  return true;
}

DownsetFamily::DownsetFamily(SpacePtr space, std::vector<double> thresholds, std::vector<Downset> cells,
                             FamilyMonotonicity mono)
    : space_(std::move(space)), thresholds_(std::move(thresholds)), cells_(std::move(cells)), mono_(mono) {
  for (std::size_t i = 1; i < thresholds_.size(); ++i) {
    if (!(thresholds_[i - 1] < thresholds_[i])) throw DomainError("family thresholds must be strictly increasing");
  }
  if (cells_.size() != 2 * thresholds_.size() + 1) throw StructuralError("family needs 2k+1 cells for k thresholds");
  for (const Downset& c : cells_) require_same_space(space_, c.space(), "DownsetFamily");
  if (space_->size() > kMaxExplicitDownset) return;
  for (const Downset& c : cells_) {
    if (!c.is_downward_closed()) throw DomainError("family cell is not a downset");
  }
  for (std::size_t c = 0; c + 1 < cells_.size(); ++c) {
    const bool ok = mono_ == FamilyMonotonicity::Increasing ? cells_[c].subset_of(cells_[c + 1])
                                                             : cells_[c + 1].subset_of(cells_[c]);
    if (!ok) throw DomainError("family cells violate the monotonicity flag");
  }
  if (mono_ == FamilyMonotonicity::DecreasingLeftContinuous) {
    for (std::size_t j = 0; j < thresholds_.size(); ++j) {
      if (!cells_[2 * j].subset_of(cells_[2 * j + 1])) throw DomainError("decreasing family is not left-continuous");
    }
  }
}

DownsetFamily DownsetFamily::from_lambda(const Capacity& w, const LambdaFn& L) {
  const std::vector<double>& t = L.breakpoints();
  std::vector<Downset> cells;
  cells.reserve(2 * t.size() + 1);
  for (const detail::Region& r : detail::regions_of(t)) {
    cells.push_back(Downset::sublevel(w, L(r.rep)));
  }
  // regions_of drops gaps without a representable midpoint; such gaps cannot hold an x.
  if (cells.size() != 2 * t.size() + 1) throw DomainError("breakpoints too close to separate");
  const auto mono =
      L.direction() == Direction::Decreasing ? FamilyMonotonicity::DecreasingLeftContinuous : FamilyMonotonicity::Increasing;
  return DownsetFamily(w.space(), t, std::move(cells), mono);
}

std::size_t DownsetFamily::cell_index(double x) const {
  auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), x);
  const auto j = static_cast<std::size_t>(it - thresholds_.begin());
  if (it != thresholds_.end() && *it == x) return 2 * j + 1;
  return 2 * j;
}

ExtReal induced_rho(const DownsetFamily& F, const RandomVariable& X) {
  require_same_space(F.space(), X.space(), "induced_rho");
  const std::vector<double> grid = detail::merge_grid(X.distinct_values(), F.thresholds());
  return detail::scan_infimum(grid, [&](double x) { return F.at(x).contains(X.tail_mask(x)); });
}

}  // namespace lvar

#include "lvar/risk_sharing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grid_scan.hpp"
#include "lvar/errors.hpp"
#include "lvar/lambda_var.hpp"
#include "lvar/parallel.hpp"

namespace lvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxAgents = 4;
constexpr std::size_t kMaxOutcomesSharing = 12;
constexpr double kRouteTol = 1e-9;

struct Segment {
  double lo;  // -inf for the first segment
  double hi;  // +inf for the last segment
  Mask tail;
};

/// (-inf, v_1), [v_1, v_2), ..., [v_m, inf) with the tail set on each.
std::vector<Segment> segments_of(const RandomVariable& X) {
  const std::vector<double> v = X.distinct_values();
  std::vector<Segment> out;
  out.push_back({-kInf, v.front(), X.space()->full_mask()});
  for (std::size_t j = 0; j < v.size(); ++j) {
    out.push_back({v[j], j + 1 < v.size() ? v[j + 1] : kInf, X.tail_mask(v[j])});
  }
  return out;
}

void check_agents(const std::vector<Agent>& agents, const RandomVariable& X) {
  if (agents.empty()) throw DomainError("no agents");
  for (const Agent& a : agents) require_same_space(a.capacity.space(), X.space(), "agent");
  if (agents.size() > kMaxAgents) throw ContractError("at most 4 agents");
  if (X.size() > kMaxOutcomesSharing) throw ContractError("at most 12 outcomes for partition search");
}

std::vector<double> capacity_table(const Capacity& w) {
  const std::size_t n = w.space()->size();
  std::vector<double> t(std::size_t{1} << n);
  for (Mask m = 0; m < t.size(); ++m) t[m] = w(m);
  return t;
}

/**
 * Minimizes sum_i cost[i][B_i] over assignments of the outcomes of a set to agents.
 * Each cost table must be nondecreasing under inclusion; +inf marks infeasible cells.
 */
class PartitionSearch {
 public:
  explicit PartitionSearch(const std::vector<std::vector<double>>& costs) : costs_(costs) {
    const std::size_t n = costs.size();
    twin_.assign(n, -1);
    for (std::size_t a = 1; a < n; ++a) {
      for (std::size_t p = a; p-- > 0;) {
        if (costs[p] == costs[a]) {
          twin_[a] = static_cast<int>(p);
          break;
        }
      }
    }
  }

  struct Outcome {
    double cost = kInf;
    std::vector<Mask> cells;
  };

  Outcome run(Mask set) const {
    State st{std::vector<Mask>(costs_.size(), 0), {}, {}};
    for_each_bit(set, [&](std::size_t i) { st.items.push_back(i); });
    st.best.cost = kInf;
    dfs(st, 0);
    return st.best;
  }

 private:
  struct State {
    std::vector<Mask> cells;
    std::vector<std::size_t> items;
    Outcome best;
  };

  double bound(const State& st) const {
    double s = 0.0;
    for (std::size_t a = 0; a < costs_.size(); ++a) {
      const double c = costs_[a][st.cells[a]];
      if (c == kInf) return kInf;
      s += c;
    }
    return s;
  }

  void dfs(State& st, std::size_t k) const {
    const double b = bound(st);
    if (b == kInf) return;
    if (st.best.cells.size() == costs_.size() && b >= st.best.cost) return;
    if (k == st.items.size()) {
      st.best.cost = b;
      st.best.cells = st.cells;
      return;
    }
    const Mask bit = Mask{1} << st.items[k];
    for (std::size_t a = 0; a < costs_.size(); ++a) {
      if (twin_[a] >= 0 && st.cells[a] == 0 && st.cells[static_cast<std::size_t>(twin_[a])] == 0) continue;
      st.cells[a] |= bit;
      dfs(st, k + 1);
      st.cells[a] &= ~bit;
    }
  }

  const std::vector<std::vector<double>>& costs_;
  std::vector<int> twin_;
};

/// Fills partition, allocations and certificate from x*, y* and the split of the tail.
void fill_allocation(SharingResult& r, const std::vector<Agent>& agents, const RandomVariable& X, double x_star,
                     std::vector<double> y, const std::vector<Mask>& tail_cells) {
  const SpacePtr& space = X.space();
  Mask assigned = 0;
  for (Mask c : tail_cells) assigned |= c;
  r.x_star = x_star;
  r.y_star = std::move(y);
  r.partition = tail_cells;
  r.partition[0] |= space->complement(assigned);
  const Mask tail = X.tail_mask(x_star);
  r.allocations.clear();
  r.certificate.clear();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    std::vector<double> v(X.size());
    for (std::size_t k = 0; k < X.size(); ++k) {
      v[k] = ((r.partition[i] >> k) & 1u) ? X[k] - x_star + r.y_star[i] : r.y_star[i];
    }
    if (agents.size() == 1) v = X.values();
    r.allocations.emplace_back(space, std::move(v));
    CertificateEntry e;
    e.tail_capacity = agents[i].capacity(tail & r.partition[i]);
    e.lambda_at_y = agents[i].lambda(r.y_star[i]);
    e.holds = e.tail_capacity <= e.lambda_at_y + kSetTol;
    r.certificate.push_back(e);
  }
  r.has_allocation = true;
}

/// y_i from per-agent bounds: unbounded agents share what is left, otherwise the slack goes to one agent.
std::vector<double> split_cash(const std::vector<double>& bounds, double x_star, bool slack_to_last) {
  const std::size_t n = bounds.size();
  std::vector<double> y(n, 0.0);
  double finite_sum = 0.0;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(bounds[i])) {
      y[i] = bounds[i];
      finite_sum += bounds[i];
    } else {
      free.push_back(i);
    }
  }
  if (!free.empty()) {
    const double share = (x_star - finite_sum) / static_cast<double>(free.size());
    for (std::size_t k = 0; k + 1 < free.size(); ++k) y[free[k]] = share;
    double rest = x_star;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != free.back()) rest -= y[i];
    }
    y[free.back()] = rest;
    return y;
  }
  const std::size_t target = slack_to_last ? n - 1 : 0;
  double rest = x_star;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != target) rest -= y[i];
  }
  y[target] = rest;
  return y;
}

SharingResult increasing_path(const std::vector<Agent>& agents, const RandomVariable& X) {
  std::vector<std::vector<double>> costs;
  for (const Agent& a : agents) {
    std::vector<double> t = capacity_table(a.capacity);
    for (double& v : t) v = a.lambda.lower_inverse(v).as_double();
    costs.push_back(std::move(t));
  }
  const std::vector<Segment> segs = segments_of(X);
  const PartitionSearch search(costs);
  std::vector<PartitionSearch::Outcome> found(segs.size());
  parallel_for(segs.size(), [&](std::size_t j) { found[j] = search.run(segs[j].tail); });

  SharingResult r;
  r.value = ExtReal::pos_inf();
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double c = found[j].cost;
    if (c == kInf) continue;
    double x_star;
    if (j == 0) {
      if (c == -kInf) {
        r.value = ExtReal::neg_inf();
        r.diagnostic = "unbounded below: the full tail is feasible for every total";
        return r;
      }
      if (!(c < segs[j].hi)) continue;
      x_star = c;
    } else if (c <= segs[j].lo) {
      x_star = segs[j].lo;
    } else if (c < segs[j].hi) {
      x_star = c;
    } else {
      continue;
    }
    r.value = x_star;
    std::vector<double> bounds(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) bounds[i] = costs[i][found[j].cells[i]];
    fill_allocation(r, agents, X, x_star, split_cash(bounds, x_star, true), found[j].cells);
    return r;
  }
  return r;
}

SharingResult decreasing_path(const std::vector<Agent>& agents, const RandomVariable& X) {
  std::vector<std::vector<double>> costs;
  for (const Agent& a : agents) {
    std::vector<double> t = capacity_table(a.capacity);
    for (double& v : t) v = -a.lambda.upper_inverse(v).as_double();
    costs.push_back(std::move(t));
  }
  const std::vector<Segment> segs = segments_of(X);
  const PartitionSearch search(costs);
  std::vector<PartitionSearch::Outcome> found(segs.size());
  parallel_for(segs.size(), [&](std::size_t j) { found[j] = search.run(segs[j].tail); });

  SharingResult r;
  r.value = ExtReal::pos_inf();
  for (std::size_t j = 0; j < segs.size(); ++j) {
    if (found[j].cost == kInf) continue;
    const double d = -found[j].cost;
    if (j == 0) {
      r.value = ExtReal::neg_inf();
      r.diagnostic = "unbounded below: the full tail is feasible for every small enough total";
      return r;
    }
    if (d < segs[j].lo) continue;
    const double x_star = segs[j].lo;
    r.value = x_star;
    std::vector<double> bounds(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) bounds[i] = -costs[i][found[j].cells[i]];
    fill_allocation(r, agents, X, x_star, split_cash(bounds, x_star, false), found[j].cells);
    return r;
  }
  return r;
}

/// Grid index range [first, last] of y with L(y) >= p, clipped to [k_lo, k_hi]; first > last when empty.
std::pair<long long, long long> feasible_indices(const LambdaFn& L, double p, double r, long long k_lo,
                                                 long long k_hi) {
  auto ok = [&](long long k) { return L(static_cast<double>(k) * r) >= p - kSetTol; };
  if (L.is_increasing()) {
    const ExtReal inv = L.lower_inverse(p);
    if (inv.is_pos_inf()) return {1, 0};
    long long k = inv.is_neg_inf() ? k_lo : std::max(k_lo, static_cast<long long>(std::ceil(inv.value() / r)));
    while (k <= k_hi && !ok(k)) ++k;
    while (k - 1 >= k_lo && ok(k - 1)) --k;
    return {k, k_hi};
  }
  const ExtReal inv = L.upper_inverse(p);
  if (inv.is_neg_inf()) return {1, 0};
  long long k = inv.is_pos_inf() ? k_hi : std::min(k_hi, static_cast<long long>(std::floor(inv.value() / r)));
  while (k >= k_lo && !ok(k)) --k;
  while (k + 1 <= k_hi && ok(k + 1)) ++k;
  return {k_lo, k};
}

SharingResult grid_path(const std::vector<Agent>& agents, const RandomVariable& X, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("grid resolution must be positive");
  const std::size_t n = agents.size();
  double lo = X.min();
  double hi = X.max();
  for (const Agent& a : agents) {
    for (double b : a.lambda.breakpoints()) {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  const double span = hi - lo + 1.0;
  const auto k_lo = static_cast<long long>(std::ceil((lo - span) / r));
  const auto k_hi = static_cast<long long>(std::floor((hi + span) / r));

  std::vector<std::vector<std::pair<long long, long long>>> ranges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> t = capacity_table(agents[i].capacity);
    ranges[i].resize(t.size());
    for (Mask m = 0; m < t.size(); ++m) ranges[i][m] = feasible_indices(agents[i].lambda, t[m], r, k_lo, k_hi);
  }

  SharingResult res;
  res.value = ExtReal::pos_inf();
  res.approximate = true;
  res.error_bound = static_cast<double>(n) * r;
  for (const Segment& seg : segments_of(X)) {
    std::vector<std::size_t> items;
    for_each_bit(seg.tail, [&](std::size_t i) { items.push_back(i); });
    const long long seg_lo = std::isfinite(seg.lo) ? static_cast<long long>(std::ceil(seg.lo / r))
                                                : static_cast<long long>(n) * k_lo;
    long long best = std::numeric_limits<long long>::max();
    std::vector<Mask> best_cells;
    std::vector<Mask> cells(n, 0);
    auto visit = [&](auto&& self, std::size_t k) -> void {
      if (k == items.size()) {
        long long lo_sum = 0;
        long long hi_sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const auto [f, l] = ranges[i][cells[i]];
          if (f > l) return;
          lo_sum += f;
          hi_sum += l;
        }
        const long long cand = std::max(lo_sum, seg_lo);
        if (cand > hi_sum || !(static_cast<double>(cand) * r < seg.hi)) return;
        if (cand < best) {
          best = cand;
          best_cells = cells;
        }
        return;
      }
      const Mask bit = Mask{1} << items[k];
      for (std::size_t a = 0; a < n; ++a) {
        cells[a] |= bit;
        self(self, k + 1);
        cells[a] &= ~bit;
      }
    };
    visit(visit, 0);
    if (best_cells.empty()) continue;
    if (!std::isfinite(seg.lo) && best == static_cast<long long>(n) * k_lo) {
      res.value = ExtReal::neg_inf();
      res.diagnostic = "grid fallback: feasible down to the floor of the grid window";
      return res;
    }
    const double x_star = static_cast<double>(best) * r;
    res.value = x_star;
    std::vector<double> y(n);
    long long extra = best;
    for (std::size_t i = 0; i < n; ++i) extra -= ranges[i][best_cells[i]].first;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto [f, l] = ranges[i][best_cells[i]];
      const long long add = std::min(extra, l - f);
      extra -= add;
      y[i] = static_cast<double>(f + add) * r;
      if (i + 1 < n) sum += y[i];
    }
    y[n - 1] = x_star - sum;
    fill_allocation(res, agents, X, x_star, std::move(y), best_cells);
    res.diagnostic = "grid fallback for step functions of mixed direction";
    return res;
  }
  return res;
}

struct Level {
  double threshold;  // -inf for the first piece
  double value;
};

std::vector<Level> levels_of(const LambdaFn& L) {
  std::vector<Level> out;
  out.push_back({-kInf, L.values().front()});
  for (std::size_t j = 0; j < L.breakpoints().size(); ++j) out.push_back({L.breakpoints()[j], L.values()[j + 1]});
  return out;
}

bool is_constant_rv(const RandomVariable& y, double c) {
  return std::all_of(y.values().begin(), y.values().end(), [&](double v) { return v == c; });
}

/// Checks the shared-base, shared-density precondition.
void check_homogeneous(const std::vector<Agent>& agents, const RandomVariable& Y, const RandomVariable& X) {
  check_agents(agents, X);
  require_same_space(Y.space(), X.space(), "inf_convolution_homogeneous");
  const ProbabilityMeasure* base = nullptr;
  for (const Agent& a : agents) {
    if (!a.lambda.is_increasing()) throw ContractError("homogeneous route needs increasing step functions");
    const ProbabilityMeasure* p = nullptr;
    if (const auto* e = std::get_if<Capacity::ExpectationCap>(&a.capacity.backend())) {
      if (e->y.values() != Y.values()) throw ContractError("agents must share the density bound Y");
      p = &e->base;
    } else if (const auto* m = std::get_if<Capacity::Measure>(&a.capacity.backend())) {
      if (!is_constant_rv(Y, 1.0)) throw ContractError("a plain measure matches only Y = 1");
      p = &m->p;
    } else {
      throw ContractError("homogeneous route needs expectation-cap capacities");
    }
    if (base && base->weights() != p->weights()) throw ContractError("agents must share the base measure");
    base = p;
  }
}

const ProbabilityMeasure& shared_base(const Agent& a) {
  if (const auto* e = std::get_if<Capacity::ExpectationCap>(&a.capacity.backend())) return e->base;
  return std::get<Capacity::Measure>(a.capacity.backend()).p;
}

/// Assigns tail atoms to agents so that E[Y 1_{B_i}] <= caps[i].
bool pack(const std::vector<std::size_t>& atoms, const std::vector<double>& load, std::vector<double>& room,
          std::vector<Mask>& cells, std::size_t k) {
  if (k == atoms.size()) return true;
  for (std::size_t a = 0; a < room.size(); ++a) {
    if (load[k] > room[a] + kSetTol) continue;
    room[a] -= load[k];
    cells[a] |= Mask{1} << atoms[k];
    if (pack(atoms, load, room, cells, k + 1)) return true;
    cells[a] &= ~(Mask{1} << atoms[k]);
    room[a] += load[k];
  }
  return false;
}

}  // namespace

SharingResult inf_convolution(const std::vector<Agent>& agents, const RandomVariable& X, const SharingOptions& opts) {
  check_agents(agents, X);
  const bool inc = std::all_of(agents.begin(), agents.end(), [](const Agent& a) { return a.lambda.is_increasing(); });
  if (inc) return increasing_path(agents, X);
  const bool dec = std::all_of(agents.begin(), agents.end(), [](const Agent& a) { return a.lambda.is_decreasing(); });
  if (dec) return decreasing_path(agents, X);
  return grid_path(agents, X, opts.grid_resolution);
}

SupConvolution::SupConvolution(const std::vector<LambdaFn>& Ls) : Ls_(Ls) {
  if (Ls_.empty()) throw DomainError("sup-convolution of no functions");
  for (const LambdaFn& L : Ls_) {
    if (!L.is_increasing()) throw ContractError("sup-convolution needs increasing step functions");
  }
  frontier_.push_back({0.0, 0.0, {}});
  for (const LambdaFn& L : Ls_) {
    const std::vector<Level> lv = levels_of(L);
    std::vector<Entry> next;
    next.reserve(frontier_.size() * lv.size());
    for (const Entry& e : frontier_) {
      for (std::size_t j = 0; j < lv.size(); ++j) {
        Entry f = e;
        f.cost = e.cost + lv[j].threshold;
        f.value += lv[j].value;
        f.levels.push_back(j);
        next.push_back(std::move(f));
      }
    }
    std::stable_sort(next.begin(), next.end(), [](const Entry& a, const Entry& b) {
      if (a.cost < b.cost) return true;
      if (b.cost < a.cost) return false;
      return a.value > b.value;
    });
    frontier_.clear();
    for (Entry& e : next) {
      if (frontier_.empty() || e.value > frontier_.back().value) frontier_.push_back(std::move(e));
    }
  }
}

const SupConvolution::Entry& SupConvolution::entry_at(double x) const {
  const Entry* best = &frontier_.front();
  for (const Entry& e : frontier_) {
    if (e.cost <= x) best = &e;
  }
  return *best;
}

double SupConvolution::uncapped(double x) const { return entry_at(x).value; }

double SupConvolution::operator()(double x) const { return std::min(1.0, uncapped(x)); }

std::vector<double> SupConvolution::witness(double x) const {
  const Entry& e = entry_at(x);
  std::vector<double> bounds(Ls_.size());
  for (std::size_t i = 0; i < Ls_.size(); ++i) bounds[i] = levels_of(Ls_[i])[e.levels[i]].threshold;
  return split_cash(bounds, x, true);
}

std::vector<double> SupConvolution::breakpoints() const {
  std::vector<double> out;
  for (const Entry& e : frontier_) {
    if (std::isfinite(e.cost)) out.push_back(e.cost);
  }
  return out;
}

double lambda_star(const std::vector<LambdaFn>& Ls, double x) { return SupConvolution(Ls)(x); }

SharingResult inf_convolution_homogeneous(const std::vector<Agent>& agents, const RandomVariable& Y,
                                          const RandomVariable& X) {
  check_homogeneous(agents, Y, X);
  const ProbabilityMeasure& P = shared_base(agents.front());
  std::vector<LambdaFn> Ls;
  for (const Agent& a : agents) Ls.push_back(a.lambda);
  const SupConvolution star(Ls);

  std::vector<double> grid = detail::merge_grid(X.distinct_values(), star.breakpoints());
  SharingResult r;
  r.value = detail::scan_infimum(
      grid, [&](double x) { return P.partial_expectation(Y, X.tail_mask(x)) <= star.uncapped(x) + kSetTol; });
  if (!r.value.is_finite()) {
    if (r.value.is_neg_inf()) r.diagnostic = "unbounded below";
    return r;
  }
  const double x_star = r.value.value();
  const Mask tail = X.tail_mask(x_star);
  std::vector<std::size_t> atoms;
  std::vector<double> load;
  for_each_bit(tail, [&](std::size_t k) {
    atoms.push_back(k);
    load.push_back(P.weight(k) * Y[k]);
  });
  // Heavy atoms first keeps the packing search short.
  std::vector<std::size_t> order(atoms.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return load[a] > load[b]; });
  std::vector<std::size_t> sorted_atoms;
  std::vector<double> sorted_load;
  for (std::size_t k : order) {
    sorted_atoms.push_back(atoms[k]);
    sorted_load.push_back(load[k]);
  }

  const std::vector<double> y = star.witness(x_star);
  std::vector<double> room(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) room[i] = agents[i].lambda(y[i]);
  std::vector<Mask> cells(agents.size(), 0);
  r.split_feasible = pack(sorted_atoms, sorted_load, room, cells, 0);
  if (!r.split_feasible) {
    r.diagnostic = "tail atoms cannot be split to match the sup-convolution witness";
    return r;
  }
  fill_allocation(r, agents, X, x_star, y, cells);
  return r;
}

ExtReal inf_convolution_homogeneous_grid(const std::vector<Agent>& agents, const RandomVariable& Y,
                                         const RandomVariable& X, double resolution) {
  check_homogeneous(agents, Y, X);
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw DomainError("grid resolution must be positive");
  const ProbabilityMeasure& P = shared_base(agents.front());
  const std::size_t n = agents.size();
  double lo = X.min();
  double hi = X.max();
  for (const Agent& a : agents) {
    for (double b : a.lambda.breakpoints()) {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  const auto k_lo = static_cast<long long>(std::ceil((lo - 1.0) / resolution));
  const auto k_hi = static_cast<long long>(std::floor((hi + 1.0) / resolution));
  const std::size_t width = static_cast<std::size_t>(k_hi - k_lo + 1);
  std::size_t configs = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) configs *= width;

  const LambdaFn& last = agents.back().lambda;
  const std::vector<double> xs = X.distinct_values();
  std::vector<ExtReal> best(configs, ExtReal::pos_inf());
  parallel_for(configs, [&](std::size_t c) {
    double s = 0.0;
    double a = 0.0;
    std::size_t code = c;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double yi = static_cast<double>(k_lo + static_cast<long long>(code % width)) * resolution;
      code /= width;
      s += yi;
      a += agents[i].lambda(yi);
    }
    std::vector<double> shifted;
    for (double b : last.breakpoints()) shifted.push_back(b + s);
    best[c] = detail::scan_infimum(detail::merge_grid(xs, shifted), [&](double x) {
      return P.partial_expectation(Y, X.tail_mask(x)) <= a + last(x - s) + kSetTol;
    });
  });
  ExtReal out = ExtReal::pos_inf();
  for (const ExtReal& v : best) out = min(out, v);
  return out;
}

std::string to_string(Finiteness f) {
  switch (f) {
    case Finiteness::MinusInfinity:
      return "minus_infinity";
    case Finiteness::Finite:
      return "finite";
    case Finiteness::Boundary:
      return "boundary";
  }
  return "unknown";
}

FinitenessReport finiteness_check(const std::vector<Agent>& agents, const RandomVariable& X) {
  check_agents(agents, X);
  const std::size_t n = agents.size();
  std::vector<std::vector<double>> tables;
  for (const Agent& a : agents) {
    if (!a.lambda.is_increasing()) throw ContractError("finiteness check needs increasing step functions");
    if (!(a.lambda.lambda_minus() > 0.0) || !(a.lambda.lambda_plus() < 1.0)) {
      throw ContractError("finiteness check needs 0 < lambda- <= lambda+ < 1");
    }
    if (!is_subadditive(a.capacity)) throw ContractError("finiteness check needs subadditive capacities");
    tables.push_back(capacity_table(a.capacity));
  }
  const std::size_t m = X.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) total *= n;

  // Split the assignment space by the label of the first outcome.
  const std::size_t chunks = std::min<std::size_t>(total, 64);
  std::vector<double> partial(chunks, kInf);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = total * c / chunks;
    const std::size_t end = total * (c + 1) / chunks;
    std::vector<Mask> cells(n);
    double best = kInf;
    for (std::size_t code = begin; code < end; ++code) {
      std::fill(cells.begin(), cells.end(), 0);
      std::size_t rest = code;
      for (std::size_t k = 0; k < m; ++k) {
        cells[rest % n] |= Mask{1} << k;
        rest /= n;
      }
      double inner = kInf;
      for (std::size_t i = 0; i < n; ++i) {
        double v = tables[i][cells[i]] / agents[i].lambda.lambda_minus();
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) v = std::max(v, tables[j][cells[j]] / agents[j].lambda.lambda_plus());
        }
        inner = std::min(inner, v);
      }
      best = std::min(best, inner);
    }
    partial[c] = best;
  });
  const double kappa = *std::min_element(partial.begin(), partial.end());
  Finiteness verdict = Finiteness::Boundary;
  if (kappa < 1.0 - 1e-9) verdict = Finiteness::MinusInfinity;
  if (kappa > 1.0 + 1e-9) verdict = Finiteness::Finite;
  return {verdict, kappa};
}

SharingResult comonotone_inf_convolution(const std::vector<Agent>& agents, const RandomVariable& X) {
  if (agents.empty()) throw DomainError("no agents");
  for (const Agent& a : agents) {
    require_same_space(a.capacity.space(), X.space(), "agent");
    if (!a.lambda.is_increasing()) throw ContractError("comonotone sharing needs increasing step functions");
  }
  std::vector<ExtReal> v;
  for (const Agent& a : agents) v.push_back(lambda_var(a.capacity, a.lambda, X));
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i0]) i0 = i;
  }
  SharingResult r;
  r.value = v[i0];
  const bool nonneg = std::all_of(v.begin(), v.end(), [](const ExtReal& x) { return x >= ExtReal(0.0); });
  const bool flat = std::all_of(agents.begin(), agents.end(), [](const Agent& a) { return a.lambda.constant_below(0.0); });
  r.sufficient_condition_met = nonneg || flat;
  if (!r.sufficient_condition_met) r.diagnostic = "sufficient-condition-not-met";
  if (!r.value.is_finite()) return r;

  const double x_star = r.value.value();
  r.x_star = x_star;
  r.y_star.assign(agents.size(), 0.0);
  r.y_star[i0] = x_star;
  r.partition.assign(agents.size(), 0);
  r.partition[i0] = X.space()->full_mask();
  const Mask tail = X.tail_mask(x_star);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    r.allocations.push_back(i == i0 ? X : RandomVariable::constant(X.space(), 0.0));
    CertificateEntry e;
    e.tail_capacity = agents[i].capacity(tail & r.partition[i]);
    e.lambda_at_y = agents[i].lambda(r.y_star[i]);
    e.holds = e.tail_capacity <= e.lambda_at_y + kSetTol;
    r.certificate.push_back(e);
  }
  r.has_allocation = true;
  return r;
}

SharingResult robust_sharing(const std::vector<RobustAgent>& agents, const RandomVariable& X,
                             const SharingOptions& opts) {
  if (agents.empty()) throw DomainError("no agents");
  std::vector<Agent> worst;
  for (const RobustAgent& a : agents) {
    require_same_space(a.set.space(), X.space(), "agent");
    if (!a.lambda.is_increasing()) throw ContractError("robust sharing needs increasing step functions");
    worst.push_back({a.label, a.lambda, worst_case_capacity(a.set)});
  }
  SharingResult r = inf_convolution(worst, X, opts);

  std::vector<Agent> transformed;
  for (const RobustAgent& a : agents) {
    const std::optional<DistortionCurve> c = a.set.curve();
    if (!c || !c->invertible()) break;
    transformed.push_back({a.label, transform_lambda(*c, a.lambda), Capacity::measure(a.set.base())});
  }
  if (transformed.size() == agents.size()) {
    const ExtReal other = inf_convolution(transformed, X, opts).value;
    if (!approx_equal(r.value, other, kRouteTol)) {
      throw ContractError("robust sharing routes disagree: capacity route " + r.value.to_string() +
                          ", transformed route " + other.to_string());
    }
    r.cross_check_value = other;
  }

  // Bands with zero lower bound, one density and one base: the homogeneous route applies.
  const auto* first = std::get_if<AmbiguitySet::LikelihoodBand>(&agents.front().set.def());
  bool homogeneous = first != nullptr;
  for (const RobustAgent& a : agents) {
    const auto* b = std::get_if<AmbiguitySet::LikelihoodBand>(&a.set.def());
    homogeneous = homogeneous && b && is_constant_rv(b->y1, 0.0) && b->y2.values() == first->y2.values() &&
                  b->base.weights() == first->base.weights();
  }
  if (homogeneous) {
    const SharingResult h = inf_convolution_homogeneous(worst, first->y2, X);
    if (h.split_feasible) {
      if (!approx_equal(r.value, h.value, kRouteTol)) {
        throw ContractError("robust sharing routes disagree: capacity route " + r.value.to_string() +
                            ", homogeneous route " + h.value.to_string());
      }
      if (!r.cross_check_value) r.cross_check_value = h.value;
    }
  }
  return r;
}

}  // namespace lvar

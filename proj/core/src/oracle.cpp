#include "lvar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lvar/errors.hpp"
#include "lvar/lambda_var.hpp"
#include "lvar/parallel.hpp"

namespace lvar::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-12;
constexpr std::size_t kMaxExplicitEvents = 12;

/// k * res, computed as k / (1/res) when 1/res is an integer so that decimal grid points come out exact.
double grid_point(long long k, double res) {
  const double inv = 1.0 / res;
  const double r = std::round(inv);
  if (r >= 1.0 && std::fabs(inv - r) <= 1e-9 * r) return static_cast<double>(k) / r;
  return static_cast<double>(k) * res;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

Mask tail_of(const RandomVariable& X, double x) {
  Mask m = 0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    if (X[k] > x) m |= Mask{1} << k;
  }
  return m;
}

double mass(const std::vector<double>& q, Mask m) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if ((m >> k) & 1u) s += q[k];
  }
  return s;
}

std::pair<double, double> window(const std::vector<Agent>& agents, const RandomVariable& X) {
  double lo = *std::min_element(X.values().begin(), X.values().end());
  double hi = *std::max_element(X.values().begin(), X.values().end());
  for (const Agent& a : agents) {
    for (double b : a.lambda.breakpoints()) {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  return {lo, hi};
}

/// Smallest y-grid point with L(y) >= p, scanning up from the floor; +inf when none below the top.
/// Least grid y with L(y) >= p; -inf when the floor already qualifies, since the floor lies below every breakpoint.
double scan_min_y(const LambdaFn& L, double p, double res, long long k_floor, long long k_top) {
  if (L(grid_point(k_floor, res)) >= p - kTol) return -kInf;
  for (long long k = k_floor + 1; k <= k_top; ++k) {
    const double y = grid_point(k, res);
    if (L(y) >= p - kTol) return y;
  }
  return kInf;
}

long long floor_index(const std::vector<Agent>& agents, const RandomVariable& X, double res) {
  const auto [lo, hi] = window(agents, X);
  const double floor = lo - static_cast<double>(agents.size()) * (std::fabs(lo) + std::fabs(hi) + 1.0);
  return static_cast<long long>(std::floor(floor / res));
}

double floor_point(const std::vector<Agent>& agents, const RandomVariable& X, double res) {
  return grid_point(floor_index(agents, X, res), res);
}

/// ymin[i][m] for every agent and every set of outcomes.
std::vector<std::vector<double>> min_y_tables(const std::vector<Agent>& agents, const RandomVariable& X,
                                              double res) {
  const auto [lo, hi] = window(agents, X);
  const auto k_floor = floor_index(agents, X, res);
  const auto k_top = static_cast<long long>(std::ceil((hi + 1.0) / res));
  const std::size_t masks = std::size_t{1} << X.size();
  std::vector<std::vector<double>> out(agents.size(), std::vector<double>(masks));
  parallel_for(agents.size() * masks, [&](std::size_t idx) {
    const std::size_t i = idx / masks;
    const Mask m = static_cast<Mask>(idx % masks);
    out[i][m] = scan_min_y(agents[i].lambda, agents[i].capacity(m), res, k_floor, k_top);
  });
  return out;
}

/// Calls f(cells) for every assignment of outcomes to agents.
template <class F>
void for_each_partition(std::size_t n_agents, std::size_t n_outcomes, F&& f) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < n_outcomes; ++k) total *= n_agents;
  std::vector<Mask> cells(n_agents);
  for (std::size_t code = 0; code < total; ++code) {
    std::fill(cells.begin(), cells.end(), 0);
    std::size_t rest = code;
    for (std::size_t k = 0; k < n_outcomes; ++k) {
      cells[rest % n_agents] |= Mask{1} << k;
      rest /= n_agents;
    }
    f(cells);
  }
}

void require_increasing(const std::vector<Agent>& agents) {
  for (const Agent& a : agents) {
    if (!a.lambda.is_increasing()) throw ContractError("oracle needs increasing step functions");
  }
}

/// sum_k p_k phi(q_k / p_k) over the support of p; q must vanish off the support.
double divergence(const PhiFn& phi, const std::vector<double>& q, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) s += p[k] * phi(q[k] / p[k]);
  }
  return s;
}

/// Largest s in [0,1] with D(s) <= delta for a convex D with D(0) = 0.
template <class D>
double largest_feasible(D&& d, double delta) {
  if (d(1.0) <= delta) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (d(mid) <= delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ProbabilityMeasure normalized(const SpacePtr& space, std::vector<double> q) {
  double s = 0.0;
  for (double& v : q) {
    v = std::max(v, 0.0);
    s += v;
  }
  for (double& v : q) v /= s;
  return ProbabilityMeasure(space, std::move(q));
}

std::vector<double> dirichlet_on_support(const std::vector<double>& p, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> q(p.size(), 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) {
      q[k] = gamma(rng);
      s += q[k];
    }
  }
  for (double& v : q) v /= s;
  return q;
}

/// Band density: start at y1, spend the remaining mass on atoms in the given order.
std::vector<double> greedy_density(const RandomVariable& y1, const RandomVariable& y2, const std::vector<double>& p,
                                   const std::vector<std::size_t>& order) {
  std::vector<double> z(y1.values());
  double budget = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) budget -= p[k] * y1[k];
  for (std::size_t k : order) {
    if (budget <= 0.0) break;
    if (p[k] <= 0.0) continue;
    const double room = (y2[k] - y1[k]) * p[k];
    const double take = std::min(room, budget);
    z[k] += take / p[k];
    budget -= take;
  }
  return z;
}

}  // namespace

ExtReal brute_lambda_var(const Capacity& w, const LambdaFn& L, const RandomVariable& X, const GridSpec& grid) {
  require_positive(grid.x_resolution, "x_resolution");
  require_same_space(w.space(), X.space(), "brute_lambda_var");
  double lo = X.min();
  double hi = X.max();
  for (double b : L.breakpoints()) {
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  const auto k_lo = static_cast<long long>(std::floor((lo - 1.0) / grid.x_resolution));
  const auto k_hi = static_cast<long long>(std::ceil((hi + 1.0) / grid.x_resolution));
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double x = grid_point(k, grid.x_resolution);
    if (w(tail_of(X, x)) <= L(x) + kTol) {
      if (k == k_lo) return ExtReal::neg_inf();
      return x;
    }
  }
  return ExtReal::pos_inf();
}

ExtReal brute_sup_over_ball(const AmbiguitySet& S, const LambdaFn& L, const RandomVariable& X,
                            const GridSpec& grid) {
  require_same_space(S.space(), X.space(), "brute_sup_over_ball");
  const SpacePtr& space = X.space();
  const std::vector<double>& p = S.base().weights();
  const std::size_t n = p.size();

  std::vector<Mask> events;
  if (n <= kMaxExplicitEvents) {
    for (Mask m = 1; m < space->full_mask(); ++m) events.push_back(m);
  } else {
    for (double v : X.distinct_values()) events.push_back(tail_of(X, v));
  }

  std::vector<std::vector<double>> candidates;
  if (const auto* ball = std::get_if<AmbiguitySet::PhiBall>(&S.def())) {
    for (Mask a : events) {
      const double pa = mass(p, a);
      if (pa <= 0.0 || pa >= 1.0) continue;
      auto q_of = [&](double t) {
        std::vector<double> q(n);
        for (std::size_t k = 0; k < n; ++k) q[k] = ((a >> k) & 1u) ? p[k] * t / pa : p[k] * (1.0 - t) / (1.0 - pa);
        return q;
      };
      const double s = largest_feasible(
          [&](double s) { return divergence(ball->phi, q_of(pa + s * (1.0 - pa)), p); }, ball->delta);
      candidates.push_back(q_of(pa + s * (1.0 - pa)));
    }
    const std::size_t base_count = candidates.size();
    candidates.resize(base_count + grid.sample_count);
    parallel_for(grid.sample_count, [&](std::size_t i) {
      std::mt19937_64 rng(grid.seed + 0x9e3779b97f4a7c15ULL * (i + 1));
      const std::vector<double> target = dirichlet_on_support(p, rng);
      auto q_of = [&](double s) {
        std::vector<double> q(n);
        for (std::size_t k = 0; k < n; ++k) q[k] = p[k] + s * (target[k] - p[k]);
        return q;
      };
      candidates[base_count + i] = q_of(largest_feasible([&](double s) { return divergence(ball->phi, q_of(s), p); },
                                                         ball->delta));
    });
  } else {
    const auto& band = std::get<AmbiguitySet::LikelihoodBand>(S.def());
    auto to_q = [&](const std::vector<double>& z) {
      std::vector<double> q(n);
      for (std::size_t k = 0; k < n; ++k) q[k] = p[k] * z[k];
      return q;
    };
    for (Mask a : events) {
      std::vector<std::size_t> order;
      for (std::size_t k = 0; k < n; ++k) {
        if ((a >> k) & 1u) order.push_back(k);
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (!((a >> k) & 1u)) order.push_back(k);
      }
      candidates.push_back(to_q(greedy_density(band.y1, band.y2, p, order)));
    }
    const std::size_t base_count = candidates.size();
    candidates.resize(base_count + grid.sample_count);
    parallel_for(grid.sample_count, [&](std::size_t i) {
      std::mt19937_64 rng(grid.seed + 0x9e3779b97f4a7c15ULL * (i + 1));
      std::vector<std::size_t> o1(n);
      std::vector<std::size_t> o2(n);
      for (std::size_t k = 0; k < n; ++k) o1[k] = o2[k] = k;
      std::shuffle(o1.begin(), o1.end(), rng);
      std::shuffle(o2.begin(), o2.end(), rng);
      const std::vector<double> z1 = greedy_density(band.y1, band.y2, p, o1);
      const std::vector<double> z2 = greedy_density(band.y1, band.y2, p, o2);
      const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      std::vector<double> z(n);
      for (std::size_t k = 0; k < n; ++k) z[k] = t * z1[k] + (1.0 - t) * z2[k];
      candidates[base_count + i] = to_q(z);
    });
  }

  std::vector<ExtReal> values(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) {
    values[i] = lambda_var(Capacity::measure(normalized(space, candidates[i])), L, X);
  });
  ExtReal best = ExtReal::neg_inf();
  for (const ExtReal& v : values) best = max(best, v);
  return best;
}

ExtReal brute_inf_convolution(const std::vector<Agent>& agents, const RandomVariable& X, const GridSpec& grid) {
  require_positive(grid.y_resolution, "y_resolution");
  if (agents.empty()) throw DomainError("no agents");
  if (agents.size() > 3 || X.size() > 6) throw ContractError("brute_inf_convolution limited to 3 agents, 6 outcomes");
  for (const Agent& a : agents) require_same_space(a.capacity.space(), X.space(), "brute_inf_convolution");
  require_increasing(agents);
  const std::size_t n = agents.size();
  const std::vector<std::vector<double>> ymin = min_y_tables(agents, X, grid.y_resolution);
  const double y_floor = floor_point(agents, X, grid.y_resolution);

  std::vector<double> u = X.values();
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());

  double best = kInf;
  for_each_partition(n, X.size(), [&](const std::vector<Mask>& cells) {
    for (std::size_t j = 0; j <= u.size(); ++j) {
      const double seg_lo = j == 0 ? -kInf : u[j - 1];
      const double seg_hi = j < u.size() ? u[j] : kInf;
      const Mask tail = j == 0 ? X.space()->full_mask() : tail_of(X, seg_lo);
      double s = 0.0;
      bool blocked = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = ymin[i][cells[i] & tail];
        blocked = blocked || y == kInf;
        s += y == kInf ? 0.0 : y;
      }
      if (blocked) continue;
      if (s == -kInf && j == 0) {
        best = -kInf;
        return;
      }
      const double x = std::max(s, seg_lo);
      if (!(x < seg_hi) || x >= best) continue;
      double rest = x;
      bool ok = true;
      const Mask t = tail_of(X, x);
      for (std::size_t i = 0; i < n && ok; ++i) {
        // An agent feasible at any cash level takes a budget at the window floor.
        const double y = i + 1 < n ? std::max(ymin[i][cells[i] & tail], y_floor) : rest;
        rest -= y;
        ok = agents[i].capacity(t & cells[i]) <= agents[i].lambda(y) + kTol;
      }
      if (ok) best = x;
    }
  });
  if (best == -kInf) return ExtReal::neg_inf();
  return best == kInf ? ExtReal::pos_inf() : ExtReal(best);
}

ExtReal brute_comonotone(const std::vector<Agent>& agents, const RandomVariable& X, const GridSpec& grid) {
  if (agents.empty()) throw DomainError("no agents");
  if (grid.simplex_steps == 0) throw DomainError("simplex_steps must be positive");
  std::vector<double> knots = X.distinct_values();
  if (agents.size() > 3 || knots.size() > 6) throw ContractError("brute_comonotone limited to 3 agents, 6 values");
  for (const Agent& a : agents) require_same_space(a.capacity.space(), X.space(), "brute_comonotone");
  const std::size_t n = agents.size();
  knots.push_back(0.0);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  const std::size_t segs = knots.size() - 1;

  // Integer compositions of simplex_steps into n parts.
  std::vector<std::vector<std::size_t>> slopes;
  std::vector<std::size_t> cur(n, 0);
  auto compose = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i + 1 == n) {
      cur[i] = left;
      slopes.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      cur[i] = c;
      self(self, i + 1, left - c);
    }
  };
  compose(compose, 0, grid.simplex_steps);

  std::size_t combos = 1;
  for (std::size_t s = 0; s < segs; ++s) {
    combos *= slopes.size();
    if (combos > 5'000'000) throw ContractError("brute_comonotone search too large; lower simplex_steps");
  }
  const std::size_t zero = static_cast<std::size_t>(std::find(knots.begin(), knots.end(), 0.0) - knots.begin());
  const double steps = static_cast<double>(grid.simplex_steps);

  std::vector<double> totals(combos, kInf);
  parallel_for(combos, [&](std::size_t code) {
    std::vector<std::size_t> pick(segs);
    std::size_t rest = code;
    for (std::size_t s = 0; s < segs; ++s) {
      pick[s] = rest % slopes.size();
      rest /= slopes.size();
    }
    // f_i at every knot, integrating slopes outward from 0.
    std::vector<std::vector<double>> f(n, std::vector<double>(knots.size(), 0.0));
    for (std::size_t k = zero + 1; k < knots.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        f[i][k] = f[i][k - 1] + static_cast<double>(slopes[pick[k - 1]][i]) / steps * (knots[k] - knots[k - 1]);
      }
    }
    for (std::size_t k = zero; k-- > 0;) {
      for (std::size_t i = 0; i < n; ++i) {
        f[i][k] = f[i][k + 1] - static_cast<double>(slopes[pick[k]][i]) / steps * (knots[k + 1] - knots[k]);
      }
    }
    double total = 0.0;
    std::vector<double> assigned(X.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> xi(X.size());
      for (std::size_t w = 0; w < X.size(); ++w) {
        const std::size_t k = static_cast<std::size_t>(std::find(knots.begin(), knots.end(), X[w]) - knots.begin());
        xi[w] = i + 1 < n ? f[i][k] : X[w] - assigned[w];
        assigned[w] += xi[w];
      }
      const double v = lambda_var(agents[i].capacity, agents[i].lambda, RandomVariable(X.space(), xi)).as_double();
      total += v;
    }
    if (!std::isnan(total)) totals[code] = total;
  });
  const double best = *std::min_element(totals.begin(), totals.end());
  if (best == kInf) return ExtReal::pos_inf();
  if (best == -kInf) return ExtReal::neg_inf();
  return best;
}

double brute_lambda_star(const std::vector<LambdaFn>& Ls, double x, double resolution, double lo, double hi) {
  require_positive(resolution, "resolution");
  if (Ls.empty() || Ls.size() > 3) throw ContractError("brute_lambda_star limited to 1..3 functions");
  const auto k_lo = static_cast<long long>(std::ceil(lo / resolution));
  const auto k_hi = static_cast<long long>(std::floor(hi / resolution));
  const std::size_t free = Ls.size() - 1;
  double best = 0.0;
  auto visit = [&](auto&& self, std::size_t i, double used, double acc) -> void {
    if (i == free) {
      best = std::max(best, acc + Ls.back()(x - used));
      return;
    }
    for (long long k = k_lo; k <= k_hi; ++k) {
      const double y = grid_point(k, resolution);
      self(self, i + 1, used + y, acc + Ls[i](y));
    }
  };
  visit(visit, 0, 0.0, 0.0);
  return std::min(1.0, best);
}

double greedy_band_capacity(const RandomVariable& y1, const RandomVariable& y2, const ProbabilityMeasure& base,
                            Mask a) {
  const std::vector<double>& p = base.weights();
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if ((a >> k) & 1u) order.push_back(k);
  }
  const std::vector<double> z = greedy_density(y1, y2, p, order);
  double q = 0.0;
  for (std::size_t k : order) q += p[k] * z[k];
  return q;
}

bool divergence_witness(const std::vector<Agent>& agents, const RandomVariable& X, double bound,
                        const GridSpec& grid) {
  require_positive(grid.y_resolution, "y_resolution");
  if (agents.empty()) throw DomainError("no agents");
  if (agents.size() > 4 || X.size() > 10) throw ContractError("divergence_witness limited to 4 agents, 10 outcomes");
  require_increasing(agents);
  if (!(bound < X.min())) throw DomainError("bound must lie below every value of X");
  const std::size_t n = agents.size();
  const std::vector<std::vector<double>> ymin = min_y_tables(agents, X, grid.y_resolution);
  const double y_floor = floor_point(agents, X, grid.y_resolution);
  bool found = false;
  for_each_partition(n, X.size(), [&](const std::vector<Mask>& cells) {
    if (found) return;
    for (std::size_t i = 0; i < n && !found; ++i) {
      double others = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others += std::max(ymin[j][cells[j]], y_floor);
      }
      if (!std::isfinite(others)) continue;
      found = agents[i].capacity(cells[i]) <= agents[i].lambda(bound - others) + kTol;
    }
  });
  return found;
}

}  // namespace lvar::oracle

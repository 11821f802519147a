#include "ces/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ces/errors.hpp"

namespace ces {

namespace {

struct Delta {
  int slot;
  double amount;
};

struct CompactOption {
  double valuation;
  std::vector<Delta> energy;
  std::vector<Delta> power;
};

CompactOption compact(const ScheduleOption& o) {
  CompactOption c{o.valuation, {}, {}};
  for (int t = o.capacity.first_slot(); t < o.capacity.end_slot(); ++t) {
    if (o.capacity.at(t) != 0.0) c.energy.push_back({t, o.capacity.at(t)});
  }
  for (int t = o.charge.first_slot(); t < o.charge.end_slot(); ++t) {
    if (o.charge.at(t) != 0.0) c.power.push_back({t, o.charge.at(t)});
  }
  return c;
}

// Depth-first search over requests in input order. Each level tries the
// options by ascending index, then denial. A leaf replaces the incumbent only
// when strictly better, so the first optimum in that order wins. Usage is
// restored from saved values rather than subtracted back out, which keeps
// the usage at a node equal to the in-order sum along its path; exhaustive
// and pruned searches therefore evaluate every leaf bit-identically.
class Search {
 public:
  Search(std::span<const Request> requests, const CesConfig& ces,
         const TimeGrid& grid, bool prune)
      : ces_(ces), slots_(grid.slot_count), prune_(prune) {
    options_.reserve(requests.size());
    for (const Request& r : requests) {
      std::vector<CompactOption> opts;
      opts.reserve(r.options.size());
      for (const ScheduleOption& o : r.options) opts.push_back(compact(o));
      options_.push_back(std::move(opts));
    }
    energy_.assign(static_cast<std::size_t>(slots_), 0.0);
    power_.assign(static_cast<std::size_t>(slots_), 0.0);
    choice_.assign(options_.size(), -1);
    best_choice_.assign(options_.size(), -1);
    if (prune_) precompute_suffixes();
  }

  void run() { descend(0, 0.0); }

  bool found() const { return found_; }
  double best_welfare() const { return best_; }
  const std::vector<int>& best_choice() const { return best_choice_; }
  std::int64_t nodes() const { return nodes_; }

 private:
  void precompute_suffixes() {
    const std::size_t n = options_.size();
    const auto T = static_cast<std::size_t>(slots_);
    value_suffix_.assign(n + 1, 0.0);
    down_suffix_.assign((n + 1) * T, 0.0);
    up_suffix_.assign((n + 1) * T, 0.0);
    for (std::size_t k = n; k-- > 0;) {
      double best_v = 0.0;
      std::vector<double> lo(T, 0.0), hi(T, 0.0);
      for (const CompactOption& o : options_[k]) {
        best_v = std::max(best_v, o.valuation);
        std::vector<double> row(T, 0.0);
        for (const Delta& d : o.power) row[static_cast<std::size_t>(d.slot)] = d.amount;
        for (std::size_t t = 0; t < T; ++t) {
          lo[t] = std::min(lo[t], row[t]);
          hi[t] = std::max(hi[t], row[t]);
        }
      }
      value_suffix_[k] = value_suffix_[k + 1] + best_v;
      for (std::size_t t = 0; t < T; ++t) {
        down_suffix_[k * T + t] = down_suffix_[(k + 1) * T + t] + lo[t];
        up_suffix_[k * T + t] = up_suffix_[(k + 1) * T + t] + hi[t];
      }
    }
  }

  bool leaf_feasible() const {
    for (int t = 0; t < slots_; ++t) {
      const auto i = static_cast<std::size_t>(t);
      if (energy_[i] > ces_.energy_cap || energy_[i] < 0.0) return false;
      if (power_[i] > ces_.charge_cap || power_[i] < -ces_.discharge_cap) return false;
    }
    return true;
  }

  // Whether requests k.. can still bring every slot back within limits.
  bool can_recover(std::size_t k) const {
    const auto T = static_cast<std::size_t>(slots_);
    for (std::size_t t = 0; t < T; ++t) {
      if (energy_[t] > ces_.energy_cap) return false;
      const double slack_c = 1e-9 * ces_.charge_cap;
      const double slack_d = 1e-9 * ces_.discharge_cap;
      if (power_[t] + down_suffix_[k * T + t] > ces_.charge_cap + slack_c) return false;
      if (power_[t] + up_suffix_[k * T + t] < -ces_.discharge_cap - slack_d) return false;
    }
    return true;
  }

  bool bound_prunes(std::size_t k, double welfare) const {
    if (!found_) return false;
    const double bound = welfare + value_suffix_[k];
    return bound < best_ - 1e-9 * (1.0 + std::abs(best_));
  }

  void descend(std::size_t k, double welfare) {
    ++nodes_;
    if (k == options_.size()) {
      if (leaf_feasible() && (!found_ || welfare > best_)) {
        found_ = true;
        best_ = welfare;
        best_choice_ = choice_;
      }
      return;
    }
    if (prune_ && (!can_recover(k) || bound_prunes(k, welfare))) return;

    for (std::size_t s = 0; s < options_[k].size(); ++s) {
      const CompactOption& o = options_[k][s];
      std::vector<double> saved_e, saved_p;
      saved_e.reserve(o.energy.size());
      saved_p.reserve(o.power.size());
      for (const Delta& d : o.energy) {
        auto& y = energy_[static_cast<std::size_t>(d.slot)];
        saved_e.push_back(y);
        y += d.amount;
      }
      for (const Delta& d : o.power) {
        auto& y = power_[static_cast<std::size_t>(d.slot)];
        saved_p.push_back(y);
        y += d.amount;
      }
      choice_[k] = static_cast<int>(s);
      descend(k + 1, welfare + o.valuation);
      for (std::size_t j = 0; j < o.energy.size(); ++j) {
        energy_[static_cast<std::size_t>(o.energy[j].slot)] = saved_e[j];
      }
      for (std::size_t j = 0; j < o.power.size(); ++j) {
        power_[static_cast<std::size_t>(o.power[j].slot)] = saved_p[j];
      }
    }
    choice_[k] = -1;
    descend(k + 1, welfare);
  }

  CesConfig ces_;
  int slots_;
  bool prune_;
  std::vector<std::vector<CompactOption>> options_;
  std::vector<double> energy_, power_;
  std::vector<int> choice_, best_choice_;
  std::vector<double> value_suffix_, down_suffix_, up_suffix_;
  bool found_ = false;
  double best_ = 0.0;
  std::int64_t nodes_ = 0;
};

void check_caps(std::span<const Request> requests, OracleMethod method) {
  if (method == OracleMethod::kExhaustive) {
    double product = 1.0;
    for (const Request& r : requests) product *= static_cast<double>(r.options.size() + 1);
    if (product > kExhaustiveCap) {
      throw CapExceededError("exhaustive search over " + std::to_string(product) +
                             " assignments exceeds the cap of " +
                             std::to_string(kExhaustiveCap));
    }
  } else {
    std::size_t widest = 0;
    for (const Request& r : requests) widest = std::max(widest, r.options.size());
    const auto size = static_cast<std::int64_t>(requests.size() * widest);
    if (size > kBranchAndBoundCap) {
      throw CapExceededError("branch-and-bound size N * max|S_n| = " +
                             std::to_string(size) + " exceeds the cap of " +
                             std::to_string(kBranchAndBoundCap) + " (N = " +
                             std::to_string(requests.size()) +
                             ", max|S_n| = " + std::to_string(widest) + ")");
    }
  }
}

}  // namespace

OfflineSolution solve_offline(std::span<const Request> requests,
                              const CesConfig& ces, const TimeGrid& grid,
                              OracleMethod method) {
  check_caps(requests, method);
  validate_requests(requests, grid);

  Search search(requests, ces, grid, method == OracleMethod::kBranchAndBound);
  search.run();

  OfflineSolution sol;
  sol.node_count = search.nodes();
  // Denying everything is always feasible, so an optimum always exists.
  sol.welfare = search.best_welfare();
  const std::vector<int>& choice = search.best_choice();
  for (std::size_t k = 0; k < requests.size(); ++k) {
    if (choice[k] >= 0) sol.chosen[requests[k].id] = choice[k];
  }
  return sol;
}

OfflineSolution solve_fcfs(std::span<const Request> requests,
                           const CesConfig& ces, const TimeGrid& grid) {
  validate_requests(requests, grid);
  OfflineSolution sol;
  UsageVector usage = UsageVector::zeros(grid.slot_count);
  for (const Request& r : requests) {
    ++sol.node_count;
    std::vector<int> order(r.options.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = static_cast<int>(s);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return r.options[static_cast<std::size_t>(a)].valuation >
             r.options[static_cast<std::size_t>(b)].valuation;
    });
    for (int s : order) {
      const ScheduleOption& o = r.options[static_cast<std::size_t>(s)];
      if (!fits(o, usage, ces)) continue;
      for (int t = o.capacity.first_slot(); t < o.capacity.end_slot(); ++t) {
        usage.energy[static_cast<std::size_t>(t)] += o.capacity.at(t);
      }
      for (int t = o.charge.first_slot(); t < o.charge.end_slot(); ++t) {
        usage.power[static_cast<std::size_t>(t)] += o.charge.at(t);
      }
      sol.chosen[r.id] = s;
      sol.welfare += o.valuation;
      break;
    }
  }
  return sol;
}

bool allocation_feasible(std::span<const Request> requests,
                         const std::map<std::int64_t, int>& chosen,
                         const CesConfig& ces, const TimeGrid& grid) {
  std::vector<double> energy(static_cast<std::size_t>(grid.slot_count), 0.0);
  std::vector<double> power(static_cast<std::size_t>(grid.slot_count), 0.0);
  for (const Request& r : requests) {
    auto it = chosen.find(r.id);
    if (it == chosen.end()) continue;
    if (it->second < 0 || it->second >= static_cast<int>(r.options.size())) return false;
    const ScheduleOption& o = r.options[static_cast<std::size_t>(it->second)];
    for (int t = 0; t < grid.slot_count; ++t) {
      energy[static_cast<std::size_t>(t)] += o.capacity.at(t);
      power[static_cast<std::size_t>(t)] += o.charge.at(t);
    }
  }
  for (int t = 0; t < grid.slot_count; ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (energy[i] < 0.0 || energy[i] > ces.energy_cap) return false;
    if (power[i] > ces.charge_cap || power[i] < -ces.discharge_cap) return false;
  }
  return true;
}

ComparisonRun compare(std::span<const Request> requests,
                      const EngineConfig& config, OracleMethod method) {
  ComparisonRun out;
  out.offline = solve_offline(requests, config.ces, config.grid, method);
  out.online = run_sequence(requests, config);
  out.fcfs = solve_fcfs(requests, config.ces, config.grid);

  RatioReport& r = out.report;
  r.opt_welfare = out.offline.welfare;
  r.alg_welfare = out.online.welfare;
  r.fcfs_welfare = out.fcfs.welfare;
  r.theoretical_alpha = competitive_ratio(config.bounds).alpha;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (r.alg_welfare > 0.0) {
    r.empirical_ratio = r.opt_welfare / r.alg_welfare;
  } else if (r.opt_welfare > 0.0) {
    r.empirical_ratio = kInf;
    r.ratio_infinite = true;
  } else {
    r.empirical_ratio = 1.0;
  }
  r.exceeds_alpha = r.empirical_ratio > r.theoretical_alpha;
  const double d0 = out.online.trace.front().dual;
  r.d0_over_opt = r.opt_welfare > 0.0 ? d0 / r.opt_welfare : kInf;
  return out;
}

RatioReport build_ratio_report(std::span<const Request> requests,
                               const ValuationBounds& bounds,
                               const CesConfig& ces, const TimeGrid& grid) {
  EngineConfig config{grid, ces, bounds};
  return compare(requests, config).report;
}

}  // namespace ces

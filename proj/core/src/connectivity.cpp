#include "menuconnect/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace menuconnect {

bool ReductionSet::contains(int k) const {
  return std::binary_search(indices.begin(), indices.end(), k);
}

int next_square_size(int option_count) {
  if (option_count <= 0) throw PreconditionError("next_square_size: empty menu");
  int root = static_cast<int>(std::sqrt(static_cast<double>(option_count)));
  while (root * root < option_count) ++root;
  while (root > 1 && (root - 1) * (root - 1) >= option_count) --root;
  return root * root;
}

int reduction_cap(int option_count) {
  const int square = next_square_size(option_count);
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(square))));
}

ReductionSet make_reduction_set(std::vector<int> indices, int option_count) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.empty() || indices.front() != 0) {
    throw PreconditionError("reduction set must contain the default option 0");
  }
  if (indices.back() >= option_count || indices.front() < 0) {
    throw PreconditionError("reduction set index outside the menu");
  }
  const int cap = reduction_cap(option_count);
  if (static_cast<int>(indices.size()) > cap) {
    throw PreconditionError("reduction set of size " + std::to_string(indices.size()) +
                            " exceeds the cap " + std::to_string(cap) + " for " +
                            std::to_string(option_count) + " options");
  }
  return ReductionSet{std::move(indices)};
}

RochetMenu pad_with_default(const RochetMenu& menu, int target_options) {
  if (target_options < menu.option_count()) {
    throw PreconditionError("pad_with_default: target smaller than the menu");
  }
  RochetMenu out = menu;
  out.options.resize(target_options, menu.options[0]);
  return out;
}

AmaMenu pad_with_default(const AmaMenu& menu, int target_options) {
  if (target_options < menu.option_count()) {
    throw PreconditionError("pad_with_default: target smaller than the menu");
  }
  AmaMenu out = menu;
  out.options.resize(target_options, menu.options[0]);
  return out;
}

namespace {

void verify_bijection(const Bijection& bij, const std::vector<int>& s1,
                      const std::vector<int>& s2) {
  const std::set<int> set1(s1.begin(), s1.end());
  const std::set<int> set2(s2.begin(), s2.end());
  std::set<std::pair<int, int>> used;
  for (int k = 0; k < bij.size(); ++k) {
    const auto& pair = bij.forward[k];
    if (set1.count(pair.first) == 0 || set2.count(pair.second) == 0) {
      throw InvariantError("bijection image outside the selected sets");
    }
    if (!used.insert(pair).second) {
      throw InvariantError("bijection assigns a pair twice");
    }
    if (set1.count(k) != 0 && pair.first != k) {
      throw InvariantError("bijection moves a member of the first set");
    }
    if (set2.count(k) != 0 && pair.second != k) {
      throw InvariantError("bijection moves a member of the second set");
    }
  }
  if (static_cast<int>(used.size()) != bij.size()) {
    throw InvariantError("bijection does not cover the product");
  }
}

}  // namespace

Bijection build_bijection(int option_count, std::vector<int> s1, std::vector<int> s2) {
  const int square = next_square_size(option_count);
  if (square != option_count) {
    throw PreconditionError("build_bijection: option count " + std::to_string(option_count) +
                            " is not a perfect square");
  }
  const int root = reduction_cap(option_count);
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  auto in_range = [&](const std::vector<int>& s) {
    return !s.empty() && s.front() >= 0 && s.back() < option_count &&
           std::adjacent_find(s.begin(), s.end()) == s.end();
  };
  if (!in_range(s1) || !in_range(s2)) {
    throw PreconditionError("build_bijection: selected sets out of range or with duplicates");
  }
  if (static_cast<int>(s1.size()) != root || static_cast<int>(s2.size()) != root) {
    throw PreconditionError("build_bijection: selected sets must have size " +
                            std::to_string(root));
  }

  Bijection bij;
  bij.forward.assign(option_count, {-1, -1});
  std::set<std::pair<int, int>> used;
  auto assign = [&](int k, int a, int b) {
    bij.forward[k] = {a, b};
    used.insert({a, b});
  };

  std::vector<int> shared;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(shared));

  if (!shared.empty()) {
    const int anchor = shared.front();
    for (int k : shared) assign(k, k, k);
    for (int k : s1) {
      if (!std::binary_search(shared.begin(), shared.end(), k)) assign(k, k, anchor);
    }
    for (int k : s2) {
      if (!std::binary_search(shared.begin(), shared.end(), k)) assign(k, anchor, k);
    }
  } else {
    if (root < 2) {
      throw PreconditionError("build_bijection: disjoint singleton sets cannot be paired");
    }
    const int a0 = s1[0], a1 = s1[1];
    const int b0 = s2[0], b1 = s2[1];
    assign(a0, a0, b0);
    assign(a1, a1, b1);
    assign(b0, a1, b0);
    assign(b1, a0, b1);
    for (std::size_t i = 2; i < s1.size(); ++i) assign(s1[i], s1[i], b0);
    for (std::size_t i = 2; i < s2.size(); ++i) assign(s2[i], a0, s2[i]);
  }

  // Hand the remaining indices the unused pairs in lexicographic order.
  std::vector<std::pair<int, int>> spare;
  for (int a : s1) {
    for (int b : s2) {
      if (used.count({a, b}) == 0) spare.push_back({a, b});
    }
  }
  std::size_t next = 0;
  for (int k = 0; k < option_count; ++k) {
    if (bij.forward[k].first < 0) bij.forward[k] = spare[next++];
  }
  if (next != spare.size()) {
    throw InvariantError("build_bijection: pair count mismatch");
  }
  verify_bijection(bij, s1, s2);
  return bij;
}

namespace {

template <class M>
M replicate_impl(const M& menu, const Bijection& bij, int component) {
  if (component != 1 && component != 2) {
    throw PreconditionError("replicate_menu: component must be 1 or 2");
  }
  if (bij.size() != menu.option_count()) {
    throw CongruenceError("replicate_menu: bijection built for a different option count");
  }
  M out = menu;
  for (int k = 0; k < menu.option_count(); ++k) {
    const int source = component == 1 ? bij.first(k) : bij.second(k);
    out.options[k] = menu.options[source];
  }
  return out;
}

// Pads the selected indices up to the cap with the smallest unused indices.
std::vector<int> pad_index_set(const ReductionSet& set, int root, int option_count) {
  std::vector<int> out = set.indices;
  if (static_cast<int>(out.size()) > root) {
    throw PreconditionError("reduction set larger than sqrt of the padded menu size");
  }
  std::set<int> present(out.begin(), out.end());
  for (int k = 0; k < option_count && static_cast<int>(out.size()) < root; ++k) {
    if (present.insert(k).second) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class M>
MenuPath<M> connect_zero_impl(const M& m1, const ReductionSet& k1, const M& m2,
                              const ReductionSet& k2) {
  check_congruent(m1, m2);
  const int square = next_square_size(m1.option_count());
  const int root = reduction_cap(square);
  const M m1p = pad_with_default(m1, square);
  const M m2p = pad_with_default(m2, square);
  const std::vector<int> s1 = pad_index_set(k1, root, square);
  const std::vector<int> s2 = pad_index_set(k2, root, square);
  const Bijection bij = build_bijection(square, s1, s2);
  MenuPath<M> path;
  path.breakpoints = {m1p, replicate_impl(m1p, bij, 1), replicate_impl(m2p, bij, 2), m2p};
  return path;
}

}  // namespace

RochetMenu replicate_menu(const RochetMenu& menu, const Bijection& bij, int component) {
  return replicate_impl(menu, bij, component);
}

AmaMenu replicate_menu(const AmaMenu& menu, const Bijection& bij, int component) {
  return replicate_impl(menu, bij, component);
}

RochetPath connect_zero_reducible(const RochetMenu& m1, const ReductionSet& k1,
                                  const RochetMenu& m2, const ReductionSet& k2) {
  return connect_zero_impl(m1, k1, m2, k2);
}

AmaPath connect_zero_reducible(const AmaMenu& m1, const ReductionSet& k1, const AmaMenu& m2,
                               const ReductionSet& k2) {
  return connect_zero_impl(m1, k1, m2, k2);
}

RochetMenu reduce_by_price_inflation(const RochetMenu& menu, const ReductionSet& keep) {
  if (keep.indices.empty() || keep.indices.front() != 0) {
    throw PreconditionError("reduction set must contain the default option 0");
  }
  RochetMenu out = menu;
  for (int k = 0; k < menu.option_count(); ++k) {
    // Any price above the largest attainable value (1) works; 2 keeps the
    // dropped options harmlessly far from ever being selected.
    if (!keep.contains(k)) out.options[k].price = 2.0;
  }
  return out;
}

AmaMenu reduce_by_boost_deflation(const AmaMenu& menu, const ReductionSet& keep) {
  if (keep.indices.empty() || keep.indices.front() != 0) {
    throw PreconditionError("reduction set must contain the default option 0");
  }
  AmaMenu out = menu;
  const double sunk = -(menu.num_buyers + 1.0);
  for (int k = 0; k < menu.option_count(); ++k) {
    if (!keep.contains(k)) out.options[k].boost = sunk;
  }
  return out;
}

namespace {

// Largest grid multiple not exceeding x, robust to the division rounding up
// or down by one step. The top step is capped at ceil(1/cell) - 1 so the
// grid has exactly ceil(1/cell) values; an entry of 1.0 then rounds down by
// one cell, which still keeps the per-entry loss within the cell size.
double floor_to_grid(double x, double cell) {
  double steps = std::floor(x / cell);
  while ((steps + 1.0) * cell <= x) steps += 1.0;
  while (steps * cell > x) steps -= 1.0;
  const double top = std::ceil(1.0 / cell) - 1.0;
  if (steps > top) steps = top;
  return steps * cell;
}

}  // namespace

RochetGridParams rochet_grid_params(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw PreconditionError("discretize_rochet: epsilon must lie in (0, 1]");
  }
  const double cell = epsilon * epsilon / 4.0;
  return RochetGridParams{cell, std::sqrt(cell)};
}

AmaGridParams ama_grid_params(int buyers, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.25)) {
    throw PreconditionError("discretize_ama: epsilon must lie in (0, 1/4]");
  }
  if (buyers <= 0) throw PreconditionError("discretize_ama: no buyers");
  const double m = static_cast<double>(buyers);
  const double cell = epsilon * epsilon / (16.0 * m * m);
  return AmaGridParams{cell, cell / m, std::sqrt(cell) / m};
}

RochetMenu discretize_rochet(const RochetMenu& menu, double epsilon) {
  const RochetGridParams params = rochet_grid_params(epsilon);
  RochetMenu out = menu;
  for (RochetOption& opt : out.options) {
    for (double& a : opt.allocation) a = floor_to_grid(a, params.cell);
    opt.price *= 1.0 - params.price_discount;
  }
  return out;
}

AmaMenu discretize_ama(const AmaMenu& menu, double epsilon) {
  const AmaGridParams params = ama_grid_params(menu.num_buyers, epsilon);
  AmaMenu out = menu;
  for (AmaOption& opt : out.options) {
    for (auto& row : opt.allocation) {
      for (double& a : row) a = floor_to_grid(a, params.step);
    }
    opt.boost *= 1.0 - params.boost_discount;
  }
  return out;
}

ReductionSet reduction_set_of_discretized(const RochetMenu& menu) {
  // Among options sharing an allocation only the cheapest (lowest index on a
  // price tie) can ever be selected.
  std::map<std::vector<double>, int> representative;
  for (int k = 0; k < menu.option_count(); ++k) {
    auto [it, inserted] = representative.try_emplace(menu.options[k].allocation, k);
    if (!inserted && menu.options[k].price < menu.options[it->second].price) {
      it->second = k;
    }
  }
  std::vector<int> indices;
  indices.reserve(representative.size() + 1);
  indices.push_back(0);
  for (const auto& [allocation, k] : representative) indices.push_back(k);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return ReductionSet{std::move(indices)};
}

ReductionSet reduction_set_of_discretized(const AmaMenu& menu) {
  // The boosted-welfare maximizer within an equal-allocation class is its
  // highest-boost member (lowest index on a boost tie), so that member is
  // the one the winner rule can return.
  std::map<std::vector<double>, int> representative;
  std::vector<double> key;
  for (int k = 0; k < menu.option_count(); ++k) {
    key.clear();
    for (const auto& row : menu.options[k].allocation) {
      key.insert(key.end(), row.begin(), row.end());
    }
    auto [it, inserted] = representative.try_emplace(key, k);
    if (!inserted && menu.options[k].boost > menu.options[it->second].boost) {
      it->second = k;
    }
  }
  std::vector<int> indices;
  indices.reserve(representative.size() + 1);
  indices.push_back(0);
  for (const auto& [allocation, k] : representative) indices.push_back(k);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return ReductionSet{std::move(indices)};
}

namespace {

template <class M, class Reduce>
MenuPath<M> connect_epsilon_impl(const M& m1, const ReductionSet& k1, const M& m2,
                                 const ReductionSet& k2, Reduce reduce) {
  check_congruent(m1, m2);
  const int square = next_square_size(m1.option_count());
  const M m1p = pad_with_default(m1, square);
  const M m2p = pad_with_default(m2, square);
  const M r1 = reduce(m1p, k1);
  const M r2 = reduce(m2p, k2);
  MenuPath<M> inner = connect_zero_impl(r1, k1, r2, k2);
  MenuPath<M> path;
  path.breakpoints = {m1p, std::move(inner.breakpoints[0]), std::move(inner.breakpoints[1]),
                      std::move(inner.breakpoints[2]), std::move(inner.breakpoints[3]), m2p};
  return path;
}

}  // namespace

RochetPath connect_epsilon_reducible(const RochetMenu& m1, const ReductionSet& k1,
                                     const RochetMenu& m2, const ReductionSet& k2) {
  return connect_epsilon_impl(m1, k1, m2, k2, [](const RochetMenu& m, const ReductionSet& keep) {
    return reduce_by_price_inflation(m, keep);
  });
}

AmaPath connect_epsilon_reducible(const AmaMenu& m1, const ReductionSet& k1, const AmaMenu& m2,
                                  const ReductionSet& k2) {
  return connect_epsilon_impl(m1, k1, m2, k2, [](const AmaMenu& m, const ReductionSet& keep) {
    return reduce_by_boost_deflation(m, keep);
  });
}

double rochet_large_menu_threshold(int items, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw PreconditionError("connect_large: epsilon must lie in (0, 1]");
  }
  const double base = std::ceil(4.0 / (epsilon * epsilon));
  return std::pow(base, 2.0 * items);
}

double ama_large_menu_threshold(int buyers, int items, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.25)) {
    throw PreconditionError("connect_large: epsilon must lie in (0, 1/4]");
  }
  const double m = static_cast<double>(buyers);
  const double base = std::ceil(16.0 * m * m * m / (epsilon * epsilon));
  return std::pow(base, 2.0 * items * buyers);
}

namespace {

std::string format_count(double threshold) {
  std::ostringstream os;
  os.precision(15);
  os << threshold;
  return os.str();
}

template <class M, class Discretize>
MenuPath<M> connect_large_impl(const M& m1, const M& m2, double threshold, double epsilon,
                               Discretize discretize) {
  check_congruent(m1, m2);
  if (static_cast<double>(m1.option_count()) < threshold) {
    throw PreconditionError("connect_large requires at least " + format_count(threshold) +
                            " options at this size and epsilon, got " +
                            std::to_string(m1.option_count()));
  }
  const int square = next_square_size(m1.option_count());
  const M m1p = pad_with_default(m1, square);
  const M m2p = pad_with_default(m2, square);
  const M d1 = discretize(m1p, epsilon);
  const M d2 = discretize(m2p, epsilon);
  const ReductionSet s1 = reduction_set_of_discretized(d1);
  const ReductionSet s2 = reduction_set_of_discretized(d2);
  const int cap = reduction_cap(square);
  if (s1.size() > cap || s2.size() > cap) {
    throw InvariantError("connect_large: discretization produced more than sqrt(K+1) classes");
  }
  MenuPath<M> inner = connect_zero_impl(d1, s1, d2, s2);
  MenuPath<M> path;
  path.breakpoints = {m1p, std::move(inner.breakpoints[0]), std::move(inner.breakpoints[1]),
                      std::move(inner.breakpoints[2]), std::move(inner.breakpoints[3]), m2p};
  return path;
}

}  // namespace

RochetPath connect_large(const RochetMenu& m1, const RochetMenu& m2, double epsilon) {
  const double threshold = rochet_large_menu_threshold(m1.items(), epsilon);
  return connect_large_impl(m1, m2, threshold, epsilon,
                            [](const RochetMenu& m, double eps) { return discretize_rochet(m, eps); });
}

AmaPath connect_large(const AmaMenu& m1, const AmaMenu& m2, double epsilon) {
  const double threshold = ama_large_menu_threshold(m1.num_buyers, m1.num_items, epsilon);
  return connect_large_impl(m1, m2, threshold, epsilon,
                            [](const AmaMenu& m, double eps) { return discretize_ama(m, eps); });
}

}  // namespace menuconnect

#pragma once

#include <utility>
#include <vector>

#include "menuconnect/ama.hpp"
#include "menuconnect/menu.hpp"
#include "menuconnect/rochet.hpp"

namespace menuconnect {

// Pairing of option indices with two selected index sets: forward[k] is a
// pair (a, b) with a in the first set and b in the second, every pair used
// exactly once, and members of either set paired with themselves on their
// own side.
struct Bijection {
  std::vector<std::pair<int, int>> forward;

  int size() const { return static_cast<int>(forward.size()); }
  int first(int k) const { return forward[k].first; }
  int second(int k) const { return forward[k].second; }
};

// Option subset that is expected to capture the selected options; always
// contains the default.
struct ReductionSet {
  std::vector<int> indices;  // sorted, unique

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int k) const;
};

// Validates range, uniqueness, membership of 0 and the sqrt cap for the
// padded square size.
ReductionSet make_reduction_set(std::vector<int> indices, int option_count);

// Smallest perfect square >= option_count, and its root (the size cap for
// reduction sets).
int next_square_size(int option_count);
int reduction_cap(int option_count);

// Appends copies of the default option; mechanism behavior is unchanged
// because the tie-break prefers the lower index among identical options.
RochetMenu pad_with_default(const RochetMenu& menu, int target_options);
AmaMenu pad_with_default(const AmaMenu& menu, int target_options);

// Builds the pairing for two index sets of equal size sqrt(option_count).
// The sets need not be reduction sets (0 need not be a member).
Bijection build_bijection(int option_count, std::vector<int> first_set,
                          std::vector<int> second_set);

// Option k of the result is option bij.first(k) (component 1) or
// bij.second(k) (component 2) of the input.
RochetMenu replicate_menu(const RochetMenu& menu, const Bijection& bij, int component);
AmaMenu replicate_menu(const AmaMenu& menu, const Bijection& bij, int component);

// Three-piece path [M1, M1^, M2^, M2] through the replicated menus. When both
// menus always select inside their reduction sets, revenue never drops below
// the worse endpoint, pointwise per valuation.
RochetPath connect_zero_reducible(const RochetMenu& m1, const ReductionSet& k1,
                                  const RochetMenu& m2, const ReductionSet& k2);
AmaPath connect_zero_reducible(const AmaMenu& m1, const ReductionSet& k1, const AmaMenu& m2,
                               const ReductionSet& k2);

// Kept options unchanged; every other option gets price 2 (above any
// attainable value), so it is never selected.
RochetMenu reduce_by_price_inflation(const RochetMenu& menu, const ReductionSet& keep);

// Kept options unchanged; every other option gets boost -(m+1), so the
// default dominates it for every profile.
AmaMenu reduce_by_boost_deflation(const AmaMenu& menu, const ReductionSet& keep);

// Allocation grid cell and price discount used by the discretization.
struct RochetGridParams {
  double cell;            // eps^2 / 4
  double price_discount;  // sqrt(cell)
};
RochetGridParams rochet_grid_params(double epsilon);

struct AmaGridParams {
  double cell;            // eps^2 / (16 m^2)
  double step;            // cell / m, the per-entry grid
  double boost_discount;  // sqrt(cell) / m
};
AmaGridParams ama_grid_params(int buyers, double epsilon);

// Rounds allocations down to the grid and discounts prices; along any convex
// combination with the original, the realized price per valuation drops by
// at most 2*sqrt(cell) = epsilon.
RochetMenu discretize_rochet(const RochetMenu& menu, double epsilon);

// AMA analog: grid rounding plus a proportional boost discount; the total
// payment per profile drops by at most epsilon along the segment. Requires
// 0 < epsilon <= 1/4.
AmaMenu discretize_ama(const AmaMenu& menu, double epsilon);

// One representative per distinct allocation: the selection-dominant member
// (cheapest for a posted-price menu; highest boost for an AMA), lowest index
// among equals, plus the default.
ReductionSet reduction_set_of_discretized(const RochetMenu& menu);
ReductionSet reduction_set_of_discretized(const AmaMenu& menu);

// Five-piece path [M1, M1~, M1^, M2^, M2~, M2] whose outer pieces apply the
// price-inflation / boost-deflation reduction.
RochetPath connect_epsilon_reducible(const RochetMenu& m1, const ReductionSet& k1,
                                     const RochetMenu& m2, const ReductionSet& k2);
AmaPath connect_epsilon_reducible(const AmaMenu& m1, const ReductionSet& k1, const AmaMenu& m2,
                                  const ReductionSet& k2);

// Minimum option count for the any-two-menus guarantee, as a double because
// the AMA count overflows 64-bit integers already at moderate sizes.
double rochet_large_menu_threshold(int items, double epsilon);
double ama_large_menu_threshold(int buyers, int items, double epsilon);

// Five-piece path [M1, M1~, M1^, M2^, M2~, M2] through the discretized menus;
// per valuation, revenue at every point stays within epsilon of the worse
// endpoint. Requires menus at least as large as the threshold.
RochetPath connect_large(const RochetMenu& m1, const RochetMenu& m2, double epsilon);
AmaPath connect_large(const AmaMenu& m1, const AmaMenu& m2, double epsilon);

}  // namespace menuconnect

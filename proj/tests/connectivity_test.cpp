#include <doctest.h>

#include <cmath>
#include <set>

#include "menuconnect/ama.hpp"
#include "menuconnect/connectivity.hpp"
#include "menuconnect/rochet.hpp"
#include "support/test_helpers.hpp"

using namespace menuconnect;
using namespace menuconnect::testing;

namespace {

Profile profile2(double v1, double v2) { return Profile{{Valuation{{v1}}, Valuation{{v2}}}}; }

std::vector<int> firsts(const Bijection& bij) {
  std::vector<int> out;
  for (int k = 0; k < bij.size(); ++k) out.push_back(bij.first(k));
  return out;
}

std::vector<int> seconds(const Bijection& bij) {
  std::vector<int> out;
  for (int k = 0; k < bij.size(); ++k) out.push_back(bij.second(k));
  return out;
}

// Enumeration oracle for the pairing invariants.
void check_bijection_invariants(const Bijection& bij, const std::vector<int>& s1,
                                const std::vector<int>& s2) {
  const std::set<int> set1(s1.begin(), s1.end());
  const std::set<int> set2(s2.begin(), s2.end());
  std::set<std::pair<int, int>> seen;
  for (int k = 0; k < bij.size(); ++k) {
    CHECK(set1.count(bij.first(k)) == 1);
    CHECK(set2.count(bij.second(k)) == 1);
    CHECK(seen.insert(bij.forward[k]).second);
    if (set1.count(k) == 1) CHECK(bij.first(k) == k);
    if (set2.count(k) == 1) CHECK(bij.second(k) == k);
  }
  CHECK(static_cast<int>(seen.size()) == bij.size());
}

}  // namespace

TEST_CASE("pairing construction with a shared index") {
  const Bijection bij = build_bijection(4, {0, 1}, {0, 2});
  CHECK(firsts(bij) == std::vector<int>{0, 1, 0, 1});
  CHECK(seconds(bij) == std::vector<int>{0, 0, 2, 2});
  check_bijection_invariants(bij, {0, 1}, {0, 2});
}

TEST_CASE("pairing construction with disjoint sets") {
  const Bijection bij = build_bijection(4, {0, 1}, {2, 3});
  CHECK(bij.forward[0] == std::pair<int, int>{0, 2});
  CHECK(bij.forward[1] == std::pair<int, int>{1, 3});
  CHECK(bij.forward[2] == std::pair<int, int>{1, 2});
  CHECK(bij.forward[3] == std::pair<int, int>{0, 3});
  check_bijection_invariants(bij, {0, 1}, {2, 3});
}

TEST_CASE("identical sets pair diagonally") {
  const Bijection bij = build_bijection(9, {0, 4, 7}, {0, 4, 7});
  for (int k : {0, 4, 7}) {
    CHECK(bij.first(k) == k);
    CHECK(bij.second(k) == k);
  }
  check_bijection_invariants(bij, {0, 4, 7}, {0, 4, 7});
}

TEST_CASE("pairing invariants hold on random index sets") {
  CounterRng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int root = 2 + static_cast<int>(rng.next_double() * 3);
    const int count = root * root;
    auto draw_set = [&]() {
      std::set<int> s;
      while (static_cast<int>(s.size()) < root) {
        s.insert(static_cast<int>(rng.next_double() * count));
      }
      return std::vector<int>(s.begin(), s.end());
    };
    const std::vector<int> s1 = draw_set();
    const std::vector<int> s2 = draw_set();
    check_bijection_invariants(build_bijection(count, s1, s2), s1, s2);
  }
}

TEST_CASE("pairing rejects bad shapes") {
  CHECK_THROWS_AS(build_bijection(5, {0, 1}, {0, 2}), PreconditionError);
  CHECK_THROWS_AS(build_bijection(4, {0}, {0, 2}), PreconditionError);
  CHECK_THROWS_AS(build_bijection(4, {0, 1, 2}, {0, 2}), PreconditionError);
}

TEST_CASE("replication reads options through the pairing") {
  CounterRng rng(42);
  const RochetMenu menu = random_rochet_menu(rng, 2, 3);  // 4 options

  SUBCASE("diagonal pairing keeps the menu") {
    const Bijection diag = build_bijection(4, {0, 1, 2, 3}, {0, 1, 2, 3});
    const RochetMenu copy = replicate_menu(menu, diag, 1);
    for (int k = 0; k < 4; ++k) CHECK(copy.options[k].price == menu.options[k].price);
  }

  SUBCASE("components select the paired sources") {
    const Bijection bij = build_bijection(4, {0, 1}, {0, 2});
    const RochetMenu first = replicate_menu(menu, bij, 1);
    CHECK(first.options[0].price == menu.options[0].price);
    CHECK(first.options[1].price == menu.options[1].price);
    CHECK(first.options[2].price == menu.options[0].price);
    CHECK(first.options[3].price == menu.options[1].price);
    const RochetMenu second = replicate_menu(menu, bij, 2);
    CHECK(second.options[0].price == menu.options[0].price);
    CHECK(second.options[1].price == menu.options[0].price);
    CHECK(second.options[2].price == menu.options[2].price);
    CHECK(second.options[3].price == menu.options[2].price);
  }
}

TEST_CASE("padding with defaults changes no selection") {
  CounterRng rng(43);
  const RochetMenu menu = random_rochet_menu(rng, 2, 4);  // 5 options
  const RochetMenu padded = pad_with_default(menu, 9);
  CHECK(padded.option_count() == 9);
  for (int trial = 0; trial < 200; ++trial) {
    const Valuation v = random_valuation(rng, 2);
    CHECK(revenue_sample(menu, v) == revenue_sample(padded, v));
    CHECK(active_option(menu, v) == active_option(padded, v));
  }
}

TEST_CASE("three-piece path between always-reduced menus") {
  CounterRng rng(44);

  SUBCASE("shape and endpoints") {
    auto [m1, k1] = zero_reducible_rochet(rng, 2, 2);
    auto [m2, k2] = zero_reducible_rochet(rng, 2, 2);
    const RochetPath path = connect_zero_reducible(m1, k1, m2, k2);
    CHECK(path.pieces() == 3);
    CHECK(path.breakpoints.front().options[1].price == m1.options[1].price);
    CHECK(path.breakpoints.back().options[1].price == m2.options[1].price);
  }

  SUBCASE("identical menus keep the selected behavior at every breakpoint") {
    auto [menu, keep] = zero_reducible_rochet(rng, 2, 3);
    const RochetPath path = connect_zero_reducible(menu, keep, menu, keep);
    for (int trial = 0; trial < 300; ++trial) {
      const Valuation v = random_valuation(rng, 2);
      const double reference = revenue_sample(menu, v);
      for (const RochetMenu& bp : path.breakpoints) {
        CHECK(std::abs(revenue_sample(bp, v) - reference) <= 1e-12);
      }
    }
  }

  SUBCASE("per-valuation price floors on all three pieces") {
    for (int pair = 0; pair < 10; ++pair) {
      auto [m1, k1] = zero_reducible_rochet(rng, 2, 3);
      auto [m2, k2] = zero_reducible_rochet(rng, 2, 3);
      const RochetPath path = connect_zero_reducible(m1, k1, m2, k2);
      const RochetMenu& hat1 = path.breakpoints[1];
      const RochetMenu& hat2 = path.breakpoints[2];
      for (int s = 0; s < 500; ++s) {
        const Valuation v = random_valuation(rng, 2);
        const double base1 = revenue_sample(m1, v);
        const double base2 = revenue_sample(m2, v);
        const double hat1_price = revenue_sample(hat1, v);
        const double hat2_price = revenue_sample(hat2, v);
        CHECK(hat1_price >= base1 - 1e-12);
        CHECK(hat2_price >= base2 - 1e-12);
        for (int grid = 0; grid <= 10; ++grid) {
          const double lambda = grid / 10.0;
          CHECK(revenue_sample(interpolate(m1, hat1, lambda), v) >= base1 - 1e-12);
          CHECK(revenue_sample(interpolate(hat2, m2, lambda), v) >= base2 - 1e-12);
          const double middle = revenue_sample(interpolate(hat1, hat2, lambda), v);
          CHECK(middle >= lambda * hat1_price + (1.0 - lambda) * hat2_price - 1e-12);
        }
      }
    }
  }

  SUBCASE("multi-buyer variant keeps the payment floors") {
    for (int pair = 0; pair < 5; ++pair) {
      auto [m1, k1] = zero_reducible_ama(rng, 2, 1, 2);
      auto [m2, k2] = zero_reducible_ama(rng, 2, 1, 2);
      const AmaPath path = connect_zero_reducible(m1, k1, m2, k2);
      const AmaMenu& hat1 = path.breakpoints[1];
      const AmaMenu& hat2 = path.breakpoints[2];
      for (int s = 0; s < 200; ++s) {
        const Profile profile = random_profile(rng, 2, 1);
        const double base1 = total_payment_sample(m1, profile);
        const double base2 = total_payment_sample(m2, profile);
        const double hat1_pay = total_payment_sample(hat1, profile);
        const double hat2_pay = total_payment_sample(hat2, profile);
        CHECK(hat1_pay >= base1 - 1e-9);
        CHECK(hat2_pay >= base2 - 1e-9);
        for (int grid = 0; grid <= 10; ++grid) {
          const double lambda = grid / 10.0;
          CHECK(total_payment_sample(interpolate(m1, hat1, lambda), profile) >= base1 - 1e-9);
          CHECK(total_payment_sample(interpolate(hat2, m2, lambda), profile) >= base2 - 1e-9);
          CHECK(total_payment_sample(interpolate(hat1, hat2, lambda), profile) >=
                lambda * hat1_pay + (1.0 - lambda) * hat2_pay - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("price inflation disables everything outside the kept set") {
  RochetMenu menu;
  menu.options = {RochetOption{{0.0}, 0.0}, RochetOption{{1.0}, 0.36}, RochetOption{{1.0}, 0.9}};

  SUBCASE("keeping everything changes nothing") {
    const ReductionSet all = make_reduction_set({0, 1, 2}, 3);
    const RochetMenu same = reduce_by_price_inflation(menu, all);
    for (int k = 0; k < 3; ++k) CHECK(same.options[k].price == menu.options[k].price);
  }

  SUBCASE("dropped options are never active") {
    const ReductionSet keep = make_reduction_set({0, 1}, 3);
    const RochetMenu reduced = reduce_by_price_inflation(menu, keep);
    CHECK(reduced.options[2].price == 2.0);
    for (int g = 0; g <= 100; ++g) {
      CHECK(active_option(reduced, Valuation{{g / 100.0}}) != 2);
    }
  }

  SUBCASE("on kept-selection events the segment never loses revenue") {
    CounterRng rng(45);
    for (int trial = 0; trial < 10; ++trial) {
      const RochetMenu wide = random_rochet_menu(rng, 2, 8);  // 9 options
      const ReductionSet keep = make_reduction_set({0, 1, 2}, 9);
      const RochetMenu reduced = reduce_by_price_inflation(wide, keep);
      for (int s = 0; s < 300; ++s) {
        const Valuation v = random_valuation(rng, 2);
        if (!keep.contains(active_option(wide, v))) continue;
        const double base = revenue_sample(wide, v);
        for (int g = 0; g <= 10; ++g) {
          CHECK(revenue_sample(interpolate(wide, reduced, g / 10.0), v) >= base - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("boost deflation disables everything outside the kept set") {
  CounterRng rng(46);

  SUBCASE("keeping everything changes nothing") {
    const AmaMenu menu = random_ama_menu(rng, 2, 1, 3);
    const ReductionSet all = make_reduction_set({0, 1, 2, 3}, 4);
    const AmaMenu same = reduce_by_boost_deflation(menu, all);
    for (int k = 0; k < 4; ++k) CHECK(same.options[k].boost == menu.options[k].boost);
  }

  SUBCASE("dropped options can never win") {
    const AmaMenu menu = random_ama_menu(rng, 2, 1, 3);
    const ReductionSet keep = make_reduction_set({0, 1}, 4);
    const AmaMenu reduced = reduce_by_boost_deflation(menu, keep);
    CHECK(reduced.options[2].boost == -3.0);
    CHECK(reduced.options[3].boost == -3.0);
    for (int s = 0; s < 300; ++s) {
      const Profile profile = random_profile(rng, 2, 1);
      const int k = winner(reduced, profile);
      CHECK(k != 2);
      CHECK(k != 3);
    }
  }

  SUBCASE("when every relevant winner is kept the payment is unchanged") {
    for (int trial = 0; trial < 10; ++trial) {
      const AmaMenu menu = random_ama_menu(rng, 2, 2, 7);  // 8 options
      const ReductionSet keep = make_reduction_set({0, 1, 2}, 8);
      const AmaMenu reduced = reduce_by_boost_deflation(menu, keep);
      for (int s = 0; s < 200; ++s) {
        const Profile profile = random_profile(rng, 2, 2);
        const AmaOutcome outcome = vcg_prices(menu, profile);
        bool kept_event = keep.contains(outcome.winner);
        for (int i : outcome.winners_without) kept_event = kept_event && keep.contains(i);
        if (!kept_event) continue;
        const double base = outcome.total_payment;
        for (int g = 0; g <= 10; ++g) {
          const double along =
              total_payment_sample(interpolate(menu, reduced, g / 10.0), profile);
          CHECK(std::abs(along - base) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("allocation grid rounding for posted menus") {
  SUBCASE("construction arithmetic") {
    RochetMenu menu;
    menu.options = {RochetOption{{0.0}, 0.0}, RochetOption{{0.537}, 0.5}};
    const RochetMenu rounded = discretize_rochet(menu, 0.2);
    CHECK(std::abs(rounded.options[1].allocation[0] - 0.53) <= 1e-12);
    CHECK(std::abs(rounded.options[1].price - 0.45) <= 1e-12);
  }

  SUBCASE("grid menus are fixed points") {
    const double cell = rochet_grid_params(0.2).cell;
    RochetMenu menu;
    menu.options = {RochetOption{{0.0, 0.0}, 0.0},
                    RochetOption{{17.0 * cell, 53.0 * cell}, 0.0},
                    RochetOption{{99.0 * cell, 0.0}, 0.0}};
    const RochetMenu rounded = discretize_rochet(menu, 0.2);
    for (int k = 0; k < 3; ++k) {
      CHECK(rounded.options[k].allocation[0] == menu.options[k].allocation[0]);
      CHECK(rounded.options[k].allocation[1] == menu.options[k].allocation[1]);
      CHECK(rounded.options[k].price == menu.options[k].price);
    }
  }

  SUBCASE("epsilon range is enforced") {
    RochetMenu menu;
    menu.options = {RochetOption{{0.0}, 0.0}};
    CHECK_THROWS_AS(discretize_rochet(menu, 0.0), PreconditionError);
    CHECK_THROWS_AS(discretize_rochet(menu, 1.5), PreconditionError);
  }

  SUBCASE("distinct allocations stay within the cover size") {
    CounterRng rng(47);
    const double epsilon = 0.5;
    for (int trial = 0; trial < 5; ++trial) {
      const RochetMenu menu = random_rochet_menu(rng, 1, 299);
      const RochetMenu rounded = discretize_rochet(menu, epsilon);
      std::set<double> distinct;
      for (const RochetOption& opt : rounded.options) distinct.insert(opt.allocation[0]);
      CHECK(static_cast<int>(distinct.size()) <= 16);  // ceil(4/eps^2)^n
    }
  }

  SUBCASE("per-valuation price floor along the segment") {
    CounterRng rng(48);
    const double epsilon = 0.4;
    const double budget = epsilon;  // 2*sqrt(cell)
    for (int trial = 0; trial < 10; ++trial) {
      const RochetMenu menu = random_rochet_menu(rng, 2, 10);
      const RochetMenu rounded = discretize_rochet(menu, epsilon);
      for (int s = 0; s < 300; ++s) {
        const Valuation v = random_valuation(rng, 2);
        const double base = revenue_sample(menu, v);
        for (int g = 0; g <= 10; ++g) {
          CHECK(revenue_sample(interpolate(menu, rounded, g / 10.0), v) >= base - budget - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("allocation grid rounding for multi-buyer menus") {
  SUBCASE("construction arithmetic") {
    const AmaGridParams params = ama_grid_params(2, 0.2);
    CHECK(std::abs(params.cell - 0.000625) <= 1e-15);
    CHECK(std::abs(params.boost_discount - 0.0125) <= 1e-15);
    CHECK(std::abs(params.step - 0.0003125) <= 1e-15);

    AmaMenu menu;
    menu.num_buyers = 2;
    menu.num_items = 1;
    menu.options = {AmaOption{{{0.0}, {0.0}}, 0.0}, AmaOption{{{0.5}, {0.5}}, -0.4}};
    const AmaMenu rounded = discretize_ama(menu, 0.2);
    CHECK(rounded.options[1].allocation[0][0] == 0.5);
    CHECK(std::abs(rounded.options[1].boost - (-0.395)) <= 1e-12);
  }

  SUBCASE("the all-zero menu is unchanged") {
    AmaMenu menu;
    menu.num_buyers = 2;
    menu.num_items = 2;
    menu.options.assign(
        3, AmaOption{std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)), 0.0});
    const AmaMenu rounded = discretize_ama(menu, 0.25);
    for (const AmaOption& opt : rounded.options) {
      CHECK(opt.boost == 0.0);
      for (const auto& row : opt.allocation) {
        for (double a : row) CHECK(a == 0.0);
      }
    }
  }

  SUBCASE("per-profile payment floor along the segment") {
    CounterRng rng(49);
    const double epsilon = 0.25;
    for (int trial = 0; trial < 5; ++trial) {
      const AmaMenu menu = random_ama_menu(rng, 2, 2, 15);
      const AmaMenu rounded = discretize_ama(menu, epsilon);
      for (int s = 0; s < 200; ++s) {
        const Profile profile = random_profile(rng, 2, 2);
        const double base = total_payment_sample(menu, profile);
        for (int g = 0; g <= 10; ++g) {
          const double along =
              total_payment_sample(interpolate(menu, rounded, g / 10.0), profile);
          CHECK(along >= base - epsilon - 1e-9);
        }
      }
    }
  }

  SUBCASE("epsilon range is enforced") {
    AmaMenu menu;
    menu.num_buyers = 2;
    menu.num_items = 1;
    menu.options = {AmaOption{{{0.0}, {0.0}}, 0.0}};
    CHECK_THROWS_AS(discretize_ama(menu, 0.3), PreconditionError);
  }
}

TEST_CASE("one representative per distinct allocation") {
  SUBCASE("shared allocation keeps the cheapest option") {
    RochetMenu menu;
    menu.options = {RochetOption{{0.0}, 0.0}, RochetOption{{0.7}, 0.3},
                    RochetOption{{0.7}, 0.2}};
    const ReductionSet set = reduction_set_of_discretized(menu);
    CHECK(set.indices == std::vector<int>{0, 2});
  }

  SUBCASE("all-distinct allocations keep every option") {
    RochetMenu menu;
    menu.options = {RochetOption{{0.0}, 0.0}, RochetOption{{0.25}, 0.3},
                    RochetOption{{0.5}, 0.2}, RochetOption{{0.75}, 0.1}};
    const ReductionSet set = reduction_set_of_discretized(menu);
    CHECK(set.indices == std::vector<int>{0, 1, 2, 3});
  }

  SUBCASE("shared allocation keeps the highest boost for multi-buyer menus") {
    AmaMenu menu;
    menu.num_buyers = 2;
    menu.num_items = 1;
    menu.options = {AmaOption{{{0.0}, {0.0}}, 0.0}, AmaOption{{{1.0}, {0.0}}, -0.4},
                    AmaOption{{{1.0}, {0.0}}, -0.1}};
    const ReductionSet set = reduction_set_of_discretized(menu);
    CHECK(set.indices == std::vector<int>{0, 2});
    // The kept member is the one the winner rule can actually return.
    const Profile profile = profile2(0.9, 0.1);
    CHECK(winner(menu, profile) == 2);
  }

  SUBCASE("discretized menus stay under the square-root cap") {
    CounterRng rng(50);
    for (int trial = 0; trial < 5; ++trial) {
      const RochetMenu menu = random_rochet_menu(rng, 1, 255);  // 256 options
      const ReductionSet set = reduction_set_of_discretized(discretize_rochet(menu, 0.5));
      CHECK(set.size() <= reduction_cap(256));
    }
  }
}

TEST_CASE("five-piece path through reduced menus") {
  CounterRng rng(51);
  auto [m1, k1] = zero_reducible_rochet(rng, 2, 3);
  auto [m2, k2] = zero_reducible_rochet(rng, 2, 3);
  const RochetPath path = connect_epsilon_reducible(m1, k1, m2, k2);
  CHECK(path.pieces() == 5);
  // Outer breakpoints are the inputs; the second and fifth carry inflated
  // prices outside the kept sets.
  CHECK(path.breakpoints[0].options[1].price == m1.options[1].price);
  CHECK(path.breakpoints[5].options[1].price == m2.options[1].price);
  bool saw_inflated = false;
  for (const RochetOption& opt : path.breakpoints[1].options) {
    saw_inflated = saw_inflated || opt.price == 2.0;
  }
  CHECK(saw_inflated);

  SUBCASE("identical always-reduced inputs keep revenue constant per sample") {
    const RochetPath same = connect_epsilon_reducible(m1, k1, m1, k1);
    for (int s = 0; s < 200; ++s) {
      const Valuation v = random_valuation(rng, 2);
      const double reference = revenue_sample(m1, v);
      for (int g = 0; g <= 20; ++g) {
        CHECK(revenue_sample(path_point(same, g / 20.0), v) >= reference - 1e-12);
      }
    }
  }
}

TEST_CASE("large-menu thresholds") {
  CHECK(rochet_large_menu_threshold(1, 1.0) == 16.0);
  CHECK(rochet_large_menu_threshold(1, 0.5) == 256.0);
  CHECK(ama_large_menu_threshold(2, 1, 0.25) == std::pow(2048.0, 4.0));

  CounterRng rng(52);
  const RochetMenu small = random_rochet_menu(rng, 1, 14);  // 15 options < 16
  const RochetMenu small2 = random_rochet_menu(rng, 1, 14);
  CHECK_THROWS_WITH_AS(connect_large(small, small2, 1.0),
                       doctest::Contains("requires at least 16"), PreconditionError);
}

TEST_CASE("large-menu path keeps per-valuation revenue near the worse endpoint") {
  CounterRng rng(53);
  const double epsilon = 1.0;
  const RochetMenu m1 = random_rochet_menu(rng, 1, 15);  // 16 options
  const RochetMenu m2 = random_rochet_menu(rng, 1, 15);
  const RochetPath path = connect_large(m1, m2, epsilon);
  CHECK(path.pieces() == 5);
  for (int s = 0; s < 500; ++s) {
    const Valuation v = random_valuation(rng, 1);
    const double floor_value =
        std::min(revenue_sample(m1, v), revenue_sample(m2, v)) - epsilon;
    for (int g = 0; g <= 50; ++g) {
      CHECK(revenue_sample(path_point(path, g / 50.0), v) >= floor_value - 1e-12);
    }
  }
}

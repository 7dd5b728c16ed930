#include <doctest.h>

#include <cmath>

#include "menuconnect/distributions.hpp"
#include "menuconnect/training.hpp"
#include "support/test_helpers.hpp"

using namespace menuconnect;
using menuconnect::testing::myerson_grid_revenue;
using menuconnect::testing::random_valuation;

TEST_CASE("initial menus are valid and reproducible") {
  CounterRng rng_a(60), rng_b(60);
  const RochetMenu a = init_rochet_menu(3, 10, rng_a);
  const RochetMenu b = init_rochet_menu(3, 10, rng_b);
  CHECK(validate(a).empty());
  for (int k = 0; k < a.option_count(); ++k) {
    CHECK(a.options[k].price == b.options[k].price);
  }
  CounterRng rng_c(61);
  const AmaMenu c = init_ama_menu(3, 2, 8, rng_c);
  CHECK(validate(c).empty());
  for (int k = 1; k < c.option_count(); ++k) {
    CHECK(c.options[k].boost <= 0.0);
    CHECK(c.options[k].boost >= -0.1);
  }
}

TEST_CASE("a fresh single-item menu almost always sells something") {
  const DensitySpec uniform = DensitySpec::uniform_box();
  int positive = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed);
    const RochetMenu menu = init_rochet_menu(1, 10, rng);
    if (analytic_revenue_1d(menu, uniform) > 0.0) ++positive;
  }
  CHECK(positive >= 95);
}

TEST_CASE("projection") {
  SUBCASE("a feasible menu is a fixed point") {
    CounterRng rng(62);
    AmaMenu menu = init_ama_menu(2, 2, 6, rng);
    const AmaMenu before = menu;
    project_feasible(menu);
    for (int k = 0; k < menu.option_count(); ++k) {
      CHECK(menu.options[k].boost == before.options[k].boost);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          CHECK(menu.options[k].allocation[i][j] == before.options[k].allocation[i][j]);
        }
      }
    }
  }

  SUBCASE("violations are repaired and projecting twice changes nothing") {
    AmaMenu menu;
    menu.num_buyers = 2;
    menu.num_items = 1;
    menu.options = {AmaOption{{{0.0}, {0.0}}, 0.0}, AmaOption{{{1.4}, {-0.2}}, -0.3},
                    AmaOption{{{0.9}, {0.8}}, 0.1}};
    project_feasible(menu);
    CHECK(validate(menu).empty());
    const AmaMenu once = menu;
    project_feasible(menu);
    for (int k = 0; k < menu.option_count(); ++k) {
      for (int i = 0; i < 2; ++i) {
        CHECK(menu.options[k].allocation[i][0] == once.options[k].allocation[i][0]);
      }
    }

    RochetMenu posted;
    posted.options = {RochetOption{{0.0}, 0.0}, RochetOption{{1.2}, -0.4}};
    project_feasible(posted);
    CHECK(posted.options[1].allocation[0] == 1.0);
    CHECK(posted.options[1].price == 0.0);
  }
}

TEST_CASE("a zero learning rate leaves the initial menu untouched") {
  TrainConfig cfg;
  cfg.regular_options = 5;
  cfg.steps = 20;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.0;
  cfg.seed = 5;
  cfg.report_every = 0;
  const auto result = train_rochet(cfg, DensitySpec::uniform_box(), 1);
  CounterRng rng(mix_u64(cfg.seed + 1));
  const RochetMenu initial = init_rochet_menu(1, 5, rng);
  for (int k = 0; k < initial.option_count(); ++k) {
    CHECK(result.menu.options[k].price == initial.options[k].price);
    CHECK(result.menu.options[k].allocation[0] == initial.options[k].allocation[0]);
  }
}

TEST_CASE("training is bitwise reproducible") {
  TrainConfig cfg;
  cfg.regular_options = 4;
  cfg.steps = 50;
  cfg.batch_size = 32;
  cfg.learning_rate = 0.1;
  cfg.seed = 17;
  cfg.report_every = 25;
  cfg.report_samples = 500;
  const auto a = train_rochet(cfg, DensitySpec::uniform_box(), 1);
  const auto b = train_rochet(cfg, DensitySpec::uniform_box(), 1);
  for (int k = 0; k < a.menu.option_count(); ++k) {
    CHECK(a.menu.options[k].price == b.menu.options[k].price);
    CHECK(a.menu.options[k].allocation[0] == b.menu.options[k].allocation[0]);
  }
  CHECK(a.history.objective == b.history.objective);
}

TEST_CASE("full-batch ascent does not decrease the objective for small steps") {
  const SoftmaxConfig smoothing{50.0};
  CounterRng rng(63);
  for (int instance = 0; instance < 10; ++instance) {
    RochetMenu menu = menuconnect::testing::random_rochet_menu(rng, 2, 4);
    std::vector<Valuation> batch;
    for (int s = 0; s < 64; ++s) batch.push_back(random_valuation(rng, 2));
    auto objective = [&](const RochetMenu& m) {
      double total = 0.0;
      for (const Valuation& v : batch) total += softmax_revenue_sample(m, v, smoothing);
      return total / batch.size();
    };
    const double before = objective(menu);

    // Average analytic gradient over the fixed batch.
    std::vector<std::vector<double>> alloc(4, std::vector<double>(2, 0.0));
    std::vector<double> price(4, 0.0);
    for (const Valuation& v : batch) {
      const auto g = softmax_revenue_gradient(menu, v, smoothing);
      for (int k = 0; k < 4; ++k) {
        price[k] += g.grad.price[k] / batch.size();
        for (int j = 0; j < 2; ++j) alloc[k][j] += g.grad.allocation[k][j] / batch.size();
      }
    }

    double step = 0.1;
    bool improved = false;
    for (int backtrack = 0; backtrack < 30; ++backtrack) {
      RochetMenu stepped = menu;
      for (int k = 0; k < 4; ++k) {
        stepped.options[k + 1].price += step * price[k];
        for (int j = 0; j < 2; ++j) stepped.options[k + 1].allocation[j] += step * alloc[k][j];
      }
      if (objective(stepped) >= before - 1e-12) {
        improved = true;
        break;
      }
      step /= 2.0;
    }
    CHECK(improved);
  }
}

TEST_CASE("exploding learning rates trigger the divergence guard") {
  TrainConfig cfg;
  cfg.regular_options = 4;
  cfg.steps = 60;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e308;
  cfg.seed = 3;
  cfg.report_every = 0;
  CHECK_THROWS_AS(train_rochet(cfg, DensitySpec::uniform_box(), 1), InvariantError);
}

TEST_CASE("single-item training approaches the posted-price optimum") {
  TrainConfig cfg;
  cfg.regular_options = 10;
  cfg.temperature = 200.0;
  cfg.steps = 2000;
  cfg.batch_size = 512;
  cfg.learning_rate = 0.1;
  cfg.seed = 1;
  cfg.report_every = 500;
  const auto result = train_rochet(cfg, DensitySpec::uniform_box(), 1);
  const double revenue = analytic_revenue_1d(result.menu, DensitySpec::uniform_box());
  const double oracle = myerson_grid_revenue();
  CHECK(oracle == 0.25);
  CHECK(revenue >= oracle - 0.005);
}

TEST_CASE("two-buyer training beats the second-price baseline") {
  TrainConfig cfg;
  cfg.regular_options = 5;
  cfg.temperature = 200.0;
  cfg.steps = 2000;
  cfg.batch_size = 512;
  cfg.learning_rate = 0.1;
  cfg.seed = 1;
  cfg.report_every = 1000;
  cfg.report_samples = 100000;
  const auto result = train_ama(cfg, DensitySpec::uniform_box(), 2, 1);
  REQUIRE(!result.history.argmax_estimates.empty());
  const double revenue = result.history.argmax_estimates.back().second;
  CHECK(revenue >= 1.0 / 3.0 - 0.01);
}

#include "menuconnect/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace menuconnect {

namespace {

void check_config(const TrainConfig& cfg) {
  if (cfg.regular_options < 1) throw PreconditionError("train: need at least one regular option");
  if (cfg.temperature < 1.0) throw PreconditionError("train: temperature must be >= 1");
  if (cfg.learning_rate < 0.0) throw PreconditionError("train: negative learning rate");
  if (cfg.steps < 0 || cfg.batch_size < 1) throw PreconditionError("train: bad step/batch count");
}

}  // namespace

RochetMenu init_rochet_menu(int items, int regular_options, CounterRng& rng) {
  RochetMenu menu;
  menu.options.resize(regular_options + 1);
  menu.options[0] = RochetOption{std::vector<double>(items, 0.0), 0.0};
  for (int k = 1; k <= regular_options; ++k) {
    RochetOption& opt = menu.options[k];
    opt.allocation.resize(items);
    for (double& a : opt.allocation) a = rng.next_double();
    opt.price = rng.next_double();
  }
  return menu;
}

AmaMenu init_ama_menu(int buyers, int items, int regular_options, CounterRng& rng) {
  AmaMenu menu;
  menu.num_buyers = buyers;
  menu.num_items = items;
  menu.options.resize(regular_options + 1);
  menu.options[0] =
      AmaOption{std::vector<std::vector<double>>(buyers, std::vector<double>(items, 0.0)), 0.0};
  for (int k = 1; k <= regular_options; ++k) {
    AmaOption& opt = menu.options[k];
    opt.allocation.assign(buyers, std::vector<double>(items));
    for (auto& row : opt.allocation) {
      for (double& a : row) a = rng.next_double();
    }
    for (int j = 0; j < items; ++j) {
      double column = 0.0;
      for (int i = 0; i < buyers; ++i) column += opt.allocation[i][j];
      if (column > 1.0) {
        for (int i = 0; i < buyers; ++i) opt.allocation[i][j] /= column;
      }
    }
    opt.boost = rng.uniform(-0.1, 0.0);
  }
  return menu;
}

void project_feasible(RochetMenu& menu) {
  for (int k = 1; k < menu.option_count(); ++k) {
    RochetOption& opt = menu.options[k];
    for (double& a : opt.allocation) a = std::clamp(a, 0.0, 1.0);
    if (opt.price < 0.0) opt.price = 0.0;
  }
}

void project_feasible(AmaMenu& menu) {
  for (int k = 1; k < menu.option_count(); ++k) {
    AmaOption& opt = menu.options[k];
    for (auto& row : opt.allocation) {
      for (double& a : row) a = std::clamp(a, 0.0, 1.0);
    }
    for (int j = 0; j < menu.num_items; ++j) {
      double column = 0.0;
      for (int i = 0; i < menu.num_buyers; ++i) column += opt.allocation[i][j];
      // Rescaling preserves the entry ratios; the slack keeps the projection
      // a bitwise no-op on already-feasible menus.
      if (column > 1.0 + kSumSlack) {
        for (int i = 0; i < menu.num_buyers; ++i) opt.allocation[i][j] /= column;
      }
    }
  }
}

namespace {

void guard_finite(double objective, int step) {
  if (!std::isfinite(objective)) {
    throw InvariantError("training objective became non-finite at step " +
                         std::to_string(step) + "; lower the learning rate");
  }
}

}  // namespace

RochetTrainResult train_rochet(const TrainConfig& cfg, const DensitySpec& spec, int items) {
  check_config(cfg);
  validate_spec(spec);
  const std::uint64_t init_seed = mix_u64(cfg.seed + 1);
  const std::uint64_t data_seed = mix_u64(cfg.seed + 2);
  const std::uint64_t eval_seed = mix_u64(cfg.seed + 3);

  CounterRng init_rng(init_seed);
  RochetTrainResult result;
  result.menu = init_rochet_menu(items, cfg.regular_options, init_rng);
  result.history.objective.reserve(cfg.steps);

  const SoftmaxConfig smoothing{cfg.temperature};
  const int regular = cfg.regular_options;

  auto argmax_estimate = [&]() {
    double total = 0.0;
    for (std::int64_t s = 0; s < cfg.report_samples; ++s) {
      const Valuation v = valuation_at(spec, eval_seed, s, items);
      total += revenue_sample(result.menu, v);
    }
    return total / static_cast<double>(cfg.report_samples);
  };

  std::vector<std::vector<double>> alloc_grad(regular, std::vector<double>(items));
  std::vector<double> price_grad(regular);

  for (int step = 0; step < cfg.steps; ++step) {
    for (auto& row : alloc_grad) std::fill(row.begin(), row.end(), 0.0);
    std::fill(price_grad.begin(), price_grad.end(), 0.0);
    double objective = 0.0;

    const std::uint64_t base = static_cast<std::uint64_t>(step) * cfg.batch_size;
    for (int b = 0; b < cfg.batch_size; ++b) {
      const Valuation v = valuation_at(spec, data_seed, base + b, items);
      const RochetGradientResult sample = softmax_revenue_gradient(result.menu, v, smoothing);
      objective += sample.value;
      for (int k = 0; k < regular; ++k) {
        price_grad[k] += sample.grad.price[k];
        for (int j = 0; j < items; ++j) {
          alloc_grad[k][j] += sample.grad.allocation[k][j];
        }
      }
    }
    objective /= cfg.batch_size;
    guard_finite(objective, step);
    result.history.objective.push_back(objective);

    const double scale = cfg.learning_rate / cfg.batch_size;
    for (int k = 0; k < regular; ++k) {
      RochetOption& opt = result.menu.options[k + 1];
      opt.price += scale * price_grad[k];
      for (int j = 0; j < items; ++j) opt.allocation[j] += scale * alloc_grad[k][j];
    }
    project_feasible(result.menu);

    if (cfg.report_every > 0 && ((step + 1) % cfg.report_every == 0 || step + 1 == cfg.steps)) {
      result.history.argmax_estimates.emplace_back(step + 1, argmax_estimate());
    }
  }
  return result;
}

AmaTrainResult train_ama(const TrainConfig& cfg, const DensitySpec& spec, int buyers,
                         int items) {
  check_config(cfg);
  validate_spec(spec);
  const std::uint64_t init_seed = mix_u64(cfg.seed + 1);
  const std::uint64_t data_seed = mix_u64(cfg.seed + 2);
  const std::uint64_t eval_seed = mix_u64(cfg.seed + 3);

  CounterRng init_rng(init_seed);
  AmaTrainResult result;
  result.menu = init_ama_menu(buyers, items, cfg.regular_options, init_rng);
  result.history.objective.reserve(cfg.steps);

  const SoftmaxConfig smoothing{cfg.temperature};
  const int regular = cfg.regular_options;

  auto argmax_estimate = [&]() {
    double total = 0.0;
    for (std::int64_t s = 0; s < cfg.report_samples; ++s) {
      const Profile profile = profile_at(spec, eval_seed, s, buyers, items);
      total += total_payment_sample(result.menu, profile);
    }
    return total / static_cast<double>(cfg.report_samples);
  };

  std::vector<std::vector<std::vector<double>>> alloc_grad(
      regular, std::vector<std::vector<double>>(buyers, std::vector<double>(items)));
  std::vector<double> boost_grad(regular);

  for (int step = 0; step < cfg.steps; ++step) {
    for (auto& option_slot : alloc_grad) {
      for (auto& row : option_slot) std::fill(row.begin(), row.end(), 0.0);
    }
    std::fill(boost_grad.begin(), boost_grad.end(), 0.0);
    double objective = 0.0;

    const std::uint64_t base = static_cast<std::uint64_t>(step) * cfg.batch_size;
    for (int b = 0; b < cfg.batch_size; ++b) {
      const Profile profile = profile_at(spec, data_seed, base + b, buyers, items);
      const AmaGradientResult sample = softmax_payment_gradient(result.menu, profile, smoothing);
      objective += sample.value;
      for (int k = 0; k < regular; ++k) {
        boost_grad[k] += sample.grad.boost[k];
        for (int i = 0; i < buyers; ++i) {
          for (int j = 0; j < items; ++j) {
            alloc_grad[k][i][j] += sample.grad.allocation[k][i][j];
          }
        }
      }
    }
    objective /= cfg.batch_size;
    guard_finite(objective, step);
    result.history.objective.push_back(objective);

    const double scale = cfg.learning_rate / cfg.batch_size;
    for (int k = 0; k < regular; ++k) {
      AmaOption& opt = result.menu.options[k + 1];
      opt.boost += scale * boost_grad[k];
      for (int i = 0; i < buyers; ++i) {
        for (int j = 0; j < items; ++j) {
          opt.allocation[i][j] += scale * alloc_grad[k][i][j];
        }
      }
    }
    project_feasible(result.menu);

    if (cfg.report_every > 0 && ((step + 1) % cfg.report_every == 0 || step + 1 == cfg.steps)) {
      result.history.argmax_estimates.emplace_back(step + 1, argmax_estimate());
    }
  }
  return result;
}

}  // namespace menuconnect

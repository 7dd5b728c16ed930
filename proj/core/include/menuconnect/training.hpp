#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "menuconnect/ama.hpp"
#include "menuconnect/distributions.hpp"
#include "menuconnect/menu.hpp"
#include "menuconnect/rng.hpp"
#include "menuconnect/rochet.hpp"

namespace menuconnect {

// Plain stochastic gradient ascent on the smoothed revenue, constant step,
// fixed temperature. Reproducible: the same config always produces the same
// menu bit for bit.
struct TrainConfig {
  int regular_options = 10;  // K
  double temperature = 200.0;
  int steps = 2000;
  int batch_size = 512;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  int report_every = 100;            // cadence of argmax revenue estimates
  std::int64_t report_samples = 20000;
};

struct TrainHistory {
  std::vector<double> objective;                        // batch smoothed objective per step
  std::vector<std::pair<int, double>> argmax_estimates;  // (step, estimate)
};

// Allocations iid U[0,1] (AMA item columns rescaled into unit supply),
// prices iid U[0,1], boosts iid U[-0.1, 0]; the default option is fixed.
RochetMenu init_rochet_menu(int items, int regular_options, CounterRng& rng);
AmaMenu init_ama_menu(int buyers, int items, int regular_options, CounterRng& rng);

// Clip allocations into [0,1]; clamp prices at 0 / rescale AMA item columns
// whose supply exceeds 1. A feasible menu passes through unchanged.
void project_feasible(RochetMenu& menu);
void project_feasible(AmaMenu& menu);

struct RochetTrainResult {
  RochetMenu menu;
  TrainHistory history;
};

struct AmaTrainResult {
  AmaMenu menu;
  TrainHistory history;
};

RochetTrainResult train_rochet(const TrainConfig& cfg, const DensitySpec& spec, int items);
AmaTrainResult train_ama(const TrainConfig& cfg, const DensitySpec& spec, int buyers, int items);

}  // namespace menuconnect

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "menuconnect/ama.hpp"
#include "menuconnect/connectivity.hpp"
#include "menuconnect/distributions.hpp"
#include "menuconnect/menu.hpp"
#include "menuconnect/rochet.hpp"

namespace menuconnect {

struct McResult {
  double estimate = 0.0;
  double stderr_value = 0.0;
  std::int64_t samples = 0;
};

// Monte-Carlo mean of the realized revenue (argmax semantics), or of the
// smoothed revenue when a temperature is given. Per-sample values are pure
// functions of (seed, index), reduced in index order.
McResult mc_revenue(const RochetMenu& menu, const DensitySpec& spec, std::int64_t samples,
                    std::uint64_t seed, std::optional<double> softmax_temperature = std::nullopt);
McResult mc_revenue(const AmaMenu& menu, const DensitySpec& spec, std::int64_t samples,
                    std::uint64_t seed, std::optional<double> softmax_temperature = std::nullopt);

// Audit of a menu path on a common random sample set: the same valuations
// are re-priced at every grid point, so per-sample slacks are directly
// comparable across t.
struct PathReport {
  std::vector<double> t_grid;
  std::vector<double> estimate;
  std::vector<double> stderr_value;
  // Per t: min over samples of rev_t(v) - (min endpoint rev(v) - epsilon).
  std::vector<double> min_slack_at_t;
  double epsilon = 0.0;
  double min_per_sample_slack = 0.0;
  std::int64_t samples = 0;
  bool pass = false;
};

PathReport path_audit(const RochetPath& path, const DensitySpec& spec, std::int64_t samples,
                      int t_points, double epsilon, std::uint64_t seed);
PathReport path_audit(const AmaPath& path, const DensitySpec& spec, std::int64_t samples,
                      int t_points, double epsilon, std::uint64_t seed);

// Greedy empirical reduction-set selection: always keep the default, then add
// options by decreasing selection frequency until the target event frequency
// or the sqrt cap binds.
struct ReducibilityReport {
  ReductionSet selected;
  double epsilon_hat = 0.0;      // complement of the achieved event frequency
  double event_frequency = 0.0;  // all winners inside the selected set
  std::int64_t samples = 0;
};

ReducibilityReport estimate_reducibility(const RochetMenu& menu, const DensitySpec& spec,
                                         std::int64_t samples, double epsilon,
                                         std::uint64_t seed);
ReducibilityReport estimate_reducibility(const AmaMenu& menu, const DensitySpec& spec,
                                         std::int64_t samples, double epsilon,
                                         std::uint64_t seed);

// Closed-form bounds on |argmax revenue - softmax revenue| in terms of the
// menu shape, the temperature and the density supremum.
double rochet_softmax_gap_bound(int option_count, int items, double temperature,
                                double density_bound);
double ama_softmax_gap_bound(int option_count, int buyers, int items, double temperature,
                             double density_bound);

struct GapReport {
  double bound = 0.0;
  double empirical_gap = 0.0;
  double gap_stderr = 0.0;
  std::int64_t samples = 0;
};

// Bound plus the Monte-Carlo estimate of the actual gap, on common random
// numbers.
GapReport softmax_gap_report(const RochetMenu& menu, const DensitySpec& spec, double temperature,
                             std::int64_t samples, std::uint64_t seed);
GapReport softmax_gap_report(const AmaMenu& menu, const DensitySpec& spec, double temperature,
                             std::int64_t samples, std::uint64_t seed);

}  // namespace menuconnect

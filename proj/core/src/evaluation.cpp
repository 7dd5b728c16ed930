#include "menuconnect/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "menuconnect/parallel.hpp"

namespace menuconnect {

namespace {

int menu_buyers(const RochetMenu&) { return 1; }
int menu_buyers(const AmaMenu& menu) { return menu.num_buyers; }
int menu_items(const RochetMenu& menu) { return menu.items(); }
int menu_items(const AmaMenu& menu) { return menu.num_items; }

double realized_revenue(const RochetMenu& menu, const Profile& profile) {
  return revenue_sample(menu, profile.buyers[0]);
}
double realized_revenue(const AmaMenu& menu, const Profile& profile) {
  return total_payment_sample(menu, profile);
}

double smoothed_revenue(const RochetMenu& menu, const Profile& profile,
                        const SoftmaxConfig& cfg) {
  return softmax_revenue_sample(menu, profile.buyers[0], cfg);
}
double smoothed_revenue(const AmaMenu& menu, const Profile& profile, const SoftmaxConfig& cfg) {
  return softmax_expected_payment(menu, profile, cfg);
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_value = 0.0;
};

// Two-pass mean and standard error, reduced in index order.
MeanStderr reduce_stats(const std::vector<double>& values) {
  MeanStderr out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double total = 0.0;
  for (double v : values) total += v;
  out.mean = total / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    out.stderr_value = std::sqrt(ss / (static_cast<double>(n) - 1.0)) /
                       std::sqrt(static_cast<double>(n));
  }
  return out;
}

template <class M>
McResult mc_revenue_impl(const M& menu, const DensitySpec& spec, std::int64_t samples,
                         std::uint64_t seed, std::optional<double> temperature) {
  if (samples < 1) throw PreconditionError("mc_revenue: need at least one sample");
  validate_spec(spec);
  const int m = menu_buyers(menu);
  const int n = menu_items(menu);
  std::vector<double> values(samples);
  const SoftmaxConfig cfg{temperature.value_or(0.0)};
  parallel_chunks(samples, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t s = begin; s < end; ++s) {
      const Profile profile = profile_at(spec, seed, s, m, n);
      values[s] = temperature ? smoothed_revenue(menu, profile, cfg)
                              : realized_revenue(menu, profile);
    }
  });
  const MeanStderr stats = reduce_stats(values);
  return McResult{stats.mean, stats.stderr_value, samples};
}

template <class M>
PathReport path_audit_impl(const MenuPath<M>& path, const DensitySpec& spec,
                           std::int64_t samples, int t_points, double epsilon,
                           std::uint64_t seed) {
  check_path(path);
  if (t_points < 2) throw PreconditionError("path_audit: need at least the two endpoints");
  if (samples < 1) throw PreconditionError("path_audit: need at least one sample");
  validate_spec(spec);

  const M& front = path.breakpoints.front();
  const M& back = path.breakpoints.back();
  const int m = menu_buyers(front);
  const int n = menu_items(front);

  // Endpoint revenues per sample; the same draws are reused at every t.
  std::vector<double> rev_first(samples), rev_last(samples);
  parallel_chunks(samples, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t s = begin; s < end; ++s) {
      const Profile profile = profile_at(spec, seed, s, m, n);
      rev_first[s] = realized_revenue(front, profile);
      rev_last[s] = realized_revenue(back, profile);
    }
  });

  PathReport report;
  report.epsilon = epsilon;
  report.samples = samples;
  report.t_grid.resize(t_points);
  report.estimate.resize(t_points);
  report.stderr_value.resize(t_points);
  report.min_slack_at_t.resize(t_points);

  std::vector<double> rev_t(samples);
  std::vector<double> slack_chunk_min(t_points);
  for (int q = 0; q < t_points; ++q) {
    const double t = static_cast<double>(q) / (t_points - 1);
    report.t_grid[q] = t;
    const M menu_t = path_point(path, t);
    parallel_chunks(samples, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t s = begin; s < end; ++s) {
        const Profile profile = profile_at(spec, seed, s, m, n);
        rev_t[s] = realized_revenue(menu_t, profile);
      }
    });
    const MeanStderr stats = reduce_stats(rev_t);
    report.estimate[q] = stats.mean;
    report.stderr_value[q] = stats.stderr_value;
    double min_slack = rev_t[0] - (std::min(rev_first[0], rev_last[0]) - epsilon);
    for (std::int64_t s = 1; s < samples; ++s) {
      min_slack = std::min(min_slack, rev_t[s] - (std::min(rev_first[s], rev_last[s]) - epsilon));
    }
    report.min_slack_at_t[q] = min_slack;
  }

  report.min_per_sample_slack =
      *std::min_element(report.min_slack_at_t.begin(), report.min_slack_at_t.end());
  const double endpoint_floor =
      std::min(report.estimate.front(), report.estimate.back()) - epsilon;
  const double max_stderr =
      *std::max_element(report.stderr_value.begin(), report.stderr_value.end());
  const double min_estimate = *std::min_element(report.estimate.begin(), report.estimate.end());
  report.pass = min_estimate >= endpoint_floor - 3.0 * max_stderr;
  return report;
}

// Winners of one sample: the selection plus, for an AMA, the leave-one-out
// selections.
void winners_of(const RochetMenu& menu, const Profile& profile, std::vector<int>& out) {
  out.assign(1, active_option(menu, profile.buyers[0]));
}
void winners_of(const AmaMenu& menu, const Profile& profile, std::vector<int>& out) {
  out.clear();
  out.push_back(winner(menu, profile));
  for (int i = 0; i < menu.num_buyers; ++i) out.push_back(winner(menu, profile, i));
}

double coverage_target(const RochetMenu&, double epsilon) { return 1.0 - epsilon; }
double coverage_target(const AmaMenu& menu, double epsilon) {
  return 1.0 - epsilon / menu.num_buyers;
}

template <class M>
ReducibilityReport estimate_reducibility_impl(const M& menu, const DensitySpec& spec,
                                              std::int64_t samples, double epsilon,
                                              std::uint64_t seed) {
  if (samples < 1) throw PreconditionError("estimate_reducibility: need at least one sample");
  validate_spec(spec);
  const int m = menu_buyers(menu);
  const int n = menu_items(menu);
  const int count = menu.option_count();

  // Winner lists per sample, filled in parallel, reduced in index order.
  const int slots = (std::is_same_v<M, RochetMenu>) ? 1 : m + 1;
  std::vector<int> winner_table(samples * slots);
  parallel_chunks(samples, [&](std::int64_t begin, std::int64_t end) {
    std::vector<int> winners;
    for (std::int64_t s = begin; s < end; ++s) {
      winners_of(menu, profile_at(spec, seed, s, m, n), winners);
      std::copy(winners.begin(), winners.end(), winner_table.begin() + s * slots);
    }
  });

  std::vector<std::int64_t> appearance(count, 0);
  std::vector<int> missing(samples, 0);  // winners of the sample not yet selected
  {
    std::vector<char> seen(count);
    for (std::int64_t s = 0; s < samples; ++s) {
      std::fill(seen.begin(), seen.end(), 0);
      for (int slot = 0; slot < slots; ++slot) {
        const int k = winner_table[s * slots + slot];
        if (!seen[k]) {
          seen[k] = 1;
          ++appearance[k];
          if (k != 0) ++missing[s];  // option 0 is always selected
        }
      }
    }
  }

  std::int64_t covered = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    if (missing[s] == 0) ++covered;
  }

  std::vector<int> order;
  for (int k = 1; k < count; ++k) {
    if (appearance[k] > 0) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return appearance[a] != appearance[b] ? appearance[a] > appearance[b] : a < b;
  });

  // Inverted index: which samples mention option k.
  std::vector<std::vector<std::int64_t>> mentions(count);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int slot = 0; slot < slots; ++slot) {
      const int k = winner_table[s * slots + slot];
      if (k != 0) mentions[k].push_back(s);
    }
  }

  const int cap = reduction_cap(count);
  const double target = coverage_target(menu, epsilon);
  std::vector<int> selected = {0};
  std::vector<char> in_set(count, 0);
  in_set[0] = 1;
  double frequency = static_cast<double>(covered) / samples;
  for (int k : order) {
    if (frequency >= target || static_cast<int>(selected.size()) >= cap) break;
    selected.push_back(k);
    in_set[k] = 1;
    std::int64_t previous = -1;
    for (std::int64_t s : mentions[k]) {
      if (s == previous) continue;  // duplicate slots within one sample
      previous = s;
      if (--missing[s] == 0) ++covered;
    }
    frequency = static_cast<double>(covered) / samples;
  }

  ReducibilityReport report;
  std::sort(selected.begin(), selected.end());
  report.selected = ReductionSet{std::move(selected)};
  report.event_frequency = frequency;
  report.epsilon_hat = 1.0 - frequency;
  report.samples = samples;
  return report;
}

}  // namespace

McResult mc_revenue(const RochetMenu& menu, const DensitySpec& spec, std::int64_t samples,
                    std::uint64_t seed, std::optional<double> softmax_temperature) {
  return mc_revenue_impl(menu, spec, samples, seed, softmax_temperature);
}

McResult mc_revenue(const AmaMenu& menu, const DensitySpec& spec, std::int64_t samples,
                    std::uint64_t seed, std::optional<double> softmax_temperature) {
  return mc_revenue_impl(menu, spec, samples, seed, softmax_temperature);
}

PathReport path_audit(const RochetPath& path, const DensitySpec& spec, std::int64_t samples,
                      int t_points, double epsilon, std::uint64_t seed) {
  return path_audit_impl(path, spec, samples, t_points, epsilon, seed);
}

PathReport path_audit(const AmaPath& path, const DensitySpec& spec, std::int64_t samples,
                      int t_points, double epsilon, std::uint64_t seed) {
  return path_audit_impl(path, spec, samples, t_points, epsilon, seed);
}

ReducibilityReport estimate_reducibility(const RochetMenu& menu, const DensitySpec& spec,
                                         std::int64_t samples, double epsilon,
                                         std::uint64_t seed) {
  return estimate_reducibility_impl(menu, spec, samples, epsilon, seed);
}

ReducibilityReport estimate_reducibility(const AmaMenu& menu, const DensitySpec& spec,
                                         std::int64_t samples, double epsilon,
                                         std::uint64_t seed) {
  return estimate_reducibility_impl(menu, spec, samples, epsilon, seed);
}

double rochet_softmax_gap_bound(int option_count, int items, double temperature,
                                double density_bound) {
  if (temperature < 1.0) throw PreconditionError("gap bound: temperature must be >= 1");
  if (density_bound <= 0.0) throw SpecError("gap bound: density bound must be positive");
  const double count = option_count;
  const double n = items;
  const double y = temperature;
  const double x = density_bound;
  return count / y * ((n * x + 1.0 + x / y) * std::log(y / x) + x);
}

double ama_softmax_gap_bound(int option_count, int buyers, int items, double temperature,
                             double density_bound) {
  if (temperature < 1.0) throw PreconditionError("gap bound: temperature must be >= 1");
  if (density_bound <= 0.0) throw SpecError("gap bound: density bound must be positive");
  const double count = option_count;
  const double m = buyers;
  const double n = items;
  const double y = temperature;
  const double x = density_bound;
  return m * count / (std::numbers::e * y) +
         n * m * x * count / y * (1.0 + std::log((m * y) / (m * x)));
}

namespace {

template <class M>
GapReport gap_report_impl(const M& menu, const DensitySpec& spec, double temperature,
                          std::int64_t samples, std::uint64_t seed, double bound) {
  if (samples < 1) throw PreconditionError("softmax_gap_report: need at least one sample");
  validate_spec(spec);
  const int m = menu_buyers(menu);
  const int n = menu_items(menu);
  const SoftmaxConfig cfg{temperature};
  std::vector<double> diffs(samples);
  parallel_chunks(samples, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t s = begin; s < end; ++s) {
      const Profile profile = profile_at(spec, seed, s, m, n);
      diffs[s] = realized_revenue(menu, profile) - smoothed_revenue(menu, profile, cfg);
    }
  });
  const MeanStderr stats = reduce_stats(diffs);
  GapReport report;
  report.bound = bound;
  report.empirical_gap = std::abs(stats.mean);
  report.gap_stderr = stats.stderr_value;
  report.samples = samples;
  return report;
}

}  // namespace

GapReport softmax_gap_report(const RochetMenu& menu, const DensitySpec& spec, double temperature,
                             std::int64_t samples, std::uint64_t seed) {
  const double bound = rochet_softmax_gap_bound(menu.option_count(), menu.items(), temperature,
                                                density_sup(spec, menu.items()));
  return gap_report_impl(menu, spec, temperature, samples, seed, bound);
}

GapReport softmax_gap_report(const AmaMenu& menu, const DensitySpec& spec, double temperature,
                             std::int64_t samples, std::uint64_t seed) {
  const double bound =
      ama_softmax_gap_bound(menu.option_count(), menu.num_buyers, menu.num_items, temperature,
                            density_sup(spec, menu.num_items));
  return gap_report_impl(menu, spec, temperature, samples, seed, bound);
}

}  // namespace menuconnect

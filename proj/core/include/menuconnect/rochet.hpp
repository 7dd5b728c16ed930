#pragma once

#include "menuconnect/menu.hpp"
#include "menuconnect/softmax.hpp"

namespace menuconnect {

// Gradient of the smoothed revenue with respect to the regular options.
// The default option is fixed, so index k of these arrays refers to menu
// option k+1.
struct RochetGradient {
  std::vector<std::vector<double>> allocation;  // [K][n]
  std::vector<double> price;                    // [K]
};

struct RochetGradientResult {
  double value = 0.0;
  RochetGradient grad;
};

double option_utility(const RochetMenu& menu, const Valuation& v, int k);

// Index of the utility-maximizing option. Ties go to the higher price and
// then to the lower index, so selection is a total order.
int active_option(const RochetMenu& menu, const Valuation& v);

// Price paid by a buyer with valuation v: the active option's price.
double revenue_sample(const RochetMenu& menu, const Valuation& v);

// Softmax weights over all K+1 options (default included with utility 0).
std::vector<double> softmax_weights(const RochetMenu& menu, const Valuation& v,
                                    const SoftmaxConfig& cfg);

// Smoothed revenue: sum_k price_k * weight_k.
double softmax_revenue_sample(const RochetMenu& menu, const Valuation& v,
                              const SoftmaxConfig& cfg);

// Smoothed revenue together with its analytic gradient.
RochetGradientResult softmax_revenue_gradient(const RochetMenu& menu, const Valuation& v,
                                              const SoftmaxConfig& cfg);

}  // namespace menuconnect

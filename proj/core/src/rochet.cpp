#include "menuconnect/rochet.hpp"

#include <cmath>

#include "menuconnect/softmax.hpp"

namespace menuconnect {

std::vector<double> stable_softmax(const std::vector<double>& scores, double temperature) {
  std::vector<double> w(scores.size());
  double top = scores[0];
  for (double s : scores) top = std::max(top, s);
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    w[k] = std::exp(temperature * (scores[k] - top));
    total += w[k];
  }
  for (double& x : w) x /= total;
  return w;
}

double softmax_average(const std::vector<double>& scores, double temperature) {
  const std::vector<double> w = stable_softmax(scores, temperature);
  double avg = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) avg += scores[k] * w[k];
  return avg;
}

double option_utility(const RochetMenu& menu, const Valuation& v, int k) {
  const RochetOption& opt = menu.options[k];
  double u = -opt.price;
  for (std::size_t j = 0; j < opt.allocation.size(); ++j) {
    u += v.values[j] * opt.allocation[j];
  }
  return u;
}

int active_option(const RochetMenu& menu, const Valuation& v) {
  int best = 0;
  double best_u = option_utility(menu, v, 0);
  double best_p = menu.options[0].price;
  for (int k = 1; k < menu.option_count(); ++k) {
    const double u = option_utility(menu, v, k);
    const double p = menu.options[k].price;
    if (u > best_u || (u == best_u && p > best_p)) {
      best = k;
      best_u = u;
      best_p = p;
    }
  }
  return best;
}

double revenue_sample(const RochetMenu& menu, const Valuation& v) {
  return menu.options[active_option(menu, v)].price;
}

std::vector<double> softmax_weights(const RochetMenu& menu, const Valuation& v,
                                    const SoftmaxConfig& cfg) {
  std::vector<double> utilities(menu.option_count());
  for (int k = 0; k < menu.option_count(); ++k) utilities[k] = option_utility(menu, v, k);
  return stable_softmax(utilities, cfg.temperature);
}

double softmax_revenue_sample(const RochetMenu& menu, const Valuation& v,
                              const SoftmaxConfig& cfg) {
  const std::vector<double> w = softmax_weights(menu, v, cfg);
  double rev = 0.0;
  for (int k = 1; k < menu.option_count(); ++k) rev += menu.options[k].price * w[k];
  return rev;
}

RochetGradientResult softmax_revenue_gradient(const RochetMenu& menu, const Valuation& v,
                                              const SoftmaxConfig& cfg) {
  const int regular = menu.regular_count();
  const int items = menu.items();
  const double temperature = cfg.temperature;

  const std::vector<double> w = softmax_weights(menu, v, cfg);
  double value = 0.0;
  for (int k = 1; k < menu.option_count(); ++k) value += menu.options[k].price * w[k];

  RochetGradientResult out;
  out.value = value;
  out.grad.allocation.assign(regular, std::vector<double>(items, 0.0));
  out.grad.price.assign(regular, 0.0);

  // d value / d u_k = Y * w_k * (p_k - value); u_k is linear in the option
  // parameters, and p_k also enters the weighted sum directly.
  for (int k = 1; k < menu.option_count(); ++k) {
    const double coeff = temperature * w[k] * (menu.options[k].price - value);
    out.grad.price[k - 1] = w[k] - coeff;
    for (int j = 0; j < items; ++j) {
      out.grad.allocation[k - 1][j] = coeff * v.values[j];
    }
  }
  return out;
}

}  // namespace menuconnect

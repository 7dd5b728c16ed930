#include "menuconnect/ama.hpp"

#include <cmath>

namespace menuconnect {

namespace {

// sum over buyers other than `exclude` of v_i . x_i^(k), without the boost.
double welfare_excluding(const AmaMenu& menu, const Profile& profile, int option, int exclude) {
  const AmaOption& opt = menu.options[option];
  double w = 0.0;
  for (int i = 0; i < menu.num_buyers; ++i) {
    if (i == exclude) continue;
    const std::vector<double>& row = opt.allocation[i];
    const std::vector<double>& values = profile.buyers[i].values;
    for (int j = 0; j < menu.num_items; ++j) w += values[j] * row[j];
  }
  return w;
}

}  // namespace

double boosted_welfare(const AmaMenu& menu, const Profile& profile, int option,
                       std::optional<int> exclude) {
  return welfare_excluding(menu, profile, option, exclude.value_or(-1)) +
         menu.options[option].boost;
}

int winner(const AmaMenu& menu, const Profile& profile, std::optional<int> exclude) {
  const int skip = exclude.value_or(-1);
  int best = 0;
  double best_bw = menu.options[0].boost;  // option 0 has zero welfare
  double best_boost = menu.options[0].boost;
  for (int k = 0; k < menu.option_count(); ++k) {
    const double bw = welfare_excluding(menu, profile, k, skip) + menu.options[k].boost;
    const double boost = menu.options[k].boost;
    if (k == 0 || bw > best_bw || (bw == best_bw && boost < best_boost)) {
      best = k;
      best_bw = bw;
      best_boost = boost;
    }
  }
  return best;
}

AmaOutcome vcg_prices(const AmaMenu& menu, const Profile& profile) {
  const int m = menu.num_buyers;
  AmaOutcome out;
  out.winner = winner(menu, profile);
  out.winners_without.resize(m);
  out.prices.resize(m);

  double total = 0.0;
  double externality_terms = 0.0;
  for (int i = 0; i < m; ++i) {
    const int ki = winner(menu, profile, i);
    out.winners_without[i] = ki;
    const double without_i_at_ki =
        welfare_excluding(menu, profile, ki, i) + menu.options[ki].boost;
    const double without_i_at_winner =
        welfare_excluding(menu, profile, out.winner, i) + menu.options[out.winner].boost;
    out.prices[i] = without_i_at_ki - without_i_at_winner;
    total += out.prices[i];
    externality_terms += without_i_at_ki;
  }

  // Closed-form route: subtract (m-1) times the winning boosted welfare and
  // the winning boost once.
  const double winner_bw =
      welfare_excluding(menu, profile, out.winner, -1) + menu.options[out.winner].boost;
  const double closed_form =
      externality_terms - (m - 1) * winner_bw - menu.options[out.winner].boost;
  if (std::abs(total - closed_form) > 1e-9) {
    throw InvariantError("vcg_prices: price sum and closed-form total disagree by " +
                         std::to_string(total - closed_form));
  }
  out.total_payment = total;
  return out;
}

double total_payment_sample(const AmaMenu& menu, const Profile& profile) {
  return vcg_prices(menu, profile).total_payment;
}

namespace {

struct SoftmaxState {
  // full[k]: boosted welfare of option k; weights_full = softmax(full).
  std::vector<double> full;
  std::vector<double> weights_full;
  // without[i][k]: boosted welfare with buyer i omitted, and its softmax.
  std::vector<std::vector<double>> without;
  std::vector<std::vector<double>> weights_without;
};

SoftmaxState make_state(const AmaMenu& menu, const Profile& profile, double temperature) {
  const int m = menu.num_buyers;
  const int count = menu.option_count();
  SoftmaxState st;
  st.full.resize(count);
  st.without.assign(m, std::vector<double>(count));
  for (int k = 0; k < count; ++k) {
    st.full[k] = welfare_excluding(menu, profile, k, -1) + menu.options[k].boost;
    for (int i = 0; i < m; ++i) {
      st.without[i][k] = welfare_excluding(menu, profile, k, i) + menu.options[k].boost;
    }
  }
  st.weights_full = stable_softmax(st.full, temperature);
  st.weights_without.resize(m);
  for (int i = 0; i < m; ++i) {
    st.weights_without[i] = stable_softmax(st.without[i], temperature);
  }
  return st;
}

}  // namespace

double softmax_expected_payment(const AmaMenu& menu, const Profile& profile,
                                const SoftmaxConfig& cfg) {
  const SoftmaxState st = make_state(menu, profile, cfg.temperature);
  const int m = menu.num_buyers;
  const int count = menu.option_count();
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    double expected_without = 0.0;  // E over the leave-one-out selection
    double expected_cross = 0.0;    // E over the full-profile selection
    for (int k = 0; k < count; ++k) {
      expected_without += st.weights_without[i][k] * st.without[i][k];
      expected_cross += st.weights_full[k] * st.without[i][k];
    }
    total += expected_without - expected_cross;
  }
  return total;
}

AmaGradientResult softmax_payment_gradient(const AmaMenu& menu, const Profile& profile,
                                           const SoftmaxConfig& cfg) {
  const SoftmaxState st = make_state(menu, profile, cfg.temperature);
  const int m = menu.num_buyers;
  const int n = menu.num_items;
  const int count = menu.option_count();
  const double temperature = cfg.temperature;

  AmaGradientResult out;
  out.grad.allocation.assign(count - 1,
                             std::vector<std::vector<double>>(m, std::vector<double>(n, 0.0)));
  out.grad.boost.assign(count - 1, 0.0);

  for (int i = 0; i < m; ++i) {
    double expected_without = 0.0;
    double expected_cross = 0.0;
    for (int k = 0; k < count; ++k) {
      expected_without += st.weights_without[i][k] * st.without[i][k];
      expected_cross += st.weights_full[k] * st.without[i][k];
    }
    out.value += expected_without - expected_cross;

    for (int k = 1; k < count; ++k) {
      // Both the score and the averaged quantity of the leave-one-out term
      // are the same linear function of option k's parameters.
      const double own = st.weights_without[i][k] *
                         (temperature * (st.without[i][k] - expected_without) + 1.0);
      // The cross term averages the leave-one-out welfare under the
      // full-profile softmax, whose score has its own parameter dependence.
      const double cross_score =
          st.weights_full[k] * temperature * (st.without[i][k] - expected_cross);
      const double cross_direct = st.weights_full[k];

      out.grad.boost[k - 1] += own - cross_score - cross_direct;
      for (int b = 0; b < m; ++b) {
        const std::vector<double>& values = profile.buyers[b].values;
        std::vector<double>& slot = out.grad.allocation[k - 1][b];
        const double through_without = (b == i) ? 0.0 : (own - cross_direct);
        for (int j = 0; j < n; ++j) {
          slot[j] += through_without * values[j] - cross_score * values[j];
        }
      }
    }
  }
  return out;
}

}  // namespace menuconnect

#pragma once

#include <optional>

#include "menuconnect/menu.hpp"
#include "menuconnect/softmax.hpp"

namespace menuconnect {

struct AmaOutcome {
  int winner = 0;
  std::vector<int> winners_without;  // winning option when buyer i is omitted
  std::vector<double> prices;        // Vickrey price per buyer
  double total_payment = 0.0;
};

// Gradient of the smoothed total payment; index k refers to menu option k+1.
struct AmaGradient {
  std::vector<std::vector<std::vector<double>>> allocation;  // [K][m][n]
  std::vector<double> boost;                                 // [K]
};

struct AmaGradientResult {
  double value = 0.0;
  AmaGradient grad;
};

// sum_i v_i . x_i^(k) + boost_k, optionally omitting one buyer.
double boosted_welfare(const AmaMenu& menu, const Profile& profile, int option,
                       std::optional<int> exclude = std::nullopt);

// Boosted-welfare maximizer. Ties are resolved toward the larger total
// payment, which at unit weights means the smaller boost, then the lower
// index.
int winner(const AmaMenu& menu, const Profile& profile,
           std::optional<int> exclude = std::nullopt);

// Vickrey prices: each buyer pays the externality they impose. The total is
// recomputed through the closed-form payment identity and both routes must
// agree to 1e-9.
AmaOutcome vcg_prices(const AmaMenu& menu, const Profile& profile);

double total_payment_sample(const AmaMenu& menu, const Profile& profile);

// Exact expectation of the total payment under softmax-distributed selection,
// computed as weighted sums over options (never by sampling the selection).
double softmax_expected_payment(const AmaMenu& menu, const Profile& profile,
                                const SoftmaxConfig& cfg);

AmaGradientResult softmax_payment_gradient(const AmaMenu& menu, const Profile& profile,
                                           const SoftmaxConfig& cfg);

}  // namespace menuconnect

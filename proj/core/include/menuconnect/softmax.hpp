#pragma once

#include <vector>

namespace menuconnect {

// Smoothing temperature for the softmax relaxation of the argmax selection.
// The default option always participates in the softmax (with score 0).
struct SoftmaxConfig {
  double temperature = 100.0;  // Y >= 1
};

// exp(Y*s_k) / sum_k' exp(Y*s_k'), computed with max-subtraction so it stays
// finite for temperatures up to 1e6 and scores of a few units.
std::vector<double> stable_softmax(const std::vector<double>& scores, double temperature);

// sum_k s_k * w_k for w = stable_softmax(s, Y).
double softmax_average(const std::vector<double>& scores, double temperature);

}  // namespace menuconnect

#pragma once

#include "ddforge/simulator.hpp"

#include <string>
#include <vector>

namespace ddforge {

enum class UtilityKind { SuccessProbability, OneNorm, MrbMeanSuccess };

struct UtilityValue {
  double value = 0.0;
  UtilityKind kind = UtilityKind::SuccessProbability;
};

UtilityValue success_probability(const CountsDistribution& counts, const std::string& target);

// 1 - (1/2) sum_k |p(k) - phat(k)| over the union of supports.
UtilityValue one_norm_utility(const CountsDistribution& counts, const ProbabilityMap& ideal);
double one_norm_similarity(const ProbabilityMap& a, const ProbabilityMap& b);
ProbabilityMap empirical(const CountsDistribution& counts);

struct Polarization {
  double S = 0.0;
  double stderr = 0.0;
  std::vector<double> hamming;  // h_k, k = 0..N
};

// Effective polarization from the Hamming-distance histogram to target.
Polarization polarization_stats(const CountsDistribution& counts, const std::string& target, int N);
double polarization(const CountsDistribution& counts, const std::string& target, int N);
double polarization_from_histogram(const std::vector<double>& h, int N);

struct DecayPoint {
  int depth = 0;
  double S = 0.0;
  double uncertainty = 0.0;
};

struct EplFit {
  double A = 0.0;
  double p = 0.0;
  double epl = 0.0;
};

double epl_from_p(double p, int N);

// Least-squares fit of S = A p^D: 1e-3 grid over (0, 1] with the optimal A
// per p, then golden-section refinement to 1e-6. Throws FitFailure when the
// smallest-depth signal is within two standard errors of zero or A <= 0.
EplFit fit_epl(const std::vector<DecayPoint>& points, int N);

UtilityValue mrb_training_utility(const std::vector<double>& success_probs);

}  // namespace ddforge

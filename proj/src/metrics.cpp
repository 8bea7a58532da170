#include "ddforge/metrics.hpp"

#include "ddforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ddforge {

UtilityValue success_probability(const CountsDistribution& counts, const std::string& target) {
  if (counts.shots < 1) throw InvalidArgument("counts have no shots");
  return {counts.count(target) / static_cast<double>(counts.shots), UtilityKind::SuccessProbability};
}

ProbabilityMap empirical(const CountsDistribution& counts) {
  ProbabilityMap p;
  for (const auto& [k, c] : counts.counts) p[k] = c / static_cast<double>(counts.shots);
  return p;
}

double one_norm_similarity(const ProbabilityMap& a, const ProbabilityMap& b) {
  double dist = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    dist += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) dist += std::abs(v);
  return 1.0 - 0.5 * dist;
}

UtilityValue one_norm_utility(const CountsDistribution& counts, const ProbabilityMap& ideal) {
  double total = 0.0;
  for (const auto& [k, v] : ideal) total += v;
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("ideal distribution does not sum to 1");
  return {std::clamp(one_norm_similarity(empirical(counts), ideal), 0.0, 1.0), UtilityKind::OneNorm};
}

double polarization_from_histogram(const std::vector<double>& h, int N) {
  const double four_n = std::pow(4.0, N);
  double s = 0.0, w = 1.0;
  for (int k = 0; k <= N && k < static_cast<int>(h.size()); ++k, w *= -0.5) s += w * h[k];
  return four_n / (four_n - 1.0) * s - 1.0 / (four_n - 1.0);
}

Polarization polarization_stats(const CountsDistribution& counts, const std::string& target, int N) {
  if (static_cast<int>(target.size()) != N) throw InvalidArgument("target length does not match N");
  if (counts.shots < 1) throw InvalidArgument("counts have no shots");
  Polarization out;
  out.hamming.assign(N + 1, 0.0);
  for (const auto& [bits, c] : counts.counts) {
    if (static_cast<int>(bits.size()) != N) throw InvalidArgument("bitstring length does not match N");
    int k = 0;
    for (int i = 0; i < N; ++i) k += bits[i] != target[i];
    out.hamming[k] += c;
  }
  for (auto& h : out.hamming) h /= counts.shots;
  out.S = polarization_from_histogram(out.hamming, N);
  // per-shot weight (-1/2)^k; S is affine in its mean
  double mean = 0.0, sq = 0.0, w = 1.0;
  for (int k = 0; k <= N; ++k, w *= -0.5) {
    mean += w * out.hamming[k];
    sq += w * w * out.hamming[k];
  }
  const double var = std::max(0.0, sq - mean * mean);
  const double four_n = std::pow(4.0, N);
  out.stderr = four_n / (four_n - 1.0) * std::sqrt(var / counts.shots);
  return out;
}

double polarization(const CountsDistribution& counts, const std::string& target, int N) {
  return polarization_stats(counts, target, N).S;
}

double epl_from_p(double p, int N) {
  const double two_n = std::pow(2.0, N);
  return (two_n - 1.0) / two_n * (1.0 - p);
}

namespace {

struct Fit {
  double A, residual;
};

Fit fit_for(const std::vector<DecayPoint>& pts, double p) {
  double num = 0.0, den = 0.0;
  for (const auto& x : pts) {
    const double pd = std::pow(p, x.depth);
    num += x.S * pd;
    den += pd * pd;
  }
  const double A = den > 0 ? num / den : 0.0;
  double r = 0.0;
  for (const auto& x : pts) {
    const double e = x.S - A * std::pow(p, x.depth);
    r += e * e;
  }
  return {A, r};
}

}  // namespace

EplFit fit_epl(const std::vector<DecayPoint>& points, int N) {
  if (points.size() < 3) throw InvalidArgument("fit_epl needs at least 3 points");
  std::vector<int> depths;
  for (const auto& p : points) depths.push_back(p.depth);
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  if (depths.size() < 2) throw InvalidArgument("fit_epl needs at least 2 distinct depths");

  // Signal check at the smallest depth.
  std::vector<const DecayPoint*> first;
  for (const auto& p : points)
    if (p.depth == depths.front()) first.push_back(&p);
  double mean = 0.0, u2 = 0.0;
  for (auto* p : first) {
    mean += p->S;
    u2 += p->uncertainty * p->uncertainty;
  }
  const double m = static_cast<double>(first.size());
  mean /= m;
  double se = std::sqrt(u2) / m;
  if (first.size() > 1) {
    double var = 0.0;
    for (auto* p : first) var += (p->S - mean) * (p->S - mean);
    se = std::max(se, std::sqrt(var / (m - 1) / m));
  }
  if (mean <= 2.0 * se) throw FitFailure("no signal: mean polarization at the smallest depth is within 2 standard errors of 0");

  double best_p = 1.0, best_r = fit_for(points, 1.0).residual;
  for (int i = 1; i <= 1000; ++i) {
    const double p = i * 1e-3;
    const double r = fit_for(points, p).residual;
    if (r < best_r) best_r = r, best_p = p;
  }
  double lo = std::max(1e-9, best_p - 1e-3), hi = std::min(1.0, best_p + 1e-3);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = fit_for(points, c).residual, fd = fit_for(points, d).residual;
  while (hi - lo > 1e-6) {
    if (fc < fd) {
      hi = d, d = c, fd = fc;
      c = hi - phi * (hi - lo);
      fc = fit_for(points, c).residual;
    } else {
      lo = c, c = d, fc = fd;
      d = lo + phi * (hi - lo);
      fd = fit_for(points, d).residual;
    }
  }
  double p = 0.5 * (lo + hi);
  if (fit_for(points, best_p).residual < fit_for(points, p).residual) p = best_p;
  if (!(p > 0.0 && p <= 1.0)) throw FitFailure("fitted decay rate outside (0, 1]");
  const double A = fit_for(points, p).A;
  if (A <= 0.0) throw FitFailure("fitted amplitude is not positive");
  return {A, p, epl_from_p(p, N)};
}

UtilityValue mrb_training_utility(const std::vector<double>& success_probs) {
  if (success_probs.empty()) throw InvalidArgument("need at least one success probability");
  const double s = std::accumulate(success_probs.begin(), success_probs.end(), 0.0);
  return {s / static_cast<double>(success_probs.size()), UtilityKind::MrbMeanSuccess};
}

}  // namespace ddforge

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

namespace ising_dephasing {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Maps the rule onto [a, b] and calls f(x, w) for every node.
  template <class F>
  void apply(double a, double b, F&& f) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < nodes.size(); ++i) f(mid + half * nodes[i], half * weights[i]);
  }

  template <class F>
  double integrate(double a, double b, F&& f) const {
    double sum = 0.0;
    apply(a, b, [&](double x, double w) { sum += w * f(x); });
    return sum;
  }
};

inline GaussLegendreRule make_gauss_legendre(int n) {
  // legendre_p_zeros returns the non-negative zeros in ascending order.
  const auto positive = boost::math::legendre_p_zeros<double>(n);
  GaussLegendreRule rule;
  rule.nodes.reserve(n);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it)
    if (*it != 0.0) rule.nodes.push_back(-*it);
  rule.nodes.insert(rule.nodes.end(), positive.begin(), positive.end());
  rule.weights.reserve(n);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

/// Cached rule; node computation is O(n^2) and rules are reused per time point.
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace ising_dephasing

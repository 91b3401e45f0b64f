#pragma once

#include <cstdint>
#include <vector>

#include "varattack/graph.hpp"
#include "varattack/rng.hpp"
#include "varattack/scm.hpp"

namespace helpers {

using varattack::Index;

// Number of labelled DAGs on n nodes by the alternating recurrence
//   a(n) = sum_{k=1..n} (-1)^{k+1} C(n,k) 2^{k(n-k)} a(n-k),  a(0) = 1.
// Independent of the enumeration code under test.
inline long long labelled_dag_count(int n) {
  std::vector<long long> a(static_cast<std::size_t>(n) + 1, 0);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    long long total = 0;
    long long binom = 1;  // C(m, k), built incrementally
    for (int k = 1; k <= m; ++k) {
      binom = binom * (m - k + 1) / k;
      const long long pow2 = 1LL << (k * (m - k));
      const long long term = binom * pow2 * a[static_cast<std::size_t>(m - k)];
      total += (k % 2 == 1) ? term : -term;
    }
    a[static_cast<std::size_t>(m)] = total;
  }
  return a[static_cast<std::size_t>(n)];
}

inline varattack::DataMatrix chain_data(Index d, Index n, std::uint64_t seed,
                                        double weight = 1.0, double sigma = 1.0) {
  return varattack::sample(
      varattack::make_uniform_scm(varattack::make_chain(d), weight, sigma), n, seed);
}

inline varattack::DataMatrix random_chain_data(Index d, Index n, std::uint64_t seed,
                                               double w_lo = 0.5, double w_hi = 2.0) {
  varattack::Rng rng(varattack::derive_seed(seed, 1));
  const auto scm =
      varattack::make_random_weight_scm(varattack::make_chain(d), w_lo, w_hi, 1.0, rng);
  return varattack::sample(scm, n, varattack::derive_seed(seed, 2));
}

// Independent-noise data with no dependence structure at all.
inline varattack::DataMatrix noise_data(Index d, Index n, std::uint64_t seed) {
  return varattack::sample(
      varattack::make_uniform_scm(varattack::make_empty_dag(d), 0.0, 1.0), n, seed);
}

}  // namespace helpers

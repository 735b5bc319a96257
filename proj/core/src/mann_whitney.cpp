#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "gramprof/error.hpp"
#include "gramprof/rng.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {
namespace {

// Mid-ranks (1-based) of the pooled values.
std::vector<double> mid_ranks(const std::vector<double>& pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

StatTestResult mann_whitney(std::span<const double> xs, std::span<const double> ys,
                            const MwuOptions& options) {
  if (xs.empty() || ys.empty()) {
    throw Error(ErrorCode::kEmptySample, "Mann-Whitney U needs two non-empty samples");
  }
  std::vector<double> pooled(xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  for (double v : pooled) {
    if (std::isnan(v)) throw Error(ErrorCode::kInvalidArgument, "Mann-Whitney U input is NaN");
  }
  const std::size_t n1 = xs.size();
  const std::size_t n = pooled.size();
  const std::vector<double> ranks = mid_ranks(pooled);

  const double base = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
  const double centre = static_cast<double>(n1) * static_cast<double>(n - n1) / 2.0;
  const double u = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n1), 0.0) - base;
  const double threshold = std::abs(u - centre) - 1e-9;

  bool exact = false;
  switch (options.mode) {
    case MwuMode::kAuto:
      exact = n <= kMaxExactPooled;
      break;
    case MwuMode::kExact:
      if (n > kMaxExactPooled) {
        throw Error(ErrorCode::kExactTooLarge,
                    "exact Mann-Whitney U supports at most " + std::to_string(kMaxExactPooled) +
                        " pooled values, got " + std::to_string(n));
      }
      exact = true;
      break;
    case MwuMode::kMonteCarlo:
      break;
  }

  StatTestResult out;
  out.statistic = u;
  if (exact) {
    std::size_t extreme = 0;
    std::size_t assignments = 0;
    const std::uint32_t limit = std::uint32_t{1} << n;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) r += ranks[i];
      }
      ++assignments;
      if (std::abs(r - base - centre) >= threshold) ++extreme;
    }
    out.p_value = static_cast<double>(extreme) / static_cast<double>(assignments);
    out.method = "mann-whitney-exact";
  } else {
    if (options.reps == 0) {
      throw Error(ErrorCode::kInvalidArgument, "Monte Carlo Mann-Whitney U needs reps > 0");
    }
    SplitMix64 rng(options.seed);
    std::vector<double> shuffled = ranks;
    std::size_t extreme = 0;
    for (std::size_t rep = 0; rep < options.reps; ++rep) {
      double r = 0.0;
      for (std::size_t i = 0; i < n1; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(shuffled[i], shuffled[j]);
        r += shuffled[i];
      }
      if (std::abs(r - base - centre) >= threshold) ++extreme;
    }
    out.p_value = static_cast<double>(extreme + 1) / static_cast<double>(options.reps + 1);
    out.method = "mann-whitney-monte-carlo";
  }
  return out;
}

}  // namespace gramprof

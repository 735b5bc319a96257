#include <algorithm>
#include <cmath>
#include <numeric>

#include "gramprof/error.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {

std::vector<AdjustedP> bh_fdr(std::span<const std::pair<std::string, double>> pvalues,
                              std::optional<std::size_t> m) {
  for (const auto& [key, p] : pvalues) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::kInvalidP, "p-value for '" + key + "' is outside [0, 1]");
    }
  }
  const std::size_t listed = pvalues.size();
  const std::size_t tests = m.value_or(listed);
  if (tests < listed) {
    throw Error(ErrorCode::kInvalidArgument, "m = " + std::to_string(tests) +
                                                 " is smaller than the " + std::to_string(listed) +
                                                 " listed p-values");
  }

  std::vector<AdjustedP> out;
  out.reserve(listed);
  for (const auto& [key, p] : pvalues) out.push_back(AdjustedP{key, p, p});
  if (listed == 0) return out;

  std::vector<std::size_t> order(listed);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pvalues[i].second < pvalues[j].second;
  });
  double running = 1.0;
  for (std::size_t rank = listed; rank > 0; --rank) {
    const std::size_t i = order[rank - 1];
    const double scaled = static_cast<double>(tests) * pvalues[i].second / static_cast<double>(rank);
    running = std::min(running, scaled);
    // m p / rank >= p exactly; the max only undoes rounding
    out[i].p_adjusted = std::max(running, pvalues[i].second);
  }
  return out;
}

}  // namespace gramprof

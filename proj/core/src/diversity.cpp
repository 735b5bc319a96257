#include <cmath>

#include "gramprof/error.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {
namespace {

void require_occurrences(const FrequencyProfile& p) {
  if (p.total == 0) {
    throw Error(ErrorCode::kEmptyProfile, "profile '" + p.corpus_id + "' has no occurrences");
  }
}

}  // namespace

double shannon_from_counts(std::span<const std::uint64_t> counts) noexcept {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  const double t = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / t;
    h -= p * std::log(p);
  }
  return h;
}

double gini_simpson_from_counts(std::span<const std::uint64_t> counts) noexcept {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  const double t = static_cast<double>(total);
  double sum_sq = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / t;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

double shannon(const FrequencyProfile& p) {
  require_occurrences(p);
  const double t = static_cast<double>(p.total);
  double h = 0.0;
  for (const auto& [id, c] : p.counts) {
    const double q = static_cast<double>(c) / t;
    h -= q * std::log(q);
  }
  return h;
}

double gini_simpson(const FrequencyProfile& p) {
  require_occurrences(p);
  const double t = static_cast<double>(p.total);
  double sum_sq = 0.0;
  for (const auto& [id, c] : p.counts) {
    const double q = static_cast<double>(c) / t;
    sum_sq += q * q;
  }
  return 1.0 - sum_sq;
}

DiversityScore diversity(const FrequencyProfile& p) {
  return DiversityScore{shannon(p), gini_simpson(p)};
}

}  // namespace gramprof

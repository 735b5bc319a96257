#include <algorithm>
#include <cmath>

#include "gramprof/error.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {

AlignedVectors align(const FrequencyProfile& a, const FrequencyProfile& b) {
  if (a.category != b.category) {
    throw Error(ErrorCode::kCategoryMismatch,
                "cannot align '" + a.corpus_id + "' and '" + b.corpus_id + "'");
  }
  if (a.total == 0 || b.total == 0) {
    throw Error(ErrorCode::kEmptyProfile, "cannot align an empty profile");
  }
  AlignedVectors out;
  const double ta = static_cast<double>(a.total);
  const double tb = static_cast<double>(b.total);
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() || ib != b.counts.end()) {
    if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
      out.identifiers.push_back(ia->first);
      out.x.push_back(static_cast<double>(ia->second) / ta);
      out.y.push_back(0.0);
      ++ia;
    } else if (ia == a.counts.end() || ib->first < ia->first) {
      out.identifiers.push_back(ib->first);
      out.x.push_back(0.0);
      out.y.push_back(static_cast<double>(ib->second) / tb);
      ++ib;
    } else {
      out.identifiers.push_back(ia->first);
      out.x.push_back(static_cast<double>(ia->second) / ta);
      out.y.push_back(static_cast<double>(ib->second) / tb);
      ++ia;
      ++ib;
    }
  }
  return out;
}

double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of vectors with different lengths");
  }
  double dot = 0.0;
  double nx = 0.0;
  double ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(nx) * std::sqrt(ny)), -1.0, 1.0);
}

double cosine(const FrequencyProfile& a, const FrequencyProfile& b) {
  if (a.category == b.category && (a.total == 0 || b.total == 0)) {
    throw Error(ErrorCode::kZeroVector, "cosine of an empty profile");
  }
  const AlignedVectors v = align(a, b);
  return cosine(v.x, v.y);
}

}  // namespace gramprof

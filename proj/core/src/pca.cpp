#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gramprof/error.hpp"
#include "gramprof/stats.hpp"

namespace gramprof {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw Error(ErrorCode::kInvalidArgument, "matrix is not n x n");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  const auto at = [n](std::vector<double>& m, std::size_t r, std::size_t c) -> double& {
    return m[r * n + c];
  };

  double scale = 0.0;
  for (double x : a) scale += x * x;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
    }
    if (off <= 1e-30 * scale || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (apq == 0.0) continue;
        const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(a, k, p);
          const double akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(a, p, k);
          const double aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        at(a, p, q) = 0.0;
        at(a, q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = at(v, k, p);
          const double vkq = at(v, k, q);
          at(v, k, p) = c * vkp - s * vkq;
          at(v, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    out.values[col] = a[order[col] * n + order[col]];
    for (std::size_t row = 0; row < n; ++row) out.vectors[row * n + col] = v[row * n + order[col]];
  }
  return out;
}

Pca2Result pca2(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n < 3) throw Error(ErrorCode::kTooFewProfiles, "PCA needs at least 3 rows");
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw Error(ErrorCode::kInvalidArgument, "PCA rows differ in length");
  }

  std::vector<double> centred(n * d);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += rows[i][j];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centred[i * d + j] = rows[i][j] - mean;
  }

  std::vector<double> gram(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += centred[i * d + j] * centred[k * d + j];
      gram[i * n + k] = s;
      gram[k * n + i] = s;
    }
  }
  const SymmetricEigen eig = jacobi_eigen(std::move(gram), n);

  Pca2Result out;
  out.coordinates.assign(n, {0.0, 0.0});
  const double top = std::max(eig.values[0], 0.0);
  const double tol = std::max(top * 1e-12, 1e-300);
  for (int comp = 0; comp < 2; ++comp) {
    auto& axis = out.axes[comp];
    axis.assign(d, 0.0);
    const double lambda = eig.values[comp];
    if (!(lambda > tol)) {
      out.degenerate = true;
      continue;
    }
    out.explained_variance[comp] = lambda / static_cast<double>(n - 1);
    const double root = std::sqrt(lambda);
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += centred[i * d + j] * eig.vectors[i * n + comp];
      axis[j] = s / root;
    }
    double biggest = 0.0;
    for (double x : axis) biggest = std::max(biggest, std::abs(x));
    double sign = 1.0;
    for (double x : axis) {
      if (std::abs(x) > 1e-9 * biggest) {
        sign = x < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    if (sign < 0.0) {
      for (double& x : axis) x = -x;
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.coordinates[i][comp] = sign * root * eig.vectors[i * n + comp];
    }
  }
  return out;
}

Pca2Result pca2(std::span<const FrequencyProfile> profiles) {
  if (profiles.size() < 3) throw Error(ErrorCode::kTooFewProfiles, "PCA needs at least 3 profiles");
  std::set<std::string> ids;
  for (const auto& p : profiles) {
    if (p.category != profiles.front().category) {
      throw Error(ErrorCode::kCategoryMismatch, "PCA over profiles of different categories");
    }
    if (p.total == 0) {
      throw Error(ErrorCode::kEmptyProfile, "profile '" + p.corpus_id + "' is empty");
    }
    for (const auto& [id, c] : p.counts) ids.insert(id);
  }
  std::vector<std::string> columns(ids.begin(), ids.end());
  std::vector<std::vector<double>> rows;
  rows.reserve(profiles.size());
  for (const auto& p : profiles) {
    std::vector<double> row;
    row.reserve(columns.size());
    for (const auto& id : columns) row.push_back(p.rel_freq(id));
    rows.push_back(std::move(row));
  }
  Pca2Result out = pca2(rows);
  out.identifiers = std::move(columns);
  return out;
}

}  // namespace gramprof

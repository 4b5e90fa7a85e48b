#include "gperiods/point_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gp {

PointGrid::PointGrid(std::span<const std::complex<double>> points, double cell_size)
    : cell_(cell_size), points_(points.begin(), points.end()) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw std::invalid_argument("PointGrid: bad cell size");
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) throw std::length_error("PointGrid: too many points");

  std::vector<Key> point_keys(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) point_keys[i] = key_of(points_[i]);

  members_.resize(points_.size());
  std::iota(members_.begin(), members_.end(), 0U);
  std::stable_sort(members_.begin(), members_.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return point_keys[a] < point_keys[b]; });

  for (std::size_t i = 0; i < members_.size(); ++i) {
    const Key& k = point_keys[members_[i]];
    if (keys_.empty() || keys_.back() != k) {
      keys_.push_back(k);
      offsets_.push_back(static_cast<std::uint32_t>(i));
    }
  }
  offsets_.push_back(static_cast<std::uint32_t>(members_.size()));

  if (!keys_.empty()) {
    min_ix_ = keys_.front().first;
    max_ix_ = keys_.back().first;
    min_iy_ = std::numeric_limits<std::int64_t>::max();
    max_iy_ = std::numeric_limits<std::int64_t>::min();
    for (const Key& k : keys_) {
      min_iy_ = std::min(min_iy_, k.second);
      max_iy_ = std::max(max_iy_, k.second);
    }
  }
}

PointGrid::Key PointGrid::key_of(std::complex<double> p) const {
  return {static_cast<std::int64_t>(std::floor(p.real() / cell_)),
          static_cast<std::int64_t>(std::floor(p.imag() / cell_))};
}

std::span<const std::uint32_t> PointGrid::cell(std::int64_t ix, std::int64_t iy) const {
  const Key k{ix, iy};
  auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it == keys_.end() || *it != k) return {};
  const auto pos = static_cast<std::size_t>(it - keys_.begin());
  return {members_.data() + offsets_[pos], offsets_[pos + 1] - offsets_[pos]};
}

bool PointGrid::any_within(std::complex<double> q, double radius) const {
  const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
  const auto [qx, qy] = key_of(q);
  for (std::int64_t ix = qx - reach; ix <= qx + reach; ++ix) {
    for (std::int64_t iy = qy - reach; iy <= qy + reach; ++iy) {
      for (std::uint32_t idx : cell(ix, iy)) {
        if (std::abs(points_[idx] - q) <= radius) return true;
      }
    }
  }
  return false;
}

std::optional<std::pair<std::size_t, double>> PointGrid::nearest(std::complex<double> q) const {
  if (points_.empty()) return std::nullopt;
  const auto [qx, qy] = key_of(q);

  // Ring r = cells at Chebyshev distance r from the query cell. Anything
  // outside ring r is at least r * cell away.
  const std::int64_t max_ring =
      std::max({std::abs(qx - min_ix_), std::abs(qx - max_ix_), std::abs(qy - min_iy_), std::abs(qy - max_iy_)});

  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  auto visit = [&](std::int64_t ix, std::int64_t iy) {
    for (std::uint32_t idx : cell(ix, iy)) {
      const double dist = std::abs(points_[idx] - q);
      if (dist < best_dist || (dist == best_dist && idx < best)) {
        best_dist = dist;
        best = idx;
      }
    }
  };

  for (std::int64_t r = 0; r <= max_ring; ++r) {
    if (best_dist <= static_cast<double>(r - 1) * cell_) break;
    if (r == 0) {
      visit(qx, qy);
      continue;
    }
    for (std::int64_t ix = qx - r; ix <= qx + r; ++ix) {
      visit(ix, qy - r);
      visit(ix, qy + r);
    }
    for (std::int64_t iy = qy - r + 1; iy <= qy + r - 1; ++iy) {
      visit(qx - r, iy);
      visit(qx + r, iy);
    }
  }
  return std::make_pair(best, best_dist);
}

}  // namespace gp

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gp {

/// Uniform grid hash over planar points. Cells are stored as a sorted key
/// array with CSR-style offsets, so lookups are a binary search.
class PointGrid {
 public:
  PointGrid(std::span<const std::complex<double>> points, double cell_size);

  double cell_size() const noexcept { return cell_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::complex<double> point(std::size_t i) const { return points_[i]; }

  /// Calls f(index, distance) for every point within radius of q.
  template <typename F>
  void for_each_within(std::complex<double> q, double radius, F&& f) const;

  bool any_within(std::complex<double> q, double radius) const;

  /// Index and distance of a nearest point; nullopt when the grid is empty.
  std::optional<std::pair<std::size_t, double>> nearest(std::complex<double> q) const;

 private:
  using Key = std::pair<std::int64_t, std::int64_t>;

  Key key_of(std::complex<double> p) const;
  /// Indices into points_ for one cell (empty span if the cell is vacant).
  std::span<const std::uint32_t> cell(std::int64_t ix, std::int64_t iy) const;

  double cell_;
  std::vector<std::complex<double>> points_;
  std::vector<Key> keys_;                 // sorted, unique
  std::vector<std::uint32_t> offsets_;    // keys_.size() + 1
  std::vector<std::uint32_t> members_;    // point indices grouped by cell
  std::int64_t min_ix_ = 0, max_ix_ = -1, min_iy_ = 0, max_iy_ = -1;
};

template <typename F>
void PointGrid::for_each_within(std::complex<double> q, double radius, F&& f) const {
  const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
  const auto [qx, qy] = key_of(q);
  for (std::int64_t ix = qx - reach; ix <= qx + reach; ++ix) {
    for (std::int64_t iy = qy - reach; iy <= qy + reach; ++iy) {
      for (std::uint32_t idx : cell(ix, iy)) {
        const double dist = std::abs(points_[idx] - q);
        if (dist <= radius) f(static_cast<std::size_t>(idx), dist);
      }
    }
  }
}

}  // namespace gp

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "egrr/core.hpp"

namespace egrr {

/// Uniform bucket grid over the unit square for fixed-radius queries.
///
/// Points are stored bucket-contiguous (counting sort), so a build is O(n)
/// with no per-cell allocation and a query touches a handful of short
/// contiguous ranges. Queries use a closed disk: distance == radius counts.
class NeighborIndex {
public:
  static constexpr int kMaxCellsPerSide = 64;

  /// Cell side is max(rho0, dr, 1/64), rounded up so an integral number of
  /// cells tiles the square; at most 64 x 64 cells.
  static int cells_per_side_for(double rho0, double dr) noexcept {
    const double side = std::max({rho0, dr, 1.0 / kMaxCellsPerSide});
    const int n = static_cast<int>(std::floor(1.0 / side));
    return std::clamp(n, 1, kMaxCellsPerSide);
  }

  explicit NeighborIndex(int cells_per_side = kMaxCellsPerSide)
      : cells_(std::clamp(cells_per_side, 1, kMaxCellsPerSide)),
        cell_side_(1.0 / cells_),
        cell_start_(static_cast<std::size_t>(cells_) * cells_ + 1, 0) {}

  int cells_per_side() const noexcept { return cells_; }
  double cell_side() const noexcept { return cell_side_; }
  std::size_t size() const noexcept { return ids_.size(); }

  /// Indexes `points[id]` for every id in `ids`.
  void build(std::span<const Point> points, std::span<const std::uint32_t> ids) {
    const std::size_t n_cells = static_cast<std::size_t>(cells_) * cells_;
    std::fill(cell_start_.begin(), cell_start_.end(), 0u);
    cell_of_.resize(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto c = cell_index(points[ids[k]]);
      cell_of_[k] = c;
      ++cell_start_[c + 1];
    }
    for (std::size_t c = 0; c < n_cells; ++c) cell_start_[c + 1] += cell_start_[c];

    fill_.assign(cell_start_.begin(), cell_start_.end() - 1);
    ids_.resize(ids.size());
    pts_.resize(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto slot = fill_[cell_of_[k]]++;
      ids_[slot] = ids[k];
      pts_[slot] = points[ids[k]];
    }
  }

  /// Indexes every point.
  void build(std::span<const Point> points) {
    all_.resize(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) all_[k] = static_cast<std::uint32_t>(k);
    build(points, all_);
  }

  /// Ids of all indexed points within `radius` of `p`, in storage order.
  std::vector<std::uint32_t> query(Point p, double radius) const {
    std::vector<std::uint32_t> out;
    visit(p, radius, [&](std::uint32_t id) {
      out.push_back(id);
      return false;
    });
    return out;
  }

  bool any_within(Point p, double radius) const {
    return visit(p, radius, [](std::uint32_t) { return true; });
  }

private:
  std::uint32_t cell_coord(double v) const noexcept {
    const int c = static_cast<int>(v * cells_);
    return static_cast<std::uint32_t>(std::clamp(c, 0, cells_ - 1));
  }

  std::uint32_t cell_index(Point p) const noexcept {
    return cell_coord(p.y) * static_cast<std::uint32_t>(cells_) + cell_coord(p.x);
  }

  // Calls `f(id)` for each point within `radius`; stops early and returns
  // true as soon as `f` returns true.
  template <typename F>
  bool visit(Point p, double radius, F&& f) const {
    if (ids_.empty() || radius < 0.0) return false;
    const int reach = std::max(1, static_cast<int>(std::ceil(radius / cell_side_)));
    const int cx = static_cast<int>(cell_coord(p.x));
    const int cy = static_cast<int>(cell_coord(p.y));
    const int x0 = std::max(0, cx - reach), x1 = std::min(cells_ - 1, cx + reach);
    const int y0 = std::max(0, cy - reach), y1 = std::min(cells_ - 1, cy + reach);
    const double r2 = radius * radius;
    for (int gy = y0; gy <= y1; ++gy) {
      const std::size_t row = static_cast<std::size_t>(gy) * cells_;
      // Cells of one row are contiguous in storage.
      const auto begin = cell_start_[row + x0];
      const auto end = cell_start_[row + x1 + 1];
      for (auto k = begin; k < end; ++k) {
        if (distance_squared(pts_[k], p) <= r2 && f(ids_[k])) return true;
      }
    }
    return false;
  }

  int cells_;
  double cell_side_;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> fill_;
  std::vector<std::uint32_t> cell_of_;
  std::vector<std::uint32_t> ids_;
  std::vector<Point> pts_;
  std::vector<std::uint32_t> all_;
};

}  // namespace egrr

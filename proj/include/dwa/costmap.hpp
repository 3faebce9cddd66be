#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwa/kinematics.hpp"

namespace dwa {

enum class CellState : std::uint8_t { Unknown, Free, Occupied, Inflated };

struct CellIndex {
  int col = 0;
  int row = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Raised when a query or sensor pose falls outside the grid.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline constexpr double kDefaultResolution = 0.05;
inline constexpr double kDefaultMaxClearance = 10.0;

/**
 * Strictly 2D occupancy lattice. Cell (0, 0) has its lower-left corner at
 * origin; columns grow with +x and rows with +y.
 *
 * Bounds are closed: a point on the far edge (x == origin.x + width) belongs
 * to the last column. This is what lets lidar returns off the world walls
 * land inside the map.
 */
class OccupancyGrid {
 public:
  OccupancyGrid(int width_cells, int height_cells, double resolution, Point2D origin = {},
                CellState fill = CellState::Unknown);

  /// Smallest grid with the given resolution that covers width x height meters.
  static OccupancyGrid covering(double width_m, double height_m, double resolution,
                                Point2D origin = {});

  int width_cells() const { return width_; }
  int height_cells() const { return height_; }
  double resolution() const { return resolution_; }
  Point2D origin() const { return origin_; }
  double width_m() const { return width_ * resolution_; }
  double height_m() const { return height_ * resolution_; }

  bool contains(const Point2D& p) const;
  bool contains(const CellIndex& c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }

  /// nullopt when p lies outside the grid.
  std::optional<CellIndex> world_to_cell(const Point2D& p) const;
  /// Floor-based index with no bounds handling; may lie outside the grid.
  CellIndex world_to_cell_unbounded(const Point2D& p) const;
  Point2D cell_center(const CellIndex& c) const;

  CellState at(const CellIndex& c) const { return cells_[offset(c)]; }
  void set(const CellIndex& c, CellState s) { cells_[offset(c)] = s; }

  std::span<const CellState> cells() const { return cells_; }
  std::size_t count(CellState s) const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  std::size_t offset(const CellIndex& c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }

  int width_;
  int height_;
  double resolution_;
  Point2D origin_;
  std::vector<CellState> cells_;
};

/// One sweep of range readings in the sensor frame.
struct LaserScan {
  std::vector<double> angles;
  std::vector<double> ranges;
  double max_range = 0.0;

  /// Throws std::invalid_argument when the beam arrays disagree or a range
  /// falls outside [0, max_range].
  void validate() const;
};

/// Cells visited by a ray from `from` to `to`, in traversal order, clipped to
/// the grid. The start cell comes first; the cell containing `to` (when it is
/// inside the grid) comes last.
std::vector<CellIndex> trace_ray(const OccupancyGrid& grid, const Point2D& from, const Point2D& to);

/// Carves free space along every beam and marks returns (range < max_range)
/// Occupied. Within one scan Occupied beats Free. Throws BoundsError when the
/// sensor lies outside the grid.
OccupancyGrid integrate_scan(OccupancyGrid grid, const Pose2D& sensor_pose, const LaserScan& scan);

/// Marks Free/Unknown cells whose centers are within inflation_radius of an
/// Occupied cell center as Inflated.
OccupancyGrid inflate(OccupancyGrid grid, double inflation_radius);

/**
 * Snapshot of a grid's Occupied cell centers laid out for the SIMD nearest
 * distance kernels. Holds a reference to the grid, which must outlive it.
 */
class ClearanceQuery {
 public:
  explicit ClearanceQuery(const OccupancyGrid& grid, double d_max_clearance = kDefaultMaxClearance);

  /// Distance to the nearest Occupied cell center, or d_max_clearance when
  /// there are none. Inflated cells are not obstacles here.
  double point_clearance(const Point2D& p) const;

  /// min over poses of max(0, point_clearance - footprint_radius), clamped to
  /// [0, d_max_clearance]. Poses outside the grid or on an Inflated cell score 0.
  /// With no Occupied cells at all the result is d_max_clearance itself.
  double trajectory_clearance(const Trajectory& traj, double footprint_radius) const;

  std::size_t obstacle_count() const { return xs_.size(); }
  double d_max_clearance() const { return d_max_; }

 private:
  const OccupancyGrid* grid_;
  double d_max_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Throws BoundsError when p lies outside the grid.
double point_clearance(const OccupancyGrid& grid, const Point2D& p,
                       double d_max_clearance = kDefaultMaxClearance);

double trajectory_clearance(const OccupancyGrid& grid, const Trajectory& traj,
                            double footprint_radius, double d_max_clearance = kDefaultMaxClearance);

/// Plain PGM (P2) rendering, row 0 = max y. Free 0, Occupied 255,
/// Inflated 200, Unknown 128.
std::string to_pgm(const OccupancyGrid& grid);

}  // namespace dwa

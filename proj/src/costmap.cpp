#include "dwa/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dwa/simd/clearance_kernels.hpp"

namespace dwa {

OccupancyGrid::OccupancyGrid(int width_cells, int height_cells, double resolution, Point2D origin,
                             CellState fill)
    : width_(width_cells), height_(height_cells), resolution_(resolution), origin_(origin) {
  if (width_cells < 1 || height_cells < 1) {
    throw std::invalid_argument("OccupancyGrid: dimensions must be at least one cell");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("OccupancyGrid: resolution must be positive");
  }
  cells_.assign(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), fill);
}

OccupancyGrid OccupancyGrid::covering(double width_m, double height_m, double resolution,
                                      Point2D origin) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("OccupancyGrid: resolution must be positive");
  }
  // 10 / 0.05 must give 200 cells, not 201.
  const int w = std::max(1, static_cast<int>(std::ceil(width_m / resolution - 1e-9)));
  const int h = std::max(1, static_cast<int>(std::ceil(height_m / resolution - 1e-9)));
  return OccupancyGrid(w, h, resolution, origin);
}

bool OccupancyGrid::contains(const Point2D& p) const {
  return p.x >= origin_.x && p.y >= origin_.y && p.x <= origin_.x + width_m() &&
         p.y <= origin_.y + height_m();
}

CellIndex OccupancyGrid::world_to_cell_unbounded(const Point2D& p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

std::optional<CellIndex> OccupancyGrid::world_to_cell(const Point2D& p) const {
  if (!contains(p)) {
    return std::nullopt;
  }
  CellIndex c = world_to_cell_unbounded(p);
  c.col = std::clamp(c.col, 0, width_ - 1);
  c.row = std::clamp(c.row, 0, height_ - 1);
  return c;
}

Point2D OccupancyGrid::cell_center(const CellIndex& c) const {
  return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

void LaserScan::validate() const {
  if (angles.empty() || angles.size() != ranges.size()) {
    throw std::invalid_argument("LaserScan: angles and ranges must have equal non-zero length");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("LaserScan: max_range must be positive");
  }
  for (double r : ranges) {
    if (!(r >= 0.0 && r <= max_range)) {
      throw std::invalid_argument("LaserScan: range outside [0, max_range]");
    }
  }
}

std::vector<CellIndex> trace_ray(const OccupancyGrid& grid, const Point2D& from,
                                 const Point2D& to) {
  std::vector<CellIndex> out;
  const auto start = grid.world_to_cell(from);
  if (!start) {
    return out;
  }
  const auto end_in_grid = grid.world_to_cell(to);
  const CellIndex end = end_in_grid ? *end_in_grid : grid.world_to_cell_unbounded(to);

  CellIndex cur = *start;
  out.push_back(cur);
  if (cur == end) {
    return out;
  }

  // Amanatides & Woo voxel walk, parameterized by t in [0, 1] along the segment.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double res = grid.resolution();
  const Point2D origin = grid.origin();
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const int step_col = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_row = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

  auto first_crossing = [res](double o, int idx, int step, double p, double d) {
    if (step == 0) {
      return kInf;
    }
    const double boundary = o + (step > 0 ? idx + 1 : idx) * res;
    return (boundary - p) / d;
  };
  double t_max_col = first_crossing(origin.x, cur.col, step_col, from.x, dx);
  double t_max_row = first_crossing(origin.y, cur.row, step_row, from.y, dy);
  const double t_delta_col = step_col != 0 ? res / std::abs(dx) : kInf;
  const double t_delta_row = step_row != 0 ? res / std::abs(dy) : kInf;

  const int max_steps = std::abs(end.col - start->col) + std::abs(end.row - start->row) + 2;
  for (int i = 0; i < max_steps; ++i) {
    if (t_max_col < t_max_row) {
      if (t_max_col > 1.0) break;
      cur.col += step_col;
      t_max_col += t_delta_col;
    } else {
      if (t_max_row > 1.0) break;
      cur.row += step_row;
      t_max_row += t_delta_row;
    }
    if (!grid.contains(cur)) {
      break;
    }
    out.push_back(cur);
    if (cur == end) {
      break;
    }
  }
  // Rounding can leave the walk one cell short of the endpoint.
  if (end_in_grid && !(out.back() == end)) {
    out.push_back(end);
  }
  return out;
}

OccupancyGrid integrate_scan(OccupancyGrid grid, const Pose2D& sensor_pose, const LaserScan& scan) {
  scan.validate();
  const Point2D sensor = sensor_pose.position();
  if (!grid.contains(sensor)) {
    throw BoundsError("integrate_scan: sensor pose outside grid");
  }

  enum : std::uint8_t { kUntouched = 0, kFree = 1, kHit = 2 };
  std::vector<std::uint8_t> marks(grid.cells().size(), kUntouched);
  const auto mark = [&](const CellIndex& c, std::uint8_t m) {
    auto& slot = marks[static_cast<std::size_t>(c.row) * grid.width_cells() + c.col];
    slot = std::max(slot, m);
  };

  for (std::size_t i = 0; i < scan.angles.size(); ++i) {
    const double bearing = sensor_pose.theta + scan.angles[i];
    const double range = scan.ranges[i];
    const Point2D endpoint{sensor.x + range * std::cos(bearing),
                           sensor.y + range * std::sin(bearing)};
    const auto cells = trace_ray(grid, sensor, endpoint);
    const bool hit = range < scan.max_range && grid.contains(endpoint);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const bool is_endpoint = k + 1 == cells.size();
      mark(cells[k], hit && is_endpoint ? kHit : kFree);
    }
  }

  for (int row = 0; row < grid.height_cells(); ++row) {
    for (int col = 0; col < grid.width_cells(); ++col) {
      switch (marks[static_cast<std::size_t>(row) * grid.width_cells() + col]) {
        case kFree:
          grid.set({col, row}, CellState::Free);
          break;
        case kHit:
          grid.set({col, row}, CellState::Occupied);
          break;
        default:
          break;
      }
    }
  }
  return grid;
}

OccupancyGrid inflate(OccupancyGrid grid, double inflation_radius) {
  if (!(inflation_radius > 0.0)) {
    return grid;
  }
  const double res = grid.resolution();
  const int reach = static_cast<int>(std::ceil(inflation_radius / res));
  // Cell-center offsets inside the radius; the slack absorbs rounding on
  // radii that are exact multiples of the resolution.
  std::vector<CellIndex> stencil;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if ((dc == 0 && dr == 0) || std::hypot(dc * res, dr * res) > inflation_radius + 1e-9) {
        continue;
      }
      stencil.push_back({dc, dr});
    }
  }

  const OccupancyGrid source = grid;
  for (int row = 0; row < source.height_cells(); ++row) {
    for (int col = 0; col < source.width_cells(); ++col) {
      if (source.at({col, row}) != CellState::Occupied) {
        continue;
      }
      for (const auto& off : stencil) {
        const CellIndex c{col + off.col, row + off.row};
        if (grid.contains(c) && grid.at(c) != CellState::Occupied) {
          grid.set(c, CellState::Inflated);
        }
      }
    }
  }
  return grid;
}

ClearanceQuery::ClearanceQuery(const OccupancyGrid& grid, double d_max_clearance)
    : grid_(&grid), d_max_(d_max_clearance) {
  for (int row = 0; row < grid.height_cells(); ++row) {
    for (int col = 0; col < grid.width_cells(); ++col) {
      if (grid.at({col, row}) == CellState::Occupied) {
        const Point2D c = grid.cell_center({col, row});
        xs_.push_back(c.x);
        ys_.push_back(c.y);
      }
    }
  }
}

double ClearanceQuery::point_clearance(const Point2D& p) const {
  if (xs_.empty()) {
    return d_max_;
  }
  return std::sqrt(simd::min_squared_distance(xs_, ys_, p.x, p.y));
}

double ClearanceQuery::trajectory_clearance(const Trajectory& traj, double footprint_radius) const {
  double best = d_max_;
  for (const Pose2D& pose : traj.poses) {
    const auto cell = grid_->world_to_cell(pose.position());
    if (!cell || grid_->at(*cell) == CellState::Inflated) {
      return 0.0;
    }
    if (xs_.empty()) {
      continue;
    }
    best = std::min(best, point_clearance(pose.position()) - footprint_radius);
    if (best <= 0.0) {
      return 0.0;
    }
  }
  return std::clamp(best, 0.0, d_max_);
}

double point_clearance(const OccupancyGrid& grid, const Point2D& p, double d_max_clearance) {
  if (!grid.contains(p)) {
    throw BoundsError("point_clearance: query point outside grid");
  }
  return ClearanceQuery(grid, d_max_clearance).point_clearance(p);
}

double trajectory_clearance(const OccupancyGrid& grid, const Trajectory& traj,
                            double footprint_radius, double d_max_clearance) {
  return ClearanceQuery(grid, d_max_clearance).trajectory_clearance(traj, footprint_radius);
}

std::string to_pgm(const OccupancyGrid& grid) {
  std::ostringstream out;
  out.precision(17);
  out << "P2\n"
      << "# resolution " << grid.resolution() << " origin " << grid.origin().x << ' '
      << grid.origin().y << '\n'
      << grid.width_cells() << ' ' << grid.height_cells() << "\n255\n";
  for (int row = grid.height_cells() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width_cells(); ++col) {
      int value = 128;
      switch (grid.at({col, row})) {
        case CellState::Free: value = 0; break;
        case CellState::Occupied: value = 255; break;
        case CellState::Inflated: value = 200; break;
        case CellState::Unknown: value = 128; break;
      }
      out << (col ? " " : "") << value;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dwa

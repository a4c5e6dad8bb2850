#include "polymer/lattice.hpp"

#include <algorithm>

namespace polymer {

std::string to_string(Point p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

RegionSpec::RegionSpec(Point lo, Point hi) : lower(lo), upper(hi) {
  if (lo.x > hi.x || lo.y > hi.y) {
    throw GeometryError("region corners not ordered: " + to_string(lo) + " " + to_string(hi));
  }
}

void check_cell_cap(const RegionSpec& region, std::size_t cap) {
  if (region.cell_count() > cap) {
    throw MemoryCapError("region of " + std::to_string(region.cell_count()) +
                         " cells exceeds cap of " + std::to_string(cap));
  }
}

std::vector<Point> AntidiagonalSegment::points() const {
  if (half_width < 0) throw GeometryError("negative segment half-width");
  std::vector<Point> out;
  out.reserve(2 * static_cast<std::size_t>(half_width) + 1);
  for (int j = -half_width; j <= half_width; ++j) out.push_back({center.x + j, center.y - j});
  return out;
}

std::vector<Point> AntidiagonalSegment::points_in(const RegionSpec& region) const {
  auto all = points();
  std::erase_if(all, [&](Point p) { return !region.contains(p); });
  return all;
}

DownRightPath::DownRightPath(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const Point d = vertices_[i] - vertices_[i - 1];
    if (d != kE1 && d != Point{0, -1}) {
      throw GeometryError("down-right path step must be e1 or -e2 at vertex " +
                          to_string(vertices_[i]));
    }
  }
}

DownRightPath DownRightPath::from_steps(Point start, const std::string& steps) {
  std::vector<Point> v{start};
  for (char c : steps) {
    if (c == 'E') {
      v.push_back(v.back() + kE1);
    } else if (c == 'S') {
      v.push_back(v.back() - kE2);
    } else {
      throw GeometryError(std::string("unknown down-right step '") + c + "'");
    }
  }
  return DownRightPath(std::move(v));
}

DownRightPath DownRightPath::horizontal_through(Point through, int k) {
  if (k < 0) throw GeometryError("negative path length");
  return from_steps({through.x - k / 2, through.y}, std::string(static_cast<std::size_t>(k), 'E'));
}

DownRightPath DownRightPath::staircase(Point start, int k) {
  std::string s;
  for (int i = 0; i < k; ++i) s.push_back(i % 2 == 0 ? 'S' : 'E');
  return from_steps(start, s);
}

bool DownRightPath::contains(Point p) const {
  return std::find(vertices_.begin(), vertices_.end(), p) != vertices_.end();
}

RegionSpec DownRightPath::bounding_box() const {
  if (vertices_.empty()) throw GeometryError("empty down-right path");
  // z0 is the top-left vertex, the last vertex the bottom-right one.
  return RegionSpec({vertices_.front().x, vertices_.back().y},
                    {vertices_.back().x, vertices_.front().y});
}

PolymerPath::PolymerPath(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw GeometryError("empty polymer path");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const Point d = vertices_[i] - vertices_[i - 1];
    if (d != kE1 && d != kE2) {
      throw GeometryError("polymer path step must be e1 or e2 at vertex " +
                          to_string(vertices_[i]));
    }
  }
}

std::string PolymerPath::run_length_steps() const {
  std::string out;
  std::size_t i = 1;
  while (i < vertices_.size()) {
    const bool east = vertices_[i].x != vertices_[i - 1].x;
    std::size_t run = 0;
    while (i < vertices_.size() && (vertices_[i].x != vertices_[i - 1].x) == east) {
      ++run;
      ++i;
    }
    out += east ? 'E' : 'N';
    out += std::to_string(run);
  }
  return out;
}

}  // namespace polymer

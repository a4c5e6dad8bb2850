#include "polymer/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polymer::brute {

namespace {

void extend(Path& current, Point v, std::vector<Path>& out) {
  const Point p = current.back();
  if (p == v) {
    out.push_back(current);
    return;
  }
  if (p.x < v.x) {
    current.push_back({p.x + 1, p.y});
    extend(current, v, out);
    current.pop_back();
  }
  if (p.y < v.y) {
    current.push_back({p.x, p.y + 1});
    extend(current, v, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_paths(Point u, Point v) {
  std::vector<Path> out;
  if (v.x < u.x || v.y < u.y) return out;
  Path current{u};
  extend(current, v, out);
  return out;
}

long double path_log_weight(const WeightSource& w, const Path& path, bool include_start) {
  long double s = 0;
  for (std::size_t i = include_start ? 0 : 1; i < path.size(); ++i) s += w.log_weight(path[i]);
  return s;
}

double log_sum_paths(const WeightSource& w, const std::vector<Path>& paths, bool include_start,
                     const std::function<bool(const Path&)>& keep) {
  std::vector<long double> terms;
  for (const auto& p : paths) {
    if (p.size() < 2 && !include_start) continue;
    if (keep && !keep(p)) continue;
    terms.push_back(path_log_weight(w, p, include_start));
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const long double top = *std::max_element(terms.begin(), terms.end());
  long double acc = 0;
  for (long double t : terms) acc += std::exp(t - top);
  return static_cast<double>(top + std::log(acc));
}

}  // namespace polymer::brute

#pragma once

#include <functional>
#include <vector>

#include "polymer/environment.hpp"
#include "polymer/lattice.hpp"

namespace polymer::brute {

using Path = std::vector<Point>;

/// Every up-right path from u to v by explicit recursion; for small boxes.
std::vector<Path> enumerate_paths(Point u, Point v);

/// Sum of log-weights along the path, optionally skipping the first vertex.
long double path_log_weight(const WeightSource& w, const Path& path, bool include_start);

/// log of the summed weight over paths of positive length accepted by
/// `keep`; -inf when none is accepted.
double log_sum_paths(const WeightSource& w, const std::vector<Path>& paths, bool include_start,
                     const std::function<bool(const Path&)>& keep = {});

}  // namespace polymer::brute

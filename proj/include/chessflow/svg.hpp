#pragma once

#include <array>
#include <string>
#include <vector>

#include "chessflow/geometry.hpp"
#include "chessflow/medium.hpp"

namespace chessflow {

struct Bounds {
    double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
};

Bounds bounds_of(const std::vector<Point>& pts, double margin);

// Chessboard cells in view, the boundary, pinned edges drawn in red.
std::string frame_svg(const Polyrectangle& shape, const std::vector<bool>& pinned, const ChessboardMedium& medium,
                      double time, const Bounds& view);

// Trajectories of the effective rectangle dynamics in the (l1, l2) plane,
// with the switching curve U = 0 when alpha + beta < 0.
std::string phase_portrait_svg(double alpha, double beta, double l_max,
                               const std::vector<std::array<double, 2>>& starts, double t_max = 50.0);

}  // namespace chessflow

#pragma once

#include <functional>
#include <vector>

#include "chessflow/medium.hpp"

namespace chessflow {

enum class CaseTag {
    square_shrink,
    square_confine,
    rect_shrink,
    rect_confine,
    rect_mixed_J_zero,
    rect_mixed_J_neg,
    rect_mixed_J_pos
};

const char* to_string(CaseTag t);

enum class EffectiveShape { square, rectangle, octagon, point, stationary_octagon };

const char* to_string(EffectiveShape s);

// Shapes are centred at the origin.  l1 is the horizontal side (or moving
// edge) length and l2 the vertical one.  Octagons are cut by the diamond
// |x| + |y| <= frame; their horizontal edges sit at y = +-(frame - l1/2).
struct EffectiveState {
    EffectiveShape shape = EffectiveShape::square;
    double time = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double frame = 0.0;
    double extinction_time = 0.0;  // set once a shrinking shape has vanished
    double switch_time = -1.0;     // rectangle-to-octagon switch, negative if none

    std::vector<Point> outline(Point centre = {}) const;
};

struct Invariants {
    double U = 0.0;
    double J = 0.0;
};

Invariants invariants(double l1, double l2, double alpha, double beta);

CaseTag classify_square(double l0, double alpha, double beta);
CaseTag classify_rectangle(double l1, double l2, double alpha, double beta);

EffectiveState integrate_square(double l0, double alpha, double beta, double t);
EffectiveState integrate_rectangle(double l1, double l2, double alpha, double beta, double t);

// Long-time limit: a point (with its extinction time) or a stationary octagon.
EffectiveState limit_state(double l1, double l2, double alpha, double beta);

inline constexpr double effective_rtol = 1e-9;
inline constexpr double effective_atol = 1e-12;

// Raw integrations reporting every accepted step of the adaptive scheme.
using EffectiveObserver = std::function<void(double t, double l1, double l2)>;
// System for shrinking rectangles: l1' = -4/l2 - (alpha+beta), l2' = -4/l1 - (alpha+beta).
// Stops at t_end, at extinction or (when stop_at_U_zero) at the first zero of U.
struct SystemRun {
    double t = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    bool extinct = false;
    bool switched = false;
};
SystemRun integrate_rectangle_system(double l1, double l2, double sum, double t_end, bool stop_at_U_zero,
                                     const EffectiveObserver& observer = {});
// Octagon moving edges: li' = 4/li + (alpha+beta).
SystemRun integrate_octagon_system(double l1, double l2, double sum, double t_end,
                                   const EffectiveObserver& observer = {});

}  // namespace chessflow

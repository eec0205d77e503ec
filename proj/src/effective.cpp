#include "chessflow/effective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace chessflow {

namespace odeint = boost::numeric::odeint;

const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::square_shrink: return "square_shrink";
        case CaseTag::square_confine: return "square_confine";
        case CaseTag::rect_shrink: return "rect_shrink";
        case CaseTag::rect_confine: return "rect_confine";
        case CaseTag::rect_mixed_J_zero: return "rect_mixed_J_zero";
        case CaseTag::rect_mixed_J_neg: return "rect_mixed_J_neg";
        case CaseTag::rect_mixed_J_pos: return "rect_mixed_J_pos";
    }
    return "?";
}

const char* to_string(EffectiveShape s) {
    switch (s) {
        case EffectiveShape::square: return "square";
        case EffectiveShape::rectangle: return "rectangle";
        case EffectiveShape::octagon: return "octagon";
        case EffectiveShape::point: return "point";
        case EffectiveShape::stationary_octagon: return "stationary_octagon";
    }
    return "?";
}

std::vector<Point> EffectiveState::outline(Point c) const {
    switch (shape) {
        case EffectiveShape::point: return {c};
        case EffectiveShape::square:
        case EffectiveShape::rectangle: {
            double a = l1 / 2, b = l2 / 2;
            return {{c.x - a, c.y - b}, {c.x + a, c.y - b}, {c.x + a, c.y + b}, {c.x - a, c.y + b}};
        }
        case EffectiveShape::octagon:
        case EffectiveShape::stationary_octagon: {
            double a = l1 / 2, b = l2 / 2;
            double y = frame - a, x = frame - b;
            return {{c.x + a, c.y - y}, {c.x + x, c.y - b}, {c.x + x, c.y + b}, {c.x + a, c.y + y},
                    {c.x - a, c.y + y}, {c.x - x, c.y + b}, {c.x - x, c.y - b}, {c.x - a, c.y - y}};
        }
    }
    return {};
}

Invariants invariants(double l1, double l2, double alpha, double beta) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) throw std::invalid_argument("invariants: lengths must be positive");
    double s = alpha + beta;
    return {1.0 / l1 + 1.0 / l2 + s / 2.0, 4.0 * (std::log(l2) - std::log(l1)) + s * (l2 - l1)};
}

CaseTag classify_square(double l0, double alpha, double beta) {
    if (!(l0 > 0.0)) throw std::invalid_argument("classify_square: side must be positive");
    double s = alpha + beta;
    if (s >= 0.0 || l0 <= -4.0 / s) return CaseTag::square_shrink;
    return CaseTag::square_confine;
}

CaseTag classify_rectangle(double l1, double l2, double alpha, double beta) {
    if (!(l2 > 0.0) || l1 < l2) throw std::invalid_argument("classify_rectangle: need l1 >= l2 > 0");
    double s = alpha + beta;
    double v1 = 2.0 / l1 + s / 2.0, v2 = 2.0 / l2 + s / 2.0;
    if (v1 >= 0.0 && v2 >= 0.0) return CaseTag::rect_shrink;
    if (v2 < 0.0 || v1 + v2 <= 0.0) return CaseTag::rect_confine;
    double J = invariants(l1, l2, alpha, beta).J;
    if (std::abs(J) <= 1e-12) return CaseTag::rect_mixed_J_zero;
    return J < 0.0 ? CaseTag::rect_mixed_J_neg : CaseTag::rect_mixed_J_pos;
}

namespace {

using State = std::array<double, 2>;
using StateObserver = std::function<void(double, const State&)>;

constexpr double extinction_u = 1e-12;  // lengths below 1e-6
constexpr double event_tol = 1e-12;

struct DriveResult {
    double t = 0.0;
    State x{};
    bool hit = false;
};

// Dense-output DOPRI5 from t = 0 to t_end, stopping early at the first time
// the scalar g drops to zero or below (located by bisection on the dense output).
template <class Rhs, class Event>
DriveResult drive(Rhs rhs, State x, double t_end, Event g, const StateObserver& obs) {
    if (obs) obs(0.0, x);
    if (g(x) <= 0.0) return {0.0, x, true};
    if (t_end <= 0.0) return {0.0, x, false};
    auto stepper = odeint::make_dense_output(effective_atol, effective_rtol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x, 0.0, std::min(1e-3, t_end));
    for (;;) {
        auto [t0, t1] = stepper.do_step(rhs);
        State x1 = stepper.current_state();
        if (g(x1) <= 0.0) {
            double lo = t0, hi = t1;
            State xm;
            while (hi - lo > event_tol) {
                double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, xm);
                (g(xm) <= 0.0 ? hi : lo) = mid;
            }
            if (hi <= t_end) {
                stepper.calc_state(hi, xm);
                if (obs) obs(hi, xm);
                return {hi, xm, true};
            }
        }
        if (t1 >= t_end) {
            State xe;
            stepper.calc_state(t_end, xe);
            if (obs) obs(t_end, xe);
            return {t_end, xe, false};
        }
        if (obs) obs(t1, x1);
    }
}

}  // namespace

SystemRun integrate_rectangle_system(double l1, double l2, double sum, double t_end, bool stop_at_U_zero,
                                     const EffectiveObserver& observer) {
    // Integrated in u = l^2, which stays smooth up to extinction.
    auto len = [](double u) { return std::sqrt(std::max(u, 1e-300)); };
    auto rhs = [&](const State& u, State& du, double) {
        double a = len(u[0]), b = len(u[1]);
        du[0] = 2.0 * a * (-4.0 / b - sum);
        du[1] = 2.0 * b * (-4.0 / a - sum);
    };
    auto U = [&](const State& u) { return 1.0 / len(u[0]) + 1.0 / len(u[1]) + sum / 2.0; };
    auto g = [&](const State& u) {
        double e = std::min(u[0], u[1]) - extinction_u;
        return stop_at_U_zero ? std::min(e, U(u)) : e;
    };
    StateObserver obs;
    if (observer) obs = [&](double t, const State& u) { observer(t, len(u[0]), len(u[1])); };

    auto r = drive(rhs, State{l1 * l1, l2 * l2}, t_end, g, obs);
    SystemRun out{r.t, len(r.x[0]), len(r.x[1]), false, false};
    if (!r.hit) return out;
    if (std::min(r.x[0], r.x[1]) - extinction_u <= 0.0) {
        State du;
        rhs(r.x, du, r.t);
        std::size_t k = r.x[0] <= r.x[1] ? 0 : 1;
        double rate = std::abs(du[k]);
        out.t = r.t + (rate > 0.0 ? std::max(r.x[k], 0.0) / rate : 0.0);
        out.extinct = true;
        out.l1 = out.l2 = 0.0;
        if (observer) observer(out.t, 0.0, 0.0);
    } else {
        out.switched = true;
    }
    return out;
}

SystemRun integrate_octagon_system(double l1, double l2, double sum, double t_end, const EffectiveObserver& observer) {
    auto rhs = [&](const State& l, State& dl, double) {
        dl[0] = 4.0 / l[0] + sum;
        dl[1] = 4.0 / l[1] + sum;
    };
    StateObserver obs;
    if (observer) obs = [&](double t, const State& l) { observer(t, l[0], l[1]); };
    auto never = [](const State&) { return 1.0; };
    auto r = drive(rhs, State{l1, l2}, t_end, never, obs);
    return {r.t, r.x[0], r.x[1], false, false};
}

EffectiveState integrate_square(double l0, double alpha, double beta, double t) {
    if (t < 0.0) throw std::invalid_argument("integrate_square: negative time");
    double s = alpha + beta;
    EffectiveState st;
    st.time = t;
    if (classify_square(l0, alpha, beta) == CaseTag::square_shrink) {
        auto r = integrate_rectangle_system(l0, l0, s, t, false);
        if (r.extinct) {
            st.shape = EffectiveShape::point;
            st.extinction_time = r.t;
        } else {
            st.shape = EffectiveShape::square;
            st.l1 = st.l2 = r.l1;
        }
        return st;
    }
    auto r = integrate_octagon_system(l0, l0, s, t);
    st.shape = EffectiveShape::octagon;
    st.l1 = st.l2 = r.l1;
    st.frame = l0;
    return st;
}

EffectiveState integrate_rectangle(double l1, double l2, double alpha, double beta, double t) {
    if (t < 0.0) throw std::invalid_argument("integrate_rectangle: negative time");
    double s = alpha + beta;
    CaseTag tag = classify_rectangle(std::max(l1, l2), std::min(l1, l2), alpha, beta);
    EffectiveState st;
    st.time = t;
    if (tag == CaseTag::rect_confine) {
        auto r = integrate_octagon_system(l1, l2, s, t);
        st.shape = EffectiveShape::octagon;
        st.l1 = r.l1;
        st.l2 = r.l2;
        st.frame = (l1 + l2) / 2.0;
        return st;
    }
    const bool may_switch = tag != CaseTag::rect_shrink;
    auto r = integrate_rectangle_system(l1, l2, s, t, may_switch);
    if (r.extinct) {
        st.shape = EffectiveShape::point;
        st.extinction_time = r.t;
        return st;
    }
    if (!r.switched) {
        st.shape = EffectiveShape::rectangle;
        st.l1 = r.l1;
        st.l2 = r.l2;
        return st;
    }
    st.switch_time = r.t;
    st.frame = (r.l1 + r.l2) / 2.0;
    auto o = integrate_octagon_system(r.l1, r.l2, s, t - r.t);
    st.shape = EffectiveShape::octagon;
    st.l1 = o.l1;
    st.l2 = o.l2;
    return st;
}

EffectiveState limit_state(double l1, double l2, double alpha, double beta) {
    double s = alpha + beta;
    CaseTag tag = classify_rectangle(std::max(l1, l2), std::min(l1, l2), alpha, beta);
    EffectiveState st;
    st.time = std::numeric_limits<double>::infinity();
    const double horizon = 1e9;
    if (s < 0.0 && std::abs(l1 - l2) <= 1e-14 * l1 && std::abs(l1 + 4.0 / s) <= 1e-12 * l1) {
        st.shape = EffectiveShape::stationary_octagon;
        st.l1 = st.l2 = st.frame = l1;
        return st;
    }
    if (tag == CaseTag::rect_shrink || tag == CaseTag::rect_mixed_J_neg) {
        auto r = integrate_rectangle_system(l1, l2, s, horizon, tag != CaseTag::rect_shrink);
        if (!r.extinct) throw std::runtime_error("limit_state: shrinking rectangle did not vanish");
        st.shape = EffectiveShape::point;
        st.extinction_time = r.t;
        return st;
    }
    const double l_inf = -4.0 / s;
    st.shape = EffectiveShape::stationary_octagon;
    st.l1 = st.l2 = l_inf;
    if (tag == CaseTag::rect_confine) {
        st.frame = (l1 + l2) / 2.0;
    } else if (tag == CaseTag::rect_mixed_J_zero) {
        st.shape = EffectiveShape::square;
    } else {
        auto r = integrate_rectangle_system(l1, l2, s, horizon, true);
        if (!r.switched) throw std::runtime_error("limit_state: rectangle did not reach the switching curve");
        st.switch_time = r.t;
        st.frame = (r.l1 + r.l2) / 2.0;
    }
    return st;
}

}  // namespace chessflow

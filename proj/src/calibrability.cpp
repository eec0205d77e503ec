#include "chessflow/calibrability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chessflow {

Facet facet_of(const EdgeView& edge, const ChessboardMedium& medium) {
    Facet f{medium.trace(line_axis(edge.normal), edge.line_offset), edge.p, edge.q, edge.chi, edge.n_p, edge.n_q};
    if (f.trace.on_grid()) throw std::domain_error("edge lies on a discontinuity line");
    return f;
}

Facet shifted_facet(const EdgeView& edge, const ChessboardMedium& medium, int side) {
    double s = edge.line_offset + side * axis_sign(edge.normal) * 0.25 * medium.epsilon();
    return {medium.trace(line_axis(edge.normal), s), edge.p, edge.q, edge.chi, edge.n_p, edge.n_q};
}

EndpointState endpoint_state(const LineTrace& trace, double s) {
    if (trace.is_jump(s)) {
        return trace.phase_right_of(s) == Phase::alpha ? EndpointState::jump_beta_alpha
                                                       : EndpointState::jump_alpha_beta;
    }
    return trace.phase_at(s) == Phase::alpha ? EndpointState::in_alpha : EndpointState::in_beta;
}

namespace {

void require_positive_length(const Facet& f) {
    if (!(f.length() > 0.0)) throw std::invalid_argument("facet has zero length");
}

std::vector<Jump> interior_jumps(const Facet& f) {
    auto all = f.trace.jumps_in(f.p, f.q);
    std::vector<Jump> out;
    for (const auto& j : all)
        if (j.position > f.p + f.trace.tol() && j.position < f.q - f.trace.tol()) out.push_back(j);
    return out;
}

CalibrabilityVerdict verdict(const Facet& f, bool ok) {
    CalibrabilityVerdict v;
    v.calibrable = ok;
    v.velocity = facet_velocity(f);
    return v;
}

bool alpha_right_of_p(EndpointState s) {
    return s == EndpointState::in_alpha || s == EndpointState::jump_beta_alpha;
}

bool alpha_left_of_q(EndpointState s) {
    return s == EndpointState::in_alpha || s == EndpointState::jump_alpha_beta;
}

}  // namespace

double facet_velocity(const Facet& f) {
    require_positive_length(f);
    auto d = f.trace.phase_decomposition(f.p, f.q);
    double a = f.trace.alpha(), b = f.trace.beta();
    return f.chi * 2.0 / d.ell + 0.5 * (a + b) + (b - a) / (2.0 * d.ell) * (d.ell_beta - d.ell_alpha);
}

CandidateField candidate_field(const Facet& f) {
    require_positive_length(f);
    CandidateField c;
    c.velocity = facet_velocity(f);
    c.slope_alpha = c.velocity - f.trace.alpha();
    c.slope_beta = c.velocity - f.trace.beta();
    double pos = f.p, n = f.n_p;
    c.breakpoints.push_back({pos, n});
    auto advance = [&](double next) {
        double slope = f.trace.phase_right_of(pos) == Phase::alpha ? c.slope_alpha : c.slope_beta;
        n += (next - pos) * slope;
        pos = next;
        c.breakpoints.push_back({pos, n});
    };
    for (const auto& j : interior_jumps(f)) advance(j.position);
    advance(f.q);
    return c;
}

double max_interior_field(const Facet& f) {
    auto c = candidate_field(f);
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < c.breakpoints.size(); ++i) m = std::max(m, std::abs(c.breakpoints[i].value));
    return m;
}

CalibrabilityVerdict oracle_is_calibrable(const Facet& f) {
    auto c = candidate_field(f);
    CalibrabilityVerdict v;
    v.velocity = c.velocity;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < c.breakpoints.size(); ++i) {
        double a = std::abs(c.breakpoints[i].value);
        if (a > worst) {
            worst = a;
            if (a > 1.0 + calibrability_slack) v.violation = c.breakpoints[i];
        }
    }
    v.calibrable = worst <= 1.0 + calibrability_slack;
    return v;
}

CalibrabilityVerdict classify_zero_curvature(const Facet& f) {
    if (f.chi != 0) throw std::invalid_argument("classify_zero_curvature: chi != 0");
    require_positive_length(f);
    const int n0 = f.n_p;
    const double eps = 2.0 * f.trace.half_period();
    auto jumps = interior_jumps(f);
    if (jumps.empty()) return verdict(f, true);
    EndpointState sp = endpoint_state(f.trace, f.p), sq = endpoint_state(f.trace, f.q);
    if (f.length() >= eps - f.trace.tol()) {
        if (n0 > 0) return verdict(f, sp == EndpointState::jump_alpha_beta && sq == EndpointState::jump_alpha_beta);
        return verdict(f, sp == EndpointState::jump_beta_alpha && sq == EndpointState::jump_beta_alpha);
    }
    // Shorter than one period: at most two phases, and the first one must be
    // beta for n0 = +1 (alpha for n0 = -1).
    if (jumps.size() > 1) return verdict(f, false);
    Phase first = alpha_right_of_p(sp) ? Phase::alpha : Phase::beta;
    return verdict(f, n0 > 0 ? first == Phase::beta : first == Phase::alpha);
}

double threshold_m(double core, double eps, double D) { return eps * D / (D * (core + 0.5 * eps) + 4.0); }

double threshold_h(double core, double eps, double D) {
    return eps * (D * (core + 0.5 * eps) - 4.0) / (2.0 * D * (core + 0.5 * eps) + 8.0);
}

double threshold_sigma(double core, double eps, double D) {
    return eps * (D * (core + 0.5 * eps) - 4.0) / (2.0 * D * (core - 0.5 * eps) + 8.0);
}

namespace {

bool eq9_holds(const Facet& f) {
    auto d = f.trace.phase_decomposition(f.p, f.q);
    double D = f.trace.beta() - f.trace.alpha();
    double lhs = d.ell + d.ell_alpha - d.ell_beta;
    return lhs <= 4.0 / D * (1.0 + 1e-13);
}

}  // namespace

CalibrabilityVerdict classify_positive_curvature(const Facet& f) {
    if (f.chi != 1) throw std::invalid_argument("classify_positive_curvature: chi != +1");
    require_positive_length(f);
    auto jumps = interior_jumps(f);
    if (jumps.empty() || eq9_holds(f)) return verdict(f, true);
    EndpointState sp = endpoint_state(f.trace, f.p), sq = endpoint_state(f.trace, f.q);
    if (!alpha_right_of_p(sp) || !alpha_left_of_q(sq)) return verdict(f, false);
    if (sp == EndpointState::jump_beta_alpha && sq == EndpointState::jump_alpha_beta) return verdict(f, true);

    auto t = thresholds(f);
    const double slack = 1e-13 * (1.0 + f.length());
    if (t.config == ThresholdCase::both_alpha)
        return verdict(f, t.m * t.sigma2 + t.h <= t.sigma1 + slack && t.m * t.sigma1 + t.h <= t.sigma2 + slack);
    double sigma = t.config == ThresholdCase::alpha_then_jump ? t.sigma1 : t.sigma2;
    return verdict(f, sigma >= t.sigma_star - slack);
}

BreakingThresholds thresholds(const Facet& f) {
    if (f.chi != 1) throw std::invalid_argument("thresholds: chi != +1");
    require_positive_length(f);
    if (eq9_holds(f)) throw std::domain_error("thresholds: edge satisfies l + l_alpha - l_beta <= 4/(beta - alpha)");
    auto jumps = interior_jumps(f);
    EndpointState sp = endpoint_state(f.trace, f.p), sq = endpoint_state(f.trace, f.q);
    const double h = f.trace.half_period(), eps = 2.0 * h;
    const double D = f.trace.beta() - f.trace.alpha();
    BreakingThresholds t;
    if (jumps.empty()) throw std::domain_error("thresholds: no jump inside the edge");
    t.sigma1 = jumps.front().position - f.p;
    t.sigma2 = f.q - jumps.back().position;
    if (sp == EndpointState::in_alpha && sq == EndpointState::in_alpha) {
        t.config = ThresholdCase::both_alpha;
        t.core_length = f.length() - eps - t.sigma1 - t.sigma2;
    } else if (sp == EndpointState::in_alpha && sq == EndpointState::jump_alpha_beta) {
        t.config = ThresholdCase::alpha_then_jump;
        t.sigma2 = 0.0;
        t.core_length = f.length() - h - t.sigma1;
    } else if (sp == EndpointState::jump_beta_alpha && sq == EndpointState::in_alpha) {
        t.config = ThresholdCase::jump_then_alpha;
        t.sigma1 = 0.0;
        t.core_length = f.length() - h - t.sigma2;
    } else {
        throw std::domain_error("thresholds: endpoint configuration has no breaking threshold");
    }
    t.m = threshold_m(t.core_length, eps, D);
    t.h = threshold_h(t.core_length, eps, D);
    t.sigma_tilde = threshold_sigma(t.core_length, eps, D);
    t.sigma_star = t.sigma_tilde;
    return t;
}

CandidateField candidate_field(const EdgeView& e, const ChessboardMedium& m) { return candidate_field(facet_of(e, m)); }
CalibrabilityVerdict oracle_is_calibrable(const EdgeView& e, const ChessboardMedium& m) {
    return oracle_is_calibrable(facet_of(e, m));
}
CalibrabilityVerdict classify_zero_curvature(const EdgeView& e, const ChessboardMedium& m) {
    return classify_zero_curvature(facet_of(e, m));
}
CalibrabilityVerdict classify_positive_curvature(const EdgeView& e, const ChessboardMedium& m) {
    return classify_positive_curvature(facet_of(e, m));
}
BreakingThresholds thresholds(const EdgeView& e, const ChessboardMedium& m) { return thresholds(facet_of(e, m)); }

}  // namespace chessflow

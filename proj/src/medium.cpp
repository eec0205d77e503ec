#include "chessflow/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chessflow {

namespace {

bool even(std::int64_t v) { return (v & 1) == 0; }

}  // namespace

ChessboardMedium::ChessboardMedium(double alpha, double beta, double epsilon)
    : alpha_(alpha), beta_(beta), epsilon_(epsilon) {
    if (!(alpha < 0.0 && beta > 0.0))
        throw std::invalid_argument("medium: need alpha < 0 < beta");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("medium: need epsilon > 0");
    if (!(epsilon < 8.0 / (beta - alpha)))
        throw std::invalid_argument("medium: need epsilon < 8/(beta - alpha)");
}

std::int64_t ChessboardMedium::nearest_line(double s) const {
    return static_cast<std::int64_t>(std::llround(s / half_period()));
}

bool ChessboardMedium::on_grid(double s) const {
    return std::abs(s - line(nearest_line(s))) <= tol_grid();
}

std::int64_t ChessboardMedium::cell_index(double s) const {
    return static_cast<std::int64_t>(std::floor(s / half_period()));
}

double ChessboardMedium::snap(double s) const {
    return on_grid(s) ? line(nearest_line(s)) : s;
}

std::optional<double> ChessboardMedium::value_at(Point pt) const {
    if (on_grid(pt.x) || on_grid(pt.y)) return std::nullopt;
    return even(cell_index(pt.x) + cell_index(pt.y)) ? alpha_ : beta_;
}

LineTrace::LineTrace(const ChessboardMedium& medium, Axis axis, double offset)
    : axis_(axis),
      offset_(offset),
      on_grid_(medium.on_grid(offset)),
      row_(medium.cell_index(offset)),
      alpha_(medium.alpha()),
      beta_(medium.beta()),
      h_(medium.half_period()),
      tol_(medium.tol_grid()) {}

LineTrace LineTrace::in_strip(const ChessboardMedium& medium, Axis axis, std::int64_t row) {
    LineTrace t;
    t.axis_ = axis;
    t.h_ = medium.half_period();
    t.offset_ = (static_cast<double>(row) + 0.5) * t.h_;
    t.on_grid_ = false;
    t.row_ = row;
    t.alpha_ = medium.alpha();
    t.beta_ = medium.beta();
    t.tol_ = medium.tol_grid();
    return t;
}

void LineTrace::require_defined() const {
    if (on_grid_) throw std::domain_error("trace undefined on discontinuity line");
}

Phase LineTrace::phase_of_cell(std::int64_t cell) const {
    return even(cell + row_) ? Phase::alpha : Phase::beta;
}

bool LineTrace::is_jump(double s) const {
    double k = std::round(s / h_);
    return std::abs(s - k * h_) <= tol_;
}

Phase LineTrace::phase_at(double s) const {
    require_defined();
    return phase_of_cell(static_cast<std::int64_t>(std::floor(s / h_)));
}

Phase LineTrace::phase_right_of(double s) const {
    require_defined();
    if (is_jump(s)) return phase_of_cell(static_cast<std::int64_t>(std::llround(s / h_)));
    return phase_at(s);
}

Phase LineTrace::phase_left_of(double s) const {
    require_defined();
    if (is_jump(s)) return phase_of_cell(static_cast<std::int64_t>(std::llround(s / h_)) - 1);
    return phase_at(s);
}

JumpKind LineTrace::jump_kind(std::int64_t k) const {
    return phase_of_cell(k) == Phase::alpha ? JumpKind::beta_to_alpha : JumpKind::alpha_to_beta;
}

std::vector<Jump> LineTrace::jumps_in(double a, double b) const {
    require_defined();
    if (a > b) throw std::invalid_argument("jumps_in: need a <= b");
    std::vector<Jump> out;
    auto k0 = static_cast<std::int64_t>(std::ceil((a - tol_) / h_));
    auto k1 = static_cast<std::int64_t>(std::floor((b + tol_) / h_));
    for (std::int64_t k = k0; k <= k1; ++k)
        out.push_back({static_cast<double>(k) * h_, jump_kind(k)});
    return out;
}

// Integral of (gamma - mean) from 0 to s; a triangle wave of period 2h.
double LineTrace::primitive(double s) const {
    double u = s / h_;
    double w = u - 2.0 * std::floor(0.5 * u);
    double tri = w <= 1.0 ? w : 2.0 - w;
    // Cell 0 of this row is alpha when row is even: the wave starts downward.
    double sign = even(row_) ? -1.0 : 1.0;
    return sign * 0.5 * (beta_ - alpha_) * h_ * tri;
}

double LineTrace::integral(double p, double q) const {
    require_defined();
    return 0.5 * (alpha_ + beta_) * (q - p) + primitive(q) - primitive(p);
}

PhaseDecomposition LineTrace::phase_decomposition(double p, double q) const {
    require_defined();
    if (p > q) throw std::invalid_argument("phase_decomposition: need p <= q");
    PhaseDecomposition d;
    d.ell = q - p;
    d.integral = integral(p, q);
    double eps = 2.0 * h_;
    double r = d.ell - eps * std::floor(d.ell / eps);
    if (r < tol_ || r > eps - tol_) r = 0.0;
    double mean = 0.5 * (alpha_ + beta_);
    double lb = (d.integral - mean * (d.ell - r) - alpha_ * r) / (beta_ - alpha_);
    lb = std::clamp(lb, 0.0, std::min(r, h_));
    d.ell_beta = lb;
    d.ell_alpha = std::clamp(r - lb, 0.0, h_);
    return d;
}

}  // namespace chessflow

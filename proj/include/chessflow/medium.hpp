#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace chessflow {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class Phase { alpha, beta };

// Orientation of a straight line: horizontal lines are y = offset,
// vertical lines are x = offset.  Abscissa along a horizontal line is x,
// along a vertical line it is y.
enum class Axis { horizontal, vertical };

enum class JumpKind { beta_to_alpha, alpha_to_beta };

struct Jump {
    double position = 0.0;
    JumpKind kind = JumpKind::beta_to_alpha;
};

struct PhaseDecomposition {
    double ell = 0.0;
    double ell_alpha = 0.0;
    double ell_beta = 0.0;
    double integral = 0.0;
};

class ChessboardMedium;

// Restriction of the forcing to a line that does not lie on the grid.  The
// line sits inside strip `row` of the orthogonal coordinate, i.e. between
// row*h and (row+1)*h, h = epsilon/2.
class LineTrace {
public:
    LineTrace(const ChessboardMedium& medium, Axis axis, double offset);
    static LineTrace in_strip(const ChessboardMedium& medium, Axis axis, std::int64_t row);

    Axis axis() const { return axis_; }
    double offset() const { return offset_; }
    bool on_grid() const { return on_grid_; }
    std::int64_t row() const { return row_; }

    Phase phase_of_cell(std::int64_t cell) const;
    Phase phase_at(double s) const;        // s must not be a jump
    Phase phase_right_of(double s) const;  // phase on (s, s + tiny)
    Phase phase_left_of(double s) const;   // phase on (s - tiny, s)
    double value_at(double s) const { return value(phase_at(s)); }

    bool is_jump(double s) const;
    JumpKind jump_kind(std::int64_t k) const;
    std::vector<Jump> jumps_in(double a, double b) const;

    double integral(double p, double q) const;
    PhaseDecomposition phase_decomposition(double p, double q) const;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double half_period() const { return h_; }
    double tol() const { return tol_; }

private:
    LineTrace() = default;
    void require_defined() const;
    double value(Phase ph) const { return ph == Phase::alpha ? alpha_ : beta_; }
    double primitive(double s) const;

    Axis axis_ = Axis::horizontal;
    double offset_ = 0.0;
    bool on_grid_ = false;
    std::int64_t row_ = 0;
    double alpha_ = 0.0, beta_ = 0.0, h_ = 0.0, tol_ = 0.0;
};

class ChessboardMedium {
public:
    ChessboardMedium(double alpha, double beta, double epsilon);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double epsilon() const { return epsilon_; }
    double half_period() const { return 0.5 * epsilon_; }
    double mean() const { return 0.5 * (alpha_ + beta_); }
    double contrast() const { return beta_ - alpha_; }
    double tol_grid() const { return epsilon_ * 1e-9; }
    double value(Phase ph) const { return ph == Phase::alpha ? alpha_ : beta_; }

    // nullopt means the point lies on a discontinuity line.
    std::optional<double> value_at(Point pt) const;

    bool on_grid(double s) const;
    std::int64_t nearest_line(double s) const;
    double line(std::int64_t k) const { return static_cast<double>(k) * half_period(); }
    std::int64_t cell_index(double s) const;
    // Snap s to the grid when it is within tol_grid of a line.
    double snap(double s) const;

    LineTrace trace(Axis axis, double offset) const { return LineTrace(*this, axis, offset); }

private:
    double alpha_, beta_, epsilon_;
};

}  // namespace chessflow

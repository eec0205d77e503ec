#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chessflow/effective.hpp"
#include "chessflow/flow.hpp"
#include "chessflow/geometry.hpp"
#include "chessflow/medium.hpp"

namespace chessflow {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class ShapeKind { square, rectangle, vertices, octagon };
enum class Alignment { cell_corner, offset };

struct RunConfig {
    double alpha = -3.0;
    double beta = 1.0;
    double epsilon = 0.5;
    std::vector<double> epsilons;  // sweeps and comparisons; falls back to {epsilon}

    ShapeKind shape = ShapeKind::square;
    double side = 1.0;
    double width = 1.0;
    double height = 1.0;
    std::string vertex_file;
    double octagon_edge = 1.75;  // straight edges of the pinned octagon
    int octagon_steps = 4;       // unit steps on each diagonal

    Alignment alignment = Alignment::cell_corner;
    double offset_dx = 0.0;
    double offset_dy = 0.0;

    double t_max = 1.0;
    double dt_out = 0.01;
    std::string output_dir = "out";
    bool frames = true;

    std::vector<double> epsilon_list() const;
    // Throws ConfigError naming the offending field.
    void validate() const;
};

// key = value lines; '#' starts a comment.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// One "x y" pair per line; blank lines and '#' comments skipped.
std::vector<Point> parse_vertices(const std::string& text);

struct InitialData {
    Polyrectangle shape;
    Point centre;
};

// Square of side n*h, n the odd integer nearest l/h (ties go down), with
// lower-left corner at (dx, dy): for dx = dy = 0 all four corners sit at
// corners of alpha cells.
InitialData approximate_square(double l, double epsilon, double dx = 0.0, double dy = 0.0);
InitialData approximate_rectangle(double l1, double l2, double epsilon, double dx = 0.0, double dy = 0.0);
// Octagon whose straight edges lie on grid lines and whose diagonals are
// staircases of `steps` cell-sized steps.
Polyrectangle pinned_octagon(double straight, int steps, double epsilon);

InitialData initial_data(const RunConfig& cfg, double epsilon);

// Shape of a trajectory at time t: the last sample at or before t, or the
// centroid of the last shape once the flow has gone extinct.
std::vector<Point> shape_at(const FlowTrajectory& tr, double t);

// Effective (epsilon -> 0) state of the configured square or rectangle.
EffectiveState effective_at(const RunConfig& cfg, double t);
CaseTag effective_case(const RunConfig& cfg);

struct ComparisonRow {
    double epsilon = 0.0;
    double sup_distance = 0.0;
    double ratio = 0.0;  // to the previous row, 0 for the first
    double terminal_distance = 0.0;
    double alignment_distance = 0.0;  // sup over time between cell_corner and shifted flows
    Termination termination = Termination::t_max;
    double end_time = 0.0;
    std::vector<double> times;
    std::vector<double> distances;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
};

// Sup over the common grid k*dt_out <= t_max of the distance between two flows.
double trajectory_distance(const FlowTrajectory& a, const FlowTrajectory& b, double t_max, double dt);

ComparisonReport compare(const RunConfig& cfg, bool with_alignment = true);

struct SimulationSummary {
    Termination termination = Termination::t_max;
    double end_time = 0.0;
    std::size_t events = 0;
    std::size_t samples = 0;
    bool non_unique = false;
};

SimulationSummary cmd_simulate(const RunConfig& cfg);
CaseTag cmd_effective(const RunConfig& cfg);
ComparisonReport cmd_compare(const RunConfig& cfg);
std::vector<SimulationSummary> cmd_sweep(const RunConfig& cfg);

}  // namespace chessflow

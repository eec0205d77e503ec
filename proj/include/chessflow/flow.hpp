#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chessflow/cracking.hpp"
#include "chessflow/geometry.hpp"
#include "chessflow/medium.hpp"

namespace chessflow {

// A moving edge sweeps the open strip (strip*h, (strip+1)*h) of its normal
// coordinate; the forcing it feels is frozen to that strip until it reaches a
// grid line.
struct EdgeMode {
    bool pinned = true;
    std::int64_t strip = 0;
};

struct FlowState {
    Polyrectangle shape;
    std::vector<EdgeMode> modes;
    double time = 0.0;
    bool non_unique = false;

    std::vector<bool> pinned() const;
    bool stationary() const;
};

enum class EventKind { edge_vanished, hit_grid_line, calibrability_lost, unpinned, recracked, nonunique_branch, extinction };

const char* to_string(EventKind k);

struct FlowEvent {
    double time = 0.0;
    EventKind kind = EventKind::hit_grid_line;
    std::vector<std::size_t> indices;
    std::size_t edges_after = 0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct FlowOptions {
    double dt_out = 0.01;
    double max_step = 0.0;        // 0 means epsilon
    double step_fraction = 0.02;  // bound on |ds| per step, in units of epsilon
    double shrink_fraction = 0.1; // bound on the relative length loss of any edge per step
    double tol_event_factor = 1e-10;
    double dt_min = 1e-15;
    std::size_t max_events = 200000;
    std::size_t zeno_limit = 2000;
    bool check_invariants = true;
};

enum class Termination { extinction, stationary, t_max };

const char* to_string(Termination t);

struct Snapshot {
    double time = 0.0;
    Polyrectangle shape;
    std::vector<bool> pinned;
};

struct FlowTrajectory {
    std::vector<Snapshot> samples;
    std::vector<FlowEvent> events;
    Termination termination = Termination::t_max;
    double end_time = 0.0;
    bool non_unique = false;
    std::size_t invariant_violations = 0;
    std::vector<std::string> diagnostics;
};

struct AdvanceResult {
    std::vector<FlowEvent> events;
    bool reached_t_max = false;
    bool extinct = false;
    std::size_t invariant_violations = 0;
    std::vector<std::string> diagnostics;
};

// Breaking configuration of `poly` plus a motion mode for every edge.
FlowState initial_state(const Polyrectangle& poly, const ChessboardMedium& medium,
                        std::vector<FlowEvent>* events = nullptr);

std::vector<double> velocity_field(const FlowState& state, const ChessboardMedium& medium);
std::vector<Interval> filippov_intervals(const FlowState& state, const ChessboardMedium& medium);

AdvanceResult advance_to_next_event(FlowState& state, const ChessboardMedium& medium, double t_max,
                                    const FlowOptions& options = {});

FlowTrajectory run(const Polyrectangle& initial, const ChessboardMedium& medium, double t_max,
                   const FlowOptions& options = {});

}  // namespace chessflow

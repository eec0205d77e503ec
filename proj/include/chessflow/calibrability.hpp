#pragma once

#include <optional>
#include <vector>

#include "chessflow/geometry.hpp"
#include "chessflow/medium.hpp"

namespace chessflow {

enum class EndpointState { in_alpha, in_beta, jump_beta_alpha, jump_alpha_beta };

// A straight edge [p, q] on an off-grid trace with its convexity data.
// Everything in this module works on facets so that shifted edges and
// sub-edges produced by cracking can be examined without a polygon.
struct Facet {
    LineTrace trace;
    double p = 0.0;
    double q = 0.0;
    int chi = 0;
    int n_p = 0;
    int n_q = 0;

    double length() const { return q - p; }
};

Facet facet_of(const EdgeView& edge, const ChessboardMedium& medium);
// The edge moved by side*epsilon/4 along its inner normal (side = +1 inward).
Facet shifted_facet(const EdgeView& edge, const ChessboardMedium& medium, int side);

EndpointState endpoint_state(const LineTrace& trace, double s);

struct Breakpoint {
    double position = 0.0;
    double value = 0.0;
};

struct CandidateField {
    std::vector<Breakpoint> breakpoints;  // p, every jump strictly inside, q
    double velocity = 0.0;
    double slope_alpha = 0.0;
    double slope_beta = 0.0;
};

struct CalibrabilityVerdict {
    bool calibrable = false;
    double velocity = 0.0;
    std::optional<Breakpoint> violation;
};

// Translation velocity chi*2/l + mean + (D/2l)(l_beta - l_alpha), positive inward.
double facet_velocity(const Facet& f);

CandidateField candidate_field(const Facet& f);
// Largest |n| over the jumps strictly inside (p, q); 0 when there are none.
double max_interior_field(const Facet& f);

CalibrabilityVerdict oracle_is_calibrable(const Facet& f);
CalibrabilityVerdict classify_zero_curvature(const Facet& f);
CalibrabilityVerdict classify_positive_curvature(const Facet& f);

inline constexpr double calibrability_slack = 1e-12;

enum class ThresholdCase { both_alpha, alpha_then_jump, jump_then_alpha };

// For both_alpha the core length is l~ and sigma_tilde is meaningful; for the
// two mixed cases it is l* and sigma_star is meaningful.  m and h always refer
// to the core length.
struct BreakingThresholds {
    ThresholdCase config = ThresholdCase::both_alpha;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double core_length = 0.0;
    double m = 0.0;
    double h = 0.0;
    double sigma_tilde = 0.0;
    double sigma_star = 0.0;
};

double threshold_m(double core_length, double epsilon, double contrast);
double threshold_h(double core_length, double epsilon, double contrast);
// Critical distance from an alpha-interior endpoint to the first jump.
double threshold_sigma(double core_length, double epsilon, double contrast);

BreakingThresholds thresholds(const Facet& f);

// Convenience overloads for polygon edges (off-grid only).
CandidateField candidate_field(const EdgeView& e, const ChessboardMedium& m);
CalibrabilityVerdict oracle_is_calibrable(const EdgeView& e, const ChessboardMedium& m);
CalibrabilityVerdict classify_zero_curvature(const EdgeView& e, const ChessboardMedium& m);
CalibrabilityVerdict classify_positive_curvature(const EdgeView& e, const ChessboardMedium& m);
BreakingThresholds thresholds(const EdgeView& e, const ChessboardMedium& m);

}  // namespace chessflow

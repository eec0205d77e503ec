#pragma once

#include <cstddef>
#include <vector>

#include "chessflow/calibrability.hpp"
#include "chessflow/geometry.hpp"
#include "chessflow/medium.hpp"

namespace chessflow {

enum class Piece { minus, centre, plus };

struct SubEdge {
    Piece piece = Piece::centre;
    double p = 0.0;
    double q = 0.0;
    int chi = 0;
    int n_p = 0;
    int n_q = 0;
    double velocity = 0.0;
};

struct CrackingSetup {
    int multiplicity = 1;
    double p = 0.0;
    double p_b = 0.0;
    double q_b = 0.0;
    double q = 0.0;
    std::vector<SubEdge> sub_edges;  // in abscissa order, empty pieces omitted
    bool ambiguous = false;
    bool pinned = false;
};

struct BoundaryEdgeVelocities {
    double v_in = 0.0;
    double v_out = 0.0;
};

enum class GridRegime { pinned, inward, outward, repelling };

GridRegime grid_regime(const BoundaryEdgeVelocities& v);

BoundaryEdgeVelocities boundary_velocities(const EdgeView& edge, const ChessboardMedium& medium);

CrackingSetup cracking_setup(const Facet& f);
CrackingSetup cracking_setup(const EdgeView& edge, const ChessboardMedium& medium);
CrackingSetup cracking_setup_on_grid(const EdgeView& edge, const ChessboardMedium& medium);

struct BreakingConfiguration {
    Polyrectangle polyrect;
    std::vector<bool> pinned_flags;
    std::vector<std::size_t> origin_map;
    bool unique = true;
};

BreakingConfiguration breaking_configuration(const Polyrectangle& poly, const ChessboardMedium& medium);

// Expands edge `index` of `poly` according to `setup` and returns the new
// string.  `origin` receives, for each new entry, the source edge index
// (entries of other edges keep their own index).
Polyrectangle expand_edge(const Polyrectangle& poly, std::size_t index, const CrackingSetup& setup,
                          std::vector<std::size_t>* origin = nullptr);

}  // namespace chessflow

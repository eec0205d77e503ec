#include "chessflow/cracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chessflow {

GridRegime grid_regime(const BoundaryEdgeVelocities& v) {
    if (v.v_in <= 0.0 && v.v_out >= 0.0) return GridRegime::pinned;
    if (v.v_in > 0.0 && v.v_out >= 0.0) return GridRegime::inward;
    if (v.v_in <= 0.0 && v.v_out < 0.0) return GridRegime::outward;
    return GridRegime::repelling;
}

BoundaryEdgeVelocities boundary_velocities(const EdgeView& edge, const ChessboardMedium& medium) {
    if (!edge.on_grid) throw std::domain_error("boundary_velocities: edge is not on a discontinuity line");
    if (!(edge.length() > 0.0)) throw std::domain_error("boundary_velocities: zero-length edge");
    return {facet_velocity(shifted_facet(edge, medium, +1)), facet_velocity(shifted_facet(edge, medium, -1))};
}

namespace {

SubEdge make_sub(const Facet& parent, Piece piece, double p, double q, int chi, int n_p, int n_q) {
    SubEdge s{piece, p, q, chi, n_p, n_q, 0.0};
    Facet f{parent.trace, p, q, chi, n_p, n_q};
    auto v = oracle_is_calibrable(f);
    if (!v.calibrable)
        throw std::logic_error("cracking: sub-edge [" + std::to_string(p) + ", " + std::to_string(q) +
                               "] is not calibrable");
    s.velocity = v.velocity;
    return s;
}

}  // namespace

CrackingSetup cracking_setup(const Facet& f) {
    if (f.chi == -1) throw std::invalid_argument("cracking_setup: negative curvature edge");
    CrackingSetup c;
    c.p = c.p_b = f.p;
    c.q = c.q_b = f.q;
    auto verdict = oracle_is_calibrable(f);
    if (verdict.calibrable) {
        c.sub_edges.push_back({Piece::centre, f.p, f.q, f.chi, f.n_p, f.n_q, verdict.velocity});
        return c;
    }

    JumpKind first_kind, last_kind;
    if (f.chi == 1) {
        first_kind = JumpKind::beta_to_alpha;
        last_kind = JumpKind::alpha_to_beta;
    } else {
        first_kind = last_kind = f.n_p > 0 ? JumpKind::alpha_to_beta : JumpKind::beta_to_alpha;
    }
    auto jumps = f.trace.jumps_in(f.p, f.q);
    bool have_first = false, have_last = false;
    for (const auto& j : jumps) {
        if (j.kind == first_kind && !have_first) {
            c.p_b = j.position;
            have_first = true;
        }
        if (j.kind == last_kind) {
            c.q_b = j.position;
            have_last = true;
        }
    }
    if (f.chi == 0 && !(have_first && have_last))
        throw std::logic_error("cracking: no breaking point of the required kind");
    // A convex edge needs a beta-alpha jump before an alpha-beta jump to host L^c.
    if (f.chi == 1 && !(have_first && have_last && c.q_b > c.p_b))
        throw std::domain_error("cracking: convex edge has no admissible core");
    const double tol = f.trace.tol();
    if (std::abs(c.p_b - f.p) <= tol) c.p_b = f.p;
    if (std::abs(c.q_b - f.q) <= tol) c.q_b = f.q;

    if (c.p_b > f.p) c.sub_edges.push_back(make_sub(f, Piece::minus, f.p, c.p_b, 0, f.n_p, f.n_p));
    if (c.q_b > c.p_b) c.sub_edges.push_back(make_sub(f, Piece::centre, c.p_b, c.q_b, f.chi, f.n_p, f.n_q));
    if (f.q > c.q_b) c.sub_edges.push_back(make_sub(f, Piece::plus, c.q_b, f.q, 0, f.n_q, f.n_q));
    if (c.sub_edges.size() < 2) throw std::logic_error("cracking: non-calibrable edge did not split");
    c.multiplicity = 2 * static_cast<int>(c.sub_edges.size()) - 1;
    return c;
}

CrackingSetup cracking_setup(const EdgeView& edge, const ChessboardMedium& medium) {
    return cracking_setup(facet_of(edge, medium));
}

CrackingSetup cracking_setup_on_grid(const EdgeView& edge, const ChessboardMedium& medium) {
    auto bv = boundary_velocities(edge, medium);
    switch (grid_regime(bv)) {
        case GridRegime::inward: return cracking_setup(shifted_facet(edge, medium, +1));
        case GridRegime::outward: return cracking_setup(shifted_facet(edge, medium, -1));
        case GridRegime::pinned:
        case GridRegime::repelling: break;
    }
    CrackingSetup c;
    c.p = c.p_b = edge.p;
    c.q = c.q_b = edge.q;
    c.pinned = true;
    c.ambiguous = grid_regime(bv) == GridRegime::repelling;
    c.sub_edges.push_back({Piece::centre, edge.p, edge.q, edge.chi, edge.n_p, edge.n_q, 0.0});
    return c;
}

namespace {

// Whether the lower-abscissa piece of two adjacent pieces runs ahead (further
// inward) once the edge has split.
bool lower_ahead(const SubEdge& lo, const SubEdge& hi, int parent_chi) {
    if (parent_chi == 1) {
        if (lo.piece == Piece::minus && hi.piece == Piece::centre) return true;
        if (lo.piece == Piece::centre && hi.piece == Piece::plus) return false;
        return lo.velocity > hi.velocity;
    }
    // chi = 0: v- > vc > v+ when n0 = -1 and the reverse when n0 = +1.
    return lo.n_p < 0;
}

void append_expansion(std::vector<Direction>& normals, std::vector<double>& offsets, std::vector<std::size_t>& origin,
                      const Polyrectangle& poly, std::size_t i, const CrackingSetup& setup) {
    Direction nu = poly.normal(i);
    double s = poly.offset(i);
    if (setup.sub_edges.size() <= 1) {
        normals.push_back(nu);
        offsets.push_back(s);
        origin.push_back(i);
        return;
    }
    int parent_chi = poly.chi(i);
    std::vector<SubEdge> pieces = setup.sub_edges;
    const bool forward = traversal_sign(nu) > 0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (k > 0) {
            const SubEdge& lo = pieces[k - 1];
            const SubEdge& hi = pieces[k];
            bool first_ahead = forward ? lower_ahead(lo, hi, parent_chi) : !lower_ahead(lo, hi, parent_chi);
            normals.push_back(first_ahead ? predecessor(nu) : successor(nu));
            offsets.push_back(lo.q);
            origin.push_back(i);
        }
        normals.push_back(nu);
        offsets.push_back(s);
        origin.push_back(i);
    }
    if (!forward) {
        // Pieces were emitted in abscissa order; reverse this block so it follows the traversal.
        std::size_t n = 2 * pieces.size() - 1;
        auto nb = normals.end() - static_cast<std::ptrdiff_t>(n);
        auto ob = offsets.end() - static_cast<std::ptrdiff_t>(n);
        std::reverse(nb, normals.end());
        std::reverse(ob, offsets.end());
    }
}

}  // namespace

Polyrectangle expand_edge(const Polyrectangle& poly, std::size_t index, const CrackingSetup& setup,
                          std::vector<std::size_t>* origin) {
    std::vector<Direction> normals;
    std::vector<double> offsets;
    std::vector<std::size_t> org;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (i == index) {
            append_expansion(normals, offsets, org, poly, i, setup);
        } else {
            normals.push_back(poly.normal(i));
            offsets.push_back(poly.offset(i));
            org.push_back(i);
        }
    }
    if (origin) *origin = std::move(org);
    return Polyrectangle(std::move(normals), std::move(offsets));
}

BreakingConfiguration breaking_configuration(const Polyrectangle& poly, const ChessboardMedium& medium) {
    const double tol = medium.tol_grid();
    std::vector<CrackingSetup> setups(poly.size());
    std::vector<bool> grid_parent(poly.size(), false);
    BreakingConfiguration out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        EdgeView e = poly.edge(i, medium);
        if (e.chi == -1) throw std::invalid_argument("breaking_configuration: edge " + std::to_string(i) + " has chi = -1");
        if (e.length() <= tol) {
            setups[i].p = setups[i].p_b = e.p;
            setups[i].q = setups[i].q_b = e.q;
            setups[i].pinned = e.on_grid;
            continue;
        }
        if (e.on_grid) {
            setups[i] = cracking_setup_on_grid(e, medium);
            grid_parent[i] = true;
        } else {
            setups[i] = cracking_setup(e, medium);
        }
        if (setups[i].ambiguous) out.unique = false;
    }

    std::vector<Direction> normals;
    std::vector<double> offsets;
    for (std::size_t i = 0; i < poly.size(); ++i)
        append_expansion(normals, offsets, out.origin_map, poly, i, setups[i]);
    out.polyrect = Polyrectangle(std::move(normals), std::move(offsets));

    out.pinned_flags.assign(out.polyrect.size(), false);
    for (std::size_t j = 0; j < out.polyrect.size(); ++j) {
        std::size_t src = out.origin_map[j];
        EdgeView e = out.polyrect.edge(j, medium);
        if (e.length() <= tol) {
            out.pinned_flags[j] = e.on_grid;
        } else if (setups[src].multiplicity == 1) {
            out.pinned_flags[j] = setups[src].pinned;
        } else if (grid_parent[src]) {
            auto regime = grid_regime(boundary_velocities(e, medium));
            out.pinned_flags[j] = regime == GridRegime::pinned || regime == GridRegime::repelling;
            if (regime == GridRegime::repelling) out.unique = false;
        }
    }
    return out;
}

}  // namespace chessflow

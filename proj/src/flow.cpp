#include "chessflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "chessflow/calibrability.hpp"

namespace chessflow {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::edge_vanished: return "edge_vanished";
        case EventKind::hit_grid_line: return "hit_grid_line";
        case EventKind::calibrability_lost: return "calibrability_lost";
        case EventKind::unpinned: return "unpinned";
        case EventKind::recracked: return "recracked";
        case EventKind::nonunique_branch: return "nonunique_branch";
        case EventKind::extinction: return "extinction";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::extinction: return "extinction";
        case Termination::stationary: return "stationary";
        case Termination::t_max: return "t_max";
    }
    return "?";
}

std::vector<bool> FlowState::pinned() const {
    std::vector<bool> out(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) out[i] = modes[i].pinned;
    return out;
}

bool FlowState::stationary() const {
    return std::all_of(modes.begin(), modes.end(), [](const EdgeMode& m) { return m.pinned; });
}

namespace {

using Vec = std::vector<double>;

double tol_len(const ChessboardMedium& m) { return m.tol_grid(); }

bool holds(GridRegime r) { return r == GridRegime::pinned || r == GridRegime::repelling; }

// Everything about the boundary that stays fixed between two events.
class Frame {
public:
    Frame(const FlowState& st, const ChessboardMedium& m) : m_(m), modes_(st.modes), n_(st.shape.size()) {
        if (modes_.size() != n_) throw std::logic_error("flow state: modes out of sync with the boundary");
        const double q = 0.25 * m.epsilon();
        for (std::size_t i = 0; i < n_; ++i) {
            EdgeView e = st.shape.edge(i, m);
            Direction d = e.normal;
            Axis ax = line_axis(d);
            info_.push_back({e.chi, e.n_p, e.n_q, traversal_sign(d), axis_sign(d)});
            if (modes_[i].pinned) {
                double s = e.line_offset;
                traces_.push_back({m.trace(ax, s + info_[i].sign * q), m.trace(ax, s - info_[i].sign * q)});
            } else {
                auto t = LineTrace::in_strip(m, ax, modes_[i].strip);
                traces_.push_back({t, t});
            }
        }
    }

    std::size_t size() const { return n_; }
    std::size_t prev(std::size_t i) const { return i == 0 ? n_ - 1 : i - 1; }
    std::size_t next(std::size_t i) const { return i + 1 == n_ ? 0 : i + 1; }
    bool pinned(std::size_t i) const { return modes_[i].pinned; }
    std::int64_t strip(std::size_t i) const { return modes_[i].strip; }
    int chi(std::size_t i) const { return info_[i].chi; }
    int ts(std::size_t i) const { return info_[i].ts; }

    double length(const Vec& s, std::size_t i) const { return (s[next(i)] - s[prev(i)]) * info_[i].ts; }

    double speed(const LineTrace& tr, const Vec& s, std::size_t i) const {
        double a = s[prev(i)], b = s[next(i)];
        double lo = std::min(a, b), hi = std::max(a, b);
        double mean = hi > lo ? tr.integral(lo, hi) / (hi - lo) : m_.mean();
        if (info_[i].chi == 0) return mean;
        double ell = length(s, i);
        if (!(ell > 0.0)) throw std::runtime_error("flow: curved edge " + std::to_string(i) + " collapsed");
        return info_[i].chi * 2.0 / ell + mean;
    }

    double velocity(const Vec& s, std::size_t i) const {
        return modes_[i].pinned ? 0.0 : speed(traces_[i].inner, s, i);
    }

    void derivative(const Vec& s, Vec& out) const {
        out.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = info_[i].sign * velocity(s, i);
    }

    BoundaryEdgeVelocities grid_velocities(const Vec& s, std::size_t i) const {
        return {speed(traces_[i].inner, s, i), speed(traces_[i].outer, s, i)};
    }

    bool holds_pinned(const Vec& s, std::size_t i) const {
        if (length(s, i) <= tol_len(m_)) return true;
        return holds(grid_regime(grid_velocities(s, i)));
    }

    // 1 + slack - max interior |n|; negative once calibrability is lost.
    double margin(const Vec& s, std::size_t i) const {
        double a = s[prev(i)], b = s[next(i)];
        double lo = std::min(a, b), hi = std::max(a, b);
        if (hi - lo <= tol_len(m_)) return 1.0;
        Facet f{traces_[i].inner, lo, hi, info_[i].chi, info_[i].n_p, info_[i].n_q};
        return 1.0 + calibrability_slack - max_interior_field(f);
    }

    const ChessboardMedium& medium() const { return m_; }

private:
    struct Info {
        int chi, n_p, n_q, ts, sign;
    };
    struct Traces {
        LineTrace inner;  // moving edges: strip trace; pinned edges: inward shift
        LineTrace outer;
    };
    const ChessboardMedium& m_;
    std::vector<EdgeMode> modes_;
    std::size_t n_;
    std::vector<Info> info_;
    std::vector<Traces> traces_;
};

struct Values {
    Vec len;
    std::vector<char> held;
    Vec margin;
};

Values evaluate(const Frame& fr, const Vec& s) {
    Values v;
    const std::size_t n = fr.size();
    v.len.resize(n);
    v.held.assign(n, 1);
    v.margin.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        v.len[i] = fr.length(s, i);
        if (fr.pinned(i))
            v.held[i] = fr.holds_pinned(s, i) ? 1 : 0;
        else if (v.len[i] > tol_len(fr.medium()))
            v.margin[i] = fr.margin(s, i);
    }
    return v;
}

struct Crossing {
    EventKind kind;
    std::size_t edge;
};

std::vector<Crossing> crossings(const Frame& fr, const Vec& s0, const Values& v0, const Vec& s1, const Values& v1) {
    std::vector<Crossing> out;
    const double tl = tol_len(fr.medium());
    const auto& m = fr.medium();
    for (std::size_t i = 0; i < fr.size(); ++i) {
        double l0 = v0.len[i], l1 = v1.len[i];
        if ((l0 > tl && l1 <= tl) || (l0 >= -tl && l0 <= tl && l1 < -tl)) out.push_back({EventKind::edge_vanished, i});
        if (fr.pinned(i)) {
            if (v0.held[i] && !v1.held[i]) out.push_back({EventKind::unpinned, i});
            continue;
        }
        double lo = m.line(fr.strip(i)), hi = m.line(fr.strip(i) + 1);
        bool down = (s0[i] > lo && s1[i] <= lo) || (s0[i] == lo && s1[i] < lo);
        bool up = (s0[i] < hi && s1[i] >= hi) || (s0[i] == hi && s1[i] > hi);
        if (down || up) out.push_back({EventKind::hit_grid_line, i});
        if (v0.margin[i] >= 0.0 && v1.margin[i] < 0.0) out.push_back({EventKind::calibrability_lost, i});
    }
    return out;
}

Vec rk4(const Frame& fr, const Vec& s, const Vec& k1, double h) {
    const std::size_t n = s.size();
    Vec y(n), k2, k3, k4;
    for (std::size_t i = 0; i < n; ++i) y[i] = s[i] + 0.5 * h * k1[i];
    fr.derivative(y, k2);
    for (std::size_t i = 0; i < n; ++i) y[i] = s[i] + 0.5 * h * k2[i];
    fr.derivative(y, k3);
    for (std::size_t i = 0; i < n; ++i) y[i] = s[i] + h * k3[i];
    fr.derivative(y, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return y;
}

Polyrectangle with_offsets(const Polyrectangle& p, const Vec& s) {
    return Polyrectangle(p.normals(), s);
}

// Removes every flagged edge (and off-grid flat leftovers) by joining its two
// parallel neighbours.
void merge_vanished(Polyrectangle& P, std::vector<bool> flag, const ChessboardMedium& m) {
    const double tl = tol_len(m);
    while (true) {
        const std::size_t n = P.size();
        for (std::size_t i = 0; i < n; ++i)
            if (!flag[i] && P.chi(i) == 0 && std::abs(P.length(i)) <= tl && !m.on_grid(P.offset(i))) flag[i] = true;
        auto it = std::find(flag.begin(), flag.end(), true);
        if (it == flag.end()) return;
        std::size_t i = static_cast<std::size_t>(it - flag.begin());
        if (P.chi(i) != 0) throw std::runtime_error("flow: curved edge vanished (boundary pinch-off)");
        std::size_t a = P.prev(i), b = P.next(i);
        if (P.normal(a) != P.normal(b)) throw std::logic_error("flow: vanished edge between non-parallel edges");
        if (n <= 4) throw std::runtime_error("flow: boundary degenerated below four edges");
        double sa = P.offset(a), sb = P.offset(b);
        double merged = m.on_grid(sa) ? m.snap(sa) : m.on_grid(sb) ? m.snap(sb) : 0.5 * (sa + sb);
        std::vector<Direction> normals;
        Vec offsets;
        std::vector<bool> nf;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i || k == b) continue;
            normals.push_back(P.normal(k));
            offsets.push_back(k == a ? merged : P.offset(k));
            nf.push_back(flag[k]);
        }
        P = Polyrectangle(std::move(normals), std::move(offsets));
        flag = std::move(nf);
    }
}

// Assigns a motion mode to every edge, cracking edges whose motion would be
// undefined otherwise.  Appends recracked / nonunique_branch events.
void classify(FlowState& st, const ChessboardMedium& m, std::vector<FlowEvent>& events) {
    const double tl = tol_len(m);
    std::vector<std::size_t> cracked, ambiguous;
    // Side each edge inherited from an on-grid crack (0: none).  A repelling
    // piece follows it, so the step normals chosen by the crack stay valid.
    std::vector<int> prefer(st.shape.size(), 0);
    auto crack = [&](std::size_t i, const CrackingSetup& setup, int side) {
        std::vector<std::size_t> origin;
        st.shape = expand_edge(st.shape, i, setup, &origin);
        std::vector<int> np(origin.size());
        for (std::size_t k = 0; k < origin.size(); ++k) np[k] = origin[k] == i ? side : prefer[origin[k]];
        prefer = std::move(np);
        cracked.push_back(i);
    };
    for (std::size_t iter = 0;; ++iter) {
        if (iter > 4 * st.shape.size() + 16) throw std::logic_error("flow: cracking did not settle");
        Polyrectangle& P = st.shape;
        st.modes.assign(P.size(), EdgeMode{});
        ambiguous.clear();
        bool expanded = false;
        for (std::size_t i = 0; i < P.size() && !expanded; ++i) {
            EdgeView e = P.edge(i, m);
            if (e.chi == -1) throw std::runtime_error("flow: edge " + std::to_string(i) + " has negative curvature");
            if (e.length() <= tl) continue;
            if (e.on_grid) {
                auto bv = boundary_velocities(e, m);
                GridRegime r = grid_regime(bv);
                if (r == GridRegime::repelling) ambiguous.push_back(i);
                if (r == GridRegime::pinned || (r == GridRegime::repelling && prefer[i] == 0)) continue;
                int side = r == GridRegime::inward ? 1 : r == GridRegime::outward ? -1 : prefer[i];
                auto setup = cracking_setup(shifted_facet(e, m, side));
                if (setup.multiplicity > 1) {
                    crack(i, setup, side);
                    expanded = true;
                    break;
                }
                std::int64_t k = m.nearest_line(e.line_offset);
                int dir = side * axis_sign(e.normal);
                st.modes[i] = {false, dir > 0 ? k : k - 1};
            } else {
                Facet f = facet_of(e, m);
                if (!oracle_is_calibrable(f).calibrable) {
                    crack(i, cracking_setup(f), 0);
                    expanded = true;
                    break;
                }
                st.modes[i] = {false, m.cell_index(e.line_offset)};
            }
        }
        if (!expanded) break;
    }
    if (!cracked.empty()) events.push_back({st.time, EventKind::recracked, cracked, 0});
    if (!ambiguous.empty()) {
        st.non_unique = true;
        events.push_back({st.time, EventKind::nonunique_branch, ambiguous, 0});
    }
}

void settle(FlowState& st, const ChessboardMedium& m, std::vector<bool> vanished, std::vector<FlowEvent>& events) {
    Vec s = st.shape.offsets();
    for (double& x : s) x = m.snap(x);
    st.shape = with_offsets(st.shape, s);
    merge_vanished(st.shape, std::move(vanished), m);
    classify(st, m, events);
    try {
        st.shape.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("flow: self-collision at t = ") + std::to_string(st.time) + ": " + e.what());
    }
    for (auto& ev : events) ev.edges_after = st.shape.size();
}

std::vector<FlowEvent> reconfigure(FlowState& st, const ChessboardMedium& m, std::vector<Crossing> cr) {
    // A moving edge stopped within snapping distance of its strip boundary has
    // reached the grid line, whatever crossing ended the step.
    for (auto& c : cr)
        if (c.kind == EventKind::calibrability_lost && m.on_grid(st.shape.offset(c.edge)))
            c.kind = EventKind::hit_grid_line;
    for (std::size_t i = 0; i < st.shape.size(); ++i) {
        if (st.modes[i].pinned || !m.on_grid(st.shape.offset(i))) continue;
        bool listed = std::any_of(cr.begin(), cr.end(), [&](const Crossing& c) {
            return c.edge == i && c.kind == EventKind::hit_grid_line;
        });
        if (!listed) cr.push_back({EventKind::hit_grid_line, i});
    }
    std::sort(cr.begin(), cr.end(), [](const Crossing& a, const Crossing& b) { return a.edge < b.edge; });
    std::vector<FlowEvent> events;
    const EventKind order[] = {EventKind::edge_vanished, EventKind::hit_grid_line, EventKind::unpinned,
                               EventKind::calibrability_lost};
    for (EventKind k : order) {
        FlowEvent ev{st.time, k, {}, 0};
        for (const auto& c : cr)
            if (c.kind == k) ev.indices.push_back(c.edge);
        if (!ev.indices.empty()) events.push_back(std::move(ev));
    }
    Vec s = st.shape.offsets();
    std::vector<bool> vanished(s.size(), false);
    for (const auto& c : cr) {
        if (c.kind == EventKind::hit_grid_line) s[c.edge] = m.line(m.nearest_line(s[c.edge]));
        if (c.kind == EventKind::edge_vanished) vanished[c.edge] = true;
    }
    st.shape = with_offsets(st.shape, s);
    settle(st, m, std::move(vanished), events);
    return events;
}

void note(AdvanceResult& r, std::string msg) {
    ++r.invariant_violations;
    if (r.diagnostics.size() < 20) r.diagnostics.push_back(std::move(msg));
}

}  // namespace

FlowState initial_state(const Polyrectangle& poly, const ChessboardMedium& medium, std::vector<FlowEvent>* events) {
    poly.validate();
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (poly.chi(i) == -1)
            throw std::invalid_argument("initial datum: edge " + std::to_string(i) + " has negative curvature");
    FlowState st;
    st.shape = poly;
    std::vector<FlowEvent> ev;
    settle(st, medium, std::vector<bool>(poly.size(), false), ev);
    if (events) events->insert(events->end(), ev.begin(), ev.end());
    return st;
}

std::vector<double> velocity_field(const FlowState& state, const ChessboardMedium& medium) {
    Frame fr(state, medium);
    const Vec& s = state.shape.offsets();
    std::vector<double> v(fr.size(), 0.0);
    for (std::size_t i = 0; i < fr.size(); ++i) {
        if (fr.pinned(i)) continue;
        if (fr.length(s, i) > tol_len(medium) && fr.margin(s, i) < 0.0)
            throw std::domain_error("velocity_field: edge " + std::to_string(i) + " is not calibrable");
        v[i] = fr.velocity(s, i);
    }
    return v;
}

std::vector<Interval> filippov_intervals(const FlowState& state, const ChessboardMedium& medium) {
    const Polyrectangle& P = state.shape;
    std::vector<Interval> out;
    for (std::size_t i = 0; i < P.size(); ++i) {
        EdgeView e = P.edge(i, medium);
        if (e.on_grid) {
            if (e.length() <= tol_len(medium)) {
                out.push_back({medium.alpha(), medium.beta()});
            } else {
                auto bv = boundary_velocities(e, medium);
                out.push_back({std::min(bv.v_in, bv.v_out), std::max(bv.v_in, bv.v_out)});
            }
        } else {
            Facet f = facet_of(e, medium);
            double v = e.length() > 0.0 ? facet_velocity(f) : medium.mean();
            out.push_back({v, v});
        }
    }
    return out;
}

AdvanceResult advance_to_next_event(FlowState& st, const ChessboardMedium& m, double t_max, const FlowOptions& o) {
    AdvanceResult res;
    if (t_max < st.time) throw std::invalid_argument("advance_to_next_event: t_max is earlier than the state time");
    if (st.stationary()) {
        st.time = t_max;
        res.reached_t_max = true;
        return res;
    }
    Frame fr(st, m);
    const std::size_t n = fr.size();
    const double eps = m.epsilon();
    const double tl = tol_len(m);
    const double tol_event = o.tol_event_factor * eps;
    const double hmax = o.max_step > 0.0 ? o.max_step : eps;

    Vec s = st.shape.offsets();
    Values v0 = evaluate(fr, s);
    Vec d;
    std::vector<int> vsign(n, 0);
    std::vector<char> fresh(n, 0);
    for (std::size_t i = 0; i < n; ++i) fresh[i] = fr.pinned(i) && v0.len[i] <= tl;

    auto finish = [&](const Vec& y) { st.shape = with_offsets(st.shape, y); };

    while (true) {
        double remaining = t_max - st.time;
        if (remaining <= o.dt_min * std::max(1.0, std::abs(st.time))) {
            st.time = t_max;
            finish(s);
            res.reached_t_max = true;
            return res;
        }
        fr.derivative(s, d);

        // A four-sided boundary can only disappear by shrinking to a point.
        std::optional<std::size_t> shortest;
        if (n == 4) {
            for (std::size_t i = 0; i < n; ++i)
                if (!shortest || v0.len[i] < v0.len[*shortest]) shortest = i;
            double ell = v0.len[*shortest];
            double rate = fr.ts(*shortest) * (d[fr.next(*shortest)] - d[fr.prev(*shortest)]);
            if (ell < 1e-5 * eps && rate < 0.0) {
                st.time += ell / (2.0 * -rate);
                finish(s);
                res.extinct = true;
                res.events.push_back({st.time, EventKind::extinction, {*shortest}, 0});
                return res;
            }
        }

        if (o.check_invariants) {
            for (std::size_t i = 0; i < n; ++i) {
                if (fr.pinned(i) || std::abs(d[i]) <= 1e-12) continue;
                int sg = d[i] > 0 ? 1 : -1;
                if (vsign[i] == 0)
                    vsign[i] = sg;
                else if (vsign[i] != sg)
                    note(res, "edge " + std::to_string(i) + " reversed direction at t = " + std::to_string(st.time));
            }
        }

        double h = std::min(hmax, remaining);
        double vmax = 0.0;
        for (double x : d) vmax = std::max(vmax, std::abs(x));
        if (vmax > 0.0) h = std::min(h, o.step_fraction * eps / vmax);
        // RK4 stages must not see a collapsed edge: its neighbours' speeds are
        // meaningless once their endpoints pass each other.
        for (std::size_t i = 0; i < n; ++i) {
            double rate = fr.ts(i) * (d[fr.next(i)] - d[fr.prev(i)]);
            if (rate < 0.0 && v0.len[i] > tl) h = std::min(h, o.shrink_fraction * v0.len[i] / -rate);
        }
        if (h < o.dt_min) throw std::runtime_error("flow: step size collapsed at t = " + std::to_string(st.time));

        Vec s1 = rk4(fr, s, d, h);
        Values v1 = evaluate(fr, s1);
        auto cr = crossings(fr, s, v0, s1, v1);
        if (cr.empty()) {
            if (o.check_invariants) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (!fresh[i] || v1.len[i] <= tl) continue;
                    fresh[i] = 0;
                    auto bv = fr.grid_velocities(s1, i);
                    if (std::abs(bv.v_in - m.alpha()) > 1e-9 * (1.0 - m.alpha()) ||
                        std::abs(bv.v_out - m.beta()) > 1e-9 * (1.0 + m.beta()))
                        note(res, "inserted edge " + std::to_string(i) + " opened with v_in = " + std::to_string(bv.v_in) +
                                      ", v_out = " + std::to_string(bv.v_out));
                }
            }
            s = std::move(s1);
            v0 = std::move(v1);
            st.time += h;
            continue;
        }

        double lo = 0.0, hi = h;
        Vec shi = s1;
        Values vhi = v1;
        while (hi - lo > tol_event) {
            double mid = 0.5 * (lo + hi);
            Vec sm = rk4(fr, s, d, mid);
            Values vm = evaluate(fr, sm);
            if (!crossings(fr, s, v0, sm, vm).empty()) {
                hi = mid;
                shi = std::move(sm);
                vhi = std::move(vm);
            } else {
                lo = mid;
            }
        }
        cr = crossings(fr, s, v0, shi, vhi);
        st.time += hi;
        finish(shi);
        res.events = reconfigure(st, m, cr);
        return res;
    }
}

FlowTrajectory run(const Polyrectangle& initial, const ChessboardMedium& medium, double t_max, const FlowOptions& o) {
    if (!(o.dt_out > 0.0)) throw std::invalid_argument("run: dt_out must be positive");
    if (t_max < 0.0) throw std::invalid_argument("run: negative t_max");
    FlowTrajectory tr;
    FlowState st = initial_state(initial, medium, &tr.events);
    tr.non_unique = st.non_unique;
    auto snapshot = [&]() { tr.samples.push_back({st.time, st.shape, st.pinned()}); };
    snapshot();

    const double tol_event = o.tol_event_factor * medium.epsilon();
    std::size_t k = 1, zeno = 0;
    double last_event = 0.0;
    while (true) {
        if (st.stationary()) {
            tr.termination = Termination::stationary;
            break;
        }
        if (st.time >= t_max) {
            tr.termination = Termination::t_max;
            break;
        }
        double target = std::min(static_cast<double>(k) * o.dt_out, t_max);
        auto res = advance_to_next_event(st, medium, target, o);
        tr.invariant_violations += res.invariant_violations;
        for (auto& d : res.diagnostics)
            if (tr.diagnostics.size() < 50) tr.diagnostics.push_back(std::move(d));
        tr.non_unique = tr.non_unique || st.non_unique;
        if (res.extinct) {
            tr.events.insert(tr.events.end(), res.events.begin(), res.events.end());
            snapshot();
            tr.termination = Termination::extinction;
            break;
        }
        if (!res.events.empty()) {
            tr.events.insert(tr.events.end(), res.events.begin(), res.events.end());
            if (tr.events.size() > o.max_events) throw std::runtime_error("flow: event budget exhausted");
            zeno = st.time - last_event <= 100.0 * tol_event ? zeno + 1 : 0;
            if (zeno > o.zeno_limit)
                throw std::runtime_error("flow: events accumulate at t = " + std::to_string(st.time));
            last_event = st.time;
            snapshot();
            continue;
        }
        snapshot();
        ++k;
    }
    tr.end_time = st.time;
    return tr;
}

}  // namespace chessflow

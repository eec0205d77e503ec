// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--expect-fail N[,M...]]
// Exit status is 0 when the failing criteria are exactly the expected ones.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chessflow/calibrability.hpp"
#include "chessflow/effective.hpp"
#include "chessflow/flow.hpp"
#include "chessflow/harness.hpp"

using namespace chessflow;

namespace {

// Tolerances and bounds.
constexpr int c1_samples = 10000;
constexpr double c1_band = 1e-10;
constexpr int c2_samples = 100;
constexpr double c2_flip_tol = 1e-9;
constexpr double c4_sup_factor = 3.0;
constexpr double c4_ratio_lo = 0.35, c4_ratio_hi = 0.65;
constexpr double c4_extinction_tol = 0.1;
constexpr double c5_ratio_lo = 0.35, c5_ratio_hi = 0.65;
constexpr double c5_l0 = 1.5;
constexpr double c6_factor = 3.0;
constexpr double c7_tol = 1e-6;
constexpr int c8_samples = 50;
constexpr double c8_tol = 1e-9;
constexpr int c9_samples = 1000;
constexpr double c9_tol = 1e-12;
constexpr double c10_factor = 4.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double off_grid_offset(std::mt19937_64& rng, double h) {
    std::uniform_real_distribution<double> u(0.0, 20.0 * h);
    for (;;) {
        double y = u(rng);
        double r = std::fmod(y, h);
        if (r > 1e-6 * h && r < h - 1e-6 * h) return y;
    }
}

// 1. Closed-form verdicts against the breakpoint oracle.
Outcome criterion1() {
    ChessboardMedium m(-3.0, 1.0, 0.5);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pos(0.0, 10.0 * m.epsilon());
    std::uniform_real_distribution<double> len(0.0, 5.0 * m.epsilon());
    int disagree = 0, banded = 0, calibrable = 0;
    for (int k = 0; k < c1_samples; ++k) {
        LineTrace tr = m.trace(Axis::horizontal, off_grid_offset(rng, m.half_period()));
        double p = pos(rng), l = len(rng);
        if (!(l > 0.0)) l = 1e-3;
        int chi = rng() % 2 ? 1 : 0;
        int n0 = rng() % 2 ? 1 : -1;
        Facet f{tr, p, p + l, chi, chi == 1 ? -1 : n0, chi == 1 ? 1 : n0};
        auto oracle = oracle_is_calibrable(f);
        auto closed = chi == 1 ? classify_positive_curvature(f) : classify_zero_curvature(f);
        calibrable += oracle.calibrable;
        if (oracle.calibrable == closed.calibrable) continue;
        if (std::abs(max_interior_field(f) - 1.0) <= c1_band)
            ++banded;
        else
            ++disagree;
    }
    return {disagree == 0, fmt("%d edges, %d calibrable, %d disagreements, %d inside the 1e-10 band", c1_samples,
                               calibrable, disagree, banded)};
}

// 2. The oracle verdict flips at sigma_tilde for symmetric alpha-phase endpoints.
Outcome criterion2() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ua(-5.0, -0.5), ub(0.5, 5.0), ue(0.05, 1.0);
    int done = 0, bad = 0, tries = 0;
    double worst = 0.0;
    while (done < c2_samples && tries < 100000) {
        ++tries;
        double a = ua(rng), b = ub(rng), e = ue(rng);
        if (e >= 8.0 / (b - a)) continue;
        ChessboardMedium m(a, b, e);
        const double h = m.half_period(), D = b - a;
        LineTrace tr = LineTrace::in_strip(m, Axis::horizontal, static_cast<std::int64_t>(rng() % 7) - 3);
        std::int64_t i0 = static_cast<std::int64_t>(rng() % 9) - 4;
        if (tr.phase_of_cell(i0 - 1) != Phase::alpha) ++i0;
        std::int64_t cells = 2 * static_cast<std::int64_t>(rng() % 20) + 3;  // odd: alpha on both sides
        // Core: the jump span less one cell at each end.
        double core = static_cast<double>(cells - 2) * h;
        if (D * (core + 0.5 * e) - 4.0 <= 0.0) continue;
        double st = threshold_sigma(core, e, D);
        if (!(st > 0.0 && st < h - 2.0 * c2_flip_tol)) continue;
        auto verdict = [&](double s) {
            Facet f{tr, static_cast<double>(i0) * h - s, static_cast<double>(i0 + cells) * h + s, 1, -1, 1};
            return oracle_is_calibrable(f).calibrable;
        };
        bool above = verdict(st + c2_flip_tol), below = verdict(st - c2_flip_tol);
        if (!above || below) ++bad;
        // Locate the flip by bisection for the report.
        double lo = 1e-15, hi = h * (1.0 - 1e-12);
        if (!verdict(lo) && verdict(hi)) {
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi);
                (verdict(mid) ? hi : lo) = mid;
            }
            worst = std::max(worst, std::abs(hi - st));
        }
        ++done;
    }
    return {done == c2_samples && bad == 0,
            fmt("%d configurations, %d misplaced flips, max |flip - sigma_tilde| = %.2e", done, bad, worst)};
}

// 3. The pinned octagon does not move.
Outcome criterion3() {
    RunConfig cfg;
    cfg.alpha = -3.0;
    cfg.beta = 1.0;
    cfg.epsilon = 0.5;
    cfg.shape = ShapeKind::octagon;
    cfg.octagon_edge = 2.0;
    cfg.octagon_steps = 4;
    ChessboardMedium m(cfg.alpha, cfg.beta, cfg.epsilon);
    auto init = initial_data(cfg, cfg.epsilon);
    FlowOptions o;
    o.dt_out = 0.5;
    auto tr = run(init.shape, m, 10.0, o);
    double moved = 0.0;
    const auto& first = tr.samples.front().shape;
    for (const auto& s : tr.samples) {
        if (s.shape.size() != first.size()) {
            moved = INFINITY;
            break;
        }
        for (std::size_t i = 0; i < s.shape.size(); ++i)
            moved = std::max(moved, std::abs(s.shape.offset(i) - first.offset(i)));
    }
    std::size_t after = 0;
    for (const auto& e : tr.events) after += e.time > 0.0;
    bool ok = moved == 0.0 && after == 0 && tr.termination == Termination::stationary;
    return {ok, fmt("straight edges %.2f (odd multiple of eps/2 nearest 2), %zu edges, max offset change %.3g, "
                    "%zu events after setup, termination %s",
                    first.length(0), first.size(), moved, after, to_string(tr.termination))};
}

// 4. Shrinking squares converge at first order.
Outcome criterion4() {
    RunConfig cfg;
    cfg.alpha = -1.0;
    cfg.beta = 1.0;
    cfg.side = 2.0;
    cfg.epsilons = {0.2, 0.1, 0.05};
    cfg.t_max = 0.4;
    cfg.dt_out = 0.005;
    auto rep = compare(cfg, false);
    bool ok = true;
    std::string d;
    for (const auto& r : rep.rows) {
        bool sup_ok = r.sup_distance <= c4_sup_factor * r.epsilon;
        bool ratio_ok = r.ratio == 0.0 || (r.ratio >= c4_ratio_lo && r.ratio <= c4_ratio_hi);
        ok = ok && sup_ok && ratio_ok;
        d += fmt("eps %.3g sup %.4f%s; ", r.epsilon, r.sup_distance, r.ratio > 0.0 ? fmt(" ratio %.3f", r.ratio).c_str() : "");
    }
    ChessboardMedium m(cfg.alpha, cfg.beta, 0.05);
    auto tr = run(initial_data(cfg, 0.05).shape, m, 1.0);
    bool ext_ok = tr.termination == Termination::extinction && std::abs(tr.end_time - 0.5) <= c4_extinction_tol;
    d += fmt("extinction at eps 0.05: %s t = %.4f", to_string(tr.termination), tr.end_time);
    return {ok && ext_ok, d};
}

struct Recomposition {
    bool found = false;
    double t1 = 0.0, t2 = 0.0, vc = 0.0;
};

// Breaking, then the first grid hit (t1), then the return to four edges (t2).
Recomposition recomposition(double l0, double eps) {
    ChessboardMedium m(-3.0, 1.0, eps);
    auto init = approximate_square(l0, eps);
    FlowState st = initial_state(init.shape, m);
    Recomposition r;
    bool broken = false;
    for (int it = 0; it < 10000; ++it) {
        auto a = advance_to_next_event(st, m, 10.0);
        if (a.extinct || a.reached_t_max) break;
        bool recracked = false, hit = false, vanished = false;
        for (const auto& e : a.events) {
            recracked |= e.kind == EventKind::recracked;
            hit |= e.kind == EventKind::hit_grid_line;
            vanished |= e.kind == EventKind::edge_vanished;
        }
        if (!broken) {
            broken = recracked && st.shape.size() > 4;
            continue;
        }
        if (r.t1 == 0.0 && hit && !vanished) {
            r.t1 = st.time;
            for (double v : velocity_field(st, m)) r.vc = std::max(r.vc, std::abs(v));
            continue;
        }
        if (r.t1 > 0.0 && vanished && st.shape.size() == 4) {
            r.t2 = st.time;
            r.found = true;
            break;
        }
    }
    return r;
}

// 5. Recomposition after breaking takes a time of order eps.
Outcome criterion5() {
    auto a = recomposition(c5_l0, 0.2), b = recomposition(c5_l0, 0.1);
    if (!a.found || !b.found) return {false, "breaking/recomposition not observed"};
    double da = a.t2 - a.t1, db = b.t2 - b.t1;
    bool bound = da <= 2.0 * 0.2 / a.vc && db <= 2.0 * 0.1 / b.vc;
    double ratio = db / da;
    bool halves = ratio >= c5_ratio_lo && ratio <= c5_ratio_hi;
    return {bound && halves,
            fmt("l0 %.2f: eps 0.2 t2-t1 %.5f (bound %.4f), eps 0.1 t2-t1 %.5f (bound %.4f); bound %s, ratio %.3f %s",
                c5_l0, da, 0.4 / a.vc, db, 0.2 / b.vc, bound ? "holds" : "violated", ratio,
                halves ? "halves" : "does not halve")};
}

// 6. Large squares get confined to a stationary octagon.
Outcome criterion6() {
    const double l0 = 3.0, eps = 0.1;
    ChessboardMedium m(-3.0, 1.0, eps);
    auto init = approximate_square(l0, eps);
    FlowOptions o;
    o.dt_out = 0.1;
    auto tr = run(init.shape, m, 20.0, o);
    auto lim = limit_state(l0, l0, -3.0, 1.0);
    double d = hausdorff_distance(tr.samples.back().shape.vertices(), lim.outline(init.centre));
    bool ok = tr.termination == Termination::stationary && d <= c6_factor * eps;
    return {ok, fmt("termination %s at t = %.4f, limit straight edges %.3f, terminal d_H %.4f", to_string(tr.termination),
                    tr.end_time, lim.l1, d)};
}

// 7. J is conserved along the rectangle system.
Outcome criterion7() {
    const double l1 = 3.0, l2 = 1.5, a = -3.0, b = 1.0;
    const double J0 = invariants(l1, l2, a, b).J;
    double worst = 0.0;
    std::size_t n = 0;
    integrate_rectangle_system(l1, l2, a + b, 1.0, false, [&](double, double x, double y) {
        worst = std::max(worst, std::abs(invariants(x, y, a, b).J - J0));
        ++n;
    });
    return {worst <= c7_tol * (1.0 + std::abs(J0)), fmt("J0 = %.6f, %zu dense-output points, max |J - J0| = %.2e", J0, n, worst)};
}

// 8. {U <= 0} is invariant under the octagon system.
Outcome criterion8() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> us(-4.0, -0.5), ul(0.01, 1.0);
    double worst = -INFINITY;
    int n = 0;
    while (n < c8_samples) {
        double s = us(rng);
        double scale = 3.0 * (-4.0 / s);
        double l1 = ul(rng) * scale, l2 = ul(rng) * scale;
        if (1.0 / l1 + 1.0 / l2 + s / 2.0 > 0.0) continue;
        ++n;
        integrate_octagon_system(l1, l2, s, 5.0, [&](double, double x, double y) {
            worst = std::max(worst, 1.0 / x + 1.0 / y + s / 2.0);
        });
    }
    return {worst <= c8_tol, fmt("%d initial data, max U along trajectories %.3e", n, worst)};
}

// Independent quadrature: sum over grid cells of the medium value at each piece midpoint.
double quadrature(const ChessboardMedium& m, double y, double p, double q) {
    const double h = m.half_period();
    double sum = 0.0, a = p;
    while (a < q) {
        double b = std::min(q, (std::floor(a / h + 1e-12) + 1.0) * h);
        if (b <= a) b = std::min(q, a + h);
        sum += (b - a) * m.value_at({0.5 * (a + b), y}).value();
        a = b;
    }
    return sum;
}

// 9. Facet velocity equals curvature plus the mean forcing.
Outcome criterion9() {
    ChessboardMedium m(-3.0, 1.0, 0.5);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> pos(-2.0, 2.0), len(1e-3, 2.5);
    double worst = 0.0;
    int n = 0;
    while (n < c9_samples) {
        double y = off_grid_offset(rng, m.half_period());
        double p = pos(rng), l = len(rng);
        int chi = rng() % 2 ? 1 : 0;
        int n0 = rng() % 2 ? 1 : -1;
        Facet f{m.trace(Axis::horizontal, y), p, p + l, chi, chi == 1 ? -1 : n0, chi == 1 ? 1 : n0};
        auto v = oracle_is_calibrable(f);
        if (!v.calibrable) continue;
        ++n;
        double expect = chi * 2.0 / l + quadrature(m, y, p, p + l) / l;
        worst = std::max(worst, std::abs(candidate_field(f).velocity - expect) / std::max(1.0, std::abs(expect)));
    }
    return {worst <= c9_tol, fmt("%d calibrable edges, max relative deviation %.2e", n, worst)};
}

// 10. Shifted approximations of the same square give nearby flows.
Outcome criterion10() {
    RunConfig cfg;
    cfg.alpha = -1.0;
    cfg.beta = 1.0;
    cfg.side = 2.0;
    cfg.epsilons = {0.1};
    cfg.t_max = 0.6;
    cfg.dt_out = 0.005;
    auto rep = compare(cfg, true);
    const auto& r = rep.rows.front();
    return {r.alignment_distance <= c10_factor * 0.1,
            fmt("alpha -1, beta 1, S(2), eps 0.1: sup_t d_H between aligned and (eps/4, eps/4)-shifted flows %.4f "
                "(C = %.2f)",
                r.alignment_distance, r.alignment_distance / 0.1)};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--expect-fail" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) expected.insert(std::stoi(tok));
        } else {
            std::fprintf(stderr, "usage: acceptance [--expect-fail N[,M...]]\n");
            return 2;
        }
    }

    Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                               criterion6, criterion7, criterion8, criterion9, criterion10};
    std::set<int> failed;
    for (int k = 0; k < 10; ++k) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) failed.insert(k + 1);
        std::printf("%s criterion %d: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", k + 1, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    if (failed != expected) {
        std::printf("failing criteria differ from the expected set\n");
        return 1;
    }
    return 0;
}

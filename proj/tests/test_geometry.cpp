#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <vector>

#include "chessflow/geometry.hpp"

using namespace chessflow;

namespace {

// Rectangle [0,w]x[0,h], counterclockwise from the lower-left corner, with
// corner k notched by an nx[k] x ny[k] block when nx[k] > 0.
std::vector<Point> notched(double w, double h, const double (&nx)[4], const double (&ny)[4]) {
    std::vector<Point> v;
    auto add = [&](int k, Point plain, std::initializer_list<Point> cut) {
        if (nx[k] > 0.0)
            v.insert(v.end(), cut);
        else
            v.push_back(plain);
    };
    add(0, {0, 0}, {{0, ny[0]}, {nx[0], ny[0]}, {nx[0], 0}});
    add(1, {w, 0}, {{w - nx[1], 0}, {w - nx[1], ny[1]}, {w, ny[1]}});
    add(2, {w, h}, {{w, h - ny[2]}, {w - nx[2], h - ny[2]}, {w - nx[2], h}});
    add(3, {0, h}, {{nx[3], h}, {nx[3], h - ny[3]}, {0, h - ny[3]}});
    return v;
}

double dist_to_rect(Point p, double x0, double y0, double x1, double y1) {
    double dx = std::max({x0 - p.x, 0.0, p.x - x1});
    double dy = std::max({y0 - p.y, 0.0, p.y - y1});
    return std::hypot(dx, dy);
}

}  // namespace

TEST_CASE("direction cycle") {
    CHECK(successor(Direction::e1) == Direction::e2);
    CHECK(successor(Direction::minus_e2) == Direction::e1);
    CHECK(predecessor(Direction::e1) == Direction::minus_e2);
    for (Direction d : {Direction::e1, Direction::e2, Direction::minus_e1, Direction::minus_e2}) {
        CHECK(predecessor(successor(d)) == d);
        CHECK(direction_from_string(to_string(d)) == d);
    }
    CHECK_THROWS(direction_from_string("north"));
}

TEST_CASE("from_vertices on a square") {
    std::vector<Point> v{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    auto P = Polyrectangle::from_vertices(v);
    REQUIRE(P.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(P.chi(i) == 1);
        CHECK(P.length(i) == doctest::Approx(2.0));
    }
    CHECK(P.area() == doctest::Approx(4.0));
    CHECK(P.perimeter() == doctest::Approx(8.0));
    // Clockwise input is reoriented.
    std::reverse(v.begin(), v.end());
    CHECK(Polyrectangle::from_vertices(v).area() == doctest::Approx(4.0));
}

TEST_CASE("from_vertices on an L shape") {
    std::vector<Point> v{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    auto P = Polyrectangle::from_vertices(v);
    REQUIRE(P.size() == 6);
    // One reflex corner; its two edges are neither convex nor concave.
    int reflex = 0, flat = 0, convex = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        reflex += P.turn(i) == -1;
        flat += P.chi(i) == 0;
        convex += P.chi(i) == 1;
        CHECK(P.chi(i) != -1);
    }
    CHECK(reflex == 1);
    CHECK(flat == 2);
    CHECK(convex == 4);
    CHECK(P.area() == doctest::Approx(3.0));
}

TEST_CASE("from_vertices rejects bad input") {
    std::vector<Point> two{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(Polyrectangle::from_vertices(two), std::invalid_argument);
    std::vector<Point> slanted{{0, 0}, {1, 0}, {1, 1}, {0.5, 2}};
    CHECK_THROWS_AS(Polyrectangle::from_vertices(slanted), std::invalid_argument);
    std::vector<Point> bowtie{{0, 0}, {2, 0}, {2, 1}, {-1, 1}, {-1, 2}, {1, 2}, {1, -1}, {0, -1}};
    CHECK_THROWS_AS(Polyrectangle::from_vertices(bowtie), std::invalid_argument);
}

TEST_CASE("round trip and turn count on notched rectangles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 0.4);
    for (int k = 0; k < 300; ++k) {
        double nx[4], ny[4];
        for (int c = 0; c < 4; ++c) {
            bool cut = rng() % 2;
            nx[c] = cut ? u(rng) : 0.0;
            ny[c] = cut ? u(rng) : 0.0;
        }
        auto v = notched(2.0, 1.5, nx, ny);
        auto P = Polyrectangle::from_vertices(v);
        CHECK_NOTHROW(P.validate());
        auto Q = Polyrectangle::from_vertices(P.vertices());
        REQUIRE(Q.size() == P.size());
        for (std::size_t i = 0; i < P.size(); ++i) {
            CHECK(Q.normal(i) == P.normal(i));
            CHECK(Q.offset(i) == doctest::Approx(P.offset(i)));
        }
        int turns = 0;
        for (std::size_t i = 0; i < P.size(); ++i) turns += P.turn(i);
        CHECK(turns == 4);
        double cut_area = 0.0;
        for (int c = 0; c < 4; ++c) cut_area += nx[c] * ny[c];
        CHECK(P.area() == doctest::Approx(3.0 - cut_area));
    }
}

TEST_CASE("edges flag grid lines") {
    ChessboardMedium m(-3.0, 1.0, 0.5);
    auto sq = Polyrectangle::rectangle(0.0, 0.0, 1.25, 1.25);
    for (const auto& e : sq.edges(m)) CHECK(e.on_grid);
    auto shifted = Polyrectangle::rectangle(0.125, 0.125, 1.25, 1.25);
    for (const auto& e : shifted.edges(m)) CHECK_FALSE(e.on_grid);
    for (const auto& e : sq.edges(m)) {
        CHECK(e.chi == 1);
        CHECK(e.n_p == -1);
        CHECK(e.n_q == 1);
        CHECK(e.p < e.q);
    }
}

TEST_CASE("zero-length entries") {
    ChessboardMedium m(-3.0, 1.0, 0.5);
    // Square with a degenerate step inserted in the bottom edge.
    Polyrectangle P({Direction::e2, Direction::e1, Direction::e2, Direction::minus_e1, Direction::minus_e2,
                     Direction::e1},
                    {0.0, 0.5, 0.0, 1.0, 1.0, 0.0});
    CHECK_NOTHROW(P.validate());
    auto e = P.edge(1, m);
    CHECK(e.p == doctest::Approx(e.q));
    CHECK(P.length(1) == doctest::Approx(0.0));
    CHECK(P.area() == doctest::Approx(1.0));
}

TEST_CASE("hausdorff distance examples") {
    auto a = Polyrectangle::rectangle(-1, -1, 2, 2);
    CHECK(hausdorff_distance(a, a) == doctest::Approx(0.0));
    auto b = Polyrectangle::rectangle(-0.7, -1, 2, 2);
    CHECK(hausdorff_distance(a, b) == doctest::Approx(0.3));
    const double h = 0.125;
    auto c = Polyrectangle::rectangle(-1 - h, -1 - h, 2 + 2 * h, 2 + 2 * h);
    // The corners are sqrt(2) h apart; the edges only h.
    CHECK(hausdorff_distance(a, c) == doctest::Approx(h * std::sqrt(2.0)));
    std::vector<Point> pt{{0.0, 0.0}};
    auto va = a.vertices();
    CHECK(hausdorff_distance(va, pt) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("hausdorff distance against the convex oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0), s(0.1, 3.0);
    for (int k = 0; k < 500; ++k) {
        double ax = u(rng), ay = u(rng), aw = s(rng), ah = s(rng);
        double bx = u(rng), by = u(rng), bw = s(rng), bh = s(rng);
        auto A = Polyrectangle::rectangle(ax, ay, aw, ah);
        auto B = Polyrectangle::rectangle(bx, by, bw, bh);
        // Distance to a convex set is convex, so the sup over a rectangle is at a vertex.
        double d = 0.0;
        for (auto p : A.vertices()) d = std::max(d, dist_to_rect(p, bx, by, bx + bw, by + bh));
        for (auto p : B.vertices()) d = std::max(d, dist_to_rect(p, ax, ay, ax + aw, ay + ah));
        CHECK(hausdorff_distance(A, B) == doctest::Approx(d).epsilon(1e-9));
        CHECK(hausdorff_distance(B, A) == doctest::Approx(d).epsilon(1e-9));
    }
}

TEST_CASE("hausdorff distance of non-convex shapes bounds sampled distances") {
    double nx[4] = {0.5, 0.0, 0.3, 0.0}, ny[4] = {0.5, 0.0, 0.6, 0.0};
    auto A = Polyrectangle::from_vertices(notched(2.0, 1.5, nx, ny));
    auto B = Polyrectangle::rectangle(0.2, 0.1, 1.5, 1.2);
    double d = hausdorff_distance(A, B);
    auto va = A.vertices();
    // Every sampled point of A lies within d of B, and some comes close to d.
    double best = 0.0;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 150; ++j) {
            Point p{2.0 * i / 200.0, 1.5 * j / 150.0};
            if (!point_in_polygon(p, va)) continue;
            double q = dist_to_rect(p, 0.2, 0.1, 1.7, 1.3);
            CHECK(q <= d + 1e-12);
            best = std::max(best, q);
        }
    CHECK(best >= d - 0.02);
}

TEST_CASE("energy examples") {
    ChessboardMedium sym(-1.0, 1.0, 0.5);
    auto sq = Polyrectangle::rectangle(0.0, 0.0, 2.0, 2.0);
    CHECK(energy(sq, sym) == doctest::Approx(8.0));
    ChessboardMedium m(-3.0, 1.0, 0.5);
    auto cell = Polyrectangle::rectangle(0.0, 0.0, 0.25, 0.25);
    CHECK(energy(cell, m) == doctest::Approx(0.8125));
    CHECK_THROWS(energy(Polyrectangle{}, m));
}

TEST_CASE("energy volume term against cell-wise area") {
    ChessboardMedium m(-3.0, 1.0, 0.5);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.05, 2.0);
    for (int k = 0; k < 200; ++k) {
        double x0 = u(rng), y0 = u(rng), w = s(rng), h = s(rng);
        auto R = Polyrectangle::rectangle(x0, y0, w, h);
        double vol = 0.0;
        const double c = m.half_period();
        for (int i = static_cast<int>(std::floor(x0 / c)); i * c < x0 + w; ++i)
            for (int j = static_cast<int>(std::floor(y0 / c)); j * c < y0 + h; ++j) {
                double ox = std::min(x0 + w, (i + 1) * c) - std::max(x0, i * c);
                double oy = std::min(y0 + h, (j + 1) * c) - std::max(y0, j * c);
                if (ox <= 0 || oy <= 0) continue;
                vol += ox * oy * m.value_at({(i + 0.5) * c, (j + 0.5) * c}).value();
            }
        CHECK(energy(R, m) == doctest::Approx(2 * (w + h) + vol).epsilon(1e-10));
    }
}

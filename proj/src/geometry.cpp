#include "chessflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chessflow {

Direction successor(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 1) % 4); }
Direction predecessor(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 3) % 4); }

const char* to_string(Direction d) {
    switch (d) {
        case Direction::e1: return "e1";
        case Direction::e2: return "e2";
        case Direction::minus_e1: return "-e1";
        case Direction::minus_e2: return "-e2";
    }
    return "?";
}

Direction direction_from_string(const std::string& s) {
    if (s == "e1") return Direction::e1;
    if (s == "e2") return Direction::e2;
    if (s == "-e1") return Direction::minus_e1;
    if (s == "-e2") return Direction::minus_e2;
    throw std::invalid_argument("unknown direction '" + s + "'");
}

int axis_sign(Direction d) { return (d == Direction::e1 || d == Direction::e2) ? 1 : -1; }

Axis line_axis(Direction d) {
    return (d == Direction::e1 || d == Direction::minus_e1) ? Axis::vertical : Axis::horizontal;
}

int traversal_sign(Direction d) { return (d == Direction::e2 || d == Direction::minus_e1) ? 1 : -1; }

Polyrectangle::Polyrectangle(std::vector<Direction> normals, std::vector<double> offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (normals_.size() != offsets_.size())
        throw std::invalid_argument("polyrectangle: normals and offsets differ in size");
    if (normals_.size() < 4 || normals_.size() % 2 != 0)
        throw std::invalid_argument("polyrectangle: need an even number (>= 4) of edges");
    for (std::size_t i = 0; i < size(); ++i) {
        Direction n = normals_[next(i)];
        if (n != successor(normals_[i]) && n != predecessor(normals_[i]))
            throw std::invalid_argument("polyrectangle: consecutive normals not orthogonal at edge " +
                                        std::to_string(i));
    }
}

Polyrectangle Polyrectangle::rectangle(double x0, double y0, double width, double height) {
    if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("rectangle: nonpositive side");
    return Polyrectangle({Direction::e2, Direction::minus_e1, Direction::minus_e2, Direction::e1},
                         {y0, x0 + width, y0 + height, x0});
}

double Polyrectangle::length(std::size_t i) const {
    return (offsets_[next(i)] - offsets_[prev(i)]) * traversal_sign(normals_[i]);
}

int Polyrectangle::turn(std::size_t i) const {
    return normals_[next(i)] == successor(normals_[i]) ? 1 : -1;
}

Point Polyrectangle::vertex(std::size_t i) const {
    std::size_t a = prev(i);
    if (line_axis(normals_[i]) == Axis::vertical) return {offsets_[i], offsets_[a]};
    return {offsets_[a], offsets_[i]};
}

std::vector<Point> Polyrectangle::vertices() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(vertex(i));
    return out;
}

EdgeView Polyrectangle::edge(std::size_t i, const ChessboardMedium& medium) const {
    EdgeView e;
    e.index = i;
    e.normal = normals_[i];
    e.line_offset = offsets_[i];
    double a = offsets_[prev(i)], b = offsets_[next(i)];
    e.p = std::min(a, b);
    e.q = std::max(a, b);
    int c_start = turn(prev(i)), c_end = turn(i);
    int c_p = traversal_sign(e.normal) > 0 ? c_start : c_end;
    int c_q = traversal_sign(e.normal) > 0 ? c_end : c_start;
    e.chi = (c_p + c_q) / 2;
    e.n_p = -c_p;
    e.n_q = c_q;
    e.on_grid = medium.on_grid(e.line_offset);
    return e;
}

std::vector<EdgeView> Polyrectangle::edges(const ChessboardMedium& medium) const {
    std::vector<EdgeView> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(edge(i, medium));
    return out;
}

double Polyrectangle::perimeter() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) sum += std::abs(length(i));
    return sum;
}

double Polyrectangle::area() const {
    auto v = vertices();
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % v.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

namespace {

struct Box {
    double x0, x1, y0, y1;
};

Box segment_box(Point a, Point b) {
    return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
}

bool boxes_meet(const Box& a, const Box& b, double tol) {
    return std::max(a.x0, b.x0) <= std::min(a.x1, b.x1) + tol &&
           std::max(a.y0, b.y0) <= std::min(a.y1, b.y1) + tol;
}

}  // namespace

void Polyrectangle::validate(double tol) const {
    const std::size_t n = size();
    if (n < 4) throw std::invalid_argument("polyrectangle: fewer than 4 edges");
    double scale = 1.0;
    for (double s : offsets_) scale = std::max(scale, std::abs(s));
    const double eps = tol * scale;
    int turns = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (length(i) < -eps)
            throw std::invalid_argument("polyrectangle: edge " + std::to_string(i) + " has negative length");
        turns += turn(i);
    }
    if (turns != 4)
        throw std::invalid_argument("polyrectangle: turning number is not +1 (clockwise or self-overlapping)");

    auto v = vertices();
    std::vector<Box> boxes(n);
    for (std::size_t i = 0; i < n; ++i) boxes[i] = segment_box(v[i], v[next(i)]);
    auto zero = [&](std::size_t i) { return std::abs(length(i)) <= eps; };

    for (std::size_t i = 0; i < n; ++i) {
        if (zero(i)) continue;
        // Neighbours reachable from i through zero-length edges only.
        std::vector<std::size_t> skip{i};
        for (std::size_t j = next(i);; j = next(j)) {
            skip.push_back(j);
            if (!zero(j) || j == i) break;
        }
        for (std::size_t j = prev(i);; j = prev(j)) {
            skip.push_back(j);
            if (!zero(j) || j == i) break;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (zero(j) || std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
            if (boxes_meet(boxes[i], boxes[j], eps))
                throw std::invalid_argument("polyrectangle: boundary self-intersects (edges " +
                                            std::to_string(i) + " and " + std::to_string(j) + ")");
        }
    }
}

Polyrectangle Polyrectangle::from_vertices(std::span<const Point> input) {
    std::vector<Point> v(input.begin(), input.end());
    double scale = 1.0;
    for (const auto& p : v) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double tol = 1e-12 * scale;
    auto same = [&](Point a, Point b) { return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol; };

    if (v.size() >= 2 && same(v.front(), v.back())) v.pop_back();
    std::vector<Point> w;
    for (const auto& p : v)
        if (w.empty() || !same(w.back(), p)) w.push_back(p);
    if (w.size() >= 2 && same(w.front(), w.back())) w.pop_back();
    if (w.size() < 4) throw std::invalid_argument("from_vertices: need at least 4 distinct vertices");

    // 0 for horizontal moves, 1 for vertical ones.
    auto kind = [&](std::size_t k) {
        const Point& a = w[k];
        const Point& b = w[(k + 1) % w.size()];
        bool h = std::abs(a.y - b.y) <= tol, vv = std::abs(a.x - b.x) <= tol;
        if (h == vv) {
            if (k + 1 == w.size())
                throw std::invalid_argument("from_vertices: last vertex does not close with an axis-parallel segment");
            throw std::invalid_argument("from_vertices: segment " + std::to_string(k) + " is not axis-parallel");
        }
        return h ? 0 : 1;
    };

    // Merge collinear runs; a reversal means the curve doubles back on itself.
    std::vector<Point> c;
    const std::size_t n = w.size();
    std::size_t start = 0;
    while (start < n && kind((start + n - 1) % n) == kind(start)) ++start;
    if (start == n) throw std::invalid_argument("from_vertices: degenerate polygon");
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t k = (start + t) % n;
        std::size_t km = (k + n - 1) % n;
        if (kind(km) != kind(k)) {
            c.push_back(w[k]);
        } else {
            const Point& a = w[km];
            const Point& b = w[k];
            const Point& d = w[(k + 1) % n];
            double dot = (b.x - a.x) * (d.x - b.x) + (b.y - a.y) * (d.y - b.y);
            if (dot < 0) throw std::invalid_argument("from_vertices: boundary doubles back at vertex " + std::to_string(k));
        }
    }
    if (c.size() < 4) throw std::invalid_argument("from_vertices: need at least 4 corners");

    double area2 = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Point& a = c[i];
        const Point& b = c[(i + 1) % c.size()];
        area2 += a.x * b.y - b.x * a.y;
    }
    if (area2 < 0) std::reverse(c.begin(), c.end());

    std::vector<Direction> normals;
    std::vector<double> offsets;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Point& a = c[i];
        const Point& b = c[(i + 1) % c.size()];
        if (std::abs(a.y - b.y) <= tol) {
            normals.push_back(b.x > a.x ? Direction::e2 : Direction::minus_e2);
            offsets.push_back(a.y);
        } else {
            normals.push_back(b.y > a.y ? Direction::minus_e1 : Direction::e1);
            offsets.push_back(a.x);
        }
    }
    // Vertex i of the string is the start of edge i, so the input order is kept.
    Polyrectangle poly(std::move(normals), std::move(offsets));
    poly.validate();
    return poly;
}

bool point_in_polygon(Point pt, std::span<const Point> poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y > pt.y) != (b.y > pt.y)) {
            double x = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (pt.x < x) inside = !inside;
        }
    }
    return inside;
}

namespace {

double segment_distance(Point p, Point a, Point b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Distance from a point to the closed region bounded by `poly`.
double region_distance(Point p, std::span<const Point> poly) {
    if (poly.size() == 1) return std::hypot(p.x - poly[0].x, p.y - poly[0].y);
    if (point_in_polygon(p, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    return best;
}

// Parameters in (0, 1) where segment pq meets the boundary of `poly`
// (collinear overlaps contribute their end points).
std::vector<double> boundary_cuts(Point p, Point q, std::span<const Point> poly) {
    std::vector<double> ts;
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return ts;
    auto cross = [](double ax, double ay, double bx, double by) { return ax * by - ay * bx; };
    for (std::size_t j = 0; j < poly.size(); ++j) {
        Point c = poly[j], d = poly[(j + 1) % poly.size()];
        double ex = d.x - c.x, ey = d.y - c.y;
        double den = cross(dx, dy, ex, ey);
        double wx = c.x - p.x, wy = c.y - p.y;
        if (std::abs(den) <= 1e-15 * std::sqrt(len2 * (ex * ex + ey * ey))) {
            if (std::abs(cross(dx, dy, wx, wy)) > 1e-12 * len2) continue;
            ts.push_back((wx * dx + wy * dy) / len2);
            ts.push_back(((d.x - p.x) * dx + (d.y - p.y) * dy) / len2);
            continue;
        }
        double t = cross(wx, wy, ex, ey) / den;
        double u = cross(wx, wy, dx, dy) / den;
        if (u >= 0.0 && u <= 1.0) ts.push_back(t);
    }
    ts.erase(std::remove_if(ts.begin(), ts.end(), [](double t) { return !(t > 0.0 && t < 1.0); }), ts.end());
    std::sort(ts.begin(), ts.end());
    return ts;
}

// Largest distance from the segment pq, lying entirely outside `poly`, to
// the boundary of `poly`.  Each distance to a boundary segment is convex
// along pq, so max over a piece of their minimum is bounded by the minimum of
// their end-point maxima.
double outside_max(Point p, Point q, std::span<const Point> poly, double best) {
    struct Piece {
        Point a, b;
    };
    const std::size_t m = poly.size();
    auto bound_and_value = [&](Point a, Point b, double& fa) {
        double ub = std::numeric_limits<double>::infinity();
        fa = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            double da = segment_distance(a, poly[j], poly[(j + 1) % m]);
            double db = segment_distance(b, poly[j], poly[(j + 1) % m]);
            fa = std::min(fa, da);
            ub = std::min(ub, std::max(da, db));
        }
        return ub;
    };
    std::vector<Piece> stack{{p, q}};
    while (!stack.empty()) {
        Piece s = stack.back();
        stack.pop_back();
        double fa;
        double ub = bound_and_value(s.a, s.b, fa);
        double fb = region_distance(s.b, poly);
        best = std::max({best, fa, fb});
        if (ub <= best * (1.0 + 1e-12) + 1e-14) continue;
        if (std::hypot(s.b.x - s.a.x, s.b.y - s.a.y) <= 1e-13 * (1.0 + best)) continue;
        Point mid{0.5 * (s.a.x + s.b.x), 0.5 * (s.a.y + s.b.y)};
        stack.push_back({s.a, mid});
        stack.push_back({mid, s.b});
    }
    return best;
}

// max over the boundary of a of the distance to region b.
double directed(std::span<const Point> a, std::span<const Point> b) {
    if (a.size() == 1) return region_distance(a[0], b);
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Point pa = a[i], pb = a[(i + 1) % a.size()];
        best = std::max(best, region_distance(pa, b));
        if (b.size() == 1) {
            best = std::max(best, region_distance(pb, b));
            continue;
        }
        std::vector<double> ts{0.0};
        auto cuts = boundary_cuts(pa, pb, b);
        ts.insert(ts.end(), cuts.begin(), cuts.end());
        ts.push_back(1.0);
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
            if (ts[k + 1] - ts[k] <= 0.0) continue;
            auto at = [&](double t) { return Point{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)}; };
            Point u = at(ts[k]), w = at(ts[k + 1]);
            if (point_in_polygon(at(0.5 * (ts[k] + ts[k + 1])), b)) continue;
            best = outside_max(u, w, b, best);
        }
    }
    return best;
}

}  // namespace

double hausdorff_distance(std::span<const Point> a, std::span<const Point> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty polygon");
    return std::max(directed(a, b), directed(b, a));
}

double hausdorff_distance(const Polyrectangle& a, const Polyrectangle& b) {
    auto va = a.vertices();
    auto vb = b.vertices();
    return hausdorff_distance(va, vb);
}

double energy(const Polyrectangle& poly, const ChessboardMedium& medium) {
    if (poly.size() == 0) throw std::invalid_argument("energy: empty polyrectangle");
    const double h = medium.half_period();
    double volume = 0.0;
    // Green: the region integral equals -sum over horizontal edges of the
    // integral of G(x, y_edge) dx along the traversal, G(x, y) = int_0^y g(x, t) dt.
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Direction d = poly.normal(i);
        if (line_axis(d) != Axis::horizontal) continue;
        double y = poly.offset(i);
        double a = poly.offset(poly.prev(i)), b = poly.offset(poly.next(i));
        double lo = std::min(a, b), hi = std::max(a, b);
        if (hi <= lo) continue;
        std::int64_t c0 = medium.cell_index(lo), c1 = medium.cell_index(hi);
        double sum = 0.0;
        for (std::int64_t col = c0; col <= c1; ++col) {
            double x0 = std::max(lo, static_cast<double>(col) * h);
            double x1 = std::min(hi, static_cast<double>(col + 1) * h);
            if (x1 <= x0) continue;
            auto column = LineTrace::in_strip(medium, Axis::vertical, col);
            sum += (x1 - x0) * column.integral(0.0, y);
        }
        volume += d == Direction::e2 ? -sum : sum;
    }
    return poly.perimeter() + volume;
}

}  // namespace chessflow

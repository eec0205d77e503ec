#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chessflow/medium.hpp"

namespace chessflow {

// Cyclic order e1 -> e2 -> minus_e1 -> minus_e2 -> e1.
enum class Direction { e1 = 0, e2 = 1, minus_e1 = 2, minus_e2 = 3 };

Direction successor(Direction d);
Direction predecessor(Direction d);
const char* to_string(Direction d);
Direction direction_from_string(const std::string& s);

// +1 when the normal points along a positive coordinate axis.
int axis_sign(Direction d);
// Lines with normal e1 / minus_e1 are vertical.
Axis line_axis(Direction d);
// +1 when the counterclockwise traversal of the edge runs towards larger abscissa.
int traversal_sign(Direction d);

struct EdgeView {
    std::size_t index = 0;
    Direction normal = Direction::e2;
    double line_offset = 0.0;
    double p = 0.0;
    double q = 0.0;
    int chi = 0;
    int n_p = 0;
    int n_q = 0;
    bool on_grid = false;

    double length() const { return q - p; }
};

// Boundary of a coordinate polyrectangle, counterclockwise, as a cyclic string
// of inner normals and line offsets.  Vertex i is where line i-1 meets line i,
// so edge i runs from vertex i to vertex i+1.
class Polyrectangle {
public:
    Polyrectangle() = default;
    Polyrectangle(std::vector<Direction> normals, std::vector<double> offsets);

    static Polyrectangle from_vertices(std::span<const Point> vertices);
    static Polyrectangle rectangle(double x0, double y0, double width, double height);

    std::size_t size() const { return normals_.size(); }
    Direction normal(std::size_t i) const { return normals_[i]; }
    double offset(std::size_t i) const { return offsets_[i]; }
    const std::vector<Direction>& normals() const { return normals_; }
    const std::vector<double>& offsets() const { return offsets_; }
    void set_offset(std::size_t i, double s) { offsets_[i] = s; }

    std::size_t next(std::size_t i) const { return i + 1 == size() ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? size() - 1 : i - 1; }

    // Signed length; negative values mean the string is not a valid boundary.
    double length(std::size_t i) const;
    // +1 convex, -1 concave, for the corner between edge i and edge i+1.
    int turn(std::size_t i) const;
    int chi(std::size_t i) const { return (turn(prev(i)) + turn(i)) / 2; }

    Point vertex(std::size_t i) const;
    std::vector<Point> vertices() const;

    EdgeView edge(std::size_t i, const ChessboardMedium& medium) const;
    std::vector<EdgeView> edges(const ChessboardMedium& medium) const;

    double perimeter() const;
    double area() const;

    // Throws std::invalid_argument when the boundary is not closed and simple.
    // Edges joined only through zero-length entries may touch.
    void validate(double tol = 1e-12) const;

private:
    std::vector<Direction> normals_;
    std::vector<double> offsets_;
};

// Hausdorff distance between the closed regions bounded by two simple polygons.
// A polygon with a single vertex stands for a point.
double hausdorff_distance(std::span<const Point> a, std::span<const Point> b);
double hausdorff_distance(const Polyrectangle& a, const Polyrectangle& b);

bool point_in_polygon(Point pt, std::span<const Point> poly);

double energy(const Polyrectangle& poly, const ChessboardMedium& medium);

}  // namespace chessflow

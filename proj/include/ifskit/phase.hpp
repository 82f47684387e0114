#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ifskit {

using Vec = std::vector<double>;

// Coordinate canonical form: circle/torus coordinates live in [0,1).
double wrap01(double t);

// Nearest integer lift of a coordinate difference. Ties (|r|=0.5) break
// toward the lexicographically smaller shift.
double nearest_lift(double r);

enum class SpaceKind { Circle, Torus, Box };

struct PhaseSpace {
    SpaceKind kind = SpaceKind::Circle;
    int dim = 1;
    Vec lower;  // box only
    Vec upper;  // box only

    static PhaseSpace circle();
    static PhaseSpace torus(int d);
    static PhaseSpace box(Vec lo, Vec hi);

    bool periodic() const { return kind != SpaceKind::Box; }
    double diameter() const;

    // Wraps periodic coordinates into [0,1); boxes are left untouched.
    Vec canonicalize(Vec p) const;
    bool contains(const Vec& p, double tol = 1e-9) const;

    // Flat metric: min over integer translates on circle/torus, Euclidean on boxes.
    double distance(const Vec& p, const Vec& q) const;
    // Difference q-p lifted to the nearest representative (periodic axes).
    Vec lifted_diff(const Vec& p, const Vec& q) const;

    std::string kind_name() const;
};

struct GridSpec {
    double resolution = 0.1;
    std::size_t max_points = 2'000'000;
};

struct Grid {
    std::vector<Vec> points;
    double covering_radius = 0.0;
};

// Deterministic axis-uniform lattice anchored at 0 (resp. the box lower
// corner) with a certified covering radius.
Grid grid_points(const PhaseSpace& space, const GridSpec& spec);

}  // namespace ifskit

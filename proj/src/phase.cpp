#include "ifskit/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace ifskit {

double wrap01(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r -= 1.0;  // guards against floor rounding at 1-ulp below integers
    return r;
}

double nearest_lift(double r) { return r - std::floor(r + 0.5); }

PhaseSpace PhaseSpace::circle() {
    PhaseSpace s;
    s.kind = SpaceKind::Circle;
    s.dim = 1;
    return s;
}

PhaseSpace PhaseSpace::torus(int d) {
    if (d < 1) throw std::invalid_argument("torus dimension must be >= 1");
    PhaseSpace s;
    s.kind = SpaceKind::Torus;
    s.dim = d;
    return s;
}

PhaseSpace PhaseSpace::box(Vec lo, Vec hi) {
    if (lo.empty() || lo.size() != hi.size())
        throw std::invalid_argument("box bounds must be nonempty and of equal dimension");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("box requires lower < upper per axis");
    PhaseSpace s;
    s.kind = SpaceKind::Box;
    s.dim = static_cast<int>(lo.size());
    s.lower = std::move(lo);
    s.upper = std::move(hi);
    return s;
}

double PhaseSpace::diameter() const {
    switch (kind) {
        case SpaceKind::Circle: return 0.5;
        case SpaceKind::Torus: return 0.5 * std::sqrt(static_cast<double>(dim));
        case SpaceKind::Box: {
            double s = 0.0;
            for (int i = 0; i < dim; ++i) {
                double e = upper[i] - lower[i];
                s += e * e;
            }
            return std::sqrt(s);
        }
    }
    return 0.0;
}

Vec PhaseSpace::canonicalize(Vec p) const {
    if (static_cast<int>(p.size()) != dim)
        throw std::invalid_argument("point dimension mismatch");
    if (periodic())
        for (double& c : p) c = wrap01(c);
    return p;
}

bool PhaseSpace::contains(const Vec& p, double tol) const {
    if (static_cast<int>(p.size()) != dim) return false;
    if (kind == SpaceKind::Box) {
        for (int i = 0; i < dim; ++i)
            if (p[i] < lower[i] - tol || p[i] > upper[i] + tol) return false;
    }
    return true;
}

double PhaseSpace::distance(const Vec& p, const Vec& q) const {
    if (static_cast<int>(p.size()) != dim || static_cast<int>(q.size()) != dim)
        throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        double d = q[i] - p[i];
        if (periodic()) d = nearest_lift(d);
        s += d * d;
    }
    return std::sqrt(s);
}

Vec PhaseSpace::lifted_diff(const Vec& p, const Vec& q) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) {
        double d = q[i] - p[i];
        r[i] = periodic() ? nearest_lift(d) : d;
    }
    return r;
}

std::string PhaseSpace::kind_name() const {
    switch (kind) {
        case SpaceKind::Circle: return "circle";
        case SpaceKind::Torus: return "torus";
        case SpaceKind::Box: return "box";
    }
    return "?";
}

Grid grid_points(const PhaseSpace& space, const GridSpec& spec) {
    if (!(spec.resolution > 0.0)) throw std::invalid_argument("grid resolution must be > 0");

    std::vector<long> counts(space.dim);
    std::vector<double> steps(space.dim);
    std::size_t total = 1;
    for (int i = 0; i < space.dim; ++i) {
        if (space.periodic()) {
            long n = static_cast<long>(std::ceil(1.0 / spec.resolution));
            counts[i] = n;
            steps[i] = 1.0 / static_cast<double>(n);
        } else {
            double extent = space.upper[i] - space.lower[i];
            long n = static_cast<long>(std::ceil(extent / spec.resolution));
            counts[i] = n + 1;  // endpoints included
            steps[i] = extent / static_cast<double>(n);
        }
        total *= static_cast<std::size_t>(counts[i]);
        if (total > spec.max_points) throw std::length_error("grid size exceeds configured cap");
    }

    Grid g;
    g.points.reserve(total);
    std::vector<long> idx(space.dim, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Vec p(space.dim);
        for (int i = 0; i < space.dim; ++i) {
            double base = space.periodic() ? 0.0 : space.lower[i];
            p[i] = base + static_cast<double>(idx[i]) * steps[i];
        }
        g.points.push_back(std::move(p));
        for (int i = space.dim - 1; i >= 0; --i) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }

    double r2 = 0.0;
    for (int i = 0; i < space.dim; ++i) {
        double h = steps[i] / 2.0;
        r2 += h * h;
    }
    g.covering_radius = std::sqrt(r2);
    return g;
}

}  // namespace ifskit

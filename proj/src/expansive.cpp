#include "ifskit/expansive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ifskit {

namespace {

Vec mat_apply(const Mat2& m, const Vec& v) {
    return {static_cast<double>(m[0][0]) * v[0] + static_cast<double>(m[0][1]) * v[1],
            static_cast<double>(m[1][0]) * v[0] + static_cast<double>(m[1][1]) * v[1]};
}

// Forward / backward application of the family's fixed linear part.
Vec linear_step(const IfsSpec& ifs, const Vec& x, bool backward) {
    switch (ifs.family) {
        case Family::RotationCircle: return x;
        case Family::DoublingCircle:
            if (backward) throw std::invalid_argument("doubling has no linear inverse");
            return {wrap01(2.0 * x[0])};
        case Family::AffineTorus: {
            const Mat2& A = ifs.matrix;
            if (!backward) return ifs.phase.canonicalize(mat_apply(A, x));
            long det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
            if (det != 1 && det != -1)
                throw std::invalid_argument("backward iteration needs det +-1");
            Mat2 inv{{{det * A[1][1], -det * A[0][1]}, {-det * A[1][0], det * A[0][0]}}};
            return ifs.phase.canonicalize(mat_apply(inv, x));
        }
        case Family::Affine1d: break;
    }
    throw std::logic_error("linear_step on a non-translation family");
}

struct PairProbe {
    Vec x, y;
    ParamSeq sigma;  // empty for collapsed dynamics
    bool collapsed = true;
};

std::vector<PairProbe> build_probes(const IfsSpec& ifs, const ExpansivityQuery& q,
                                    const GridSpec& spec) {
    std::vector<PairProbe> probes;
    Grid grid = grid_points(ifs.phase, spec);
    if (ifs.translation_family()) {
        // sigma-independent difference dynamics: one probe per grid difference vector.
        Vec origin(ifs.phase.dim, 0.0);
        for (const auto& v : grid.points) {
            if (ifs.phase.distance(origin, v) < q.mu) continue;
            probes.push_back({origin, v, {}, true});
        }
        if (ifs.family == Family::AffineTorus) {
            // Eigendirection probes: lattice pairs cannot lie on the irrational
            // stable/unstable lines, so test them explicitly.
            double a = static_cast<double>(ifs.matrix[0][0]), b = static_cast<double>(ifs.matrix[0][1]);
            double c = static_cast<double>(ifs.matrix[1][0]), d = static_cast<double>(ifs.matrix[1][1]);
            double tr = a + d, det = a * d - b * c;
            double disc = tr * tr - 4.0 * det;
            if (disc > 0.0) {
                double root = std::sqrt(disc);
                for (double l : {(tr + root) / 2.0, (tr - root) / 2.0}) {
                    Vec v{b, l - a};
                    double n = std::hypot(v[0], v[1]);
                    if (n == 0.0) {
                        v = {l - d, c};
                        n = std::hypot(v[0], v[1]);
                    }
                    for (double scale : {q.mu, 1.5 * q.mu}) {
                        Vec p{wrap01(scale * v[0] / n), wrap01(scale * v[1] / n)};
                        probes.push_back({Vec(ifs.phase.dim, 0.0), p, {}, true});
                    }
                }
            }
        }
        return probes;
    }
    // General families: grid pairs with seeded parameter sequences.
    for (std::size_t i = 0; i < grid.points.size(); ++i)
        for (std::size_t j = i + 1; j < grid.points.size(); ++j) {
            if (ifs.phase.distance(grid.points[i], grid.points[j]) < q.mu) continue;
            for (int s = 0; s < q.sigma_samples; ++s) {
                ParamSeq sigma = random_param_seq(ifs, q.horizon, static_cast<std::uint64_t>(s),
                                                 q.bilateral ? q.horizon : 0);
                probes.push_back({grid.points[i], grid.points[j], std::move(sigma), false});
            }
        }
    return probes;
}

// Distance along the probe at step n (n < 0 only for bilateral queries).
double probe_distance(const IfsSpec& ifs, const PairProbe& p, int n) {
    if (p.collapsed) {
        Vec x = p.x, y = p.y;
        bool backward = n < 0;
        for (int i = 0; i < std::abs(n); ++i) {
            x = linear_step(ifs, x, backward);
            y = linear_step(ifs, y, backward);
        }
        return ifs.phase.distance(x, y);
    }
    return ifs.phase.distance(iterate(ifs, p.sigma, p.x, n), iterate(ifs, p.sigma, p.y, n));
}

}  // namespace

ExpansivityVerdict estimate_expansivity(const IfsSpec& ifs, const ExpansivityQuery& q,
                                        const GridSpec& spec) {
    if (!(q.eta > 0.0) || !(q.mu > 0.0) || q.horizon < 1)
        throw std::invalid_argument("expansivity query needs eta > 0, mu > 0, horizon >= 1");
    if (q.bilateral && !ifs.invertible)
        throw std::invalid_argument("bilateral expansivity requires an invertible family");

    std::vector<PairProbe> probes = build_probes(ifs, q, spec);
    ExpansivityVerdict v;
    v.eta = q.eta;
    v.mu = q.mu;
    v.horizon_used = q.horizon;
    v.bilateral = q.bilateral;
    v.min_separation_by_step.assign(static_cast<std::size_t>(q.horizon) + 1,
                                    std::numeric_limits<double>::infinity());
    v.expansive_at_scale = true;

    for (const auto& p : probes) {
        double best = 0.0;
        bool separated = false;
        for (int n = 0; n <= q.horizon; ++n) {
            best = std::max(best, probe_distance(ifs, p, n));
            if (q.bilateral && n > 0) best = std::max(best, probe_distance(ifs, p, -n));
            auto& slot = v.min_separation_by_step[static_cast<std::size_t>(n)];
            slot = std::min(slot, best);
            if (best > q.eta) {
                separated = true;
                // keep filling the series for the remaining steps
            }
        }
        if (!separated && v.expansive_at_scale) {
            v.expansive_at_scale = false;
            v.counterexample = ExpansivityCounterexample{p.x, p.y, p.sigma};
        }
    }
    return v;
}

int separation_horizon(const IfsSpec& ifs, double eta, double mu, const GridSpec& spec,
                       bool bilateral, int max_horizon) {
    ExpansivityQuery q;
    q.eta = eta;
    q.mu = mu;
    q.horizon = max_horizon;
    q.bilateral = bilateral;
    std::vector<PairProbe> probes = build_probes(ifs, q, spec);
    int worst = 0;
    for (const auto& p : probes) {
        int first = -1;
        for (int n = 0; n <= max_horizon && first < 0; ++n) {
            if (probe_distance(ifs, p, n) > eta) first = n;
            else if (bilateral && n > 0 && probe_distance(ifs, p, -n) > eta) first = n;
        }
        if (first < 0)
            throw std::length_error("no separation horizon within budget; expansivity in question");
        worst = std::max(worst, first);
    }
    return worst;
}

UniqueShadowResult unique_shadow(const IfsSpec& ifs, const Chain& chain, double eps, double eta,
                                 const GridSpec& spec) {
    if (!(2.0 * eps < eta))
        throw std::invalid_argument("uniqueness certificate requires 2*eps < eta");
    Grid grid = grid_points(ifs.phase, spec);
    UniqueShadowResult res;
    res.diameter_bound = 2.0 * grid.covering_radius;
    res.best_deviation = std::numeric_limits<double>::infinity();

    // The grid rarely contains a start that survives many expanding steps, so
    // seed the candidate list with the constructive shadow start too.
    std::vector<Vec> candidates = grid.points;
    {
        ShadowQuery q;
        q.eps = eps;
        q.mode = ShadowMode::Concordant;
        ShadowResult r = auto_shadow(ifs, chain, q, spec);
        if (r.found) candidates.push_back(r.shadow.at(0));
    }

    const int n_pos = chain.max_index();
    const int n_neg = -chain.min_index();
    for (const auto& g : candidates) {
        double run = ifs.phase.distance(g, chain.at(0));
        Vec y = g;
        for (int i = 1; i <= n_pos && run < eps; ++i) {
            y = apply(ifs, chain.sigma.at(i), y);
            run = std::max(run, ifs.phase.distance(y, chain.at(i)));
        }
        y = g;
        for (int i = 1; i <= n_neg && run < eps; ++i) {
            y = apply_inverse(ifs, chain.sigma.at(-i), y);
            run = std::max(run, ifs.phase.distance(y, chain.at(-i)));
        }
        if (run < eps) {
            res.starts.push_back(g);
            if (run < res.best_deviation) {
                res.best_deviation = run;
                res.best_start = g;
            }
        }
    }
    res.shadow_found = !res.starts.empty();
    double diam = 0.0;
    for (std::size_t i = 0; i < res.starts.size(); ++i)
        for (std::size_t j = i + 1; j < res.starts.size(); ++j)
            diam = std::max(diam, ifs.phase.distance(res.starts[i], res.starts[j]));
    res.set_diameter = diam;
    res.unique_at_scale = res.shadow_found && diam <= res.diameter_bound;
    return res;
}

}  // namespace ifskit

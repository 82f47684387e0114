#include "ifskit/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace ifskit {

namespace {

Vec mat_apply(const Mat2& m, const Vec& v) {
    return {static_cast<double>(m[0][0]) * v[0] + static_cast<double>(m[0][1]) * v[1],
            static_cast<double>(m[1][0]) * v[0] + static_cast<double>(m[1][1]) * v[1]};
}

struct Slice {
    int lo = 0, hi = 0;  // inclusive index range
};

Slice effective_range(const Chain& chain, int horizon) {
    Slice s{chain.min_index(), chain.max_index()};
    if (horizon > 0) {
        s.lo = std::max(s.lo, -horizon);
        s.hi = std::min(s.hi, horizon);
    }
    return s;
}

Chain slice_chain(const Chain& chain, int lo, int hi) {
    Chain out;
    out.base_index = lo;
    out.sigma = chain.sigma;
    for (int k = lo; k <= hi; ++k) out.points.push_back(chain.at(k));
    for (int k = lo; k < hi; ++k)
        out.defects.push_back(chain.defects.at(static_cast<std::size_t>(k - chain.min_index())));
    return out;
}

void finalize_deviations(const IfsSpec& ifs, const Chain& query, ShadowResult& r) {
    r.deviations.clear();
    double worst = 0.0;
    for (int k = query.min_index(); k <= query.max_index(); ++k) {
        double d = ifs.phase.distance(query.at(k), r.shadow.at(k));
        r.deviations.push_back(d);
        worst = std::max(worst, d);
    }
    r.max_deviation = worst;
}

// Exact reparameterization of the delta-chain as a chain of the IFS itself,
// when the ambient parameter region admits it step by step.
std::optional<ParamSeq> exact_reparameterization(const IfsSpec& ifs, const Chain& chain) {
    if (chain.min_index() < 0) return std::nullopt;
    ParamSeq sigma;
    for (int j = chain.min_index(); j < chain.max_index(); ++j) {
        const Vec& x = chain.at(j);
        const Vec& y = chain.at(j + 1);
        Vec lambda;
        switch (ifs.family) {
            case Family::RotationCircle: lambda = {wrap01(y[0] - x[0])}; break;
            case Family::DoublingCircle: lambda = {wrap01(y[0] - 2.0 * x[0])}; break;
            case Family::AffineTorus: {
                Vec img = ifs.phase.canonicalize(mat_apply(ifs.matrix, x));
                lambda = ifs.phase.lifted_diff(img, y);
                break;
            }
            case Family::Affine1d: {
                bool hit = false;
                for (const auto& p : ifs.params.samples)
                    if (std::abs(p[0] * x[0] + p[1] - y[0]) <= 1e-12) {
                        lambda = p;
                        hit = true;
                        break;
                    }
                if (!hit) return std::nullopt;
                break;
            }
        }
        if (!ifs.params.contains(lambda)) {
            // Interval ambients on the circle: the wrapped representative may sit
            // just outside [a,b] while an integer translate is inside.
            if (const auto* iv = std::get_if<Interval>(&ifs.params.ambient);
                iv != nullptr && ifs.phase.periodic() && lambda.size() == 1) {
                double alt = lambda[0] - 1.0;
                if (alt >= iv->a - 1e-9 && alt <= iv->b + 1e-9) {
                    lambda[0] = alt;
                } else {
                    return std::nullopt;
                }
            } else {
                return std::nullopt;
            }
        }
        sigma.pos.push_back(lambda);
    }
    return sigma;
}

}  // namespace

ShadowResult brute_force_shadow(const IfsSpec& ifs, const Chain& chain, const ShadowQuery& q,
                                const GridSpec& spec) {
    Slice rng = effective_range(chain, q.horizon);
    Chain query = slice_chain(chain, rng.lo, rng.hi);
    Grid grid = grid_points(ifs.phase, spec);

    ShadowResult best;
    best.method = q.mode == ShadowMode::Concordant ? "brute/concordant" : "brute/free";
    best.max_deviation = std::numeric_limits<double>::infinity();

    if (q.mode == ShadowMode::Free) {
        if (query.min_index() < 0)
            throw std::invalid_argument("free-mode search supports unilateral chains only");
        if (auto sigma = exact_reparameterization(ifs, query)) {
            best.shadow = query;
            best.shadow.sigma = *sigma;
            best.shadow.defects.assign(query.points.size() - 1, 0.0);
            finalize_deviations(ifs, query, best);
            best.found = best.max_deviation < q.eps;
            return best;
        }
        // Branch-and-bound over net parameter prefixes per grid start.
        std::size_t expansions = 0;
        const int n = query.max_index();
        std::vector<Vec> sigma_stack(static_cast<std::size_t>(n));
        std::vector<Vec> pts(static_cast<std::size_t>(n) + 1);
        auto record = [&](double dev) {
            best.max_deviation = dev;
            best.shadow = Chain{};
            best.shadow.base_index = 0;
            best.shadow.points = pts;
            best.shadow.sigma.pos = sigma_stack;
            best.shadow.defects.assign(static_cast<std::size_t>(n), 0.0);
        };
        std::function<bool(int, double)> dfs = [&](int depth, double run) -> bool {
            if (depth == n) {
                if (run < best.max_deviation) record(run);
                return true;
            }
            for (const auto& lambda : ifs.params.samples) {
                if (++expansions > q.budget) return false;
                Vec y = apply(ifs, lambda, pts[static_cast<std::size_t>(depth)]);
                double dev = std::max(run, ifs.phase.distance(y, query.at(depth + 1)));
                if (dev >= best.max_deviation) continue;
                pts[static_cast<std::size_t>(depth) + 1] = y;
                sigma_stack[static_cast<std::size_t>(depth)] = lambda;
                if (!dfs(depth + 1, dev)) return false;
            }
            return true;
        };
        bool complete = true;
        for (const auto& g : grid.points) {
            double d0 = ifs.phase.distance(g, query.at(0));
            if (d0 >= best.max_deviation) continue;
            pts[0] = g;
            if (!dfs(0, d0)) {
                complete = false;
                break;
            }
        }
        if (!complete) best.status = ShadowStatus::Budget;
        if (best.shadow.points.empty()) {
            best.found = false;
            return best;
        }
        finalize_deviations(ifs, query, best);
        best.found = best.status == ShadowStatus::Ok && best.max_deviation < q.eps;
        return best;
    }

    // Concordant: the parameter sequence is pinned; minimize over grid starts.
    const int n_pos = query.max_index();
    const int n_neg = -query.min_index();
    for (const auto& g : grid.points) {
        double run = ifs.phase.distance(g, query.at(0));
        if (run >= best.max_deviation) continue;
        Vec y = g;
        bool pruned = false;
        std::vector<Vec> fwd(static_cast<std::size_t>(n_pos) + 1);
        fwd[0] = g;
        for (int i = 1; i <= n_pos && !pruned; ++i) {
            y = apply(ifs, query.sigma.at(i), y);
            fwd[static_cast<std::size_t>(i)] = y;
            run = std::max(run, ifs.phase.distance(y, query.at(i)));
            if (run >= best.max_deviation) pruned = true;
        }
        std::vector<Vec> bwd(static_cast<std::size_t>(n_neg));
        y = g;
        for (int i = 1; i <= n_neg && !pruned; ++i) {
            y = apply_inverse(ifs, query.sigma.at(-i), y);
            bwd[static_cast<std::size_t>(i) - 1] = y;
            run = std::max(run, ifs.phase.distance(y, query.at(-i)));
            if (run >= best.max_deviation) pruned = true;
        }
        if (pruned) continue;
        best.max_deviation = run;
        best.shadow = Chain{};
        best.shadow.base_index = -n_neg;
        for (int i = n_neg; i >= 1; --i) best.shadow.points.push_back(bwd[static_cast<std::size_t>(i) - 1]);
        for (int i = 0; i <= n_pos; ++i) best.shadow.points.push_back(fwd[static_cast<std::size_t>(i)]);
        best.shadow.sigma = query.sigma;
        best.shadow.defects.assign(query.points.size() - 1, 0.0);
    }
    if (best.shadow.points.empty()) {
        best.found = false;
        return best;
    }
    finalize_deviations(ifs, query, best);
    best.found = best.max_deviation < q.eps;
    return best;
}

ShadowResult contraction_shadow(const IfsSpec& ifs, const Chain& chain) {
    if (!(ifs.lipschitz < 1.0))
        throw std::invalid_argument("contraction_shadow requires uniform contraction < 1");
    if (chain.min_index() < 0)
        throw std::invalid_argument("contraction families support unilateral chains only");
    double delta = chain_defect(ifs, chain);
    ShadowResult r;
    r.method = "contraction";
    r.shadow = make_chain(ifs, chain.sigma, chain.at(0), chain.max_index());
    r.certificate = delta / (1.0 - ifs.lipschitz);
    finalize_deviations(ifs, chain, r);
    r.found = true;
    return r;
}

ShadowResult pullback_shadow(const IfsSpec& ifs, const Chain& chain) {
    if (!(ifs.expansion_lower > 1.0))
        throw std::invalid_argument("pullback_shadow requires uniform expansion > 1");
    if (ifs.family != Family::DoublingCircle)
        throw std::invalid_argument("pullback preimage branches implemented for the doubling family");
    if (chain.min_index() < 0)
        throw std::invalid_argument("pullback supports unilateral chains only");

    const int n = chain.max_index();
    double delta = chain_defect(ifs, chain);
    std::vector<Vec> pts(static_cast<std::size_t>(n) + 1);
    pts[static_cast<std::size_t>(n)] = chain.at(n);
    for (int k = n - 1; k >= 0; --k) {
        const Vec& lambda = chain.sigma.at(k + 1);
        double target = pts[static_cast<std::size_t>(k) + 1][0];
        // Solve 2x + lambda = target (mod 1): two branches.
        double b0 = wrap01((target - lambda[0]) / 2.0);
        double b1 = wrap01((target - lambda[0] + 1.0) / 2.0);
        double ref = chain.at(k)[0];
        double d0 = ifs.phase.distance({b0}, {ref});
        double d1 = ifs.phase.distance({b1}, {ref});
        pts[static_cast<std::size_t>(k)] = {d0 <= d1 ? b0 : b1};
    }
    ShadowResult r;
    r.method = "pullback";
    r.shadow.base_index = 0;
    r.shadow.points = std::move(pts);
    r.shadow.sigma = chain.sigma;
    r.shadow.defects.assign(static_cast<std::size_t>(n), 0.0);
    r.certificate = delta / (ifs.expansion_lower - 1.0);
    finalize_deviations(ifs, chain, r);
    r.found = true;
    return r;
}

namespace {

struct EigenSplit {
    double lu = 0.0, ls = 0.0;  // unstable / stable eigenvalues
    Vec vu, vs;                 // unit eigenvectors
    // Inverse of [vu vs] as rows.
    double inv[2][2] = {{0, 0}, {0, 0}};
};

EigenSplit hyperbolic_split(const Mat2& A) {
    double a = static_cast<double>(A[0][0]), b = static_cast<double>(A[0][1]);
    double c = static_cast<double>(A[1][0]), d = static_cast<double>(A[1][1]);
    double tr = a + d, det = a * d - b * c;
    double disc = tr * tr - 4.0 * det;
    if (disc <= 0.0) throw std::invalid_argument("matrix has no real eigensplit");
    double root = std::sqrt(disc);
    double l1 = (tr + root) / 2.0, l2 = (tr - root) / 2.0;
    EigenSplit e;
    e.lu = std::abs(l1) >= std::abs(l2) ? l1 : l2;
    e.ls = std::abs(l1) >= std::abs(l2) ? l2 : l1;
    if (!(std::abs(e.lu) > 1.0 && std::abs(e.ls) < 1.0))
        throw std::invalid_argument("matrix is not hyperbolic (needs |l_u| > 1 > |l_s|)");
    auto eigvec = [&](double l) -> Vec {
        Vec v1{b, l - a}, v2{l - d, c};
        Vec v = std::hypot(v1[0], v1[1]) >= std::hypot(v2[0], v2[1]) ? v1 : v2;
        double n = std::hypot(v[0], v[1]);
        return {v[0] / n, v[1] / n};
    };
    e.vu = eigvec(e.lu);
    e.vs = eigvec(e.ls);
    double det_v = e.vu[0] * e.vs[1] - e.vs[0] * e.vu[1];
    e.inv[0][0] = e.vs[1] / det_v;
    e.inv[0][1] = -e.vs[0] / det_v;
    e.inv[1][0] = -e.vu[1] / det_v;
    e.inv[1][1] = e.vu[0] / det_v;
    return e;
}

}  // namespace

ShadowResult linear_hyperbolic_shadow(const Mat2& A, const Chain& pseudo_orbit) {
    EigenSplit eig = hyperbolic_split(A);
    PhaseSpace torus = PhaseSpace::torus(2);
    const int lo = pseudo_orbit.min_index();
    const int hi = pseudo_orbit.max_index();
    const int steps = hi - lo;

    std::vector<double> eu(static_cast<std::size_t>(steps)), es(static_cast<std::size_t>(steps));
    double delta_eig = 0.0;
    for (int j = lo; j < hi; ++j) {
        Vec img = torus.canonicalize(mat_apply(A, pseudo_orbit.at(j)));
        Vec err = torus.lifted_diff(img, pseudo_orbit.at(j + 1));
        std::size_t i = static_cast<std::size_t>(j - lo);
        eu[i] = eig.inv[0][0] * err[0] + eig.inv[0][1] * err[1];
        es[i] = eig.inv[1][0] * err[0] + eig.inv[1][1] * err[1];
        delta_eig = std::max(delta_eig, std::hypot(eu[i], es[i]));
    }

    // c_{k+1} = A c_k - e_k componentwise in the eigenbasis; solved forward for
    // the stable part and backward for the unstable part, both stable recursions.
    std::vector<double> cu(static_cast<std::size_t>(steps) + 1, 0.0);
    std::vector<double> cs(static_cast<std::size_t>(steps) + 1, 0.0);
    for (int i = steps - 1; i >= 0; --i)
        cu[static_cast<std::size_t>(i)] =
            (cu[static_cast<std::size_t>(i) + 1] + eu[static_cast<std::size_t>(i)]) / eig.lu;
    for (int i = 1; i <= steps; ++i)
        cs[static_cast<std::size_t>(i)] =
            eig.ls * cs[static_cast<std::size_t>(i) - 1] - es[static_cast<std::size_t>(i) - 1];

    ShadowResult r;
    r.method = "linear_hyperbolic";
    r.shadow.base_index = lo;
    r.shadow.sigma = pseudo_orbit.sigma;
    double worst = 0.0;
    for (int k = lo; k <= hi; ++k) {
        std::size_t i = static_cast<std::size_t>(k - lo);
        Vec corr{cu[i] * eig.vu[0] + cs[i] * eig.vs[0], cu[i] * eig.vu[1] + cs[i] * eig.vs[1]};
        Vec z{wrap01(pseudo_orbit.at(k)[0] + corr[0]), wrap01(pseudo_orbit.at(k)[1] + corr[1])};
        r.shadow.points.push_back(z);
        double dev = torus.distance(z, pseudo_orbit.at(k));
        r.deviations.push_back(dev);
        worst = std::max(worst, dev);
    }
    for (int j = lo; j < hi; ++j) {
        Vec img = torus.canonicalize(mat_apply(A, r.shadow.at(j)));
        r.shadow.defects.push_back(torus.distance(img, r.shadow.at(j + 1)));
    }
    r.max_deviation = worst;
    r.certificate =
        delta_eig * (1.0 / (std::abs(eig.lu) - 1.0) + 1.0 / (1.0 - std::abs(eig.ls)));
    r.found = true;
    return r;
}

Chain example2_to_pseudo_orbit(const IfsSpec& ifs, const Chain& chain) {
    if (ifs.family != Family::AffineTorus)
        throw std::invalid_argument("pipeline requires the affine torus family");
    const Mat2& A = ifs.matrix;
    Mat2 inv{};
    if (chain.min_index() < 0) {
        long det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
        if (det != 1 && det != -1)
            throw std::invalid_argument("bilateral pipeline needs det +-1");
        inv = Mat2{{{det * A[1][1], -det * A[0][1]}, {-det * A[1][0], det * A[0][0]}}};
    }
    Chain out;
    out.base_index = chain.base_index;
    out.sigma = chain.sigma;
    out.points.resize(chain.points.size());

    PhaseSpace torus = ifs.phase;
    // x_k = y_k - sum_{i=1..k} A^{k-i} lambda_i (mod 1), accumulated with
    // per-step reduction; negative side adds sum_{i=1..k} A^{-k+i-1} lambda_{-i}.
    Vec s{0.0, 0.0};
    out.at(0) = chain.at(0);
    for (int k = 1; k <= chain.max_index(); ++k) {
        s = torus.canonicalize(mat_apply(A, s));
        const Vec& lk = chain.sigma.at(k);
        s = {wrap01(s[0] + lk[0]), wrap01(s[1] + lk[1])};
        const Vec& y = chain.at(k);
        out.at(k) = {wrap01(y[0] - s[0]), wrap01(y[1] - s[1])};
    }
    Vec t{0.0, 0.0};
    for (int k = 1; k <= -chain.min_index(); ++k) {
        const Vec& lk = chain.sigma.at(-k);
        t = {wrap01(t[0] + lk[0]), wrap01(t[1] + lk[1])};
        t = torus.canonicalize(mat_apply(inv, t));
        const Vec& y = chain.at(-k);
        out.at(-k) = {wrap01(y[0] + t[0]), wrap01(y[1] + t[1])};
    }
    for (int j = out.min_index(); j < out.max_index(); ++j) {
        Vec img = torus.canonicalize(mat_apply(A, out.at(j)));
        out.defects.push_back(torus.distance(img, out.at(j + 1)));
    }
    return out;
}

ShadowResult example2_concordant_shadow(const IfsSpec& ifs, const Chain& chain, double eps) {
    Chain pseudo = example2_to_pseudo_orbit(ifs, chain);
    ShadowResult lin = linear_hyperbolic_shadow(ifs.matrix, pseudo);

    // Map the shadow orbit back through the parameter sums; the conjugation is
    // a per-index translation, so deviations transfer unchanged.
    ShadowResult r;
    r.method = "example2_pipeline";
    r.certificate = lin.certificate;
    r.shadow.base_index = chain.base_index;
    r.shadow.sigma = chain.sigma;
    r.shadow.points.resize(chain.points.size());

    PhaseSpace torus = ifs.phase;
    const Mat2& A = ifs.matrix;
    Vec s{0.0, 0.0};
    r.shadow.at(0) = lin.shadow.at(0);
    for (int k = 1; k <= chain.max_index(); ++k) {
        s = torus.canonicalize(mat_apply(A, s));
        const Vec& lk = chain.sigma.at(k);
        s = {wrap01(s[0] + lk[0]), wrap01(s[1] + lk[1])};
        const Vec& z = lin.shadow.at(k);
        r.shadow.at(k) = {wrap01(z[0] + s[0]), wrap01(z[1] + s[1])};
    }
    if (chain.min_index() < 0) {
        long det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
        Mat2 inv{{{det * A[1][1], -det * A[0][1]}, {-det * A[1][0], det * A[0][0]}}};
        Vec t{0.0, 0.0};
        for (int k = 1; k <= -chain.min_index(); ++k) {
            const Vec& lk = chain.sigma.at(-k);
            t = {wrap01(t[0] + lk[0]), wrap01(t[1] + lk[1])};
            t = torus.canonicalize(mat_apply(inv, t));
            const Vec& z = lin.shadow.at(-k);
            r.shadow.at(-k) = {wrap01(z[0] - t[0]), wrap01(z[1] - t[1])};
        }
    }
    for (int j = r.shadow.min_index(); j < r.shadow.max_index(); ++j) {
        Vec img = apply(ifs, r.shadow.step_param(j), r.shadow.at(j));
        r.shadow.defects.push_back(torus.distance(img, r.shadow.at(j + 1)));
    }
    finalize_deviations(ifs, chain, r);
    r.found = r.max_deviation < eps;
    return r;
}

ShadowResult auto_shadow(const IfsSpec& ifs, const Chain& chain, const ShadowQuery& q,
                         const GridSpec& spec) {
    switch (q.method) {
        case ShadowMethod::Brute: return brute_force_shadow(ifs, chain, q, spec);
        case ShadowMethod::Contraction: return contraction_shadow(ifs, chain);
        case ShadowMethod::Pullback: return pullback_shadow(ifs, chain);
        case ShadowMethod::LinearHyperbolic: return example2_concordant_shadow(ifs, chain, q.eps);
        case ShadowMethod::Auto: break;
    }
    if (ifs.lipschitz < 1.0) {
        ShadowResult r = contraction_shadow(ifs, chain);
        r.found = r.max_deviation < q.eps;
        return r;
    }
    if (ifs.family == Family::DoublingCircle && ifs.expansion_lower > 1.0) {
        ShadowResult r = pullback_shadow(ifs, chain);
        r.found = r.max_deviation < q.eps;
        return r;
    }
    if (ifs.family == Family::AffineTorus) {
        try {
            return example2_concordant_shadow(ifs, chain, q.eps);
        } catch (const std::invalid_argument&) {
            // non-hyperbolic matrix: fall through to brute force
        }
    }
    return brute_force_shadow(ifs, chain, q, spec);
}

HorizonStabilityReport shadow_horizon_stability(const IfsSpec& ifs, const Chain& chain, double eps,
                                                const std::vector<int>& horizons,
                                                const GridSpec& spec) {
    Grid grid = grid_points(ifs.phase, spec);
    HorizonStabilityReport rep;
    rep.threshold = 2.0 * grid.covering_radius;
    for (int h : horizons) {
        ShadowQuery q;
        q.eps = eps;
        q.mode = ShadowMode::Concordant;
        q.horizon = h;
        ShadowResult r = brute_force_shadow(ifs, chain, q, spec);
        rep.horizons.push_back(h);
        rep.shadow_starts.push_back(r.shadow.at(0));
    }
    rep.stabilizing = true;
    for (std::size_t i = 1; i < rep.shadow_starts.size(); ++i) {
        double d = ifs.phase.distance(rep.shadow_starts[i - 1], rep.shadow_starts[i]);
        rep.start_distances.push_back(d);
        if (d > rep.threshold) rep.stabilizing = false;
    }
    return rep;
}

}  // namespace ifskit

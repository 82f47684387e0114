#include "ifskit/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace ifskit {

namespace {

long det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat2 inverse_unimodular(const Mat2& m) {
    long d = det2(m);
    if (d != 1 && d != -1) throw std::invalid_argument("matrix must have determinant +-1");
    Mat2 inv{{{d * m[1][1], -d * m[0][1]}, {-d * m[1][0], d * m[0][0]}}};
    return inv;
}

Vec mat_apply(const Mat2& m, const Vec& v) {
    return {static_cast<double>(m[0][0]) * v[0] + static_cast<double>(m[0][1]) * v[1],
            static_cast<double>(m[1][0]) * v[0] + static_cast<double>(m[1][1]) * v[1]};
}

double spectral_norm_sym2(const Mat2& m) {
    // For M^T M: largest singular value of m.
    double a = static_cast<double>(m[0][0]), b = static_cast<double>(m[0][1]);
    double c = static_cast<double>(m[1][0]), d = static_cast<double>(m[1][1]);
    double p = a * a + c * c, q = a * b + c * d, r = b * b + d * d;
    double tr = p + r, det = p * r - q * q;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return std::sqrt(tr / 2.0 + disc);
}

double smallest_singular_value2(const Mat2& m) {
    double a = static_cast<double>(m[0][0]), b = static_cast<double>(m[0][1]);
    double c = static_cast<double>(m[1][0]), d = static_cast<double>(m[1][1]);
    double p = a * a + c * c, q = a * b + c * d, r = b * b + d * d;
    double tr = p + r, det = p * r - q * q;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return std::sqrt(std::max(0.0, tr / 2.0 - disc));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x9e3779b97f4a7c15ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// ParamNet
// ---------------------------------------------------------------------------

ParamNet ParamNet::interval(double a, double b, double resolution) {
    if (!(a <= b)) throw std::invalid_argument("interval requires a <= b");
    if (!(resolution > 0.0)) throw std::invalid_argument("net resolution must be > 0");
    ParamNet net;
    net.ambient = Interval{a, b};
    if (a == b) {
        net.samples = {{a}};
        net.covering_radius = 0.0;
        return net;
    }
    long m = static_cast<long>(std::ceil((b - a) / resolution));
    double step = (b - a) / static_cast<double>(m);
    for (long i = 0; i <= m; ++i) net.samples.push_back({a + step * static_cast<double>(i)});
    net.covering_radius = step / 2.0;
    return net;
}

ParamNet ParamNet::ball(Vec center, double radius, double resolution) {
    if (center.empty()) throw std::invalid_argument("ball center must be nonempty");
    if (!(radius >= 0.0)) throw std::invalid_argument("ball radius must be >= 0");
    if (!(resolution > 0.0)) throw std::invalid_argument("net resolution must be > 0");
    ParamNet net;
    const int d = static_cast<int>(center.size());
    net.ambient = Ball{center, radius};
    if (radius == 0.0) {
        net.samples = {center};
        net.covering_radius = 0.0;
        return net;
    }
    long m = static_cast<long>(std::ceil(2.0 * radius / resolution));
    double step = 2.0 * radius / static_cast<double>(m);
    // Lattice over the bounding box; out-of-ball cell centers project radially
    // to the sphere, so every ball point stays within step*sqrt(d) of a sample.
    std::vector<long> idx(d, 0);
    std::vector<long> counts(d, m + 1);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m + 1);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Vec p(d);
        double norm2 = 0.0;
        for (int i = 0; i < d; ++i) {
            double off = -radius + step * static_cast<double>(idx[i]);
            p[i] = off;
            norm2 += off * off;
        }
        double norm = std::sqrt(norm2);
        if (norm > radius && norm > 0.0)
            for (int i = 0; i < d; ++i) p[i] *= radius / norm;
        for (int i = 0; i < d; ++i) p[i] += center[i];
        net.samples.push_back(std::move(p));
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }
    std::sort(net.samples.begin(), net.samples.end());
    net.samples.erase(std::unique(net.samples.begin(), net.samples.end()), net.samples.end());
    net.covering_radius = step * std::sqrt(static_cast<double>(d));
    return net;
}

ParamNet ParamNet::finite(std::vector<Vec> values) {
    if (values.empty()) throw std::invalid_argument("finite parameter set must be nonempty");
    ParamNet net;
    net.samples = values;
    net.ambient = FiniteSet{std::move(values)};
    net.covering_radius = 0.0;
    return net;
}

int ParamNet::dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().size()); }

bool ParamNet::contains(const Vec& lambda, double tol) const {
    if (static_cast<int>(lambda.size()) != dim()) return false;
    if (const auto* iv = std::get_if<Interval>(&ambient))
        return lambda[0] >= iv->a - tol && lambda[0] <= iv->b + tol;
    if (const auto* bl = std::get_if<Ball>(&ambient)) {
        double s = 0.0;
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            double d = lambda[i] - bl->center[i];
            s += d * d;
        }
        return std::sqrt(s) <= bl->radius + tol;
    }
    const auto& fs = std::get<FiniteSet>(ambient);
    for (const auto& v : fs.values) {
        double s = 0.0;
        for (std::size_t i = 0; i < lambda.size(); ++i) s += (lambda[i] - v[i]) * (lambda[i] - v[i]);
        if (std::sqrt(s) <= tol) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// IfsSpec
// ---------------------------------------------------------------------------

IfsSpec IfsSpec::rotation_circle(ParamNet params) {
    IfsSpec s;
    s.family = Family::RotationCircle;
    s.phase = PhaseSpace::circle();
    s.params = std::move(params);
    s.lipschitz = 1.0;
    s.expansion_lower = 1.0;
    s.invertible = true;
    return s;
}

IfsSpec IfsSpec::doubling_circle(ParamNet params) {
    IfsSpec s;
    s.family = Family::DoublingCircle;
    s.phase = PhaseSpace::circle();
    s.params = std::move(params);
    s.lipschitz = 2.0;
    s.expansion_lower = 2.0;
    s.invertible = false;
    return s;
}

IfsSpec IfsSpec::affine_torus(Mat2 A, ParamNet params) {
    IfsSpec s;
    s.family = Family::AffineTorus;
    s.phase = PhaseSpace::torus(2);
    s.params = std::move(params);
    s.matrix = A;
    s.lipschitz = spectral_norm_sym2(A);
    s.expansion_lower = smallest_singular_value2(A);
    s.invertible = (det2(A) == 1 || det2(A) == -1);
    return s;
}

IfsSpec IfsSpec::affine_1d(PhaseSpace box, std::vector<Vec> slope_offset_pairs) {
    if (box.kind != SpaceKind::Box || box.dim != 1)
        throw std::invalid_argument("affine_1d requires a one-dimensional box");
    double lip = 0.0, exp_lo = std::numeric_limits<double>::infinity();
    for (const auto& p : slope_offset_pairs) {
        if (p.size() != 2) throw std::invalid_argument("affine_1d maps are (slope, offset) pairs");
        lip = std::max(lip, std::abs(p[0]));
        exp_lo = std::min(exp_lo, std::abs(p[0]));
    }
    IfsSpec s;
    s.family = Family::Affine1d;
    s.phase = std::move(box);
    s.params = ParamNet::finite(std::move(slope_offset_pairs));
    s.lipschitz = lip;
    s.expansion_lower = exp_lo;
    s.invertible = false;  // injective on the box but not surjective in general
    return s;
}

double IfsSpec::param_lipschitz() const {
    // Translation families: C0 distance between members equals the parameter
    // translation norm. Finite families carry covering radius 0.
    return translation_family() ? 1.0 : 0.0;
}

std::string IfsSpec::family_name() const {
    switch (family) {
        case Family::RotationCircle: return "rotation_circle";
        case Family::AffineTorus: return "affine_torus";
        case Family::Affine1d: return "affine_1d";
        case Family::DoublingCircle: return "doubling_circle";
    }
    return "?";
}

Vec apply(const IfsSpec& ifs, const Vec& lambda, const Vec& x) {
    if (!ifs.params.contains(lambda))
        throw std::invalid_argument("parameter outside the ambient parameter region");
    if (!ifs.phase.contains(x)) throw std::invalid_argument("point outside the phase space");
    switch (ifs.family) {
        case Family::RotationCircle:
            return {wrap01(x[0] + lambda[0])};
        case Family::DoublingCircle:
            return {wrap01(2.0 * x[0] + lambda[0])};
        case Family::AffineTorus: {
            Vec y = mat_apply(ifs.matrix, x);
            return {wrap01(y[0] + lambda[0]), wrap01(y[1] + lambda[1])};
        }
        case Family::Affine1d:
            return {lambda[0] * x[0] + lambda[1]};
    }
    throw std::logic_error("unknown family");
}

Vec apply_inverse(const IfsSpec& ifs, const Vec& lambda, const Vec& x) {
    if (!ifs.invertible)
        throw std::invalid_argument("inverse iteration requires an invertible family");
    switch (ifs.family) {
        case Family::RotationCircle:
            return {wrap01(x[0] - lambda[0])};
        case Family::AffineTorus: {
            Mat2 inv = inverse_unimodular(ifs.matrix);
            Vec t{x[0] - lambda[0], x[1] - lambda[1]};
            Vec y = mat_apply(inv, t);
            return {wrap01(y[0]), wrap01(y[1])};
        }
        default: break;
    }
    throw std::invalid_argument("inverse not available for this family");
}

// ---------------------------------------------------------------------------
// ParamSeq / iteration
// ---------------------------------------------------------------------------

const Vec& ParamSeq::at(int k) const {
    if (k >= 1) {
        if (k > max_pos()) throw std::out_of_range("parameter index beyond sequence");
        return pos[static_cast<std::size_t>(k - 1)];
    }
    if (k <= -1) {
        if (-k > max_neg()) throw std::out_of_range("parameter index beyond sequence");
        return neg[static_cast<std::size_t>(-k - 1)];
    }
    throw std::out_of_range("parameter sequences have no index 0");
}

bool operator==(const ParamSeq& a, const ParamSeq& b) {
    return a.bilateral == b.bilateral && a.pos == b.pos && a.neg == b.neg;
}

Vec iterate(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x, int k) {
    if (k == 0) return ifs.phase.canonicalize(x);
    Vec y = ifs.phase.canonicalize(x);
    if (k > 0) {
        for (int i = 1; i <= k; ++i) y = apply(ifs, sigma.at(i), y);
    } else {
        if (!ifs.invertible)
            throw std::invalid_argument("negative iteration requires an invertible family");
        for (int i = 1; i <= -k; ++i) y = apply_inverse(ifs, sigma.at(-i), y);
    }
    return y;
}

Vec closed_form_example2(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x, int k) {
    if (ifs.family != Family::AffineTorus)
        throw std::invalid_argument("closed form requires the affine torus family");
    const Mat2& A = ifs.matrix;
    Vec z = ifs.phase.canonicalize(x);
    if (k >= 0) {
        // omega_{sigma_k}(x) = A^k x + sum_{i=1..k} A^{k-i} lambda_i (mod 1),
        // accumulated with per-step mod-1 reduction (exact for the integer matrix).
        Vec pw = z;
        Vec s{0.0, 0.0};
        for (int i = 1; i <= k; ++i) {
            pw = ifs.phase.canonicalize(mat_apply(A, pw));
            const Vec& li = sigma.at(i);
            s = mat_apply(A, s);
            s = {wrap01(s[0] + li[0]), wrap01(s[1] + li[1])};
        }
        return {wrap01(pw[0] + s[0]), wrap01(pw[1] + s[1])};
    }
    if (!ifs.invertible) throw std::invalid_argument("negative closed form needs det +-1");
    Mat2 inv = inverse_unimodular(A);
    int m = -k;
    // omega_{sigma_{-m}}(x) = A^{-m} x - sum_{i=1..m} A^{-m+i-1} lambda_{-i} (mod 1).
    Vec pw = z;
    Vec u{0.0, 0.0};
    for (int i = 1; i <= m; ++i) {
        pw = ifs.phase.canonicalize(mat_apply(inv, pw));
        const Vec& li = sigma.at(-i);
        u = {wrap01(u[0] + li[0]), wrap01(u[1] + li[1])};
        u = ifs.phase.canonicalize(mat_apply(inv, u));
    }
    return {wrap01(pw[0] - u[0]), wrap01(pw[1] - u[1])};
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

Chain make_chain(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x0, int n_pos, int n_neg) {
    if (n_pos < 0 || n_neg < 0) throw std::invalid_argument("chain lengths must be >= 0");
    if (n_neg > 0 && !ifs.invertible)
        throw std::invalid_argument("bilateral chains require an invertible family");
    Chain c;
    c.sigma = sigma;
    c.base_index = -n_neg;
    Vec x = ifs.phase.canonicalize(x0);
    std::vector<Vec> backward;
    Vec y = x;
    for (int i = 1; i <= n_neg; ++i) {
        y = apply_inverse(ifs, sigma.at(-i), y);
        backward.push_back(y);
    }
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) c.points.push_back(*it);
    c.points.push_back(x);
    y = x;
    for (int i = 1; i <= n_pos; ++i) {
        y = apply(ifs, sigma.at(i), y);
        c.points.push_back(y);
    }
    c.defects.assign(c.points.size() > 0 ? c.points.size() - 1 : 0, 0.0);
    return c;
}

namespace {

// Displacement of norm <= delta, quantized to the 2^-26 lattice so that
// dyadic chains stay exactly representable.
Vec seeded_displacement(int dim, double delta, std::uint64_t seed, std::uint64_t k) {
    Vec v(dim);
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        v[i] = 2.0 * hash_unit(seed, k, static_cast<std::uint64_t>(i)) - 1.0;
        norm2 += v[i] * v[i];
    }
    double norm = std::sqrt(norm2);
    double mag = delta * hash_unit(seed, k, 0xfeedULL);
    double scale = norm > 0.0 ? mag / norm : 0.0;
    for (int i = 0; i < dim; ++i) {
        double c = v[i] * scale;
        v[i] = std::trunc(c * 67108864.0) / 67108864.0;  // round toward zero, 2^-26 grid
    }
    return v;
}

// Displaced points must stay in the phase space; on boxes the nearest-point
// projection keeps the step defect at most delta (projection is 1-Lipschitz).
Vec clamp_to_space(const PhaseSpace& space, Vec p) {
    if (space.kind == SpaceKind::Box)
        for (int i = 0; i < space.dim; ++i) p[i] = std::clamp(p[i], space.lower[i], space.upper[i]);
    return p;
}

}  // namespace

Chain make_delta_chain(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x0, int n_pos,
                       double delta, std::uint64_t seed, int n_neg) {
    if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    Chain c;
    c.sigma = sigma;
    c.base_index = -n_neg;
    Vec x = ifs.phase.canonicalize(x0);
    std::vector<Vec> backward;
    Vec y = x;
    for (int i = 1; i <= n_neg; ++i) {
        // Backward step: choose x_{-i} so that omega_{lambda_{-i}}(x_{-i}) misses
        // x_{-i+1} by the recorded displacement.
        Vec target = y;
        Vec disp = seeded_displacement(ifs.phase.dim, delta, seed, static_cast<std::uint64_t>(2 * i));
        for (int j = 0; j < ifs.phase.dim; ++j) target[j] += disp[j];
        target = clamp_to_space(ifs.phase, ifs.phase.canonicalize(target));
        y = apply_inverse(ifs, sigma.at(-i), target);
        backward.push_back(y);
    }
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) c.points.push_back(*it);
    c.points.push_back(x);
    y = x;
    for (int i = 1; i <= n_pos; ++i) {
        y = apply(ifs, sigma.at(i), y);
        Vec disp = seeded_displacement(ifs.phase.dim, delta, seed, static_cast<std::uint64_t>(2 * i + 1));
        for (int j = 0; j < ifs.phase.dim; ++j) y[j] += disp[j];
        y = clamp_to_space(ifs.phase, ifs.phase.canonicalize(y));
        c.points.push_back(y);
    }
    c.defects.clear();
    for (int j = c.min_index(); j < c.max_index(); ++j)
        c.defects.push_back(ifs.phase.distance(c.at(j + 1), apply(ifs, c.step_param(j), c.at(j))));
    return c;
}

double chain_defect(const IfsSpec& ifs, const Chain& chain) {
    double worst = 0.0;
    for (int j = chain.min_index(); j < chain.max_index(); ++j) {
        double d = ifs.phase.distance(chain.at(j + 1), apply(ifs, chain.step_param(j), chain.at(j)));
        worst = std::max(worst, d);
    }
    return worst;
}

ParamSeq random_param_seq(const IfsSpec& ifs, int n_pos, std::uint64_t seed, int n_neg) {
    const auto& samples = ifs.params.samples;
    ParamSeq s;
    s.bilateral = n_neg > 0;
    for (int i = 1; i <= n_pos; ++i) {
        auto idx = static_cast<std::size_t>(hash_unit(seed, 1, static_cast<std::uint64_t>(i)) *
                                            static_cast<double>(samples.size()));
        s.pos.push_back(samples[std::min(idx, samples.size() - 1)]);
    }
    for (int i = 1; i <= n_neg; ++i) {
        auto idx = static_cast<std::size_t>(hash_unit(seed, 2, static_cast<std::uint64_t>(i)) *
                                            static_cast<double>(samples.size()));
        s.neg.push_back(samples[std::min(idx, samples.size() - 1)]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Transitivity at grid scale
// ---------------------------------------------------------------------------

namespace {

std::size_t snap_to_grid(const PhaseSpace& space, const Grid& grid, const Vec& p,
                         const std::vector<long>& counts, const std::vector<double>& steps) {
    std::size_t flat = 0;
    for (int i = 0; i < space.dim; ++i) {
        double base = space.periodic() ? 0.0 : space.lower[i];
        long idx = std::lround((p[i] - base) / steps[i]);
        if (space.periodic()) {
            idx %= counts[i];
            if (idx < 0) idx += counts[i];
        } else {
            idx = std::clamp(idx, 0L, counts[i] - 1);
        }
        flat = flat * static_cast<std::size_t>(counts[i]) + static_cast<std::size_t>(idx);
    }
    (void)grid;
    return flat;
}

}  // namespace

TransitiveReport check_transitive(const IfsSpec& ifs, const GridSpec& spec, int horizon,
                                  std::size_t budget) {
    if (horizon < 1) throw std::invalid_argument("transitivity horizon must be >= 1");
    Grid grid = grid_points(ifs.phase, spec);
    const std::size_t n = grid.points.size();

    std::vector<long> counts(ifs.phase.dim);
    std::vector<double> steps(ifs.phase.dim);
    for (int i = 0; i < ifs.phase.dim; ++i) {
        if (ifs.phase.periodic()) {
            long c = static_cast<long>(std::ceil(1.0 / spec.resolution));
            counts[i] = c;
            steps[i] = 1.0 / static_cast<double>(c);
        } else {
            double extent = ifs.phase.upper[i] - ifs.phase.lower[i];
            long c = static_cast<long>(std::ceil(extent / spec.resolution));
            counts[i] = c + 1;
            steps[i] = extent / static_cast<double>(c);
        }
    }

    TransitiveReport report;
    report.ball_radius = grid.covering_radius;
    std::size_t expansions = 0;

    // Cell-graph reachability: cell c steps to the cell of apply(lambda, center(c)).
    for (std::size_t u = 0; u < n; ++u) {
        struct NodeInfo {
            int depth = -1;
            std::size_t prev = 0;
            std::size_t param = 0;
        };
        std::vector<NodeInfo> info(n);
        std::deque<std::size_t> frontier{u};
        info[u].depth = 0;
        while (!frontier.empty()) {
            std::size_t cur = frontier.front();
            frontier.pop_front();
            if (info[cur].depth >= horizon) continue;
            for (std::size_t pi = 0; pi < ifs.params.samples.size(); ++pi) {
                if (++expansions > budget) {
                    report.status = TransitiveReport::Status::Budget;
                    return report;
                }
                Vec img = apply(ifs, ifs.params.samples[pi], grid.points[cur]);
                std::size_t nxt = snap_to_grid(ifs.phase, grid, img, counts, steps);
                if (info[nxt].depth < 0) {
                    info[nxt] = {info[cur].depth + 1, cur, pi};
                    frontier.push_back(nxt);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (info[v].depth < 0) {
                report.status = TransitiveReport::Status::NotTransitive;
                report.failing_pair = {u, v};
                return report;
            }
            TransitiveWitness w;
            w.from = u;
            w.to = v;
            w.steps = info[v].depth;
            std::vector<std::size_t> params;
            for (std::size_t cur = v; cur != u; cur = info[cur].prev)
                params.push_back(info[cur].param);
            for (auto it = params.rbegin(); it != params.rend(); ++it)
                w.sigma_prefix.push_back(ifs.params.samples[*it]);
            report.witnesses.push_back(std::move(w));
        }
    }
    report.status = TransitiveReport::Status::Transitive;
    return report;
}

}  // namespace ifskit

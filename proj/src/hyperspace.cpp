#include "ifskit/hyperspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ifskit {

namespace {

bool same_phase(const PhaseSpace& a, const PhaseSpace& b) {
    return a.kind == b.kind && a.dim == b.dim && a.lower == b.lower && a.upper == b.upper;
}

bool same_linear_part(const IfsSpec& a, const IfsSpec& b) {
    if (a.family != b.family) return false;
    switch (a.family) {
        case Family::RotationCircle:
        case Family::DoublingCircle: return true;
        case Family::AffineTorus: return a.matrix == b.matrix;
        case Family::Affine1d: return false;
    }
    return false;
}

}  // namespace

MetricEstimate c0_distance(const IfsSpec& ifs_a, const Vec& lambda_a, const IfsSpec& ifs_b,
                           const Vec& lambda_b, const GridSpec& spec) {
    if (!same_phase(ifs_a.phase, ifs_b.phase))
        throw std::invalid_argument("c0_distance requires a shared phase space");

    MetricEstimate est;
    est.witness = {{lambda_a, lambda_b}};
    if (same_linear_part(ifs_a, ifs_b)) {
        // Translation pair: sup_x d(L x + a, L x + b) = torus norm of b - a.
        Vec pa = ifs_a.phase.canonicalize(lambda_a);
        Vec pb = ifs_b.phase.canonicalize(lambda_b);
        est.value = ifs_a.phase.distance(pa, pb);
        est.error_bound = 0.0;
        return est;
    }
    Grid grid = grid_points(ifs_a.phase, spec);
    double best = -1.0;
    for (const auto& x : grid.points) {
        double d = ifs_a.phase.distance(apply(ifs_a, lambda_a, x), apply(ifs_b, lambda_b, x));
        if (d > best) {
            best = d;
            est.witness_point = x;
        }
    }
    est.value = best;
    est.error_bound = (ifs_a.lipschitz + ifs_b.lipschitz) * grid.covering_radius;
    return est;
}

double hausdorff_finite(const std::vector<Vec>& A, const std::vector<Vec>& B,
                        const std::function<double(const Vec&, const Vec&)>& metric) {
    if (A.empty() || B.empty())
        throw std::invalid_argument("hausdorff_finite requires nonempty sets");
    double worst = 0.0;
    auto one_sided = [&](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        for (const auto& a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : to) best = std::min(best, metric(a, b));
            worst = std::max(worst, best);
        }
    };
    one_sided(A, B);
    one_sided(B, A);
    return worst;
}

MetricEstimate ifs_hausdorff(const IfsSpec& a, const IfsSpec& b, const GridSpec& spec) {
    if (!same_phase(a.phase, b.phase))
        throw std::invalid_argument("ifs_hausdorff requires a shared phase space");

    double grid_err = 0.0;
    MetricEstimate est;
    double worst = 0.0;
    Vec wa, wb;
    auto one_sided = [&](const IfsSpec& from, const IfsSpec& to) {
        for (const auto& la : from.params.samples) {
            double best = std::numeric_limits<double>::infinity();
            Vec best_lb;
            for (const auto& lb : to.params.samples) {
                MetricEstimate d = c0_distance(from, la, to, lb, spec);
                grid_err = std::max(grid_err, d.error_bound);
                if (d.value < best) {
                    best = d.value;
                    best_lb = lb;
                }
            }
            if (best > worst) {
                worst = best;
                wa = la;
                wb = best_lb;
            }
        }
    };
    one_sided(a, b);
    one_sided(b, a);
    est.value = worst;
    est.witness = {{wa, wb}};
    est.error_bound = a.param_lipschitz() * a.params.covering_radius +
                      b.param_lipschitz() * b.params.covering_radius + grid_err;
    return est;
}

double equicontinuity_modulus(const IfsSpec& ifs, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("equicontinuity modulus needs eps > 0");
    return eps / std::max(ifs.lipschitz, 1.0);
}

}  // namespace ifskit

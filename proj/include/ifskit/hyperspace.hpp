#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ifskit/ifs.hpp"

namespace ifskit {

// Finite-grid estimate of a supremum with a certified interval: the true
// value lies in [value - error_bound, value + error_bound].
struct MetricEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    std::optional<std::pair<Vec, Vec>> witness;  // (lambda, lambda_tilde) attaining the max
    std::optional<Vec> witness_point;            // phase point attaining the max
};

// C0 distance between two partial maps. Translation pairs over an equal
// linear part short-circuit to the exact closed form with error 0.
MetricEstimate c0_distance(const IfsSpec& ifs_a, const Vec& lambda_a, const IfsSpec& ifs_b,
                           const Vec& lambda_b, const GridSpec& spec);

// Exact Hausdorff distance between two nonempty finite sets under a metric.
double hausdorff_finite(const std::vector<Vec>& A, const std::vector<Vec>& B,
                        const std::function<double(const Vec&, const Vec&)>& metric);

// Hausdorff distance between two IFS, treated as the finite families of
// their net samples under the C0 metric; the error bound carries the net
// covering slack and the phase-grid slack.
MetricEstimate ifs_hausdorff(const IfsSpec& a, const IfsSpec& b, const GridSpec& spec);

// Uniform equicontinuity modulus: d(x,y) < delta implies the images stay
// within eps for every family member.
double equicontinuity_modulus(const IfsSpec& ifs, double eps);

}  // namespace ifskit

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifskit/ifs.hpp"

namespace ifskit {

enum class ShadowMode { Concordant, Free };
enum class ShadowMethod { Brute, Contraction, Pullback, LinearHyperbolic, Auto };

struct ShadowQuery {
    double eps = 0.1;
    ShadowMode mode = ShadowMode::Concordant;
    int horizon = 0;  // 0 means the full chain
    ShadowMethod method = ShadowMethod::Auto;
    std::size_t budget = 50'000'000;
};

enum class ShadowStatus { Ok, Budget };

struct ShadowResult {
    bool found = false;
    Chain shadow;
    double max_deviation = 0.0;
    std::string method;
    std::optional<double> certificate;  // analytic deviation bound, when available
    ShadowStatus status = ShadowStatus::Ok;
    std::vector<double> deviations;  // per-index deviation, aligned with the query chain
};

// Exhaustive minimization of the max deviation over grid initial points
// (concordant mode) and, in free mode, additionally over net parameter
// prefixes with branch-and-bound pruning.
ShadowResult brute_force_shadow(const IfsSpec& ifs, const Chain& chain, const ShadowQuery& q,
                                const GridSpec& spec);

// Hyperbolic families (uniform contraction c < 1): the exact chain from the
// delta-chain's initial point, with the geometric-series certificate
// delta/(1-c).
ShadowResult contraction_shadow(const IfsSpec& ifs, const Chain& chain);

// Uniformly expanding surjective families: backward nearest-preimage
// construction with certificate delta/(e-1).
ShadowResult pullback_shadow(const IfsSpec& ifs, const Chain& chain);

// Shadowing for the single hyperbolic toral automorphism x -> A x mod 1:
// stable/unstable series corrections of the per-step errors.
ShadowResult linear_hyperbolic_shadow(const Mat2& A, const Chain& pseudo_orbit);

// The translated-chain pipeline for affine torus families: conjugate the
// delta-chain to a pseudo-orbit of the bare automorphism, shadow it there,
// and map the shadow back through the parameter sum; concordant by
// construction.
ShadowResult example2_concordant_shadow(const IfsSpec& ifs, const Chain& chain, double eps);

// Dispatches per the family's certificates: contraction, pullback, the
// affine-torus pipeline, or brute force.
ShadowResult auto_shadow(const IfsSpec& ifs, const Chain& chain, const ShadowQuery& q,
                         const GridSpec& spec);

struct HorizonStabilityReport {
    std::vector<int> horizons;
    std::vector<Vec> shadow_starts;
    std::vector<double> start_distances;  // successive distances
    bool stabilizing = false;
    double threshold = 0.0;  // 2 * grid covering radius
};

// Concordant brute-force shadows at increasing horizons; observable version
// of the finite-to-infinite compactness argument.
HorizonStabilityReport shadow_horizon_stability(const IfsSpec& ifs, const Chain& chain, double eps,
                                                const std::vector<int>& horizons,
                                                const GridSpec& spec);

// Conjugation between a delta-chain of an affine torus family and the
// pseudo-orbit of its bare automorphism (used by the pipeline and tests).
Chain example2_to_pseudo_orbit(const IfsSpec& ifs, const Chain& chain);

}  // namespace ifskit

#pragma once

#include <optional>
#include <vector>

#include "ifskit/ifs.hpp"
#include "ifskit/shadowing.hpp"

namespace ifskit {

struct ExpansivityQuery {
    double eta = 0.2;        // separation threshold to exceed
    double mu = 0.05;        // pair-separation floor
    int horizon = 10;
    int sigma_samples = 16;  // only used when the dynamics do not collapse
    bool bilateral = false;
};

struct ExpansivityCounterexample {
    Vec x, y;
    ParamSeq sigma;  // empty when the difference dynamics are sigma-independent
};

struct ExpansivityVerdict {
    bool expansive_at_scale = false;
    double eta = 0.0, mu = 0.0;
    int horizon_used = 0;
    bool bilateral = false;
    std::optional<ExpansivityCounterexample> counterexample;
    // Per-step minimum over tested pairs of the best separation reached by
    // step n (plot series).
    std::vector<double> min_separation_by_step;
};

// Checks, at grid scale, that every pair at distance >= mu separates beyond
// eta within the horizon along every tested parameter sequence. For
// translation families over a fixed linear part the difference dynamics are
// sigma-independent and the scan collapses to the bare linear map; the pair
// set is augmented with eigendirection probes for hyperbolic toral matrices.
ExpansivityVerdict estimate_expansivity(const IfsSpec& ifs, const ExpansivityQuery& q,
                                        const GridSpec& spec);

// Least horizon N such that every tested pair at distance >= mu separates
// beyond eta by step N. Throws std::length_error when no horizon within the
// budget works (the expansivity assumption is then in question).
int separation_horizon(const IfsSpec& ifs, double eta, double mu, const GridSpec& spec,
                       bool bilateral = false, int max_horizon = 64);

struct UniqueShadowResult {
    bool shadow_found = false;
    bool unique_at_scale = false;
    Vec best_start;
    double best_deviation = 0.0;
    std::vector<Vec> starts;  // all grid starts whose concordant chain eps-shadows
    double set_diameter = 0.0;
    double diameter_bound = 0.0;  // 2 * grid covering radius
};

// Collects every grid initial point whose concordant chain eps-shadows the
// delta-chain; under 2 eps < eta the set must have diameter at most twice
// the covering radius.
UniqueShadowResult unique_shadow(const IfsSpec& ifs, const Chain& chain, double eps, double eta,
                                 const GridSpec& spec);

}  // namespace ifskit

#pragma once

#include <optional>
#include <vector>

#include "ifskit/hyperspace.hpp"
#include "ifskit/ifs.hpp"
#include "ifskit/shadowing.hpp"

namespace ifskit {

// The perturbed system of the chain-correction construction: each step k
// composes a base partial map with a torus translation that lands the step
// exactly on the recorded chain point.
struct PerturbedIfs {
    IfsSpec base;
    std::vector<Vec> shifts;  // v_0 .. v_{n-1}

    Vec apply_step(int k, const Vec& lambda, const Vec& x) const;
};

// sigma-tilde entry: (step index, base parameter).
struct PerturbedSeq {
    std::vector<std::pair<int, Vec>> entries;  // entry j drives step j -> j+1
};

struct CompatiblePair {
    std::vector<double> per_index_distance;
    double delta = 0.0;
    bool compatible = false;
};

struct PerturbationResult {
    PerturbedIfs perturbed;
    PerturbedSeq sigma_tilde;
    Vec y0;
};

// Lemma-style construction: given a finite delta-chain with defect < Delta,
// builds a nearby IFS whose designated sequence reproduces the chain exactly
// from its initial point.
PerturbationResult build_perturbed_ifs(const IfsSpec& ifs, const Chain& chain, double Delta);

// Iterate of the perturbed system along sigma-tilde (k steps from x).
Vec perturbed_iterate(const PerturbedIfs& pert, const PerturbedSeq& st, const Vec& x, int k);

// Per-index C0 distances between omega_{lambda_k} and the perturbed
// omega-tilde_{sigma-tilde_k} partial maps.
CompatiblePair check_compatibility(const IfsSpec& ifs, const ParamSeq& sigma,
                                   const PerturbedIfs& pert, const PerturbedSeq& sigma_tilde,
                                   double delta);

// Generic per-index compatibility of two plain sequences over two IFS.
CompatiblePair check_compatibility(const IfsSpec& a, const ParamSeq& sigma_a, const IfsSpec& b,
                                   const ParamSeq& sigma_b, double delta, const GridSpec& spec);

// Hausdorff distance between the base family and its perturbed family
// (closed forms for translation bases).
MetricEstimate perturbed_hausdorff(const IfsSpec& ifs, const PerturbedIfs& pert);

struct ConjugacySample {
    Vec grid_point;
    Vec h_value;
    double displacement = 0.0;
};

// Samples the tracking map h on the phase grid: h(x) is the unique
// concordant shadow start of the pseudo-chain of x under the perturbed
// system.
std::vector<ConjugacySample> build_conjugacy(const IfsSpec& ifs, const PerturbedIfs& pert,
                                             const ParamSeq& sigma, const PerturbedSeq& sigma_tilde,
                                             double eps, const GridSpec& spec, int horizon);

// h at a single point (same construction, off-grid allowed).
Vec conjugacy_at_point(const IfsSpec& ifs, const PerturbedIfs& pert, const ParamSeq& sigma,
                       const PerturbedSeq& sigma_tilde, double eps, const GridSpec& spec,
                       int horizon, const Vec& x);

struct StabilityReport {
    MetricEstimate d_h_bound;
    CompatiblePair compat;
    std::vector<ConjugacySample> samples;
    double bound_i = 0.0;   // max_{x,k} d(omega_{sigma_k}(h(x)), omega-tilde_{sigma-tilde_k}(x))
    double bound_ii = 0.0;  // max_x d(x, h(x))
    std::optional<std::pair<Vec, int>> witness_i;
    int horizon = 0;
    double eps = 0.0;
    bool pass = false;
    std::vector<double> bound_i_by_step;
};

StabilityReport verify_stability(const IfsSpec& ifs, const PerturbedIfs& pert, const ParamSeq& sigma,
                                 const PerturbedSeq& sigma_tilde,
                                 const std::vector<ConjugacySample>& samples, double eps,
                                 int horizon);

// Full stability-to-shadowing pipeline: perturb, track, and return the chain
// of z0 = h(x0) as a concordant shadow of the input delta-chain.
ShadowResult stability_to_shadowing_experiment(const IfsSpec& ifs, const Chain& chain, double eps,
                                               double Delta, const GridSpec& spec);

}  // namespace ifskit

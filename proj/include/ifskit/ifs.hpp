#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ifskit/phase.hpp"

namespace ifskit {

// ---------------------------------------------------------------------------
// Parameter nets
// ---------------------------------------------------------------------------

struct Interval {
    double a = 0.0, b = 1.0;
};
struct Ball {
    Vec center;
    double radius = 0.0;
};
struct FiniteSet {
    std::vector<Vec> values;
};

// A compact parameter region together with a deterministic finite net whose
// covering radius is certified by construction.
struct ParamNet {
    std::variant<Interval, Ball, FiniteSet> ambient;
    std::vector<Vec> samples;
    double covering_radius = 0.0;

    static ParamNet interval(double a, double b, double resolution);
    static ParamNet ball(Vec center, double radius, double resolution);
    static ParamNet finite(std::vector<Vec> values);

    int dim() const;
    bool contains(const Vec& lambda, double tol = 1e-9) const;
};

// ---------------------------------------------------------------------------
// IFS specification
// ---------------------------------------------------------------------------

enum class Family { RotationCircle, AffineTorus, Affine1d, DoublingCircle };

using Mat2 = std::array<std::array<long, 2>, 2>;

struct IfsSpec {
    Family family = Family::RotationCircle;
    PhaseSpace phase;
    ParamNet params;
    Mat2 matrix{{{1, 0}, {0, 1}}};  // affine_torus only
    double lipschitz = 1.0;
    double expansion_lower = 0.0;
    bool invertible = false;

    bool hyperbolic() const { return lipschitz < 1.0; }
    bool expanding() const { return expansion_lower > 1.0; }
    // Lipschitz constant of lambda |-> omega_lambda in the C0 metric.
    double param_lipschitz() const;
    // Families of the form x |-> L(x) + lambda over a fixed linear part.
    bool translation_family() const { return family != Family::Affine1d; }

    static IfsSpec rotation_circle(ParamNet params);
    static IfsSpec doubling_circle(ParamNet params);
    static IfsSpec affine_torus(Mat2 A, ParamNet params);
    static IfsSpec affine_1d(PhaseSpace box, std::vector<Vec> slope_offset_pairs);

    std::string family_name() const;
};

Vec apply(const IfsSpec& ifs, const Vec& lambda, const Vec& x);
Vec apply_inverse(const IfsSpec& ifs, const Vec& lambda, const Vec& x);

// ---------------------------------------------------------------------------
// Parameter sequences and chains
// ---------------------------------------------------------------------------

// Indexed by Z* (no index 0): pos holds lambda_1.., neg holds lambda_{-1}..
struct ParamSeq {
    std::vector<Vec> pos;
    std::vector<Vec> neg;
    bool bilateral = false;

    const Vec& at(int k) const;  // k >= 1 or k <= -1
    int max_pos() const { return static_cast<int>(pos.size()); }
    int max_neg() const { return static_cast<int>(neg.size()); }
};

bool operator==(const ParamSeq& a, const ParamSeq& b);

// omega_{sigma_k}; k = 0 is the identity, k < 0 needs an invertible family.
Vec iterate(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x, int k);

// Closed-form evaluation for translation-over-linear-part torus families
// (matrix powers plus a translated parameter sum, mod 1).
Vec closed_form_example2(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x, int k);

struct Chain {
    std::vector<Vec> points;
    int base_index = 0;  // index of points.front(); negative for bilateral chains
    ParamSeq sigma;
    std::vector<double> defects;  // defects[i] is the step points[i] -> points[i+1]

    int min_index() const { return base_index; }
    int max_index() const { return base_index + static_cast<int>(points.size()) - 1; }
    const Vec& at(int k) const { return points.at(static_cast<std::size_t>(k - base_index)); }
    Vec& at(int k) { return points.at(static_cast<std::size_t>(k - base_index)); }
    // Parameter of the step from index j to j+1: lambda_{j+1} for j >= 0, lambda_j for j < 0.
    const Vec& step_param(int j) const { return sigma.at(j >= 0 ? j + 1 : j); }
};

Chain make_chain(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x0, int n_pos,
                 int n_neg = 0);
Chain make_delta_chain(const IfsSpec& ifs, const ParamSeq& sigma, const Vec& x0, int n_pos,
                       double delta, std::uint64_t seed, int n_neg = 0);
double chain_defect(const IfsSpec& ifs, const Chain& chain);

// Draws a uniformly seeded parameter sequence from the net samples.
ParamSeq random_param_seq(const IfsSpec& ifs, int n_pos, std::uint64_t seed, int n_neg = 0);

// ---------------------------------------------------------------------------
// Finite-resolution transitivity check
// ---------------------------------------------------------------------------

struct TransitiveWitness {
    std::size_t from = 0, to = 0;
    std::vector<Vec> sigma_prefix;
    int steps = 0;
};

struct TransitiveReport {
    enum class Status { Transitive, NotTransitive, Budget } status = Status::Transitive;
    std::vector<TransitiveWitness> witnesses;
    std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
    double ball_radius = 0.0;
};

TransitiveReport check_transitive(const IfsSpec& ifs, const GridSpec& spec, int horizon,
                                  std::size_t budget = 50'000'000);

// Deterministic counter-based stream used for delta-chains and sampling.
double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace ifskit

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "ifskit/stability.hpp"

using namespace ifskit;

TEST_CASE("perturbed system reproduces the chain exactly") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        ParamSeq sigma = random_param_seq(cat, 20, seed);
        Chain c = make_delta_chain(cat, sigma, testutil::dyadic_point2(80, seed), 20, 0.005, seed);
        PerturbationResult pr = build_perturbed_ifs(cat, c, 0.05);
        for (int k = 0; k <= 20; ++k) {
            Vec y = perturbed_iterate(pr.perturbed, pr.sigma_tilde, pr.y0, k);
            CHECK(cat.phase.distance(y, c.at(k)) <= 1e-12);
        }
        for (const auto& v : pr.perturbed.shifts)
            CHECK(std::hypot(v[0], v[1]) <= 0.005 + 1e-12);
    }
}

TEST_CASE("perturbation construction preconditions") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 10, 1);
    Chain c = make_delta_chain(cat, sigma, {0.5, 0.5}, 10, 0.02, 1);
    CHECK_THROWS_AS(build_perturbed_ifs(cat, c, 0.01), std::invalid_argument);  // defect >= Delta

    IfsSpec cantor = IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}), {{1.0 / 3.0, 0.0}});
    ParamSeq s2;
    s2.pos = {{1.0 / 3.0, 0.0}};
    Chain c2 = make_chain(cantor, s2, {0.5}, 1);
    CHECK_THROWS_AS(build_perturbed_ifs(cantor, c2, 0.1), std::invalid_argument);  // box phase

    ParamSeq s3 = random_param_seq(cat, 5, 2, 5);
    Chain c3 = make_chain(cat, s3, {0.5, 0.5}, 5, 5);
    CHECK_THROWS_AS(build_perturbed_ifs(cat, c3, 0.1), std::invalid_argument);  // bilateral
}

TEST_CASE("exact chains perturb by nothing") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 15, 4);
    Chain c = make_chain(cat, sigma, testutil::dyadic_point2(81, 0), 15);
    PerturbationResult pr = build_perturbed_ifs(cat, c, 0.05);
    for (const auto& v : pr.perturbed.shifts) CHECK(std::hypot(v[0], v[1]) <= 1e-12);
    MetricEstimate dh = perturbed_hausdorff(cat, pr.perturbed);
    CHECK(dh.value <= dh.error_bound + 1e-12);
}

TEST_CASE("perturbed family stays Hausdorff-close") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 20, 6);
    Chain c = make_delta_chain(cat, sigma, {0.25, 0.25}, 20, 0.01, 6);
    PerturbationResult pr = build_perturbed_ifs(cat, c, 0.05);
    double defect = chain_defect(cat, c);
    MetricEstimate dh = perturbed_hausdorff(cat, pr.perturbed);
    CHECK(dh.value <= defect + dh.error_bound + 1e-12);
}

TEST_CASE("sequences are Delta-compatible by construction") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 20, 7);
    Chain c = make_delta_chain(cat, sigma, {0.5, 0.25}, 20, 0.01, 7);
    PerturbationResult pr = build_perturbed_ifs(cat, c, 0.05);
    CompatiblePair cp = check_compatibility(cat, c.sigma, pr.perturbed, pr.sigma_tilde, 0.05);
    CHECK(cp.compatible);
    REQUIRE(cp.per_index_distance.size() == 20);
    for (std::size_t j = 0; j < 20; ++j) {
        const auto& v = pr.perturbed.shifts[j];
        CHECK(cp.per_index_distance[j] == doctest::Approx(std::hypot(v[0], v[1])).epsilon(1e-12));
    }
}

TEST_CASE("generic compatibility over two plain sequences") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05));
    ParamSeq a, b;
    a.pos = {{0.1}, {0.2}};
    b.pos = {{0.12}, {0.25}};
    CompatiblePair cp = check_compatibility(rot, a, rot, b, 0.06, GridSpec{0.05});
    CHECK(cp.compatible);
    CHECK(cp.per_index_distance[0] == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(cp.per_index_distance[1] == doctest::Approx(0.05).epsilon(1e-12));
    b.pos[1] = {0.5};
    CHECK_FALSE(check_compatibility(rot, a, rot, b, 0.06, GridSpec{0.05}).compatible);
}

TEST_CASE("stability verification on a coarse grid") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 20, 12);
    Chain c = make_delta_chain(cat, sigma, testutil::dyadic_point2(82, 0), 20, 0.004, 12);
    PerturbationResult pr = build_perturbed_ifs(cat, c, 0.05);
    double eps = 0.05;
    auto samples =
        build_conjugacy(cat, pr.perturbed, c.sigma, pr.sigma_tilde, eps, GridSpec{1.0 / 8.0}, 20);
    StabilityReport rep =
        verify_stability(cat, pr.perturbed, c.sigma, pr.sigma_tilde, samples, eps, 20);
    CHECK(rep.pass);
    CHECK(rep.bound_i < eps);
    CHECK(rep.bound_ii < eps);

    // independent recomputation of bound_ii from the raw samples
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, cat.phase.distance(s.grid_point, s.h_value));
    CHECK(std::abs(worst - rep.bound_ii) <= 1e-12);

    // an unreachable tolerance flips the verdict with a witness
    StabilityReport tight =
        verify_stability(cat, pr.perturbed, c.sigma, pr.sigma_tilde, samples, rep.bound_i / 2.0, 20);
    CHECK_FALSE(tight.pass);
    CHECK(tight.witness_i.has_value());
}

TEST_CASE("stability pipeline yields a concordant shadow") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ParamSeq sigma = random_param_seq(cat, 25, seed);
        Chain c = make_delta_chain(cat, sigma, testutil::dyadic_point2(83, seed), 25, 0.005, seed);
        ShadowResult r = stability_to_shadowing_experiment(cat, c, 0.05, 0.05, GridSpec{1.0 / 64.0});
        CHECK(r.found);
        CHECK(r.max_deviation < 0.05);
        CHECK(r.shadow.sigma == c.sigma);  // byte-identical parameter prefix
        CHECK(chain_defect(cat, r.shadow) <= 1e-9);
    }
}

TEST_CASE("pipeline start agrees with the direct constructive shadow") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    Grid grid = grid_points(cat.phase, GridSpec{1.0 / 64.0});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ParamSeq sigma = random_param_seq(cat, 25, seed + 40);
        Chain c =
            make_delta_chain(cat, sigma, testutil::dyadic_point2(84, seed), 25, 0.005, seed + 40);
        ShadowResult via_stab =
            stability_to_shadowing_experiment(cat, c, 0.05, 0.05, GridSpec{1.0 / 64.0});
        ShadowResult direct = example2_concordant_shadow(cat, c, 0.05);
        CHECK(cat.phase.distance(via_stab.shadow.at(0), direct.shadow.at(0)) <=
              2.0 * grid.covering_radius + 1e-12);
    }
}

TEST_CASE("pipeline on an exact chain starts at the chain itself") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 15, 30);
    Chain c = make_chain(cat, sigma, testutil::dyadic_point2(85, 0), 15);
    ShadowResult r = stability_to_shadowing_experiment(cat, c, 0.05, 0.05, GridSpec{1.0 / 64.0});
    CHECK(r.max_deviation <= 1e-9);
}

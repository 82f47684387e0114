#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "ifskit/expansive.hpp"

using namespace ifskit;

TEST_CASE("cat family is bilaterally expansive at grid scale") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ExpansivityQuery q;
    q.eta = 0.2;
    q.mu = 0.05;
    q.horizon = 12;
    q.bilateral = true;
    ExpansivityVerdict v = estimate_expansivity(cat, q, GridSpec{1.0 / 32.0});
    CHECK(v.expansive_at_scale);
    CHECK_FALSE(v.counterexample.has_value());
    // the separation series is monotone and ends above eta
    for (std::size_t i = 1; i < v.min_separation_by_step.size(); ++i)
        CHECK(v.min_separation_by_step[i] >= v.min_separation_by_step[i - 1] - 1e-12);
    CHECK(v.min_separation_by_step.back() > q.eta);
}

TEST_CASE("cat family is not positively expansive: stable pairs hug forward") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ExpansivityQuery q;
    q.eta = 0.2;
    q.mu = 0.05;
    q.horizon = 12;
    q.bilateral = false;
    ExpansivityVerdict v = estimate_expansivity(cat, q, GridSpec{1.0 / 32.0});
    CHECK_FALSE(v.expansive_at_scale);
    REQUIRE(v.counterexample.has_value());
    // the witness pair contracts forward in time (stable direction behaviour)
    Vec x = v.counterexample->x, y = v.counterexample->y;
    PhaseSpace t = cat.phase;
    auto step = [&](Vec p) {
        return t.canonicalize({2.0 * p[0] + p[1], p[0] + p[1]});
    };
    double d0 = t.distance(x, y);
    for (int n = 0; n < q.horizon; ++n) {
        x = step(x);
        y = step(y);
    }
    CHECK(t.distance(x, y) <= 0.2 + 1e-12);
    CHECK(d0 >= q.mu - 1e-12);
}

TEST_CASE("rotations are nowhere expansive") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05));
    ExpansivityQuery q;
    q.eta = 0.2;
    q.mu = 0.05;
    q.horizon = 10;
    ExpansivityVerdict v = estimate_expansivity(rot, q, GridSpec{1.0 / 16.0});
    CHECK_FALSE(v.expansive_at_scale);
    REQUIRE(v.counterexample.has_value());
}

TEST_CASE("separation horizon for the cat family is small") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    int n = separation_horizon(cat, 0.2, 0.05, GridSpec{1.0 / 32.0}, true);
    CHECK(n >= 1);
    CHECK(n <= 12);
}

TEST_CASE("separation horizon refuses non-expansive families") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05));
    CHECK_THROWS_AS(separation_horizon(rot, 0.2, 0.05, GridSpec{1.0 / 16.0}, false, 32),
                    std::length_error);
}

TEST_CASE("expansivity query validation") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ExpansivityQuery q;
    q.eta = -1.0;
    CHECK_THROWS_AS(estimate_expansivity(cat, q, GridSpec{0.1}), std::invalid_argument);
    IfsSpec dbl = IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.1));
    ExpansivityQuery q2;
    q2.bilateral = true;
    CHECK_THROWS_AS(estimate_expansivity(dbl, q2, GridSpec{0.1}), std::invalid_argument);
}

TEST_CASE("unique shadow under expansiveness and concordant shadowing") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ParamSeq sigma = random_param_seq(cat, 20, seed);
        Chain c = make_delta_chain(cat, sigma, testutil::dyadic_point2(70, seed), 20, 0.005, seed);
        UniqueShadowResult u = unique_shadow(cat, c, 0.05, 0.2, GridSpec{1.0 / 32.0});
        CHECK(u.shadow_found);
        CHECK(u.unique_at_scale);
        CHECK(u.set_diameter <= u.diameter_bound + 1e-12);
        CHECK(u.best_deviation < 0.05);
        // triangle property: every pair of collected shadows stays within 2 eps
        for (std::size_t i = 0; i < u.starts.size(); ++i)
            for (std::size_t j = i + 1; j < u.starts.size(); ++j) {
                Vec a = u.starts[i], b = u.starts[j];
                for (int k = 0; k <= c.max_index(); ++k) {
                    CHECK(cat.phase.distance(a, b) < 2.0 * 0.05);
                    if (k < c.max_index()) {
                        a = apply(cat, c.sigma.at(k + 1), a);
                        b = apply(cat, c.sigma.at(k + 1), b);
                    }
                }
            }
    }
}

TEST_CASE("uniqueness certificate refused for isometric families") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05));
    ParamSeq sigma = random_param_seq(rot, 10, 1);
    Chain c = make_chain(rot, sigma, {0.5}, 10);
    UniqueShadowResult u = unique_shadow(rot, c, 0.05, 0.2, GridSpec{0.01});
    CHECK(u.shadow_found);
    // translated starts track equally well: the start set is a whole arc
    CHECK(u.set_diameter > u.diameter_bound);
    CHECK_FALSE(u.unique_at_scale);
}

TEST_CASE("uniqueness precondition 2 eps < eta") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    Chain c = make_chain(cat, random_param_seq(cat, 5, 1), {0.0, 0.0}, 5);
    CHECK_THROWS_AS(unique_shadow(cat, c, 0.2, 0.2, GridSpec{0.1}), std::invalid_argument);
}

TEST_CASE("exact chain of an expansive family shadows from its own start") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 15, 9);
    Chain c = make_chain(cat, sigma, {0.25, 0.75}, 15);
    UniqueShadowResult u = unique_shadow(cat, c, 0.05, 0.2, GridSpec{1.0 / 32.0});
    REQUIRE(u.shadow_found);
    CHECK(cat.phase.distance(u.best_start, c.at(0)) <= u.diameter_bound + 1e-12);
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "ifskit/ifs.hpp"

using namespace ifskit;

TEST_CASE("interval net covers its interval") {
    ParamNet net = ParamNet::interval(0.0, 1.0, 0.07);
    for (int i = 0; i < 200; ++i) {
        double x = hash_unit(10, i, 0);
        double best = 1e9;
        for (const auto& s : net.samples) best = std::min(best, std::abs(s[0] - x));
        CHECK(best <= net.covering_radius + 1e-12);
    }
    CHECK(net.contains({0.5}));
    CHECK_FALSE(net.contains({1.5}));
}

TEST_CASE("ball net covers its ball") {
    ParamNet net = ParamNet::ball({0.0, 0.0}, 0.05, 0.02);
    for (int i = 0; i < 200; ++i) {
        double r = 0.05 * std::sqrt(hash_unit(11, i, 0));
        double th = 2.0 * 3.14159265358979323846 * hash_unit(11, i, 1);
        Vec p{r * std::cos(th), r * std::sin(th)};
        double best = 1e9;
        for (const auto& s : net.samples)
            best = std::min(best, std::hypot(s[0] - p[0], s[1] - p[1]));
        CHECK(best <= net.covering_radius + 1e-12);
    }
}

TEST_CASE("family metadata") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.1));
    CHECK(rot.lipschitz == 1.0);
    CHECK(rot.invertible);

    IfsSpec dbl = IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.1));
    CHECK(dbl.expansion_lower == 2.0);
    CHECK_FALSE(dbl.invertible);

    IfsSpec cat = IfsSpec::affine_torus(testutil::kCat, ParamNet::ball({0.0, 0.0}, 0.05, 0.02));
    // Singular values of a symmetric matrix are |eigenvalues|: (3 +- sqrt(5))/2.
    CHECK(cat.lipschitz == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(cat.expansion_lower == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(cat.invertible);

    IfsSpec cantor = IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}),
                                        {{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}});
    CHECK(cantor.lipschitz == doctest::Approx(1.0 / 3.0));
    CHECK(cantor.hyperbolic());
}

TEST_CASE("apply rejects foreign parameters and points") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 0.5, 0.1));
    CHECK_THROWS_AS(apply(rot, {0.9}, {0.0}), std::invalid_argument);
    IfsSpec cantor = IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}), {{1.0 / 3.0, 0.0}});
    CHECK_THROWS_AS(apply(cantor, {1.0 / 3.0, 0.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("invertible families round-trip") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.1));
    IfsSpec cat = testutil::cat_dyadic_ifs();
    for (int i = 0; i < 100; ++i) {
        Vec x1{hash_unit(12, i, 0)};
        Vec l1{hash_unit(12, i, 1)};
        Vec y1 = apply_inverse(rot, l1, apply(rot, l1, x1));
        CHECK(rot.phase.distance(x1, y1) <= 1e-12);

        Vec x2 = testutil::dyadic_point2(13, i);
        const Vec& l2 = cat.params.samples[i % cat.params.samples.size()];
        Vec y2 = apply_inverse(cat, l2, apply(cat, l2, x2));
        CHECK(cat.phase.distance(x2, y2) <= 1e-12);
    }
    IfsSpec dbl = IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.1));
    CHECK_THROWS_AS(apply_inverse(dbl, {0.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("iterate composes single steps") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 10, 5, 10);
    Vec x = testutil::dyadic_point2(14, 0);
    Vec y = x;
    for (int k = 1; k <= 10; ++k) {
        y = apply(cat, sigma.at(k), y);
        CHECK(cat.phase.distance(iterate(cat, sigma, x, k), y) <= 1e-12);
    }
    y = x;
    for (int k = 1; k <= 10; ++k) {
        y = apply_inverse(cat, sigma.at(-k), y);
        CHECK(cat.phase.distance(iterate(cat, sigma, x, -k), y) <= 1e-12);
    }
}

TEST_CASE("Lipschitz constants certify on samples") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    IfsSpec dbl = IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.25));
    for (int i = 0; i < 1000; ++i) {
        Vec p = testutil::dyadic_point2(15, 2 * i);
        Vec q = testutil::dyadic_point2(15, 2 * i + 1);
        const Vec& l = cat.params.samples[i % cat.params.samples.size()];
        CHECK(cat.phase.distance(apply(cat, l, p), apply(cat, l, q)) <=
              cat.lipschitz * cat.phase.distance(p, q) + 1e-12);
        Vec a{p[0]}, b{q[0]};
        Vec lam{0.25};
        CHECK(dbl.phase.distance(apply(dbl, lam, a), apply(dbl, lam, b)) <=
              dbl.lipschitz * dbl.phase.distance(a, b) + 1e-12);
    }
}

TEST_CASE("closed form equals iteration on dyadic inputs") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    for (int i = 0; i < 50; ++i) {
        ParamSeq sigma = random_param_seq(cat, 20, 100 + i, 20);
        Vec x = testutil::dyadic_point2(16, i);
        for (int k : {-20, -7, -1, 0, 1, 7, 20}) {
            Vec a = closed_form_example2(cat, sigma, x, k);
            Vec b = iterate(cat, sigma, x, k);
            CHECK(cat.phase.distance(a, b) <= 1e-12);
        }
    }
}

TEST_CASE("closed form needs the right family") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.1));
    CHECK_THROWS_AS(closed_form_example2(rot, ParamSeq{}, {0.0}, 1), std::invalid_argument);
}

TEST_CASE("exact chains have zero defect") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 15, 21, 15);
    Chain c = make_chain(cat, sigma, testutil::dyadic_point2(17, 0), 15, 15);
    CHECK(c.min_index() == -15);
    CHECK(c.max_index() == 15);
    CHECK(chain_defect(cat, c) <= 1e-12);
    // the chain really is the bilateral orbit
    for (int k = -15; k <= 15; ++k)
        CHECK(cat.phase.distance(c.at(k), iterate(cat, sigma, c.at(0), k)) <= 1e-12);
}

TEST_CASE("bilateral chains need invertibility") {
    IfsSpec dbl = IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.1));
    ParamSeq sigma = random_param_seq(dbl, 5, 3, 0);
    sigma.neg = {{0.0}};
    CHECK_THROWS_AS(make_chain(dbl, sigma, {0.5}, 5, 1), std::invalid_argument);
}

TEST_CASE("delta chains respect the defect bound") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ParamSeq sigma = random_param_seq(cat, 12, seed, 12);
        Chain c = make_delta_chain(cat, sigma, testutil::dyadic_point2(18, seed), 12, 0.01, seed, 12);
        CHECK(chain_defect(cat, c) <= 0.01 + 1e-12);
        for (double d : c.defects) CHECK(d <= 0.01 + 1e-12);
    }
}

TEST_CASE("delta zero reduces to the exact chain") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 10, 4, 0);
    Vec x0 = testutil::dyadic_point2(19, 0);
    Chain a = make_delta_chain(cat, sigma, x0, 10, 0.0, 4);
    Chain b = make_chain(cat, sigma, x0, 10);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
    CHECK(chain_defect(cat, a) == 0.0);
}

TEST_CASE("same seed gives identical chains") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 10, 8, 0);
    Chain a = make_delta_chain(cat, sigma, {0.25, 0.25}, 10, 0.02, 8);
    Chain b = make_delta_chain(cat, sigma, {0.25, 0.25}, 10, 0.02, 8);
    CHECK(a.points == b.points);
    CHECK(a.defects == b.defects);
}

TEST_CASE("one displaced point on a rotation chain gives defect exactly 0.01") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05));
    ParamSeq sigma;
    for (int i = 0; i < 6; ++i) sigma.pos.push_back({0.15});
    Chain c = make_chain(rot, sigma, {0.2}, 6);
    c.at(3)[0] = wrap01(c.at(3)[0] + 0.01);
    // rotations are isometries: both adjacent defects equal the displacement
    double d_in = rot.phase.distance(c.at(3), apply(rot, c.step_param(2), c.at(2)));
    double d_out = rot.phase.distance(c.at(4), apply(rot, c.step_param(3), c.at(3)));
    CHECK(d_in == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(d_out == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(chain_defect(rot, c) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("param sequences index Z*") {
    ParamSeq s;
    s.pos = {{1.0}, {2.0}};
    s.neg = {{-1.0}};
    CHECK(s.at(1)[0] == 1.0);
    CHECK(s.at(2)[0] == 2.0);
    CHECK(s.at(-1)[0] == -1.0);
    CHECK_THROWS_AS(s.at(0), std::out_of_range);
    CHECK_THROWS_AS(s.at(3), std::out_of_range);
}

TEST_CASE("random_param_seq draws net members deterministically") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq a = random_param_seq(cat, 30, 42, 10);
    ParamSeq b = random_param_seq(cat, 30, 42, 10);
    CHECK(a == b);
    for (const auto& l : a.pos) CHECK(cat.params.contains(l));
    CHECK(a.bilateral);
}

TEST_CASE("rotation family is transitive at grid scale in one step") {
    IfsSpec rot = IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05));
    TransitiveReport r = check_transitive(rot, GridSpec{0.25}, 3);
    CHECK(r.status == TransitiveReport::Status::Transitive);
    for (const auto& w : r.witnesses)
        if (w.from != w.to) CHECK(w.steps == 1);
}

TEST_CASE("a single contraction is not transitive") {
    IfsSpec ifs = IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}), {{1.0 / 3.0, 0.0}});
    TransitiveReport r = check_transitive(ifs, GridSpec{0.25}, 6);
    CHECK(r.status == TransitiveReport::Status::NotTransitive);
    REQUIRE(r.failing_pair.has_value());
}

TEST_CASE("cat family is transitive at grid 1/16 horizon 8") {
    IfsSpec cat = IfsSpec::affine_torus(testutil::kCat, ParamNet::ball({0.0, 0.0}, 0.05, 0.02));
    TransitiveReport r = check_transitive(cat, GridSpec{1.0 / 16.0}, 8);
    CHECK(r.status == TransitiveReport::Status::Transitive);
}

TEST_CASE("transitivity budget exhaustion reports Budget") {
    IfsSpec cat = IfsSpec::affine_torus(testutil::kCat, ParamNet::ball({0.0, 0.0}, 0.05, 0.02));
    TransitiveReport r = check_transitive(cat, GridSpec{1.0 / 16.0}, 8, 10);
    CHECK(r.status == TransitiveReport::Status::Budget);
}

TEST_CASE("delta chains on boxes stay inside the box") {
    IfsSpec cantor = IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}),
                                        {{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}});
    ParamSeq sigma;
    for (int i = 0; i < 30; ++i) sigma.pos.push_back({1.0 / 3.0, 2.0 / 3.0});
    Chain c = make_delta_chain(cantor, sigma, {0.999}, 30, 0.01, 5);
    for (const auto& p : c.points) CHECK(cantor.phase.contains(p));
    CHECK(chain_defect(cantor, c) <= 0.01 + 1e-12);
}

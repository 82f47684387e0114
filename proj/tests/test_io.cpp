#include <doctest.h>

#include <cstdio>
#include <stdexcept>
#include <string>

#include "helpers.hpp"
#include "ifskit/expansive.hpp"
#include "ifskit/gallery.hpp"
#include "ifskit/io.hpp"
#include "ifskit/shadowing.hpp"

using namespace ifskit;

TEST_CASE("ifs configs round-trip through documents") {
    std::vector<IfsSpec> specs = {
        IfsSpec::rotation_circle(ParamNet::interval(0.0, 0.5, 0.05)),
        IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.1)),
        IfsSpec::affine_torus(testutil::kCat, ParamNet::ball({0.0, 0.0}, 0.05, 0.02)),
        IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}),
                           {{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}}),
    };
    for (const auto& s : specs) {
        Json j = to_json(s);
        CHECK(j["schema_version"] == kSchemaVersion);
        IfsSpec back = ifs_from_json(j);
        CHECK(back.family_name() == s.family_name());
        CHECK(back.params.samples == s.params.samples);
        CHECK(back.params.covering_radius == s.params.covering_radius);
        CHECK(back.matrix == s.matrix);
        CHECK(back.lipschitz == s.lipschitz);
        CHECK(to_json(back).dump() == j.dump());  // full fixed point
    }
}

TEST_CASE("chains round-trip bit-faithfully") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 12, 5, 12);
    Chain c = make_delta_chain(cat, sigma, {0.25, 0.75}, 12, 0.01, 5, 12);
    Json j = to_json(c);
    Chain back = chain_from_json(j);
    CHECK(back.points == c.points);
    CHECK(back.base_index == c.base_index);
    CHECK(back.sigma == c.sigma);
    CHECK(back.defects == c.defects);
}

TEST_CASE("malformed documents name the offending field") {
    Json j = to_json(IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.1)));
    j.erase("params");
    try {
        ifs_from_json(j);
        FAIL("expected a malformed-document error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("params") != std::string::npos);
    }

    Json c = Json::object();
    c["base_index"] = 0;
    c["points"] = Json::array({Json::array({0.5})});
    c["sigma"] = {{"bilateral", false}, {"pos", Json::array()}, {"neg", Json::array()}};
    c["defects"] = Json::array({0.0});  // length mismatch
    CHECK_THROWS_AS(chain_from_json(c), std::invalid_argument);
}

TEST_CASE("reports serialize deterministically") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 10, 3);
    Chain c = make_delta_chain(cat, sigma, {0.5, 0.5}, 10, 0.005, 3);
    ShadowResult r = example2_concordant_shadow(cat, c, 0.05);
    Json a = to_json(r, &c);
    Json b = to_json(example2_concordant_shadow(cat, c, 0.05), &c);
    CHECK(dump_report(a) == dump_report(b));
    CHECK(a["schema_version"] == kSchemaVersion);

    // serialized numerics re-load bit-faithfully
    Json re = Json::parse(dump_report(a));
    CHECK(re["max_deviation"].get<double>() == r.max_deviation);
}

TEST_CASE("file round trip") {
    Json j = to_json(gallery_entry("doubling").spec);
    std::string path = "io_roundtrip_tmp.json";
    write_json_file(path, j);
    Json back = load_json_file(path);
    CHECK(back.dump() == j.dump());
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_json_file("does_not_exist.json"), std::invalid_argument);
}

TEST_CASE("plot data extraction") {
    IfsSpec cat = testutil::cat_dyadic_ifs();
    ParamSeq sigma = random_param_seq(cat, 8, 2);
    Chain c = make_delta_chain(cat, sigma, {0.5, 0.5}, 8, 0.005, 2);
    ShadowResult r = example2_concordant_shadow(cat, c, 0.05);

    std::string csv = plot_data_csv(to_json(r, &c));
    CHECK(csv.rfind("k,defect_k,deviation_k\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);  // header + 9 points

    ExpansivityQuery q;
    q.eta = 0.2;
    q.mu = 0.05;
    q.horizon = 5;
    q.bilateral = true;
    std::string csv2 = plot_data_csv(to_json(estimate_expansivity(cat, q, GridSpec{0.25})));
    CHECK(csv2.rfind("n,min_separation\n", 0) == 0);

    CHECK_THROWS_AS(plot_data_csv(Json::object()), std::invalid_argument);
}

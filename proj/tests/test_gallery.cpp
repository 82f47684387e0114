#include <doctest.h>

#include <stdexcept>

#include "ifskit/gallery.hpp"

using namespace ifskit;

TEST_CASE("gallery lists the four preset instances") {
    auto entries = gallery_list();
    REQUIRE(entries.size() == 4);
    CHECK(entries[0].name == "rotation-circle");
    CHECK(entries[1].name == "anosov-torus");
    CHECK(entries[2].name == "cantor");
    CHECK(entries[3].name == "doubling");
    CHECK_THROWS_AS(gallery_entry("nope"), std::invalid_argument);
}

TEST_CASE("rotation-circle checks pass") {
    GalleryReport r = run_gallery_checks(gallery_entry("rotation-circle"));
    for (const auto& c : r.checks) {
        INFO(c.property, " ", c.detail);
        CHECK(c.pass);
    }
    CHECK(r.all_pass);
}

TEST_CASE("anosov-torus checks pass") {
    GalleryReport r = run_gallery_checks(gallery_entry("anosov-torus"));
    for (const auto& c : r.checks) {
        INFO(c.property, " ", c.detail);
        CHECK(c.pass);
    }
    CHECK(r.all_pass);
}

TEST_CASE("cantor checks pass") {
    GalleryReport r = run_gallery_checks(gallery_entry("cantor"));
    for (const auto& c : r.checks) {
        INFO(c.property, " ", c.detail);
        CHECK(c.pass);
    }
    CHECK(r.all_pass);
}

TEST_CASE("doubling checks pass") {
    GalleryReport r = run_gallery_checks(gallery_entry("doubling"));
    for (const auto& c : r.checks) {
        INFO(c.property, " ", c.detail);
        CHECK(c.pass);
    }
    CHECK(r.all_pass);
}

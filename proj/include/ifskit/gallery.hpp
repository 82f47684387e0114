#pragma once

#include <string>
#include <vector>

#include "ifskit/ifs.hpp"

namespace ifskit {

struct GalleryEntry {
    std::string name;
    IfsSpec spec;
    std::vector<std::string> expected_properties;
};

// Preset instances with analytically known properties:
//   rotation-circle  (lambda, x) -> x + lambda mod 1 on [0,1]
//   anosov-torus     (lambda, x) -> A x + lambda mod 1, A = [[2,1],[1,1]]
//   cantor           x/3 and x/3 + 2/3 on [0,1]
//   doubling         (lambda, x) -> 2x + lambda mod 1 on [0,1]
std::vector<GalleryEntry> gallery_list();

const GalleryEntry& gallery_entry(const std::string& name);

struct GalleryCheck {
    std::string property;
    bool pass = false;
    std::string detail;
};

struct GalleryReport {
    std::string name;
    std::vector<GalleryCheck> checks;
    bool all_pass = false;
    bool budget_exhausted = false;
};

GalleryReport run_gallery_checks(const GalleryEntry& entry, std::size_t budget = 50'000'000);

}  // namespace ifskit

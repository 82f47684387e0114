#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ifskit/ifs.hpp"

namespace testutil {

inline const ifskit::Mat2 kCat{{{2, 1}, {1, 1}}};

// Values on the 2^-24 lattice: every affine-torus step over an integer matrix
// then stays exactly representable, so closed forms and iteration agree
// bit-for-bit.
inline double dyadic(double v) { return std::trunc(v * 16777216.0) / 16777216.0; }

inline double dyadic_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return dyadic(ifskit::hash_unit(seed, a, b));
}

// Cat-map family over a finite net of dyadic translation parameters with
// coordinates in [-radius, radius].
inline ifskit::IfsSpec cat_dyadic_ifs(double radius = 0.05, int n_samples = 16,
                                      std::uint64_t seed = 99) {
    std::vector<ifskit::Vec> samples;
    samples.push_back({0.0, 0.0});
    for (int i = 1; i < n_samples; ++i)
        samples.push_back({dyadic(radius * (2.0 * ifskit::hash_unit(seed, i, 0) - 1.0)),
                           dyadic(radius * (2.0 * ifskit::hash_unit(seed, i, 1) - 1.0))});
    return ifskit::IfsSpec::affine_torus(kCat, ifskit::ParamNet::finite(std::move(samples)));
}

inline ifskit::Vec dyadic_point2(std::uint64_t seed, std::uint64_t k) {
    return {dyadic_unit(seed, k, 0), dyadic_unit(seed, k, 1)};
}

}  // namespace testutil

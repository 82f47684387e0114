#include "ifskit/gallery.hpp"

#include <cmath>
#include <stdexcept>

#include "ifskit/expansive.hpp"
#include "ifskit/shadowing.hpp"

namespace ifskit {

std::vector<GalleryEntry> gallery_list() {
    std::vector<GalleryEntry> entries;

    entries.push_back({"rotation-circle",
                       IfsSpec::rotation_circle(ParamNet::interval(0.0, 1.0, 0.05)),
                       {"transitive", "shadowing-free", "shadowing-concordant-fails",
                        "not-expansive"}});

    entries.push_back({"anosov-torus",
                       IfsSpec::affine_torus(Mat2{{{2, 1}, {1, 1}}},
                                             ParamNet::ball({0.0, 0.0}, 0.05, 0.02)),
                       {"expansive-at-scale", "not-positively-expansive",
                        "shadowing-concordant"}});

    entries.push_back({"cantor",
                       IfsSpec::affine_1d(PhaseSpace::box({0.0}, {1.0}),
                                          {{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}}),
                       {"hyperbolic", "shadowing-concordant"}});

    entries.push_back({"doubling",
                       IfsSpec::doubling_circle(ParamNet::interval(0.0, 1.0, 0.05)),
                       {"expanding", "shadowing-concordant"}});

    return entries;
}

const GalleryEntry& gallery_entry(const std::string& name) {
    static const std::vector<GalleryEntry> entries = gallery_list();
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw std::invalid_argument("unknown gallery entry: " + name);
}

namespace {

Chain rotation_drift_chain(const IfsSpec& ifs, double step, int n) {
    Chain c;
    c.base_index = 0;
    for (int k = 0; k <= n; ++k) {
        c.points.push_back({wrap01(static_cast<double>(k) * step)});
        if (k < n) c.sigma.pos.push_back({0.0});
    }
    for (int k = 0; k < n; ++k)
        c.defects.push_back(ifs.phase.distance(c.at(k + 1), apply(ifs, c.step_param(k), c.at(k))));
    return c;
}

GalleryCheck run_one(const GalleryEntry& entry, const std::string& prop, std::size_t budget) {
    const IfsSpec& ifs = entry.spec;
    GalleryCheck check{prop, false, ""};
    if (prop == "transitive") {
        TransitiveReport r = check_transitive(ifs, GridSpec{0.25}, 3, budget);
        check.pass = r.status == TransitiveReport::Status::Transitive;
        check.detail = "grid 0.25, horizon 3";
        return check;
    }
    if (prop == "shadowing-free") {
        ParamSeq sigma = random_param_seq(ifs, 12, 7);
        Chain chain = make_delta_chain(ifs, sigma, {0.125}, 12, 0.05, 7);
        ShadowQuery q;
        q.eps = 0.01;
        q.mode = ShadowMode::Free;
        q.budget = budget;
        ShadowResult r = brute_force_shadow(ifs, chain, q, GridSpec{0.01});
        check.pass = r.found && r.max_deviation <= 1e-12;
        check.detail = "any sequence reparameterizes exactly";
        return check;
    }
    if (prop == "shadowing-concordant-fails") {
        Chain drift = rotation_drift_chain(ifs, 0.02, 25);
        ShadowQuery q;
        q.eps = 0.2;
        q.mode = ShadowMode::Concordant;
        q.budget = budget;
        ShadowResult r = brute_force_shadow(ifs, drift, q, GridSpec{1.0 / 200.0});
        check.pass = !r.found && r.max_deviation >= 0.25 - 2.0 / 200.0;
        check.detail = "drift pseudo-orbit, sigma == 0";
        return check;
    }
    if (prop == "not-expansive") {
        ExpansivityQuery q;
        q.eta = 0.2;
        q.mu = 0.05;
        q.horizon = 10;
        ExpansivityVerdict v = estimate_expansivity(ifs, q, GridSpec{1.0 / 16.0});
        check.pass = !v.expansive_at_scale && v.counterexample.has_value();
        return check;
    }
    if (prop == "expansive-at-scale") {
        ExpansivityQuery q;
        q.eta = 0.2;
        q.mu = 0.05;
        q.horizon = 12;
        q.bilateral = true;
        ExpansivityVerdict v = estimate_expansivity(ifs, q, GridSpec{1.0 / 32.0});
        check.pass = v.expansive_at_scale;
        return check;
    }
    if (prop == "not-positively-expansive") {
        ExpansivityQuery q;
        q.eta = 0.2;
        q.mu = 0.05;
        q.horizon = 12;
        q.bilateral = false;
        ExpansivityVerdict v = estimate_expansivity(ifs, q, GridSpec{1.0 / 32.0});
        check.pass = !v.expansive_at_scale && v.counterexample.has_value();
        check.detail = "stable-direction pair stays close forward in time";
        return check;
    }
    if (prop == "hyperbolic") {
        if (!(ifs.lipschitz < 1.0)) return check;
        ParamSeq sigma = random_param_seq(ifs, 30, 11);
        Chain chain = make_delta_chain(ifs, sigma, {0.5}, 30, 0.01, 11);
        ShadowResult r = contraction_shadow(ifs, chain);
        check.pass = r.max_deviation <= 0.01 / (1.0 - ifs.lipschitz) + 1e-12;
        return check;
    }
    if (prop == "expanding") {
        if (!(ifs.expansion_lower > 1.0)) return check;
        ParamSeq sigma = random_param_seq(ifs, 30, 13);
        Chain chain = make_delta_chain(ifs, sigma, {0.5}, 30, 0.01, 13);
        ShadowResult r = pullback_shadow(ifs, chain);
        check.pass = r.max_deviation <= 0.01 / (ifs.expansion_lower - 1.0) + 1e-12;
        return check;
    }
    if (prop == "shadowing-concordant") {
        ParamSeq sigma = random_param_seq(ifs, 25, 17, ifs.invertible ? 25 : 0);
        Vec x0(static_cast<std::size_t>(ifs.phase.dim), 0.25);
        Chain chain = make_delta_chain(ifs, sigma, x0, 25, 0.005, 17, ifs.invertible ? 25 : 0);
        ShadowQuery q;
        q.eps = 0.05;
        q.budget = budget;
        ShadowResult r = auto_shadow(ifs, chain, q, GridSpec{1.0 / 64.0});
        check.pass = r.found;
        check.detail = r.method;
        return check;
    }
    check.detail = "no executable check registered";
    return check;
}

}  // namespace

GalleryReport run_gallery_checks(const GalleryEntry& entry, std::size_t budget) {
    GalleryReport rep;
    rep.name = entry.name;
    rep.all_pass = true;
    for (const auto& prop : entry.expected_properties) {
        GalleryCheck c = run_one(entry, prop, budget);
        rep.all_pass = rep.all_pass && c.pass;
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

}  // namespace ifskit

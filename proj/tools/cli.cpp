#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "ifskit/expansive.hpp"
#include "ifskit/gallery.hpp"
#include "ifskit/hyperspace.hpp"
#include "ifskit/ifs.hpp"
#include "ifskit/io.hpp"
#include "ifskit/shadowing.hpp"
#include "ifskit/stability.hpp"

namespace {

using namespace ifskit;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty())
        std::cout << dump_report(report);
    else
        write_json_file(out_path, report);
}

void emit_plot(const Json& report, const std::string& plot_path) {
    if (plot_path.empty()) return;
    std::ofstream out(plot_path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + plot_path);
    out << plot_data_csv(report);
}

struct GalleryArgs {
    std::string emit_name, check_name, out;
    std::size_t budget = 50'000'000;
};

int run_gallery(const GalleryArgs& a) {
    if (!a.emit_name.empty()) {
        const GalleryEntry& entry = gallery_entry(a.emit_name);
        emit(to_json(entry.spec), a.out);
        return kExitPass;
    }
    if (!a.check_name.empty()) {
        const GalleryEntry& entry = gallery_entry(a.check_name);
        GalleryReport rep = run_gallery_checks(entry, a.budget);
        emit(to_json(rep), a.out);
        return rep.all_pass ? kExitPass : kExitFail;
    }
    Json j = Json::array();
    for (const auto& e : gallery_list())
        j.push_back({{"name", e.name}, {"properties", e.expected_properties}});
    emit(j, a.out);
    return kExitPass;
}

struct ChainArgs {
    std::string ifs_path, out;
    double delta = 0.0;
    int n_pos = 10, n_neg = 0;
    std::uint64_t seed = 0;
    std::vector<double> x0;
};

int run_chain(const ChainArgs& a) {
    IfsSpec ifs = ifs_from_json(load_json_file(a.ifs_path));
    Vec x0 = a.x0;
    if (x0.empty()) x0.assign(static_cast<std::size_t>(ifs.phase.dim), 0.0);
    ParamSeq sigma = random_param_seq(ifs, a.n_pos, a.seed, a.n_neg);
    Chain chain = a.delta > 0.0
                      ? make_delta_chain(ifs, sigma, x0, a.n_pos, a.delta, a.seed, a.n_neg)
                      : make_chain(ifs, sigma, x0, a.n_pos, a.n_neg);
    emit(to_json(chain), a.out);
    return kExitPass;
}

struct ShadowArgs {
    std::string ifs_path, chain_path, out, plot;
    std::string mode = "concordant", method = "auto";
    double eps = 0.1, grid = 0.01;
    int horizon = 0;
    std::size_t budget = 50'000'000;
};

int run_shadow(const ShadowArgs& a) {
    IfsSpec ifs = ifs_from_json(load_json_file(a.ifs_path));
    Chain chain = chain_from_json(load_json_file(a.chain_path));
    ShadowQuery q;
    q.eps = a.eps;
    q.horizon = a.horizon;
    q.budget = a.budget;
    q.mode = a.mode == "free" ? ShadowMode::Free : ShadowMode::Concordant;
    if (a.method == "brute") q.method = ShadowMethod::Brute;
    else if (a.method == "contraction") q.method = ShadowMethod::Contraction;
    else if (a.method == "pullback") q.method = ShadowMethod::Pullback;
    else if (a.method == "linear_hyperbolic") q.method = ShadowMethod::LinearHyperbolic;
    else q.method = ShadowMethod::Auto;

    ShadowResult r;
    switch (q.method) {
        case ShadowMethod::Brute: r = brute_force_shadow(ifs, chain, q, GridSpec{a.grid}); break;
        case ShadowMethod::Contraction: r = contraction_shadow(ifs, chain); break;
        case ShadowMethod::Pullback: r = pullback_shadow(ifs, chain); break;
        case ShadowMethod::LinearHyperbolic:
            r = example2_concordant_shadow(ifs, chain, q.eps);
            break;
        case ShadowMethod::Auto: r = auto_shadow(ifs, chain, q, GridSpec{a.grid}); break;
    }
    Json report = to_json(r, &chain);
    emit(report, a.out);
    emit_plot(report, a.plot);
    if (r.status == ShadowStatus::Budget) return kExitResource;
    return r.found ? kExitPass : kExitFail;
}

struct HausdorffArgs {
    std::string ifs_a, ifs_b, out;
    double grid = 0.01;
};

int run_hausdorff(const HausdorffArgs& a) {
    IfsSpec fa = ifs_from_json(load_json_file(a.ifs_a));
    IfsSpec fb = ifs_from_json(load_json_file(a.ifs_b));
    MetricEstimate e = ifs_hausdorff(fa, fb, GridSpec{a.grid});
    emit(to_json(e), a.out);
    return kExitPass;
}

struct ExpansiveArgs {
    std::string ifs_path, out, plot;
    double eta = 0.2, mu = 0.05, grid = 1.0 / 32.0;
    int horizon = 12, sigma_samples = 16;
    bool bilateral = false;
};

int run_expansive(const ExpansiveArgs& a) {
    IfsSpec ifs = ifs_from_json(load_json_file(a.ifs_path));
    ExpansivityQuery q;
    q.eta = a.eta;
    q.mu = a.mu;
    q.horizon = a.horizon;
    q.sigma_samples = a.sigma_samples;
    q.bilateral = a.bilateral;
    ExpansivityVerdict v = estimate_expansivity(ifs, q, GridSpec{a.grid});
    Json report = to_json(v);
    emit(report, a.out);
    emit_plot(report, a.plot);
    return v.expansive_at_scale ? kExitPass : kExitFail;
}

struct TransitiveArgs {
    std::string ifs_path, out;
    double grid = 0.25;
    int horizon = 3;
    std::size_t budget = 50'000'000;
};

int run_transitive(const TransitiveArgs& a) {
    IfsSpec ifs = ifs_from_json(load_json_file(a.ifs_path));
    TransitiveReport r = check_transitive(ifs, GridSpec{a.grid}, a.horizon, a.budget);
    emit(to_json(r), a.out);
    if (r.status == TransitiveReport::Status::Budget) return kExitResource;
    return r.status == TransitiveReport::Status::Transitive ? kExitPass : kExitFail;
}

struct StabilityArgs {
    std::string ifs_path, chain_path, out, plot;
    double eps = 0.05, delta_cap = 0.05, grid = 1.0 / 64.0;
    int horizon = 50;
};

int run_stability(const StabilityArgs& a) {
    IfsSpec ifs = ifs_from_json(load_json_file(a.ifs_path));
    Chain chain = chain_from_json(load_json_file(a.chain_path));
    PerturbationResult pr = build_perturbed_ifs(ifs, chain, a.delta_cap);
    int horizon = std::min<int>(a.horizon, static_cast<int>(pr.sigma_tilde.entries.size()));
    auto samples = build_conjugacy(ifs, pr.perturbed, chain.sigma, pr.sigma_tilde, a.eps,
                                   GridSpec{a.grid}, horizon);
    StabilityReport rep =
        verify_stability(ifs, pr.perturbed, chain.sigma, pr.sigma_tilde, samples, a.eps, horizon);
    Json report = to_json(rep);
    emit(report, a.out);
    emit_plot(report, a.plot);
    return rep.pass ? kExitPass : kExitFail;
}

struct Stab2ShadowArgs {
    std::string ifs_path, chain_path, out, plot;
    double eps = 0.05, delta_cap = 0.05, grid = 1.0 / 64.0;
};

int run_stab2shadow(const Stab2ShadowArgs& a) {
    IfsSpec ifs = ifs_from_json(load_json_file(a.ifs_path));
    Chain chain = chain_from_json(load_json_file(a.chain_path));
    ShadowResult r =
        stability_to_shadowing_experiment(ifs, chain, a.eps, a.delta_cap, GridSpec{a.grid});
    Json report = to_json(r, &chain);
    emit(report, a.out);
    emit_plot(report, a.plot);
    return r.found ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iterated function system dynamics toolkit"};
    app.require_subcommand(1);

    GalleryArgs ga;
    auto* gallery = app.add_subcommand("gallery", "list, emit, or check preset instances");
    gallery->add_option("--emit", ga.emit_name, "write the named preset's IFS config");
    gallery->add_option("--check", ga.check_name, "re-run the named preset's property checks");
    gallery->add_option("--out", ga.out, "output file (stdout when omitted)");
    gallery->add_option("--budget", ga.budget, "search budget");

    ChainArgs ca;
    auto* chain = app.add_subcommand("chain", "generate a chain or delta-chain");
    chain->add_option("--ifs", ca.ifs_path, "IFS config file")->required();
    chain->add_option("--delta", ca.delta, "per-step defect bound (0 = exact chain)");
    chain->add_option("--n", ca.n_pos, "forward steps")->check(CLI::PositiveNumber);
    chain->add_option("--nneg", ca.n_neg, "backward steps (invertible families)");
    chain->add_option("--seed", ca.seed, "seed");
    chain->add_option("--x0", ca.x0, "initial point coordinates");
    chain->add_option("--out", ca.out, "output file");

    ShadowArgs sa;
    auto* shadow = app.add_subcommand("shadow", "shadow a delta-chain");
    shadow->add_option("--ifs", sa.ifs_path, "IFS config file")->required();
    shadow->add_option("--chain", sa.chain_path, "chain file")->required();
    shadow->add_option("--epsilon", sa.eps, "shadowing tolerance")->check(CLI::PositiveNumber);
    shadow->add_option("--mode", sa.mode, "concordant|free")
        ->check(CLI::IsMember({"concordant", "free"}));
    shadow->add_option("--method", sa.method, "auto|brute|contraction|pullback|linear_hyperbolic")
        ->check(CLI::IsMember({"auto", "brute", "contraction", "pullback", "linear_hyperbolic"}));
    shadow->add_option("--grid", sa.grid, "phase grid resolution")->check(CLI::PositiveNumber);
    shadow->add_option("--horizon", sa.horizon, "truncation horizon (0 = full chain)");
    shadow->add_option("--budget", sa.budget, "search budget");
    shadow->add_option("--out", sa.out, "report file");
    shadow->add_option("--plot", sa.plot, "per-step CSV file");

    HausdorffArgs ha;
    auto* hausdorff = app.add_subcommand("hausdorff", "Hausdorff distance between two IFS");
    hausdorff->add_option("--ifs-a", ha.ifs_a, "first IFS config")->required();
    hausdorff->add_option("--ifs-b", ha.ifs_b, "second IFS config")->required();
    hausdorff->add_option("--grid", ha.grid, "phase grid resolution")->check(CLI::PositiveNumber);
    hausdorff->add_option("--out", ha.out, "report file");

    ExpansiveArgs ea;
    auto* expansive = app.add_subcommand("expansive", "estimate expansivity at grid scale");
    expansive->add_option("--ifs", ea.ifs_path, "IFS config file")->required();
    expansive->add_option("--eta", ea.eta, "separation threshold")->check(CLI::PositiveNumber);
    expansive->add_option("--mu", ea.mu, "pair separation floor")->check(CLI::PositiveNumber);
    expansive->add_option("--horizon", ea.horizon, "steps to scan")->check(CLI::PositiveNumber);
    expansive->add_option("--grid", ea.grid, "phase grid resolution")->check(CLI::PositiveNumber);
    expansive->add_option("--sigma-samples", ea.sigma_samples, "parameter sequences to test");
    expansive->add_flag("--bilateral", ea.bilateral, "scan backward iterates too");
    expansive->add_option("--out", ea.out, "report file");
    expansive->add_option("--plot", ea.plot, "per-step CSV file");

    TransitiveArgs ta;
    auto* transitive = app.add_subcommand("transitive", "finite-resolution transitivity check");
    transitive->add_option("--ifs", ta.ifs_path, "IFS config file")->required();
    transitive->add_option("--grid", ta.grid, "ball grid resolution")->check(CLI::PositiveNumber);
    transitive->add_option("--horizon", ta.horizon, "max composition length")
        ->check(CLI::PositiveNumber);
    transitive->add_option("--budget", ta.budget, "search budget");
    transitive->add_option("--out", ta.out, "report file");

    StabilityArgs ba;
    auto* stability = app.add_subcommand("stability", "verify topological stability bounds");
    stability->add_option("--ifs", ba.ifs_path, "IFS config file")->required();
    stability->add_option("--chain", ba.chain_path, "chain file")->required();
    stability->add_option("--epsilon", ba.eps, "stability tolerance")->check(CLI::PositiveNumber);
    stability->add_option("--delta-cap", ba.delta_cap, "compatibility cap Delta")
        ->check(CLI::PositiveNumber);
    stability->add_option("--grid", ba.grid, "phase grid resolution")->check(CLI::PositiveNumber);
    stability->add_option("--horizon", ba.horizon, "tracking horizon")->check(CLI::PositiveNumber);
    stability->add_option("--out", ba.out, "report file");
    stability->add_option("--plot", ba.plot, "per-step CSV file");

    Stab2ShadowArgs wa;
    auto* stab2shadow =
        app.add_subcommand("stab2shadow", "derive a concordant shadow via the stability pipeline");
    stab2shadow->add_option("--ifs", wa.ifs_path, "IFS config file")->required();
    stab2shadow->add_option("--chain", wa.chain_path, "chain file")->required();
    stab2shadow->add_option("--epsilon", wa.eps, "shadowing tolerance")
        ->check(CLI::PositiveNumber);
    stab2shadow->add_option("--delta-cap", wa.delta_cap, "compatibility cap Delta")
        ->check(CLI::PositiveNumber);
    stab2shadow->add_option("--grid", wa.grid, "phase grid resolution")
        ->check(CLI::PositiveNumber);
    stab2shadow->add_option("--out", wa.out, "report file");
    stab2shadow->add_option("--plot", wa.plot, "per-step CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (gallery->parsed()) return run_gallery(ga);
        if (chain->parsed()) return run_chain(ca);
        if (shadow->parsed()) return run_shadow(sa);
        if (hausdorff->parsed()) return run_hausdorff(ha);
        if (expansive->parsed()) return run_expansive(ea);
        if (transitive->parsed()) return run_transitive(ta);
        if (stability->parsed()) return run_stability(ba);
        if (stab2shadow->parsed()) return run_stab2shadow(wa);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifskit/expansive.hpp"
#include "ifskit/gallery.hpp"
#include "ifskit/hyperspace.hpp"
#include "ifskit/ifs.hpp"
#include "ifskit/io.hpp"
#include "ifskit/shadowing.hpp"
#include "ifskit/stability.hpp"

namespace py = pybind11;
using namespace ifskit;

namespace {

py::dict as_dict(const Json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

ShadowQuery make_query(double eps, const std::string& mode, int horizon, std::size_t budget) {
    ShadowQuery q;
    q.eps = eps;
    q.mode = mode == "free" ? ShadowMode::Free : ShadowMode::Concordant;
    q.horizon = horizon;
    q.budget = budget;
    return q;
}

}  // namespace

PYBIND11_MODULE(_ifskit, m) {
    m.doc() = "iterated function system dynamics toolkit";

    py::class_<PhaseSpace>(m, "PhaseSpace")
        .def_static("circle", &PhaseSpace::circle)
        .def_static("torus", &PhaseSpace::torus, py::arg("dim"))
        .def_static("box", &PhaseSpace::box, py::arg("lower"), py::arg("upper"))
        .def_readonly("dim", &PhaseSpace::dim)
        .def("diameter", &PhaseSpace::diameter)
        .def("distance", &PhaseSpace::distance, py::arg("p"), py::arg("q"))
        .def("contains", &PhaseSpace::contains, py::arg("p"), py::arg("tol") = 1e-9)
        .def("kind_name", &PhaseSpace::kind_name);

    py::class_<ParamNet>(m, "ParamNet")
        .def_static("interval", &ParamNet::interval, py::arg("a"), py::arg("b"),
                    py::arg("resolution"))
        .def_static("ball", &ParamNet::ball, py::arg("center"), py::arg("radius"),
                    py::arg("resolution"))
        .def_static("finite", &ParamNet::finite, py::arg("values"))
        .def_readonly("samples", &ParamNet::samples)
        .def_readonly("covering_radius", &ParamNet::covering_radius);

    py::class_<IfsSpec>(m, "IfsSpec")
        .def_static("rotation_circle", &IfsSpec::rotation_circle, py::arg("params"))
        .def_static("doubling_circle", &IfsSpec::doubling_circle, py::arg("params"))
        .def_static(
            "affine_torus",
            [](const std::vector<std::vector<long>>& A, ParamNet params) {
                if (A.size() != 2 || A[0].size() != 2 || A[1].size() != 2)
                    throw std::invalid_argument("matrix must be 2x2");
                return IfsSpec::affine_torus(Mat2{{{A[0][0], A[0][1]}, {A[1][0], A[1][1]}}},
                                             std::move(params));
            },
            py::arg("matrix"), py::arg("params"))
        .def_static("affine_1d", &IfsSpec::affine_1d, py::arg("box"),
                    py::arg("slope_offset_pairs"))
        .def_readonly("phase", &IfsSpec::phase)
        .def_readonly("lipschitz", &IfsSpec::lipschitz)
        .def_readonly("expansion_lower", &IfsSpec::expansion_lower)
        .def_readonly("invertible", &IfsSpec::invertible)
        .def("family_name", &IfsSpec::family_name)
        .def("to_config", [](const IfsSpec& s) { return as_dict(to_json(s)); });

    m.def("apply", &apply, py::arg("ifs"), py::arg("lam"), py::arg("x"));
    m.def("apply_inverse", &apply_inverse, py::arg("ifs"), py::arg("lam"), py::arg("x"));

    py::class_<ParamSeq>(m, "ParamSeq")
        .def_readonly("pos", &ParamSeq::pos)
        .def_readonly("neg", &ParamSeq::neg)
        .def_readonly("bilateral", &ParamSeq::bilateral);

    py::class_<Chain>(m, "Chain")
        .def_readonly("points", &Chain::points)
        .def_readonly("base_index", &Chain::base_index)
        .def_readonly("sigma", &Chain::sigma)
        .def_readonly("defects", &Chain::defects)
        .def("at", [](const Chain& c, int k) { return c.at(k); }, py::arg("k"))
        .def("to_config", [](const Chain& c) { return as_dict(to_json(c)); });

    m.def("random_param_seq", &random_param_seq, py::arg("ifs"), py::arg("n_pos"), py::arg("seed"),
          py::arg("n_neg") = 0);
    m.def("make_chain", &make_chain, py::arg("ifs"), py::arg("sigma"), py::arg("x0"),
          py::arg("n_pos"), py::arg("n_neg") = 0);
    m.def("make_delta_chain", &make_delta_chain, py::arg("ifs"), py::arg("sigma"), py::arg("x0"),
          py::arg("n_pos"), py::arg("delta"), py::arg("seed"), py::arg("n_neg") = 0);
    m.def("chain_defect", &chain_defect, py::arg("ifs"), py::arg("chain"));
    m.def("iterate", &iterate, py::arg("ifs"), py::arg("sigma"), py::arg("x"), py::arg("k"));

    m.def(
        "shadow",
        [](const IfsSpec& ifs, const Chain& chain, double eps, const std::string& mode,
           int horizon, double grid, std::size_t budget) {
            ShadowQuery q = make_query(eps, mode, horizon, budget);
            ShadowResult r = auto_shadow(ifs, chain, q, GridSpec{grid});
            return as_dict(to_json(r, &chain));
        },
        py::arg("ifs"), py::arg("chain"), py::arg("eps"), py::arg("mode") = "concordant",
        py::arg("horizon") = 0, py::arg("grid") = 0.01, py::arg("budget") = 50'000'000);

    m.def(
        "ifs_hausdorff",
        [](const IfsSpec& a, const IfsSpec& b, double grid) {
            return as_dict(to_json(ifs_hausdorff(a, b, GridSpec{grid})));
        },
        py::arg("ifs_a"), py::arg("ifs_b"), py::arg("grid") = 0.01);

    m.def(
        "estimate_expansivity",
        [](const IfsSpec& ifs, double eta, double mu, int horizon, bool bilateral, double grid) {
            ExpansivityQuery q;
            q.eta = eta;
            q.mu = mu;
            q.horizon = horizon;
            q.bilateral = bilateral;
            return as_dict(to_json(estimate_expansivity(ifs, q, GridSpec{grid})));
        },
        py::arg("ifs"), py::arg("eta"), py::arg("mu"), py::arg("horizon") = 12,
        py::arg("bilateral") = false, py::arg("grid") = 1.0 / 32.0);

    m.def(
        "check_transitive",
        [](const IfsSpec& ifs, double grid, int horizon, std::size_t budget) {
            return as_dict(to_json(check_transitive(ifs, GridSpec{grid}, horizon, budget)));
        },
        py::arg("ifs"), py::arg("grid") = 0.25, py::arg("horizon") = 3,
        py::arg("budget") = 50'000'000);

    m.def(
        "stability_to_shadowing",
        [](const IfsSpec& ifs, const Chain& chain, double eps, double delta_cap, double grid) {
            ShadowResult r =
                stability_to_shadowing_experiment(ifs, chain, eps, delta_cap, GridSpec{grid});
            return as_dict(to_json(r, &chain));
        },
        py::arg("ifs"), py::arg("chain"), py::arg("eps"), py::arg("delta_cap"),
        py::arg("grid") = 1.0 / 64.0);

    m.def("gallery_names", [] {
        std::vector<std::string> names;
        for (const auto& e : gallery_list()) names.push_back(e.name);
        return names;
    });
    m.def(
        "gallery_ifs", [](const std::string& name) { return gallery_entry(name).spec; },
        py::arg("name"));
    m.def(
        "gallery_check",
        [](const std::string& name, std::size_t budget) {
            return as_dict(to_json(run_gallery_checks(gallery_entry(name), budget)));
        },
        py::arg("name"), py::arg("budget") = 50'000'000);

    m.def(
        "load_ifs_config",
        [](const std::string& path) { return ifs_from_json(load_json_file(path)); },
        py::arg("path"));
    m.def(
        "load_chain_config",
        [](const std::string& path) { return chain_from_json(load_json_file(path)); },
        py::arg("path"));
}

#include "ifskit/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ifskit {

namespace {

Json vec_json(const Vec& v) { return Json(v); }
Vec vec_from(const Json& j) { return j.get<Vec>(); }

Json vecs_json(const std::vector<Vec>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(vec_json(v));
    return arr;
}

std::vector<Vec> vecs_from(const Json& j) {
    std::vector<Vec> out;
    for (const auto& e : j) out.push_back(vec_from(e));
    return out;
}

[[noreturn]] void bad_field(const std::string& name) {
    throw std::invalid_argument("malformed document: field '" + name + "'");
}

const Json& need(const Json& j, const std::string& name) {
    auto it = j.find(name);
    if (it == j.end()) bad_field(name);
    return *it;
}

}  // namespace

Json to_json(const PhaseSpace& space) {
    Json j;
    j["kind"] = space.kind_name();
    j["dim"] = space.dim;
    if (space.kind == SpaceKind::Box) {
        j["lower"] = space.lower;
        j["upper"] = space.upper;
    }
    return j;
}

PhaseSpace phase_from_json(const Json& j) {
    std::string kind = need(j, "kind").get<std::string>();
    if (kind == "circle") return PhaseSpace::circle();
    if (kind == "torus") return PhaseSpace::torus(need(j, "dim").get<int>());
    if (kind == "box")
        return PhaseSpace::box(need(j, "lower").get<Vec>(), need(j, "upper").get<Vec>());
    bad_field("kind");
}

Json to_json(const IfsSpec& ifs) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["family"] = ifs.family_name();
    j["phase"] = to_json(ifs.phase);
    Json params;
    if (const auto* iv = std::get_if<Interval>(&ifs.params.ambient)) {
        params["ambient"] = {{"type", "interval"}, {"a", iv->a}, {"b", iv->b}};
    } else if (const auto* bl = std::get_if<Ball>(&ifs.params.ambient)) {
        params["ambient"] = {{"type", "ball"}, {"center", bl->center}, {"radius", bl->radius}};
    } else {
        params["ambient"] = {{"type", "finite"},
                             {"values", vecs_json(std::get<FiniteSet>(ifs.params.ambient).values)}};
    }
    params["samples"] = vecs_json(ifs.params.samples);
    params["covering_radius"] = ifs.params.covering_radius;
    j["params"] = std::move(params);
    if (ifs.family == Family::AffineTorus)
        j["matrix"] = {{ifs.matrix[0][0], ifs.matrix[0][1]}, {ifs.matrix[1][0], ifs.matrix[1][1]}};
    j["lipschitz"] = ifs.lipschitz;
    j["expansion_lower"] = ifs.expansion_lower;
    j["invertible"] = ifs.invertible;
    return j;
}

IfsSpec ifs_from_json(const Json& j) {
    std::string family = need(j, "family").get<std::string>();
    const Json& pj = need(j, "params");
    const Json& aj = need(pj, "ambient");
    std::string atype = need(aj, "type").get<std::string>();

    ParamNet net;
    if (atype == "interval")
        net.ambient = Interval{need(aj, "a").get<double>(), need(aj, "b").get<double>()};
    else if (atype == "ball")
        net.ambient = Ball{need(aj, "center").get<Vec>(), need(aj, "radius").get<double>()};
    else if (atype == "finite")
        net.ambient = FiniteSet{vecs_from(need(aj, "values"))};
    else
        bad_field("params.ambient.type");
    net.samples = vecs_from(need(pj, "samples"));
    net.covering_radius = need(pj, "covering_radius").get<double>();

    IfsSpec ifs;
    if (family == "rotation_circle") {
        ifs = IfsSpec::rotation_circle(std::move(net));
    } else if (family == "doubling_circle") {
        ifs = IfsSpec::doubling_circle(std::move(net));
    } else if (family == "affine_torus") {
        const Json& mj = need(j, "matrix");
        Mat2 A{{{mj[0][0].get<long>(), mj[0][1].get<long>()},
                {mj[1][0].get<long>(), mj[1][1].get<long>()}}};
        ifs = IfsSpec::affine_torus(A, std::move(net));
    } else if (family == "affine_1d") {
        PhaseSpace box = phase_from_json(need(j, "phase"));
        ifs = IfsSpec::affine_1d(box, net.samples);
    } else {
        bad_field("family");
    }
    return ifs;
}

Json to_json(const Chain& chain) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["base_index"] = chain.base_index;
    j["points"] = vecs_json(chain.points);
    j["sigma"] = {{"bilateral", chain.sigma.bilateral},
                  {"pos", vecs_json(chain.sigma.pos)},
                  {"neg", vecs_json(chain.sigma.neg)}};
    j["defects"] = chain.defects;
    return j;
}

Chain chain_from_json(const Json& j) {
    Chain c;
    c.base_index = need(j, "base_index").get<int>();
    c.points = vecs_from(need(j, "points"));
    const Json& sj = need(j, "sigma");
    c.sigma.bilateral = need(sj, "bilateral").get<bool>();
    c.sigma.pos = vecs_from(need(sj, "pos"));
    c.sigma.neg = vecs_from(need(sj, "neg"));
    c.defects = need(j, "defects").get<std::vector<double>>();
    if (c.points.empty()) bad_field("points");
    if (c.defects.size() + 1 != c.points.size()) bad_field("defects");
    return c;
}

Json to_json(const ShadowResult& r, const Chain* query) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["found"] = r.found;
    j["method"] = r.method;
    j["max_deviation"] = r.max_deviation;
    if (r.certificate) j["certificate"] = *r.certificate;
    j["status"] = r.status == ShadowStatus::Ok ? "ok" : "budget";
    j["shadow"] = to_json(r.shadow);
    Json series = Json::array();
    for (std::size_t i = 0; i < r.deviations.size(); ++i) {
        Json row;
        row["k"] = static_cast<int>(i) + r.shadow.base_index;
        if (query && i < query->defects.size()) row["defect_k"] = query->defects[i];
        row["deviation_k"] = r.deviations[i];
        series.push_back(std::move(row));
    }
    j["series"] = std::move(series);
    return j;
}

Json to_json(const MetricEstimate& e) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["value"] = e.value;
    j["error_bound"] = e.error_bound;
    if (e.witness) {
        j["witness"] = {{"lambda_a", e.witness->first}, {"lambda_b", e.witness->second}};
        if (e.witness_point) j["witness"]["x"] = *e.witness_point;
    }
    return j;
}

Json to_json(const ExpansivityVerdict& v) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["expansive_at_scale"] = v.expansive_at_scale;
    j["eta"] = v.eta;
    j["mu"] = v.mu;
    j["horizon"] = v.horizon_used;
    j["bilateral"] = v.bilateral;
    if (v.counterexample) {
        j["counterexample"] = {{"x", v.counterexample->x}, {"y", v.counterexample->y}};
    }
    Json series = Json::array();
    for (std::size_t n = 0; n < v.min_separation_by_step.size(); ++n)
        series.push_back({{"n", n}, {"min_separation", v.min_separation_by_step[n]}});
    j["series"] = std::move(series);
    return j;
}

Json to_json(const TransitiveReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    switch (r.status) {
        case TransitiveReport::Status::Transitive: j["status"] = "transitive"; break;
        case TransitiveReport::Status::NotTransitive: j["status"] = "not_transitive"; break;
        case TransitiveReport::Status::Budget: j["status"] = "budget"; break;
    }
    j["ball_radius"] = r.ball_radius;
    if (r.failing_pair)
        j["failing_pair"] = {{"from", r.failing_pair->first}, {"to", r.failing_pair->second}};
    Json ws = Json::array();
    for (const auto& w : r.witnesses) {
        ws.push_back({{"from", w.from}, {"to", w.to}, {"steps", w.steps},
                      {"sigma_prefix", vecs_json(w.sigma_prefix)}});
    }
    j["witnesses"] = std::move(ws);
    return j;
}

Json to_json(const StabilityReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["pass"] = r.pass;
    j["eps"] = r.eps;
    j["horizon"] = r.horizon;
    j["bound_i"] = r.bound_i;
    j["bound_ii"] = r.bound_ii;
    j["d_h_bound"] = to_json(r.d_h_bound);
    j["compat"] = {{"delta", r.compat.delta},
                   {"compatible", r.compat.compatible},
                   {"per_index_distance", r.compat.per_index_distance}};
    if (r.witness_i) j["witness_i"] = {{"x", r.witness_i->first}, {"k", r.witness_i->second}};
    Json samples = Json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"x", s.grid_point}, {"h", s.h_value}, {"displacement", s.displacement}});
    j["samples"] = std::move(samples);
    Json series = Json::array();
    for (std::size_t k = 0; k < r.bound_i_by_step.size(); ++k)
        series.push_back({{"k", k}, {"bound_i", r.bound_i_by_step[k]}});
    j["series"] = std::move(series);
    return j;
}

Json to_json(const GalleryReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = r.name;
    j["all_pass"] = r.all_pass;
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"property", c.property}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    return j;
}

Json to_json(const HorizonStabilityReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["stabilizing"] = r.stabilizing;
    j["threshold"] = r.threshold;
    j["horizons"] = r.horizons;
    j["shadow_starts"] = vecs_json(r.shadow_starts);
    j["start_distances"] = r.start_distances;
    return j;
}

Json to_json(const UniqueShadowResult& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["shadow_found"] = r.shadow_found;
    j["unique_at_scale"] = r.unique_at_scale;
    if (r.shadow_found) {
        j["best_start"] = r.best_start;
        j["best_deviation"] = r.best_deviation;
    }
    j["starts"] = vecs_json(r.starts);
    j["set_diameter"] = r.set_diameter;
    j["diameter_bound"] = r.diameter_bound;
    return j;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed document " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << dump_report(j);
}

std::string plot_data_csv(const Json& report) {
    if (!report.contains("series") || !report["series"].is_array() || report["series"].empty())
        throw std::invalid_argument("report carries no per-step series");
    const Json& series = report["series"];
    std::ostringstream out;
    out.setf(std::ios::fmtflags(0), std::ios::floatfield);
    std::vector<std::string> cols;
    for (auto it = series.front().begin(); it != series.front().end(); ++it)
        cols.push_back(it.key());
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& row : series) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ",";
            const Json& cell = row.contains(cols[i]) ? row[cols[i]] : Json();
            out << cell.dump();
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace ifskit

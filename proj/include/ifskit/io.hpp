#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "ifskit/expansive.hpp"
#include "ifskit/gallery.hpp"
#include "ifskit/hyperspace.hpp"
#include "ifskit/ifs.hpp"
#include "ifskit/shadowing.hpp"
#include "ifskit/stability.hpp"

namespace ifskit {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const PhaseSpace& space);
PhaseSpace phase_from_json(const Json& j);

Json to_json(const IfsSpec& ifs);
IfsSpec ifs_from_json(const Json& j);

Json to_json(const Chain& chain);
Chain chain_from_json(const Json& j);

Json to_json(const ShadowResult& r, const Chain* query = nullptr);
Json to_json(const MetricEstimate& e);
Json to_json(const ExpansivityVerdict& v);
Json to_json(const TransitiveReport& r);
Json to_json(const StabilityReport& r);
Json to_json(const GalleryReport& r);
Json to_json(const HorizonStabilityReport& r);
Json to_json(const UniqueShadowResult& r);

std::string dump_report(const Json& j);
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Per-step CSV series extracted from a report (header row + comma columns).
std::string plot_data_csv(const Json& report);

}  // namespace ifskit

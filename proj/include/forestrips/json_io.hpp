#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "forestrips/analysis.hpp"
#include "forestrips/corpus.hpp"

namespace frips {

using Json = nlohmann::json;

struct SystemDocument {
    System system;
    std::map<std::string, std::string> metadata;
};

/// Parse/render the canonical document format. Rendering is byte-stable:
/// sorted keys, canonical scalar strings, two-space indent, trailing newline.
SystemDocument parse_document(const std::string& text);
std::string render_document(const SystemDocument& doc);
SystemDocument load_document(const std::string& path);
void save_document(const SystemDocument& doc, const std::string& path);

Json point_to_json(const Forest& f, const Point& p);
Point point_from_json(const Forest& f, const Json& j, const std::string& where);
/// Point syntax for the command line: "v<id>" or "e<id>@<offset>".
Point parse_point_spec(const Forest& f, const std::string& spec);

Json run_report(const RipsRun& run);
Json index_report(const IndexResult& idx, const Forest* final_forest);
Json certificate_report(const System& s, const System::Certificate& cert);
Json classification_report(const Classification& c);
Json reduced_report(const ReducedReport& r);
Json error_json(const std::string& type, const std::string& message);

} // namespace frips

#include "forestrips/json_io.hpp"

#include <fstream>
#include <sstream>

namespace frips {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing key \"") + key + "\"", where);
    return j.at(key);
}

int need_int(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number_integer())
        throw ParseError(std::string("\"") + key + "\" must be an integer", where);
    return v.get<int>();
}

std::string need_str(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_string()) throw ParseError(std::string("\"") + key + "\" must be a string", where);
    return v.get<std::string>();
}

} // namespace

Json point_to_json(const Forest& f, const Point& p) {
    if (p.is_vertex) return Json{{"vertex", p.id}};
    return Json{{"edge", p.id}, {"offset", p.offset.str()}};
}

Point point_from_json(const Forest& f, const Json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError("point must be an object", where);
    if (j.contains("vertex")) {
        try {
            return f.vertex_point(j.at("vertex").get<int>());
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), where);
        }
    }
    if (j.contains("edge")) {
        int eid = need_int(j, "edge", where);
        Scalar off = parse_scalar(need_str(j, "offset", where), f.field());
        try {
            return f.edge_point(eid, off);
        } catch (const Error& e) {
            throw ParseError(e.what(), where);
        }
    }
    throw ParseError("point needs \"vertex\" or \"edge\"+\"offset\"", where);
}

Point parse_point_spec(const Forest& f, const std::string& spec) {
    if (spec.size() >= 2 && spec[0] == 'v') return f.vertex_point(std::stoi(spec.substr(1)));
    if (spec.size() >= 2 && spec[0] == 'e') {
        auto at = spec.find('@');
        if (at == std::string::npos)
            throw ParseError("edge point spec needs e<id>@<offset>", spec);
        int eid = std::stoi(spec.substr(1, at - 1));
        return f.edge_point(eid, parse_scalar(spec.substr(at + 1), f.field()));
    }
    throw ParseError("point spec must be v<id> or e<id>@<offset>", spec);
}

SystemDocument parse_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }

    FieldContext field(need_int(need(j, "field", "field"), "d", "field"));

    const Json& trees = need(j, "trees", "trees");
    if (!trees.is_array()) throw ParseError("\"trees\" must be an array");
    std::vector<Forest::TreeSpec> specs;
    int next_eid = 0;
    for (std::size_t ti = 0; ti < trees.size(); ++ti) {
        std::string where = "trees[" + std::to_string(ti) + "]";
        Forest::TreeSpec spec;
        for (const Json& v : need(trees[ti], "vertices", where)) {
            if (!v.is_number_integer()) throw ParseError("vertex ids must be integers", where);
            spec.vertices.push_back(v.get<int>());
        }
        if (trees[ti].contains("edges")) {
            const Json& edges = trees[ti].at("edges");
            for (std::size_t ei = 0; ei < edges.size(); ++ei) {
                std::string ewhere = where + ".edges[" + std::to_string(ei) + "]";
                const Json& e = edges[ei];
                int id = e.contains("id") ? need_int(e, "id", ewhere) : next_eid;
                next_eid = std::max(next_eid, id + 1);
                Scalar len = parse_scalar(need_str(e, "len", ewhere), field);
                spec.edges.push_back(
                    {id, need_int(e, "from", ewhere), need_int(e, "to", ewhere), len});
            }
        }
        specs.push_back(std::move(spec));
    }
    Forest forest(field, std::move(specs));

    std::vector<PartialIsometry> gens;
    if (j.contains("generators")) {
        const Json& gs = j.at("generators");
        if (!gs.is_array()) throw ParseError("\"generators\" must be an array");
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
            std::string where = "generators[" + std::to_string(gi) + "]";
            const Json& g = gs[gi];
            std::string name = need_str(g, "name", where);
            std::vector<Point> dom;
            const Json& dpts = need(g, "domain", where);
            for (std::size_t pi = 0; pi < dpts.size(); ++pi)
                dom.push_back(point_from_json(forest, dpts[pi],
                                              where + ".domain[" + std::to_string(pi) + "]"));
            if (dom.empty()) throw ParseError("empty domain", where);
            std::vector<std::pair<Point, Point>> anchors;
            const Json& apts = need(g, "anchors", where);
            for (std::size_t ai = 0; ai < apts.size(); ++ai) {
                std::string awhere = where + ".anchors[" + std::to_string(ai) + "]";
                const Json& pair = apts[ai];
                if (!pair.is_array() || pair.size() != 2)
                    throw ParseError("anchor must be a [src, dst] pair", awhere);
                anchors.emplace_back(point_from_json(forest, pair[0], awhere + "[0]"),
                                     point_from_json(forest, pair[1], awhere + "[1]"));
            }
            try {
                gens.push_back(
                    PartialIsometry::build(forest, name, forest.make_subtree(dom), anchors));
            } catch (const Error& e) {
                throw ValidationError(e.what(), where);
            }
        }
    }

    IndependenceDecl decl = IndependenceDecl::none;
    int depth = 0;
    if (j.contains("declarations")) {
        const Json& d = j.at("declarations");
        std::string ind = d.contains("independence") ? d.at("independence").get<std::string>()
                                                     : "none";
        if (ind == "declared")
            decl = IndependenceDecl::declared;
        else if (ind == "certified") {
            decl = IndependenceDecl::certified;
            depth = d.contains("depth") ? d.at("depth").get<int>() : 0;
        } else if (ind != "none")
            throw ParseError("independence must be none|declared|certified", "declarations");
    }

    SystemDocument doc{System(std::move(forest), std::move(gens), decl, depth), {}};
    if (j.contains("metadata"))
        for (const auto& [k, v] : j.at("metadata").items())
            doc.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return doc;
}

std::string render_document(const SystemDocument& doc) {
    const System& s = doc.system;
    const Forest& f = s.forest();
    Json j;
    j["field"] = Json{{"d", f.field().d}};

    Json trees = Json::array();
    for (int t = 0; t < f.tree_count(); ++t) {
        Json tree;
        tree["vertices"] = f.tree_vertices(t);
        Json edges = Json::array();
        for (int eid : f.tree_edges(t))
            edges.push_back(Json{{"id", eid},
                                 {"from", f.edge_from(eid)},
                                 {"to", f.edge_to(eid)},
                                 {"len", f.edge_length(eid).str()}});
        tree["edges"] = edges;
        trees.push_back(tree);
    }
    j["trees"] = trees;

    Json gens = Json::array();
    for (const auto& g : s.generators()) {
        Json domain = Json::array();
        for (const auto& p : g.domain().generators) domain.push_back(point_to_json(f, p));
        Json anchors = Json::array();
        for (const auto& [src, dst] : g.anchors())
            anchors.push_back(Json::array({point_to_json(f, src), point_to_json(f, dst)}));
        gens.push_back(Json{{"name", g.name()}, {"domain", domain}, {"anchors", anchors}});
    }
    j["generators"] = gens;

    Json decl;
    switch (s.independence()) {
        case IndependenceDecl::none: decl["independence"] = "none"; break;
        case IndependenceDecl::declared: decl["independence"] = "declared"; break;
        case IndependenceDecl::certified:
            decl["independence"] = "certified";
            decl["depth"] = s.certified_depth();
            break;
    }
    j["declarations"] = decl;

    if (!doc.metadata.empty()) {
        Json md;
        for (const auto& [k, v] : doc.metadata) md[k] = v;
        j["metadata"] = md;
    }
    return j.dump(2) + "\n";
}

SystemDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

void save_document(const SystemDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << render_document(doc);
}

Json run_report(const RipsRun& run) {
    Json steps = Json::array();
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        const StageStats& st = run.stages[k];
        Json moves = Json::array();
        for (const auto& m : run.steps[k].moves) {
            Json mv{{"type", m.type == MoveType::split_edge ? "split_edge" : "split_vertex"},
                    {"arc_len", m.arc_length.str()},
                    {"tree", m.tree},
                    {"index_before", m.index_before},
                    {"index_after", m.index_after}};
            if (m.split_generator) mv["split_generator"] = *m.split_generator;
            moves.push_back(mv);
        }
        steps.push_back(Json{{"step", st.stage},
                             {"components", st.components},
                             {"edges", st.edges},
                             {"graph_index", st.graph_index},
                             {"total_length", st.total_length.str()},
                             {"condition_ii", st.condition_ii},
                             {"peripheral_length", run.steps[k].peripheral_length.str()},
                             {"arcs_length", run.steps[k].arcs_length.str()},
                             {"moves", moves}});
    }
    const StageStats& last = run.stages.back();
    return Json{{"halted", run.halted},
                {"halt_stage", run.halt_stage},
                {"budget_exhausted", run.budget_exhausted},
                {"steps", steps},
                {"final",
                 Json{{"stage", last.stage},
                      {"components", last.components},
                      {"edges", last.edges},
                      {"graph_index", last.graph_index},
                      {"total_length", last.total_length.str()},
                      {"max_component_diameter", last.max_component_diameter.str()}}}};
}

Json index_report(const IndexResult& idx, const Forest* final_forest) {
    Json index;
    index["method"] = idx.method;
    if (idx.exact)
        index["value"] = idx.value;
    else
        index["bound"] = idx.value;
    Json j{{"index", index}, {"stage", idx.stage}};
    if (idx.exact) {
        j["cross_checks"] = Json{{"final_graph_index", idx.final_graph_index}};
        Json sp = Json::array();
        for (const auto& r : idx.singular) {
            Json rec{{"valence", r.valence},
                     {"omega_valence", r.omega_valence},
                     {"index", r.index}};
            if (final_forest) rec["point"] = point_to_json(*final_forest, r.point);
            sp.push_back(rec);
        }
        j["singular_points"] = sp;
    }
    return j;
}

Json certificate_report(const System& s, const System::Certificate& cert) {
    Json profile = Json::array();
    for (const auto& d : cert.profile) profile.push_back(d.str());
    Json witness = Json::array();
    for (const auto& l : cert.witness) witness.push_back(s.letter_name(l));
    return Json{{"depth", cert.depth},
                {"max_diameter", cert.max_diameter.str()},
                {"profile", profile},
                {"witness", witness},
                {"certified", cert.certified},
                {"contracting", cert.contracting},
                {"budget_exhausted", cert.budget_exhausted},
                {"nodes_visited", cert.nodes_visited}};
}

Json classification_report(const Classification& c) {
    Json j{{"label", c.label == ClassificationLabel::surface_type    ? "surface_type"
                     : c.label == ClassificationLabel::levitt_evidence ? "levitt_evidence"
                                                                       : "mixed_or_unknown"},
           {"stage", c.stage},
           {"halted", c.halted},
           {"halt_stage", c.halt_stage},
           {"max_component_diameter", c.max_component_diameter.str()},
           {"independence", c.independence},
           {"initial_graph_index", c.initial_graph_index},
           {"window", c.window}};
    if (c.exact_index) j["exact_index"] = *c.exact_index;
    if (c.maximal_index) j["maximal_index"] = *c.maximal_index;
    return j;
}

Json reduced_report(const ReducedReport& r) {
    Json j{{"status", r.status == ReducedStatus::reduced      ? "reduced"
                      : r.status == ReducedStatus::not_reduced ? "not_reduced"
                                                                : "unknown_at_depth"},
           {"depth", r.depth},
           {"condition_ii", r.condition_ii}};
    if (!r.witness.empty()) j["witness"] = r.witness;
    return j;
}

Json error_json(const std::string& type, const std::string& message) {
    return Json{{"error", Json{{"type", type}, {"message", message}}}};
}

} // namespace frips

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "forestrips/json_io.hpp"

using namespace frips;

namespace {

// exit codes: 0 ok, 1 negative analysis result, 2 input error, 3 budget exhausted
constexpr int kOk = 0, kNegative = 1, kInputError = 2, kBudget = 3;

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_validate(const std::string& path) {
    SystemDocument doc = load_document(path);
    const System& s = doc.system;
    emit(Json{{"ok", true},
              {"field_d", s.forest().field().d},
              {"components", s.forest().tree_count()},
              {"edges", s.forest().edge_count()},
              {"generators", s.generator_count()},
              {"total_length", s.forest().total_length().str()},
              {"graph_index", graph_index(s.associated_graph())}});
    return kOk;
}

int cmd_graph(const std::string& path, const std::string& dot_path) {
    SystemDocument doc = load_document(path);
    MultiGraph g = doc.system.associated_graph();
    if (!dot_path.empty()) write_file(dot_path, to_dot(g));
    emit(Json{{"vertices", g.vertex_count()},
              {"edges", g.edge_count()},
              {"graph_index", graph_index(g)},
              {"core_vertices", graph_core(g).vertex_count()}});
    return kOk;
}

int cmd_step(const std::string& path, const std::string& out_path, bool show_moves) {
    SystemDocument doc = load_document(path);
    RipsStep step = elementary_step(doc.system);
    Json j{{"fixed_point", step.fixed_point},
           {"pieces", step.pieces.size()},
           {"peripheral_length", step.peripheral_length.str()},
           {"arcs_length", step.arcs_length.str()},
           {"output_components", step.next.forest().tree_count()},
           {"output_generators", step.next.generator_count()}};
    if (show_moves) {
        Json moves = Json::array();
        for (const auto& m : step.moves) {
            Json mv{{"type", m.type == MoveType::split_edge ? "split_edge" : "split_vertex"},
                    {"arc_len", m.arc_length.str()},
                    {"tree", m.tree},
                    {"index_before", m.index_before},
                    {"index_after", m.index_after}};
            if (m.split_generator) mv["split_generator"] = *m.split_generator;
            moves.push_back(mv);
        }
        j["moves"] = moves;
    }
    emit(j);
    if (!out_path.empty()) save_document(SystemDocument{step.next, doc.metadata}, out_path);
    return kOk;
}

int cmd_run(const std::string& path, int max_steps, int budget_breakpoints,
            const std::string& report_path) {
    SystemDocument doc = load_document(path);
    RipsRun run = run_machine(doc.system, {max_steps, budget_breakpoints});
    Json report = run_report(run);
    emit(report);
    if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
    return run.halted ? kOk : kBudget;
}

int cmd_index(const std::string& path, int max_steps, int budget_breakpoints) {
    SystemDocument doc = load_document(path);
    RipsRun run = run_machine(doc.system, {max_steps, budget_breakpoints});
    IndexResult idx = system_index(doc.system, run);
    const Forest* ff = run.halted ? &run.final_system().forest() : nullptr;
    emit(index_report(idx, ff));
    return kOk;
}

int cmd_classify(const std::string& path, int max_steps, int depth, int window) {
    SystemDocument doc = load_document(path);
    RipsRun run = run_machine(doc.system, {max_steps});
    Classification c = classify(doc.system, run, {depth, window});
    IndexResult idx = system_index(doc.system, run);
    System::Certificate cert = doc.system.independence_certificate(depth);
    Json j{{"classification", classification_report(c)},
           {"index", index_report(idx, run.halted ? &run.final_system().forest() : nullptr)},
           {"certificates", certificate_report(doc.system, cert)}};
    emit(j);
    return kOk;
}

int cmd_cayley(const std::string& path, const std::string& point_spec, int depth,
               const std::string& dot_path) {
    SystemDocument doc = load_document(path);
    const System& s = doc.system;
    Point p = parse_point_spec(s.forest(), point_spec);
    System::CayleyView view = s.cayley_view(p, depth);
    if (!dot_path.empty()) write_file(dot_path, to_dot(view.core, "cayley_core"));
    emit(Json{{"point", point_to_json(s.forest(), p)},
              {"depth", depth},
              {"vertices", view.graph.vertex_count()},
              {"edges", view.graph.edge_count()},
              {"core_vertices", view.core.vertex_count()},
              {"core_index_sum", view.core_index_sum},
              {"truncated", view.truncated}});
    return view.budget_exhausted ? kBudget : kOk;
}

int cmd_iet(const std::string& lengths_arg, const std::string& perm_arg, long field_d,
            const std::string& out_path, bool declare) {
    FieldContext field(field_d);
    std::vector<Scalar> lengths;
    std::stringstream ls(lengths_arg);
    std::string tok;
    while (std::getline(ls, tok, ','))
        if (!tok.empty()) lengths.push_back(parse_scalar(tok, field));
    std::vector<int> perm;
    std::stringstream ps(perm_arg);
    while (std::getline(ps, tok, ','))
        if (!tok.empty()) perm.push_back(std::stoi(tok));
    System s = iet_to_system(field, lengths, perm,
                             declare ? IndependenceDecl::declared : IndependenceDecl::none);
    SystemDocument doc{s, {{"kind", "interval_exchange"}}};
    std::string text = render_document(doc);
    if (!out_path.empty())
        write_file(out_path, text);
    else
        std::cout << text;
    return kOk;
}

int cmd_cert(const std::string& path, int depth, long max_nodes) {
    SystemDocument doc = load_document(path);
    System::Certificate cert = doc.system.independence_certificate(depth, max_nodes);
    emit(certificate_report(doc.system, cert));
    if (cert.budget_exhausted) return kBudget;
    return (cert.certified || cert.contracting) ? kOk : kNegative;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Rips machine for systems of isometries on metric forests"};
    app.require_subcommand(1);
    unsigned long long seed = 0;
    app.add_option("--seed", seed, "seed for randomized generators (reserved)");

    std::string path, out_path, dot_path, report_path, point_spec, lengths_arg, perm_arg;
    int max_steps = 100, depth = 10, window = 10, budget_breakpoints = 100000;
    long field_d = 0, max_nodes = 2000000;
    bool show_moves = false, declare = false;

    auto* validate = app.add_subcommand("validate", "check a system document");
    validate->add_option("file", path)->required();

    auto* graph = app.add_subcommand("graph", "associated graph and its index");
    graph->add_option("file", path)->required();
    graph->add_option("--dot", dot_path, "write the graph in DOT format");

    auto* step = app.add_subcommand("step", "one elementary step");
    step->add_option("file", path)->required();
    step->add_option("-o,--output", out_path, "write the output system");
    step->add_flag("--moves", show_moves, "log the move decomposition");

    auto* run = app.add_subcommand("run", "iterate until the machine halts");
    run->add_option("file", path)->required();
    run->add_option("--max-steps", max_steps);
    run->add_option("--budget-breakpoints", budget_breakpoints,
                    "stop when a stage has more components than this");
    run->add_option("--report", report_path, "write the run report");

    auto* index = app.add_subcommand("index", "system index (exact or stage bound)");
    index->add_option("file", path)->required();
    index->add_option("--max-steps", max_steps);
    index->add_option("--budget-breakpoints", budget_breakpoints);

    auto* classify = app.add_subcommand("classify", "surface/Levitt classification");
    classify->add_option("file", path)->required();
    classify->add_option("--max-steps", max_steps);
    classify->add_option("--depth", depth);
    classify->add_option("--window", window);

    auto* cayley = app.add_subcommand("cayley", "depth-bounded orbit graph of a point");
    cayley->add_option("file", path)->required();
    cayley->add_option("--point", point_spec, "v<id> or e<id>@<offset>")->required();
    cayley->add_option("--depth", depth);
    cayley->add_option("--dot", dot_path, "write the core in DOT format");

    auto* iet = app.add_subcommand("iet", "build an interval exchange system");
    iet->add_option("--lengths", lengths_arg, "comma-separated exact lengths")->required();
    iet->add_option("--perm", perm_arg, "rearranged order, e.g. 3,1,2")->required();
    iet->add_option("--field-d", field_d, "quadratic field parameter d");
    iet->add_option("-o,--output", out_path, "write the document here");
    iet->add_flag("--declare-independence", declare);

    auto* cert = app.add_subcommand("cert", "independence certificate");
    cert->add_option("file", path)->required();
    cert->add_option("--depth", depth);
    cert->add_option("--max-nodes", max_nodes);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*validate) return cmd_validate(path);
        if (*graph) return cmd_graph(path, dot_path);
        if (*step) return cmd_step(path, out_path, show_moves);
        if (*run) return cmd_run(path, max_steps, budget_breakpoints, report_path);
        if (*index) return cmd_index(path, max_steps, budget_breakpoints);
        if (*classify) return cmd_classify(path, max_steps, depth, window);
        if (*cayley) return cmd_cayley(path, point_spec, depth, dot_path);
        if (*iet) return cmd_iet(lengths_arg, perm_arg, field_d, out_path, declare);
        if (*cert) return cmd_cert(path, depth, max_nodes);
    } catch (const TripleOverlapError& e) {
        std::cerr << error_json("triple_overlap", e.what()).dump() << "\n";
        return kNegative;
    } catch (const BudgetError& e) {
        std::cerr << error_json("budget", e.what()).dump() << "\n";
        return kBudget;
    } catch (const ParseError& e) {
        std::cerr << error_json("parse", e.what()).dump() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        std::cerr << error_json("validation", e.what()).dump() << "\n";
        return kInputError;
    } catch (const PreconditionError& e) {
        std::cerr << error_json("precondition", e.what()).dump() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << error_json("error", e.what()).dump() << "\n";
        return kInputError;
    }
    return kInputError;
}

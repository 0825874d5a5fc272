#include "tilework/search.hpp"
#include "tilework/service.hpp"
#include "tilework/svg.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <fstream>
#include <iostream>
#include <mutex>

using namespace tilework;
using nlohmann::json;

namespace {

struct Failed {
    json detail;
};

bool as_json = false;

void emit(const json& j, const std::string& text) {
    if (as_json) std::cout << j.dump(1) << "\n";
    else std::cout << text;
}

std::string matrix_text(const Eigen::MatrixXi& m) {
    std::ostringstream os;
    os << m << "\n";
    return os.str();
}

RuleDocument load_validated(const std::string& path) {
    RuleDocument doc = load_rule(path);
    ValidationReport rep = validate_rule(doc.rule);
    if (!rep.valid) throw Failed{to_json(rep)};
    return doc;
}

PairAnalysis require_pair(const RuleDocument& doc) {
    if (!doc.graph || !doc.pair) throw ValidationError("the rule file has no graph and pair");
    PairAnalysis pa = analyze_pair(doc.rule, *doc.graph, *doc.pair);
    if (!pa.equivalent()) throw ValidationError("G and S are not equivalent: " + pa.ps.message);
    return pa;
}

int cmd_validate(const std::string& path) {
    RuleDocument doc = load_rule(path);
    ValidationReport rep = validate_rule(doc.rule);
    json j{{"rule", to_json(rep)}};
    std::string text = rep.summary() + "\n";
    bool ok = rep.valid;
    if (rep.valid) {
        text += "M =\n" + matrix_text(rep.M);
        text += "vertex counts:";
        for (int c : rep.vertex_counts) text += " " + std::to_string(c);
        text += "\nvertex-set closure depth " + std::to_string(rep.closure_depth) + ", " + std::to_string(rep.seconds) + " s\n";
    }
    if (rep.valid && doc.graph) {
        ConsistencyReport cons = check_consistency(*doc.graph, doc.rule);
        j["graph"] = {{"quasiDual", cons.quasi_dual}, {"dual", cons.dual}, {"diagnostics", cons.diagnostics}};
        text += std::string("graph: ") + (cons.dual ? "dual" : cons.quasi_dual ? "quasi-dual" : "not quasi-dual") + "\n";
        for (const auto& d : cons.diagnostics) text += "  " + d + "\n";
        ok = ok && cons.quasi_dual;
    }
    if (rep.valid && doc.graph && doc.pair) {
        PairAnalysis pa = analyze_pair(doc.rule, *doc.graph, *doc.pair);
        json pj{{"equivalent", pa.equivalent()}, {"detail", pa.ps.message}};
        text += "pair N=" + std::to_string(doc.pair->N) + ": " + pa.ps.message + "\n";
        if (pa.equivalent()) {
            json reports = json::array();
            for (const auto& r : pa.scan.reports) {
                reports.push_back(to_json(r));
                text += "  " + r.summary() + "\n";
                for (const Condition* c : {&r.I1, &r.I2, &r.I3, &r.I4, &r.spans})
                    for (const auto& w : c->witnesses) text += "    " + w + "\n";
            }
            pj["injectivity"] = reports;
            pj["leastN"] = pa.scan.least_n;
            text += pa.injective() ? "injectivity holds at N=" + std::to_string(pa.scan.least_n) + "\n" : "injectivity fails up to N=4\n";
        }
        j["pair"] = pj;
        ok = ok && pa.equivalent() && pa.injective();
    }
    j["ok"] = ok;
    emit(j, text);
    return ok ? 0 : 1;
}

int cmd_render(const std::string& path, int level, int depth, const std::string& out, bool prototiles) {
    RuleDocument doc = load_validated(path);
    std::string svg;
    if (level == 0 || !doc.pair) {
        if (level > 0) throw ValidationError("levels above 0 need a pair");
        svg = render_patch(doc.rule, subtile_patch(doc.rule, 0, depth), doc.graph ? &*doc.graph : nullptr);
    } else {
        PairAnalysis pa = require_pair(doc);
        FractalAnalysis fa = analyze_fractal(doc.rule, *doc.graph, pa, true);
        svg = prototiles ? render_fractal_prototiles(doc.rule, fa.es, fa.prototiles, level)
                         : render_patch(doc.rule, subtile_patch(doc.rule, 0, depth), &*doc.graph, &fa.es, level);
    }
    if (out.empty() || out == "-") {
        std::cout << svg;
        return 0;
    }
    std::ofstream(out) << svg;
    emit({{"out", out}, {"bytes", svg.size()}}, "wrote " + out + "\n");
    return 0;
}

int cmd_dimension(const std::string& path, bool allow_unverified, int box_level) {
    RuleDocument doc = load_validated(path);
    PairAnalysis pa = require_pair(doc);
    EdgeSubstitution es = build_edge_substitution(doc.rule, *doc.graph, pa.ps);
    DimensionResult d = hausdorff_dimension(es, pa.injective(), allow_unverified);
    json j = to_json(d);
    std::ostringstream os;
    os.precision(12);
    os << "M^E =\n" << es.M << "\nlambda_E = " << d.lambda_E << "\ndimension = " << d.value << (d.exact ? " (exact)" : "");
    if (!d.label.empty()) os << " [" << d.label << "]";
    os << "\n";
    if (box_level > 0) {
        BoxCount bc = box_counting(es, box_level);
        j["boxCounting"] = {{"level", box_level}, {"slope", bc.slope}};
        os << "box counting at level " << box_level << ": " << bc.slope << "\n";
    }
    emit(j, os.str());
    return 0;
}

int cmd_cohomology(const std::string& path, const std::string& matrices) {
    CochainComplex c;
    if (!matrices.empty()) {
        c = load_complex(matrices);
    } else {
        RuleDocument doc = load_validated(path);
        PairAnalysis pa = require_pair(doc);
        FractalAnalysis fa = analyze_fractal(doc.rule, *doc.graph, pa, true);
        c = rule_complex(doc.rule, pa, fa);
    }
    CohomologyReport r = compute_cohomology(c);
    std::string text;
    text += "delta0 =\n" + format_matrix(c.delta0) + "delta1 =\n" + format_matrix(c.delta1);
    text += "A0 =\n" + format_matrix(c.A0) + "A1 =\n" + format_matrix(c.A1) + "A2 =\n" + format_matrix(c.A2);
    text += r.str();
    emit(to_json(r), text);
    return r.problems.empty() ? 0 : 1;
}

int cmd_search(const std::string& path, const std::string& target, const SearchOptions& base, const std::string& out) {
    RuleDocument doc = load_validated(path);
    SearchOptions opt = base;
    opt.target = target == "dual" ? SearchTarget::dual : SearchTarget::quasi_dual;
    EmbeddedGraph g0 = doc.graph ? *doc.graph : standard_dual_graph(doc.rule);
    SearchResult r = search_pair(doc.rule, g0, opt);
    json j{{"ok", r.ok}, {"diagnosis", r.diagnosis}, {"log", r.log}, {"iterations", r.iterations}};
    std::string text;
    for (const auto& l : r.log) text += l + "\n";
    if (!r.ok) {
        text += "search failed: " + r.diagnosis + "\n";
        emit(j, text);
        return 1;
    }
    RuleDocument result = doc;
    result.graph = r.G;
    result.graph_edges = r.graph_edges;
    result.pair = r.pair;
    std::string file = print_rule(result);
    j["N"] = r.pair.N;
    j["injectivity"] = to_json(r.injectivity);
    text += "found pair at N=" + std::to_string(r.pair.N) + ": " + r.injectivity.summary() + "\n";
    if (out.empty() || out == "-") {
        if (as_json) j["rule"] = json::parse(file);
        else text += file;
    } else {
        std::ofstream(out) << file;
        j["out"] = out;
        text += "wrote " + out + "\n";
    }
    emit(j, text);
    return 0;
}

int cmd_serve(const std::string& path, const std::string& host, int port) {
    Session session(load_validated(path));
    std::mutex lock;
    httplib::Server server;
    auto forward = [&](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard<std::mutex> guard(lock);
        Response r = session.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type.c_str());
    };
    for (const char* p : {"/session", "/export.svg"}) server.Get(p, forward);
    for (const char* p : {"/selection", "/iterate", "/analyze"}) server.Post(p, forward);
    std::cerr << "serving " << path << " on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractal realizations of planar substitution tilings"};
    app.require_subcommand(1);
    app.add_flag("--json", as_json, "machine-readable output");

    std::string rule_path, out, matrices, target = "quasi-dual", host = "127.0.0.1";
    int level = 0, depth = 2, box = 0, port = 8080;
    bool prototiles = false, unverified = false;
    SearchOptions sopt;

    auto* validate = app.add_subcommand("validate", "check covering, packing, vertex set, graph and pair");
    validate->add_option("rule", rule_path)->required();

    auto* render = app.add_subcommand("render", "write an SVG");
    render->add_option("rule", rule_path)->required();
    render->add_option("--level", level, "fractal level")->check(CLI::Range(0, 8));
    render->add_option("--depth", depth, "substitution depth of the patch")->check(CLI::Range(0, 5));
    render->add_option("--out", out, "output file, - for stdout");
    render->add_flag("--prototiles", prototiles, "draw the fractal prototiles instead of a patch");

    auto* dimension = app.add_subcommand("dimension", "Hausdorff dimension of the fractal edges");
    dimension->add_option("rule", rule_path)->required();
    dimension->add_flag("--allow-unverified", unverified, "report the formula value even if injectivity fails");
    dimension->add_option("--box", box, "also box-count the polylines at this level")->check(CLI::Range(0, 10));

    auto* cohomology = app.add_subcommand("cohomology", "Cech cohomology from the approximant complex");
    cohomology->add_option("rule", rule_path);
    cohomology->add_option("--matrices", matrices, "directory with delta0, delta1, A0, A1, A2 text files");

    auto* search = app.add_subcommand("search", "construct a recurrent pair");
    search->add_option("rule", rule_path)->required();
    search->add_option("--target", target)->check(CLI::IsMember({"dual", "quasi-dual"}));
    search->add_option("--seed", sopt.seed);
    search->add_option("--max-n", sopt.max_N)->check(CLI::Range(1, 6));
    search->add_option("--max-iterations", sopt.max_iterations);
    search->add_option("--budget", sopt.budget);
    search->add_flag("--corridor", sopt.corridor, "route along the straight chords");
    search->add_option("--out", out, "write the resulting rule file here");

    auto* serve = app.add_subcommand("serve", "JSON-over-HTTP session for the explorer");
    serve->add_option("rule", rule_path)->required();
    serve->add_option("--port", port);
    serve->add_option("--host", host);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(rule_path);
        if (*render) return cmd_render(rule_path, level, depth, out, prototiles);
        if (*dimension) return cmd_dimension(rule_path, unverified, box);
        if (*cohomology) {
            if (rule_path.empty() == matrices.empty()) throw ValidationError("give either a rule file or --matrices");
            return cmd_cohomology(rule_path, matrices);
        }
        if (*search) return cmd_search(rule_path, target, sopt, out);
        if (*serve) return cmd_serve(rule_path, host, port);
    } catch (const Failed& f) {
        emit({{"error", "validation failed"}, {"detail", f.detail}}, f.detail.value("summary", std::string("validation failed")) + "\n");
        return 1;
    } catch (const ParseError& e) {
        if (as_json) std::cout << json{{"error", "parse error"}, {"messages", e.messages}}.dump(1) << "\n";
        else
            for (const auto& m : e.messages) std::cerr << m << "\n";
        return 1;
    } catch (const ValidationError& e) {
        if (as_json) std::cout << json{{"error", e.what()}}.dump(1) << "\n";
        else std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        if (as_json) std::cout << json{{"error", e.what()}, {"internal", true}}.dump(1) << "\n";
        else std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

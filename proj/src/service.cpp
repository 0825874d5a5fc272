#include "tilework/service.hpp"

#include "tilework/svg.hpp"

namespace tilework {

using nlohmann::json;

PairAnalysis analyze_pair(const SubstitutionRule& rule, const EmbeddedGraph& g, const RecurrentPair& pair, int max_n) {
    PairAnalysis pa;
    pa.ps = match_equivalence(rule, g, pair);
    if (pa.ps.ok) pa.scan = scan_injectivity(rule, pa.ps, 1, max_n);
    return pa;
}

FractalAnalysis analyze_fractal(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairAnalysis& pa, bool allow_unverified) {
    FractalAnalysis fa;
    fa.es = build_edge_substitution(rule, g, pa.ps);
    fa.dimension = hausdorff_dimension(fa.es, pa.injective(), allow_unverified);
    fa.prototiles = build_fractal_prototiles(rule, g, pa.ps, fa.es);
    return fa;
}

CochainComplex rule_complex(const SubstitutionRule& rule, const PairAnalysis& pa, const FractalAnalysis& fa) {
    return build_ap_complex(rule, pa.ps, fa.es, fa.prototiles);
}

json to_json(const ValidationReport& r) {
    json j{{"valid", r.valid}, {"errors", r.errors}, {"summary", r.summary()}};
    if (r.valid) {
        json m = json::array();
        for (int i = 0; i < r.M.rows(); ++i) {
            json row = json::array();
            for (int k = 0; k < r.M.cols(); ++k) row.push_back(r.M(i, k));
            m.push_back(row);
        }
        j["M"] = m;
        j["primitive"] = r.primitive;
        j["singlyEdgeToEdge"] = r.singly_edge_to_edge;
        j["vertexCounts"] = r.vertex_counts;
        j["closureDepth"] = r.closure_depth;
    }
    return j;
}

json to_json(const Condition& c) { return {{"pass", c.pass}, {"witnesses", c.witnesses}}; }

json to_json(const InjectivityReport& r) {
    return {{"N", r.N},           {"I1", to_json(r.I1)},       {"I2", to_json(r.I2)}, {"I3", to_json(r.I3)},
            {"I4", to_json(r.I4)}, {"spans", to_json(r.spans)}, {"pass", r.all_pass()}};
}

json to_json(const DimensionResult& d) {
    return {{"lambdaE", d.lambda_E}, {"dimension", d.value}, {"exact", d.exact}, {"verified", d.verified}, {"label", d.label}};
}

json to_json(const CohomologyReport& r) {
    json j{{"problems", r.problems}};
    for (int k = 0; k < 3; ++k)
        j["H" + std::to_string(k)] = {{"approximant", r.H[k].approximant.str()}, {"group", r.H[k].limit.str()}};
    return j;
}

namespace {

json point(const Point& p) {
    PointD d = to_double(p);
    return json::array({d.x(), d.y()});
}

json points(const std::vector<Point>& pts) {
    json a = json::array();
    for (const Point& p : pts) a.push_back(point(p));
    return a;
}

Response error(int status, const std::string& message) { return {status, "application/json", json{{"error", message}}.dump()}; }

}  // namespace

Session::Session(RuleDocument doc) : doc_(std::move(doc)) {
    if (!doc_.graph) throw ValidationError("serve needs a rule with a graph");
    g_ = *doc_.graph;
    if (doc_.pair) {
        N_ = doc_.pair->N;
        selection_ = doc_.pair->S;
    }
    selection_.resize(doc_.rule.size());
}

Response Session::handle(const std::string& method, const std::string& path, const std::string& body) {
    try {
        if (method == "GET" && path == "/session") return scene();
        if (method == "GET" && path == "/export.svg") return export_svg();
        if (method == "POST" && (path == "/selection" || path == "/iterate" || path == "/analyze")) {
            json req = body.empty() ? json::object() : json::parse(body);
            if (!req.is_object()) return error(400, "request body must be a JSON object");
            if (path == "/selection") return select(req);
            if (path == "/iterate") return iterate_level(req);
            return analyze();
        }
        return error(404, "no endpoint " + method + " " + path);
    } catch (const json::exception& e) {
        return error(400, std::string("malformed request: ") + e.what());
    } catch (const ValidationError& e) {
        return error(400, e.what());
    }
}

Response Session::scene() const {
    const SubstitutionRule& rule = doc_.rule;
    json tiles = json::array();
    for (int p = 0; p < rule.size(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        json g = json::array();
        for (const GraphEdge& e : g_.parts[p].edges) g.push_back(points(e.polyline));
        ContractedGraph cg = contract_graph(rule, g_, p, N_);
        json edges = json::array();
        for (std::size_t i = 0; i < cg.graph.edges.size(); ++i) {
            bool sel = std::find(selection_[p].begin(), selection_[p].end(), cg.refs[i]) != selection_[p].end();
            edges.push_back({{"id", i}, {"tile", cg.refs[i].path}, {"edge", cg.refs[i].edge}, {"selected", sel},
                             {"points", points(cg.graph.edges[i].polyline)}});
        }
        tiles.push_back({{"label", pt.label}, {"support", points(pt.support.v)}, {"vertices", points(pt.boundary_vertices)},
                         {"G", g}, {"RNG", edges}});
    }
    ConsistencyReport cons = check_consistency(g_, rule);
    json badges{{"tConsistent", cons.t_consistent}, {"tree", cons.trees}, {"quasiDual", cons.quasi_dual}, {"dual", cons.dual}};
    if (pair_) {
        badges["equivalent"] = pair_->equivalent();
        if (!pair_->scan.reports.empty()) badges["injectivity"] = to_json(pair_->scan.reports.back());
    }
    json j{{"formatVersion", 1}, {"name", rule.name}, {"N", N_}, {"prototiles", tiles}, {"badges", badges}};
    return {200, "application/json", j.dump()};
}

Response Session::select(const json& req) {
    const SubstitutionRule& rule = doc_.rule;
    int n = req.value("N", N_);
    if (n < 1 || n > 4) return error(400, "N must lie in [1, 4]");
    if (!req.contains("edges") || !req["edges"].is_object()) return error(400, "\"edges\" must map prototile labels to edge id lists");
    std::vector<std::vector<SubEdgeRef>> sel(rule.size());
    for (auto it = req["edges"].begin(); it != req["edges"].end(); ++it) {
        int p = rule.index_of(it.key());
        if (p < 0) return error(400, "unknown prototile '" + it.key() + "'");
        if (!it.value().is_array()) return error(400, "edges of " + it.key() + " must be an array of ids");
        ContractedGraph cg = contract_graph(rule, g_, p, n);
        for (const json& id : it.value()) {
            if (!id.is_number_integer() || id.get<int>() < 0 || id.get<int>() >= static_cast<int>(cg.refs.size()))
                return error(400, "edge id " + id.dump() + " is not an edge of R^N(G)_" + it.key());
            sel[p].push_back(cg.refs[id.get<int>()]);
        }
    }
    N_ = n;
    selection_ = std::move(sel);
    fractal_.reset();
    pair_ = analyze_pair(rule, g_, {N_, selection_});
    json j{{"equivalence", {{"pass", pair_->equivalent()}, {"detail", pair_->ps.message}}}, {"injectivity", nullptr}};
    if (!pair_->scan.reports.empty()) {
        j["injectivity"] = to_json(pair_->scan.reports.back());
        j["leastN"] = pair_->scan.least_n;
    }
    return {200, "application/json", j.dump()};
}

bool Session::valid_pair() const { return pair_ && pair_->equivalent() && pair_->injective(); }

Response Session::iterate_level(const json& req) {
    if (!valid_pair()) return error(409, "no valid pair selected");
    int level = req.value("level", 1);
    if (level < 0 || level > 8) return error(400, "level must lie in [0, 8]");
    if (!fractal_) fractal_ = analyze_fractal(doc_.rule, g_, *pair_);
    auto lines = iterate(fractal_->es, level);
    json edges = json::array();
    for (int e = 0; e < fractal_->es.size(); ++e) {
        auto [p, k] = fractal_->es.owner[e];
        json pts = json::array();
        for (const PointD& x : lines[e]) pts.push_back({x.x(), x.y()});
        edges.push_back({{"prototile", doc_.rule.prototiles[p].label}, {"edge", k}, {"points", pts}});
    }
    return {200, "application/json", json{{"level", level}, {"edges", edges}}.dump()};
}

Response Session::analyze() {
    if (!valid_pair()) return error(409, "no valid pair selected");
    if (!fractal_) fractal_ = analyze_fractal(doc_.rule, g_, *pair_);
    CohomologyReport coh = compute_cohomology(rule_complex(doc_.rule, *pair_, *fractal_));
    json j{{"dimension", to_json(fractal_->dimension)}, {"cohomology", to_json(coh)}};
    return {200, "application/json", j.dump()};
}

Response Session::export_svg() const {
    return {200, "image/svg+xml", render_selection(doc_.rule, g_, N_, selection_)};
}

}  // namespace tilework

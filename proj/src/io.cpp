#include "tilework/io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tilework {

using nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& m) {
    std::string out;
    for (const auto& s : m) out += (out.empty() ? "" : "\n") + s;
    return out;
}

// Maps JSON pointers to the line their value starts on. The text has already
// been accepted by the real parser, so this scanner can be forgiving.
class LineIndex {
public:
    explicit LineIndex(const std::string& text) : s_(text) {
        skip();
        value("");
    }
    int line(std::string ptr) const {
        for (;;) {
            auto it = lines_.find(ptr);
            if (it != lines_.end()) return it->second;
            auto cut = ptr.rfind('/');
            if (cut == std::string::npos) return 1;
            ptr = ptr.substr(0, cut);
        }
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }
    std::string string() {
        std::string out;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\') ++i_;
            if (i_ < s_.size()) out += s_[i_++];
        }
        ++i_;
        return out;
    }
    void value(const std::string& ptr) {
        skip();
        lines_[ptr] = line_;
        if (i_ >= s_.size()) return;
        char c = s_[i_];
        if (c == '{') {
            ++i_;
            skip();
            while (i_ < s_.size() && s_[i_] != '}') {
                std::string key = string();
                skip();
                ++i_;  // ':'
                value(ptr + "/" + key);
                skip();
                if (s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (c == '[') {
            ++i_;
            skip();
            int k = 0;
            while (i_ < s_.size() && s_[i_] != ']') {
                value(ptr + "/" + std::to_string(k++));
                skip();
                if (s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (c == '"') {
            string();
        } else {
            while (i_ < s_.size() && !std::strchr(",]}", s_[i_]) && !std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;
};

class Reader {
public:
    explicit Reader(const std::string& text) : index_(text) {}

    void error(const std::string& ptr, const std::string& msg) {
        errors.push_back("line " + std::to_string(index_.line(ptr)) + ": " + (ptr.empty() ? "/" : ptr) + ": " + msg);
    }

    FieldScalar field(const json& j, const std::string& ptr, int d) {
        if (!j.is_string()) {
            error(ptr, "numbers must be given as strings");
            return FieldScalar(0);
        }
        try {
            return parse_field(j.get<std::string>(), d);
        } catch (const std::exception& e) {
            error(ptr, e.what());
            return FieldScalar(0);
        }
    }

    std::optional<Point> point(const json& j, const std::string& ptr, int d) {
        if (!j.is_array() || j.size() != 2) {
            error(ptr, "a point is a pair [x, y]");
            return std::nullopt;
        }
        std::size_t before = errors.size();
        Point p(field(j[0], ptr + "/0", d), field(j[1], ptr + "/1", d));
        if (errors.size() != before) return std::nullopt;
        return p;
    }

    std::vector<Point> points(const json& j, const std::string& ptr, int d) {
        std::vector<Point> out;
        if (!j.is_array()) {
            error(ptr, "expected an array of points");
            return out;
        }
        for (std::size_t k = 0; k < j.size(); ++k)
            if (auto p = point(j[k], ptr + "/" + std::to_string(k), d)) out.push_back(*p);
        return out;
    }

    std::vector<std::string> errors;

private:
    LineIndex index_;
};

json point_json(const Point& p) { return json::array({to_string(p.x()), to_string(p.y())}); }

}  // namespace

ParseError::ParseError(std::vector<std::string> m) : std::runtime_error(join_lines(m)), messages(std::move(m)) {}

RuleDocument parse_rule(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError({e.what()});
    }
    Reader r(text);
    RuleDocument doc;
    SubstitutionRule& rule = doc.rule;
    if (!j.is_object()) throw ParseError({"line 1: /: a rule file is a JSON object"});

    if (!j.contains("formatVersion"))
        r.error("", "missing formatVersion");
    else if (j["formatVersion"] != 1)
        r.error("/formatVersion", "unsupported format version " + j["formatVersion"].dump());
    rule.name = j.value("name", std::string("unnamed"));

    if (!j.contains("d") || !j["d"].is_number_integer()) {
        r.error("/d", "d must be a positive square-free integer");
    } else {
        long d = j["d"].get<long>();
        if (!is_square_free(d))
            r.error("/d", "unknown d " + std::to_string(d) + ": not a positive square-free integer");
        else
            rule.d = static_cast<int>(d);
    }
    if (!j.contains("lambda"))
        r.error("", "missing lambda");
    else
        rule.lambda = r.field(j["lambda"], "/lambda", rule.d);

    std::map<std::string, int> index;
    if (!j.contains("prototiles") || !j["prototiles"].is_array() || j["prototiles"].empty()) {
        r.error("/prototiles", "at least one prototile is required");
    } else {
        for (std::size_t p = 0; p < j["prototiles"].size(); ++p) {
            const json& pj = j["prototiles"][p];
            std::string ptr = "/prototiles/" + std::to_string(p);
            Prototile tile;
            tile.label = pj.value("label", std::string());
            if (tile.label.empty()) r.error(ptr, "prototile without a label");
            if (index.count(tile.label)) r.error(ptr + "/label", "duplicate label '" + tile.label + "'");
            index[tile.label] = static_cast<int>(p);
            if (!pj.contains("vertices"))
                r.error(ptr, "missing vertices");
            else
                tile.support.v = r.points(pj["vertices"], ptr + "/vertices", rule.d);
            if (tile.support.v.size() < 3 && pj.contains("vertices")) r.error(ptr + "/vertices", "a polygon needs at least 3 vertices");
            rule.prototiles.push_back(std::move(tile));
        }
    }
    int n = rule.size();
    rule.digits.assign(n, std::vector<std::vector<Point>>(n));

    auto lookup = [&](const json& v, const std::string& ptr) {
        if (!v.is_string() || !index.count(v.get<std::string>())) {
            r.error(ptr, "dangling prototile reference " + v.dump());
            return -1;
        }
        return index[v.get<std::string>()];
    };

    if (!j.contains("digits") || !j["digits"].is_array()) {
        r.error("/digits", "missing digits");
    } else {
        for (std::size_t k = 0; k < j["digits"].size(); ++k) {
            const json& dj = j["digits"][k];
            std::string ptr = "/digits/" + std::to_string(k);
            int from = lookup(dj.value("from", json()), ptr + "/from");
            int to = lookup(dj.value("to", json()), ptr + "/to");
            auto vecs = r.points(dj.value("vectors", json::array()), ptr + "/vectors", rule.d);
            if (from >= 0 && to >= 0) {
                auto& slot = rule.digits[from][to];
                slot.insert(slot.end(), vecs.begin(), vecs.end());
            }
        }
    }

    if (j.contains("graph")) {
        const json& gj = j["graph"];
        EmbeddedGraph g;
        g.parts.resize(n);
        doc.graph_edges.resize(n);
        std::vector<char> seen(n);
        for (auto it = gj.begin(); it != gj.end(); ++it) {
            std::string ptr = "/graph/" + it.key();
            auto found = index.find(it.key());
            if (found == index.end()) {
                r.error(ptr, "graph for unknown prototile '" + it.key() + "'");
                continue;
            }
            int p = found->second;
            seen[p] = 1;
            auto verts = r.points(it.value().value("vertices", json::array()), ptr + "/vertices", rule.d);
            std::vector<std::vector<int>> polylines;
            const json& ej = it.value().value("edges", json::array());
            bool ok = true;
            for (std::size_t e = 0; e < ej.size(); ++e) {
                std::vector<int> ids;
                for (std::size_t t = 0; t < ej[e].size(); ++t) {
                    const json& id = ej[e][t];
                    if (!id.is_number_integer() || id.get<long>() < 0 || id.get<std::size_t>() >= verts.size()) {
                        r.error(ptr + "/edges/" + std::to_string(e) + "/" + std::to_string(t), "dangling vertex reference " + id.dump());
                        ok = false;
                    } else {
                        ids.push_back(id.get<int>());
                    }
                }
                if (ids.size() < 2) {
                    r.error(ptr + "/edges/" + std::to_string(e), "an edge needs two vertices");
                    ok = false;
                }
                polylines.push_back(ids);
            }
            if (ok) {
                g.parts[p] = make_graph(verts, polylines);
                doc.graph_edges[p] = polylines;
            }
        }
        for (int p = 0; p < n; ++p)
            if (!seen[p]) r.error("/graph", "no graph for prototile '" + rule.prototiles[p].label + "'");
        doc.graph = std::move(g);
    }

    if (j.contains("pair")) {
        const json& pj = j["pair"];
        RecurrentPair pair;
        if (!pj.contains("N") || !pj["N"].is_number_integer() || pj["N"].get<int>() < 1)
            r.error("/pair/N", "N must be a positive integer");
        else
            pair.N = pj["N"].get<int>();
        pair.S.resize(n);
        if (!doc.graph) r.error("/pair", "a pair needs a graph");
        const json& sj = pj.value("S", json::object());
        for (auto it = sj.begin(); it != sj.end(); ++it) {
            std::string ptr = "/pair/S/" + it.key();
            auto found = index.find(it.key());
            if (found == index.end()) {
                r.error(ptr, "dangling prototile reference '" + it.key() + "'");
                continue;
            }
            int p = found->second;
            for (std::size_t k = 0; k < it.value().size(); ++k) {
                const json& ref = it.value()[k];
                std::string rp = ptr + "/" + std::to_string(k);
                SubEdgeRef e;
                e.path = ref.value("tile", std::vector<int>{});
                e.edge = ref.value("edge", -1);
                if (static_cast<int>(e.path.size()) != pair.N) {
                    r.error(rp + "/tile", "path length must equal N");
                    continue;
                }
                // walk the path to check every index and the edge id
                int type = p;
                bool ok = true;
                for (int step : e.path) {
                    auto ch = (type >= 0 && n > 0) ? children(rule, type) : std::vector<Child>{};
                    if (step < 0 || step >= static_cast<int>(ch.size())) {
                        r.error(rp + "/tile", "dangling subtile index " + std::to_string(step));
                        ok = false;
                        break;
                    }
                    type = ch[step].type;
                }
                if (ok && doc.graph && (e.edge < 0 || e.edge >= static_cast<int>(doc.graph->parts[type].edges.size()))) {
                    r.error(rp + "/edge", "dangling edge reference " + std::to_string(e.edge));
                    ok = false;
                }
                if (ok) pair.S[p].push_back(e);
            }
        }
        doc.pair = std::move(pair);
    }

    if (!r.errors.empty()) throw ParseError(r.errors);
    return doc;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RuleDocument load_rule(const std::filesystem::path& path) {
    try {
        return parse_rule(read_text(path));
    } catch (const ParseError& e) {
        std::vector<std::string> m;
        for (const auto& s : e.messages) m.push_back(path.filename().string() + ": " + s);
        throw ParseError(m);
    }
}

std::string print_rule(const RuleDocument& doc) {
    const SubstitutionRule& rule = doc.rule;
    json j;
    j["formatVersion"] = 1;
    j["name"] = rule.name;
    j["d"] = rule.d;
    j["lambda"] = to_string(rule.lambda);
    j["prototiles"] = json::array();
    for (const auto& t : rule.prototiles) {
        json v = json::array();
        for (const auto& p : t.support.v) v.push_back(point_json(p));
        j["prototiles"].push_back({{"label", t.label}, {"vertices", v}});
    }
    j["digits"] = json::array();
    for (int p = 0; p < rule.size(); ++p)
        for (int q = 0; q < rule.size(); ++q) {
            if (rule.digits[p][q].empty()) continue;
            json v = json::array();
            for (const auto& d : rule.digits[p][q]) v.push_back(point_json(d));
            j["digits"].push_back({{"from", rule.prototiles[p].label}, {"to", rule.prototiles[q].label}, {"vectors", v}});
        }
    if (doc.graph) {
        json g = json::object();
        for (int p = 0; p < rule.size(); ++p) {
            json v = json::array();
            for (const auto& pt : doc.graph->parts[p].vertices) v.push_back(point_json(pt));
            g[rule.prototiles[p].label] = {{"vertices", v}, {"edges", doc.graph_edges[p]}};
        }
        j["graph"] = g;
    }
    if (doc.pair) {
        json s = json::object();
        for (int p = 0; p < rule.size(); ++p) {
            json list = json::array();
            for (const auto& e : doc.pair->S[p]) list.push_back({{"tile", e.path}, {"edge", e.edge}});
            s[rule.prototiles[p].label] = list;
        }
        j["pair"] = {{"N", doc.pair->N}, {"S", s}};
    }
    return j.dump(1) + "\n";
}

IntMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    std::string line, body;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        body += line + "\n";
    }
    std::istringstream b(body);
    long rows = -1, cols = -1;
    if (!(b >> rows >> cols) || rows < 0 || cols < 0) throw ParseError({"matrix file must start with 'rows cols'"});
    IntMatrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long k = 0; k < cols; ++k) {
            std::string tok;
            if (!(b >> tok)) throw ParseError({"matrix has fewer than " + std::to_string(rows * cols) + " entries"});
            try {
                m(i, k) = Integer(tok);
            } catch (const std::exception&) {
                throw ParseError({"bad matrix entry '" + tok + "'"});
            }
        }
    std::string extra;
    if (b >> extra) throw ParseError({"matrix has extra entries"});
    return m;
}

IntMatrix read_matrix_file(const std::filesystem::path& path) { return parse_matrix(read_text(path)); }

}  // namespace tilework

#include "tilework/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tilework {

namespace {

const char* kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                          "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::string colour(int i) { return kPalette[i % 12]; }

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", std::abs(x) < 5e-6 ? 0.0 : x);
    return buf;
}

// Collects shapes in world coordinates, then writes them with y pointing up.
class Canvas {
public:
    void polyline(const std::vector<PointD>& pts, const std::string& style, bool closed = false) {
        for (const PointD& p : pts) grow(p);
        std::string d;
        for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? " L" : "M") + pt(pts[i]);
        if (closed) d += " Z";
        items_.push_back({d, style});
    }
    void open_group(const std::string& id) { items_.push_back({"", "<g id=\"" + id + "\">"}); }
    void close_group() { items_.push_back({"", "</g>"}); }

    std::string str(const SvgOptions& opt) const {
        double w = std::max(x1_ - x0_, 1e-9), h = std::max(y1_ - y0_, 1e-9);
        double s = (opt.width - 2 * opt.margin) / w;
        double height = h * s + 2 * opt.margin;
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(opt.width) + "\" height=\"" + num(height) +
               "\" viewBox=\"0 0 " + num(opt.width) + " " + num(height) + "\">\n";
        // world -> page
        out += "<g transform=\"translate(" + num(opt.margin - x0_ * s) + "," + num(opt.margin + y1_ * s) + ") scale(" + num(s) + "," +
               num(-s) + ")\" stroke-linejoin=\"round\">\n";
        for (const auto& [d, style] : items_) {
            if (d.empty()) out += style + "\n";
            else out += "<path d=\"" + d + "\" " + style + "/>\n";
        }
        out += "</g>\n</svg>\n";
        return out;
    }

private:
    void grow(const PointD& p) {
        x0_ = std::min(x0_, p.x());
        y0_ = std::min(y0_, p.y());
        x1_ = std::max(x1_, p.x());
        y1_ = std::max(y1_, p.y());
    }
    static std::string pt(const PointD& p) { return num(p.x()) + "," + num(p.y()); }

    std::vector<std::pair<std::string, std::string>> items_;
    double x0_ = 1e300, y0_ = 1e300, x1_ = -1e300, y1_ = -1e300;
};

std::vector<PointD> to_doubles(const std::vector<Point>& pts) {
    std::vector<PointD> out;
    for (const Point& p : pts) out.push_back(to_double(p));
    return out;
}

std::vector<PointD> placed(const std::vector<PointD>& pts, double s, const PointD& t) {
    std::vector<PointD> out;
    for (const PointD& p : pts) out.push_back(p * s + t);
    return out;
}

std::string stroke(const std::string& c, double w) { return "stroke=\"" + c + "\" stroke-width=\"" + num(w) + "\""; }
std::string line(const std::string& c, double w) { return "fill=\"none\" " + stroke(c, w); }

}  // namespace

std::string render_patch(const SubstitutionRule& rule, const Patch& patch, const EmbeddedGraph* g, const EdgeSubstitution* es,
                         int level, const SvgOptions& opt) {
    Canvas c;
    std::vector<std::vector<PointD>> edges;
    if (es) edges = iterate(*es, level);
    double unit = 0;
    for (const PlacedTile& t : patch) unit = std::max(unit, rule.lambda_pow(-t.level).to_double());
    for (const PlacedTile& t : patch) {
        Polygon poly = tile_support(rule, t);
        if (opt.outlines) c.polyline(to_doubles(poly.v), "fill=\"" + colour(t.type) + "\" fill-opacity=\"0.35\" " + stroke("#555555", 0.004 * unit), true);
        if (!g) continue;
        double s = rule.lambda_pow(-t.level).to_double();
        PointD shift = to_double(t.translation);
        const auto& part = g->parts[t.type];
        for (std::size_t k = 0; k < part.edges.size(); ++k) {
            std::vector<PointD> pl = es ? edges[es->global(t.type, static_cast<int>(k))] : to_doubles(part.edges[k].polyline);
            c.polyline(placed(pl, s, shift), line("#b2182b", 0.008 * unit));
        }
    }
    return c.str(opt);
}

std::string render_fractal_prototiles(const SubstitutionRule& rule, const EdgeSubstitution& es, const FractalPrototileSet& fps,
                                      int level, const SvgOptions& opt) {
    Canvas c;
    auto edges = iterate(es, level);
    double gap = 0;
    for (const Prototile& pt : rule.prototiles) {
        BBox b = bbox(pt.support);
        gap = std::max({gap, b.x1 - b.x0, b.y1 - b.y0});
    }
    gap *= 3;
    int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(fps.tiles.size()))));
    for (std::size_t i = 0; i < fps.tiles.size(); ++i) {
        const FractalPrototile& fp = fps.tiles[i];
        PointD at(gap * static_cast<double>(i % cols), -gap * static_cast<double>(i / cols));
        std::vector<PointD> face;
        for (std::size_t j = 0; j < fp.word.size(); ++j) {
            auto [e, fwd] = fp.word[j];
            std::vector<PointD> pl = edges[e];
            if (!fwd) std::reverse(pl.begin(), pl.end());
            PointD t = to_double(fp.tiles[fp.word_tile[j]].translation) + at;
            for (std::size_t k = face.empty() ? 0 : 1; k < pl.size(); ++k) face.push_back(pl[k] + t);
        }
        c.open_group("prototile-" + std::to_string(i));
        c.polyline(face, "fill=\"" + colour(static_cast<int>(i)) + "\" " + stroke("#222222", 0.01), true);
        if (opt.outlines)
            for (const StarTile& st : fp.tiles) {
                Polygon poly = transformed(rule.prototiles[st.type].support, FieldScalar(1), st.translation);
                c.polyline(placed(to_doubles(poly.v), 1, at), line("#999999", 0.004));
            }
        c.close_group();
    }
    return c.str(opt);
}

std::string render_selection(const SubstitutionRule& rule, const EmbeddedGraph& g, int N,
                             const std::vector<std::vector<SubEdgeRef>>& S, const SvgOptions& opt) {
    Canvas c;
    double x = 0;
    for (int p = 0; p < rule.size(); ++p) {
        BBox b = bbox(rule.prototiles[p].support);
        PointD at(x - b.x0, 0);
        x += (b.x1 - b.x0) * 1.2;
        double w = std::max(b.x1 - b.x0, b.y1 - b.y0);
        c.open_group("prototile-" + rule.prototiles[p].label);
        for (const PlacedTile& t : subtile_patch(rule, p, N))
            c.polyline(placed(to_doubles(tile_support(rule, t).v), 1, at), "fill=\"" + colour(t.type) + "\" fill-opacity=\"0.3\" " + stroke("#777777", 0.002 * w), true);
        ContractedGraph cg = contract_graph(rule, g, p, N);
        for (std::size_t e = 0; e < cg.graph.edges.size(); ++e) {
            bool selected = p < static_cast<int>(S.size()) && std::find(S[p].begin(), S[p].end(), cg.refs[e]) != S[p].end();
            c.polyline(placed(to_doubles(cg.graph.edges[e].polyline), 1, at),
                       selected ? line("#b2182b", 0.012 * w) : line("#4d4d4d", 0.003 * w));
        }
        c.polyline(placed(to_doubles(rule.prototiles[p].support.v), 1, at), line("#000000", 0.006 * w), true);
        c.close_group();
    }
    return c.str(opt);
}

}  // namespace tilework

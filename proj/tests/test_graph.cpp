#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace tilework;
using testing::load_valid;

namespace {

Point pt(const char* x, const char* y) { return Point(parse_field(x, 1), parse_field(y, 1)); }

std::vector<Point> square_midpoints() { return {pt("1/2", "1/2"), pt("1/2", "0"), pt("1", "1/2"), pt("1/2", "1"), pt("0", "1/2")}; }

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("skeleton of the dual cross") {
    RuleDocument doc = load_valid("2dtm.rule");
    Skeleton s = skeleton(doc.graph->parts[0], &doc.rule.prototiles[0]);
    REQUIRE(s.position.size() == 5);
    CHECK(s.interior_count() == 1);
    int c = s.find(pt("1/2", "1/2"));
    REQUIRE(c >= 0);
    CHECK(s.degree(c) == 4);
    std::vector<int> hosts;
    for (std::size_t v = 0; v < s.position.size(); ++v)
        if (s.is_boundary(static_cast<int>(v))) hosts.push_back(s.host[v]);
    std::sort(hosts.begin(), hosts.end());
    CHECK(hosts == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("degree two vertices are suppressed") {
    RuleDocument doc = load_valid("2dtm.rule");
    std::vector<Point> v = square_midpoints();
    v.push_back(pt("1/4", "1/2"));
    // spoke to the left edge bends through vertex 5
    PlanarGraph g = make_graph(v, {{1, 0}, {4, 5}, {5, 0}, {0, 3}, {0, 2}});
    Skeleton s = skeleton(g, &doc.rule.prototiles[0]);
    CHECK(s.position.size() == 5);
    CHECK(s.edges.size() == 4);
    std::size_t longest = 0;
    for (const auto& e : s.edges) longest = std::max(longest, e.pieces.size());
    CHECK(longest == 2);
}

TEST_CASE("consistency of the fixture graphs") {
    for (const std::string& f : {std::string("2dtm.rule"), std::string("square3.rule"), std::string("chair_octagon.rule")}) {
        CAPTURE(f);
        RuleDocument doc = load_valid(f);
        ConsistencyReport rep = check_consistency(*doc.graph, doc.rule);
        CHECK(rep.planar);
        CHECK(rep.boundary_ok);
        CHECK(rep.t_consistent);
        CHECK(rep.trees);
        CHECK(rep.quasi_dual);
        CHECK(rep.dual);
    }
}

TEST_CASE("consistency violations") {
    RuleDocument doc = load_valid("2dtm.rule");
    std::vector<Point> v = square_midpoints();

    SUBCASE("crossing edges") {
        EmbeddedGraph g{{make_graph(v, {{1, 3}, {2, 4}}), doc.graph->parts[1]}};
        ConsistencyReport rep = check_consistency(g, doc.rule);
        CHECK_FALSE(rep.planar);
        CHECK_FALSE(rep.quasi_dual);
    }
    SUBCASE("cycle") {
        EmbeddedGraph g{{make_graph(v, {{1, 0}, {2, 0}, {0, 3}, {0, 4}, {1, 2}}), doc.graph->parts[1]}};
        ConsistencyReport rep = check_consistency(g, doc.rule);
        CHECK_FALSE(rep.trees);
        CHECK_FALSE(rep.quasi_dual);
    }
    SUBCASE("boundary vertex off the vertex set") {
        v[1] = pt("1/3", "0");
        EmbeddedGraph g{{make_graph(v, {{1, 0}, {2, 0}, {0, 3}, {0, 4}}), doc.graph->parts[1]}};
        ConsistencyReport rep = check_consistency(g, doc.rule);
        CHECK_FALSE(rep.quasi_dual);
        CHECK_FALSE(rep.diagnostics.empty());
    }
    SUBCASE("missing edge contact") {
        EmbeddedGraph g{{make_graph(v, {{1, 0}, {2, 0}, {0, 3}}), doc.graph->parts[1]}};
        ConsistencyReport rep = check_consistency(g, doc.rule);
        CHECK_FALSE(rep.dual);
    }
}

TEST_CASE("complete faces of the induced tiling match the tiling vertices") {
    for (const std::string& f : {std::string("2dtm.rule"), std::string("chair_octagon.rule")}) {
        CAPTURE(f);
        RuleDocument doc = load_valid(f);
        std::vector<VertexStar> stars = enumerate_vertex_stars(doc.rule);
        for (int p = 0; p < doc.rule.size(); ++p) {
            Patch patch = supertile(doc.rule, p, 2);
            std::vector<Face> faces = induced_tiling(*doc.graph, doc.rule, patch, stars);
            std::vector<LocatedStar> ls = located_stars(doc.rule, patch);
            std::set<Point, PointLess> verts;
            for (const LocatedStar& s : ls) verts.insert(s.vertex);
            int complete = 0;
            for (const Face& face : faces) {
                if (!face.complete) continue;
                ++complete;
                CHECK(face.label >= 0);
                CHECK(verts.count(face.vertex) == 1);
            }
            CHECK(complete == static_cast<int>(ls.size()));
        }
    }
}

TEST_CASE("skeleton is idempotent") {
    for (const std::string& f : {std::string("2dtm.rule"), std::string("chair_octagon.rule")}) {
        CAPTURE(f);
        RuleDocument doc = load_valid(f);
        for (int p = 0; p < doc.rule.size(); ++p) {
            const Prototile& tile = doc.rule.prototiles[p];
            Skeleton a = skeleton(doc.graph->parts[p], &tile);
            // realize the skeleton as a graph with the same polylines and take the skeleton again
            std::vector<Point> verts = a.position;
            std::vector<std::vector<int>> lines;
            for (const auto& e : a.edges) {
                std::vector<int> ids{e.from};
                for (std::size_t k = 1; k + 1 < e.polyline.size(); ++k) {
                    ids.push_back(static_cast<int>(verts.size()));
                    verts.push_back(e.polyline[k]);
                }
                ids.push_back(e.to);
                lines.push_back(ids);
            }
            Skeleton b = skeleton(make_graph(verts, lines), &tile);
            REQUIRE(b.position.size() == a.position.size());
            CHECK(b.edges.size() == a.edges.size());
            for (std::size_t v = 0; v < a.position.size(); ++v) {
                int w = b.find(a.position[v]);
                REQUIRE(w >= 0);
                CHECK(b.host[w] == a.host[v]);
                CHECK(b.degree(w) == a.degree(static_cast<int>(v)));
            }
        }
    }
}

}

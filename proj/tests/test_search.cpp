#include "support.hpp"

#include "tilework/search.hpp"

#include <doctest.h>

using namespace tilework;
using testing::load_valid;

TEST_SUITE("search") {

TEST_CASE("interior copies") {
    RuleDocument tm = load_valid("2dtm.rule");
    for (int p = 0; p < tm.rule.size(); ++p) {
        InteriorCopy c = find_interior_copy(tm.rule, p);
        CHECK(c.n == 1);
        Polygon sub = tile_support(tm.rule, {p, c.translation, c.n, c.path});
        for (const Point& v : sub.v) CHECK(locate(tm.rule.prototiles[p].support, v) == Location::inside);
    }
    RuleDocument sq = load_valid("square3.rule");
    std::vector<InteriorCopy> copies = interior_copies(sq.rule, 0, 1);
    REQUIRE(copies.size() == 1);
    CHECK((copies[0].translation == Point(FieldScalar(Rational(1, 3)), FieldScalar(Rational(1, 3)))));
    CHECK(interior_copies(sq.rule, 0, 2).size() == 49);
}

TEST_CASE("convexity") {
    CHECK(is_convex(Polygon{{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}}));
    CHECK_FALSE(is_convex(Polygon{{Point(0, 0), Point(2, 0), Point(2, 1), Point(1, 1), Point(1, 2), Point(0, 2)}}));
}

TEST_CASE("standard dual graph") {
    for (const std::string& f : {std::string("2dtm.rule"), std::string("square5.rule"), std::string("ammann_beenker.rule")}) {
        CAPTURE(f);
        RuleDocument doc = load_valid(f);
        ConsistencyReport rep = check_consistency(standard_dual_graph(doc.rule), doc.rule);
        CHECK(rep.dual);
    }
}

TEST_CASE("2DTM quasi-dual search") {
    RuleDocument doc = load_valid("2dtm.rule");
    SearchOptions opt;
    opt.target = SearchTarget::quasi_dual;
    SearchResult r = search_pair(doc.rule, *doc.graph, opt);
    REQUIRE_MESSAGE(r.ok, r.diagnosis);
    CHECK(r.injectivity.all_pass());
    ConsistencyReport cons = check_consistency(r.G, doc.rule);
    CHECK(cons.quasi_dual);
    PairStructure ps = match_equivalence(doc.rule, r.G, r.pair);
    CHECK(ps.ok);
    CHECK(scan_injectivity(doc.rule, ps, 1, 4).least_n >= 1);

    SUBCASE("iterating the found pair") {
        // the subtiles met by the found graph carry a cycle of R^N(G1)
        CHECK_THROWS_WITH_AS(iterate_pair(doc.rule, r.G, r.pair.N), doctest::Contains("not unique"), ValidationError);
        // a chosen spanning tree is still quasi-dual and may split interior vertices, never merge them
        std::vector<std::vector<SubEdgeRef>> next = iterate_pair(doc.rule, r.G, r.pair.N, true);
        EmbeddedGraph h;
        for (int p = 0; p < doc.rule.size(); ++p) {
            const Prototile& tile = doc.rule.prototiles[p];
            Skeleton hs = skeleton(select_edges(doc.rule, r.G, p, r.pair.N, next[p]), &tile);
            CHECK(hs.interior_count() >= skeleton(r.G.parts[p], &tile).interior_count());
            h.parts.push_back(skeleton_part(hs));
        }
        CHECK(check_consistency(h, doc.rule).quasi_dual);
    }
    SUBCASE("the result prints as a rule file") {
        RuleDocument out = doc;
        out.graph = r.G;
        out.graph_edges = r.graph_edges;
        out.pair = r.pair;
        RuleDocument back = parse_rule(print_rule(out));
        validate_rule(back.rule);
        CHECK(match_equivalence(back.rule, *back.graph, *back.pair).ok);
    }
}

TEST_CASE("dual target on the chair octagon variant") {
    RuleDocument doc = load_valid("chair_octagon.rule");
    std::optional<std::string> why = dual_obstruction(doc.rule, *doc.graph, 1);
    REQUIRE(why.has_value());
    CHECK(why->find("every interior vertex of degree 8") != std::string::npos);
    SearchOptions opt;
    opt.target = SearchTarget::dual;
    SearchResult r = search_pair(doc.rule, *doc.graph, opt);
    CHECK_FALSE(r.ok);
    CHECK(r.diagnosis.find("every interior vertex of degree 8") != std::string::npos);
    CHECK_THROWS_AS(convex_dual_pair(doc.rule), ValidationError);
}

TEST_CASE("no obstruction for square tiles") {
    RuleDocument doc = load_valid("2dtm.rule");
    CHECK_FALSE(dual_obstruction(doc.rule, *doc.graph, 1).has_value());
}

TEST_CASE("convex dual pair for a square rule") {
    RuleDocument doc = load_valid("square5.rule");
    SearchResult r = convex_dual_pair(doc.rule, 2);
    REQUIRE_MESSAGE(r.ok, r.diagnosis);
    CHECK(check_consistency(r.G, doc.rule).dual);
    CHECK(r.injectivity.all_pass());
}

TEST_CASE("search output is reproducible") {
    RuleDocument doc = load_valid("2dtm.rule");
    SearchOptions opt;
    opt.seed = 3;
    auto once = [&] {
        SearchResult r = search_pair(doc.rule, *doc.graph, opt);
        RuleDocument out = doc;
        out.graph = r.G;
        out.graph_edges = r.graph_edges;
        out.pair = r.pair;
        return print_rule(out);
    };
    CHECK(once() == once());
}

}

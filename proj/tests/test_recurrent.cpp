#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace tilework;
using testing::load_valid;

TEST_SUITE("recurrent") {

TEST_CASE("fixture pairs are equivalent and injective") {
    for (const std::string& f : testing::pair_files()) {
        CAPTURE(f);
        RuleDocument doc = load_valid(f);
        PairStructure ps = match_equivalence(doc.rule, *doc.graph, *doc.pair);
        REQUIRE_MESSAGE(ps.ok, ps.message);
        InjectivityScan scan = scan_injectivity(doc.rule, ps, 1, 4);
        CHECK(scan.least_n >= 1);
        CHECK(scan.least_n <= 4);
        REQUIRE_FALSE(scan.reports.empty());
        CHECK(scan.reports.back().all_pass());
    }
}

TEST_CASE("contracted graph edges") {
    RuleDocument doc = load_valid("2dtm.rule");
    for (int n = 1; n <= 2; ++n) {
        ContractedGraph cg = contract_graph(doc.rule, *doc.graph, 0, n);
        Eigen::MatrixXi mn = Eigen::MatrixXi::Identity(2, 2);
        for (int i = 0; i < n; ++i) mn *= doc.rule.substitution_matrix();
        // four spokes per subtile
        CHECK(static_cast<int>(cg.refs.size()) == 4 * mn.row(0).sum());
        for (std::size_t i = 0; i < cg.refs.size(); ++i) CHECK(cg.find(cg.refs[i]) == static_cast<int>(i));
    }
}

TEST_CASE("a pair that is not equivalent") {
    RuleDocument doc = load_valid("2dtm.rule");
    RecurrentPair pair = *doc.pair;
    SUBCASE("edge dropped") {
        pair.S[0].pop_back();
        PairStructure ps = match_equivalence(doc.rule, *doc.graph, pair);
        CHECK_FALSE(ps.ok);
        CHECK(ps.message.find("not equivalent") != std::string::npos);
    }
    SUBCASE("empty selection") {
        pair.S[0].clear();
        PairStructure ps = match_equivalence(doc.rule, *doc.graph, pair);
        CHECK_FALSE(ps.ok);
        CHECK(ps.message == "S has no edges in prototile alpha");
    }
}

TEST_CASE("G itself is not recurrent") {
    // each edge of G is a single subedge of itself and meets the boundary
    RuleDocument doc = load_valid("2dtm.rule");
    std::vector<Skeleton> sk;
    for (int p = 0; p < doc.rule.size(); ++p) sk.push_back(skeleton(doc.graph->parts[p], &doc.rule.prototiles[p]));
    InjectivityReport rep = check_injectivity(doc.rule, sk, 1);
    CHECK_FALSE(rep.all_pass());
    CHECK_FALSE(rep.spans.pass);
    CHECK_FALSE(rep.summary().empty());
}

TEST_CASE("constant speed parameterization") {
    for (const std::string& f : testing::pair_files()) {
        CAPTURE(f);
        RuleDocument doc = load_valid(f);
        PairStructure ps = match_equivalence(doc.rule, *doc.graph, *doc.pair);
        REQUIRE(ps.ok);
        SpeedTable sp = constant_speed(doc.rule, *doc.graph, ps);
        for (std::size_t p = 0; p < sp.fractions.size(); ++p)
            for (std::size_t k = 0; k < sp.fractions[p].size(); ++k) {
                const auto& fr = sp.fractions[p][k];
                CHECK(fr.size() >= 2);
                CHECK(std::accumulate(fr.begin(), fr.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(sp.ratio[p][k] > 0.0);
            }
    }
}

TEST_CASE("polyline length") {
    FieldScalar s2(0, 1, 2);
    CHECK(polyline_length({Point(0, 0), Point(3, 4), Point(3, 0)}) == doctest::Approx(9.0));
    CHECK(polyline_length({Point(0, 0), Point(FieldScalar(1), FieldScalar(1))}) == doctest::Approx(s2.to_double()));
}

TEST_CASE("injectivity is decided per level") {
    // square3 passes at every level; the 2DTM vertex (5/8, 5/8) becomes a subtile corner from level 2 on
    RuleDocument sq = load_valid("square3.rule");
    PairStructure sps = match_equivalence(sq.rule, *sq.graph, *sq.pair);
    REQUIRE(sps.ok);
    for (int n = 1; n <= 3; ++n) CHECK(check_injectivity(sq.rule, sps, n).all_pass());

    RuleDocument tm = load_valid("2dtm.rule");
    PairStructure tps = match_equivalence(tm.rule, *tm.graph, *tm.pair);
    REQUIRE(tps.ok);
    CHECK(check_injectivity(tm.rule, tps, 1).all_pass());
    InjectivityReport two = check_injectivity(tm.rule, tps, 2);
    CHECK(two.I1.pass);
    CHECK_FALSE(two.I2.pass);
    REQUIRE_FALSE(two.I2.witnesses.empty());
    CHECK(two.I2.witnesses[0].find("vertex (5/8, 5/8) lies in 4 subtiles") != std::string::npos);
    CHECK(scan_injectivity(tm.rule, tps, 2, 4).least_n == -1);
}

TEST_CASE("selected edges re-evaluate to their contracted copies") {
    RuleDocument doc = load_valid("2dtm.rule");
    for (int p = 0; p < doc.rule.size(); ++p) {
        ContractedGraph cg = contract_graph(doc.rule, *doc.graph, p, doc.pair->N);
        PlanarGraph sel = select_edges(doc.rule, *doc.graph, p, doc.pair->N, doc.pair->S[p]);
        REQUIRE(sel.edges.size() == doc.pair->S[p].size());
        for (std::size_t i = 0; i < sel.edges.size(); ++i) {
            int id = cg.find(doc.pair->S[p][i]);
            REQUIRE(id >= 0);
            const auto& a = sel.edges[i].polyline;
            const auto& b = cg.graph.edges[id].polyline;
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(compare(a[k], b[k]) == 0);
        }
    }
}

}

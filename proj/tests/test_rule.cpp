#include "support.hpp"

#include <doctest.h>

#include <chrono>

using namespace tilework;
using testing::load_valid;

TEST_SUITE("rule") {

TEST_CASE("chair substitution matrix and edge contacts") {
    RuleDocument doc = load_rule(testing::data_path("chair.rule"));
    auto start = std::chrono::steady_clock::now();
    ValidationReport rep = validate_rule(doc.rule);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(rep.valid);
    Eigen::MatrixXi expected(4, 4);
    expected << 2, 1, 0, 1, 1, 2, 1, 0, 0, 1, 2, 1, 1, 0, 1, 2;
    CHECK(rep.M == expected);
    CHECK(rep.primitive);
    CHECK_FALSE(rep.singly_edge_to_edge);
    CHECK(rep.summary() == "valid; primitive; NOT singly edge-to-edge (octagon variant)");
    CHECK(seconds < 1.0);
}

TEST_CASE("every fixture validates") {
    for (const std::string& f : testing::rule_files()) {
        CAPTURE(f);
        RuleDocument doc = load_rule(testing::data_path(f));
        ValidationReport rep = validate_rule(doc.rule);
        CHECK(rep.valid);
        CHECK(rep.primitive);
        CHECK(rep.M.rows() == doc.rule.size());
        for (int p = 0; p < doc.rule.size(); ++p) CHECK(doc.rule.prototiles[p].edge_count() >= doc.rule.prototiles[p].support.size());
    }
}

TEST_CASE("singly edge-to-edge fixtures") {
    for (const char* f : {"2dtm.rule", "square3.rule", "ammann_beenker.rule", "chair_octagon.rule"}) {
        CAPTURE(f);
        RuleDocument doc = load_rule(testing::data_path(f));
        ValidationReport rep = validate_rule(doc.rule);
        CHECK(rep.singly_edge_to_edge == (std::string(f) != "chair_octagon.rule"));
    }
}

TEST_CASE("area identity holds exactly") {
    for (const std::string& f : testing::rule_files()) {
        CAPTURE(f);
        SubstitutionRule rule = load_valid(f).rule;
        Eigen::MatrixXi m = rule.substitution_matrix();
        FieldScalar l2 = rule.lambda * rule.lambda;
        for (int p = 0; p < rule.size(); ++p) {
            FieldScalar sum = 0;
            for (int q = 0; q < rule.size(); ++q) sum += FieldScalar(m(p, q)) * signed_area(rule.prototiles[q].support);
            CHECK(sum == l2 * signed_area(rule.prototiles[p].support));
        }
    }
}

TEST_CASE("covering failures are reported") {
    RuleDocument doc = load_rule(testing::data_path("2dtm.rule"));
    SubstitutionRule overlap = doc.rule;
    overlap.digits[0][0].back() = Point(3, 2);
    ValidationReport rep = validate_rule(overlap);
    CHECK_FALSE(rep.valid);
    REQUIRE_FALSE(rep.errors.empty());
    CHECK(rep.errors.front().find("overlap") != std::string::npos);

    SubstitutionRule gap = doc.rule;
    gap.digits[0][0].pop_back();
    rep = validate_rule(gap);
    CHECK_FALSE(rep.valid);
    REQUIRE_FALSE(rep.errors.empty());
    CHECK(rep.errors.front().find("gap") != std::string::npos);

    SubstitutionRule outside = doc.rule;
    outside.digits[0][0].back() = Point(4, 3);
    rep = validate_rule(outside);
    CHECK_FALSE(rep.valid);
    CHECK(rep.summary().find("leaves the prototile") != std::string::npos);
}

TEST_CASE("supertiles cover the inflated prototile") {
    for (const std::string& f : {std::string("2dtm.rule"), std::string("chair.rule"), std::string("ammann_beenker.rule")}) {
        CAPTURE(f);
        SubstitutionRule rule = load_valid(f).rule;
        for (int p = 0; p < rule.size(); ++p) {
            FieldScalar area = 0;
            Patch sup = supertile(rule, p, 2);
            for (const PlacedTile& t : sup) area += signed_area(tile_support(rule, t));
            CHECK(area == pow(rule.lambda, 4) * signed_area(rule.prototiles[p].support));
            Patch sub = subtile_patch(rule, p, 2);
            Eigen::MatrixXi m2 = rule.substitution_matrix() * rule.substitution_matrix();
            CHECK(static_cast<int>(sub.size()) == m2.row(p).sum());
        }
    }
}

TEST_CASE("vertex stars are complete") {
    SubstitutionRule rule = load_valid("2dtm.rule").rule;
    std::vector<VertexStar> stars = enumerate_vertex_stars(rule);
    // one star per fractal prototile class
    CHECK(stars.size() == 8);
    CHECK(std::is_sorted(stars.begin(), stars.end(), star_less));
    for (const VertexStar& s : stars) {
        // unit squares meeting edge to edge
        CHECK(s.tiles.size() == 4);
        for (const StarTile& t : ccw_order(rule, s)) CHECK(anchor_mark(rule, t) >= 0);
    }
}

TEST_CASE("subtiles compose level by level") {
    for (const std::string& f : {std::string("chair.rule"), std::string("ammann_beenker.rule")}) {
        CAPTURE(f);
        SubstitutionRule rule = load_valid(f).rule;
        for (int p = 0; p < rule.size(); ++p) {
            // level 3 of p against level 2 of each level-1 subtile, scaled into place
            std::vector<std::pair<int, Point>> stepwise, direct;
            FieldScalar s = rule.lambda_pow(-1);
            for (const PlacedTile& t : subtile_patch(rule, p, 1))
                for (const PlacedTile& u : subtile_patch(rule, t.type, 2))
                    stepwise.push_back({u.type, Point(t.translation + u.translation * s)});
            for (const PlacedTile& t : subtile_patch(rule, p, 3)) direct.push_back({t.type, t.translation});
            auto less = [](const auto& x, const auto& y) { return x.first != y.first ? x.first < y.first : compare(x.second, y.second) < 0; };
            std::sort(stepwise.begin(), stepwise.end(), less);
            std::sort(direct.begin(), direct.end(), less);
            REQUIRE(stepwise.size() == direct.size());
            for (std::size_t i = 0; i < direct.size(); ++i) {
                CHECK(stepwise[i].first == direct[i].first);
                CHECK(compare(stepwise[i].second, direct[i].second) == 0);
            }
        }
    }
}

TEST_CASE("Perron eigenvalue of M is lambda squared") {
    for (const std::string& f : testing::rule_files()) {
        CAPTURE(f);
        SubstitutionRule rule = load_valid(f).rule;
        Eigen::MatrixXd m = rule.substitution_matrix().cast<double>();
        // power iteration on M transpose from the area vector is exact for a left eigenvector
        Eigen::VectorXd area(rule.size());
        for (int p = 0; p < rule.size(); ++p) area(p) = signed_area(rule.prototiles[p].support).to_double();
        Eigen::VectorXd image = m * area;
        double l2 = (rule.lambda * rule.lambda).to_double();
        for (int p = 0; p < rule.size(); ++p) CHECK(image(p) == doctest::Approx(l2 * area(p)).epsilon(1e-12));
        Eigen::VectorXd v = Eigen::VectorXd::Ones(rule.size());
        double mu = 0;
        for (int it = 0; it < 2000; ++it) {
            Eigen::VectorXd w = m.transpose() * v;
            mu = w.norm() / v.norm();
            v = w / w.norm();
        }
        CHECK(mu == doctest::Approx(l2).epsilon(1e-9));
    }
}

TEST_CASE("vertex stars are closed under substitution") {
    for (const std::string& f : {std::string("2dtm.rule"), std::string("chair.rule")}) {
        CAPTURE(f);
        SubstitutionRule rule = load_valid(f).rule;
        std::vector<VertexStar> stars = enumerate_vertex_stars(rule);
        for (const VertexStar& s : stars) {
            Patch patch;
            for (const StarTile& t : s.tiles) patch.push_back({t.type, t.translation, 0, {}});
            for (const VertexStar& inner : complete_stars(rule, inflate(rule, patch)))
                CHECK(std::binary_search(stars.begin(), stars.end(), inner, star_less));
        }
    }
}

}

#include "support.hpp"

#include "tilework/fractal.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace tilework;
using testing::load_valid;
using testing::permutation_equivalent;

namespace {

struct Built {
    RuleDocument doc;
    PairStructure ps;
    EdgeSubstitution es;
};

Built build(const std::string& name) {
    Built b{load_valid(name), {}, {}};
    b.ps = match_equivalence(b.doc.rule, *b.doc.graph, *b.doc.pair);
    if (!b.ps.ok) throw std::runtime_error(b.ps.message);
    b.es = build_edge_substitution(b.doc.rule, *b.doc.graph, b.ps);
    return b;
}

}  // namespace

TEST_SUITE("fractal") {

TEST_CASE("spectral radius against an eigen decomposition") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> entry(0, 5), size(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        int n = size(rng);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
        double oracle = Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues().cwiseAbs().maxCoeff();
        CHECK(spectral_radius(m) == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("trivial systems have integer dimension") {
    Eigen::MatrixXi me = 3 * Eigen::MatrixXi::Identity(4, 4);
    DimensionResult d1 = hausdorff_dimension(me, FieldScalar(3), true);
    CHECK(d1.exact);
    CHECK(d1.value == 1.0);
    Eigen::MatrixXi full(1, 1);
    full << 9;
    DimensionResult d2 = hausdorff_dimension(full, FieldScalar(3), true);
    CHECK(d2.exact);
    CHECK(d2.value == 2.0);
    FieldScalar silver = 1 + FieldScalar(0, 1, 2);
    Eigen::MatrixXi pell(2, 2);
    // eigenvalues 3 +- 2 sqrt2 = silver^2 and its conjugate
    pell << 3, 4, 2, 3;
    DimensionResult d3 = hausdorff_dimension(pell, silver, true);
    CHECK(d3.exact);
    CHECK(d3.value == 2.0);
}

TEST_CASE("dimension needs injectivity") {
    Eigen::MatrixXi me = 5 * Eigen::MatrixXi::Identity(2, 2);
    CHECK_THROWS_AS(hausdorff_dimension(me, FieldScalar(4), false), ValidationError);
    DimensionResult d = hausdorff_dimension(me, FieldScalar(4), false, true);
    CHECK_FALSE(d.verified);
    CHECK(d.label == "formula value, SOSC unverified");
    CHECK(d.value == doctest::Approx(std::log(5.0) / std::log(4.0)));
}

TEST_CASE("dimension of the fixtures") {
    Built tm = build("2dtm.rule");
    FieldScalar mu = 4 + FieldScalar(0, 1, 2);
    CHECK(has_eigenvalue(tm.es.M, mu));
    CHECK_FALSE(has_eigenvalue(tm.es.M, FieldScalar(4)));
    DimensionResult d = hausdorff_dimension(tm.es, true);
    CHECK_FALSE(d.exact);
    CHECK(d.value == doctest::Approx(std::log(mu.to_double()) / std::log(4.0)).epsilon(1e-9));

    Built sq = build("square3.rule");
    DimensionResult ds = hausdorff_dimension(sq.es, true);
    CHECK(ds.exact);
    CHECK(ds.value == 1.0);
}

TEST_CASE("level polylines converge within the Cauchy bound") {
    for (const std::string& f : testing::pair_files()) {
        CAPTURE(f);
        Built b = build(f);
        CauchyReport direct = cauchy_check(b.doc.rule, b.es, 8, 6);
        CHECK(direct.pass());
        CHECK(direct.distance.size() == 9);
        for (std::size_t n = 0; n < direct.distance.size(); ++n) CHECK(direct.distance[n] <= direct.bound[n] + 1e-12);
        // the scaling identity reproduces the measured distances
        CauchyReport short_run = cauchy_check(b.doc.rule, b.es, 6, 3);
        for (std::size_t n = 4; n <= 6; ++n) {
            CAPTURE(n);
            CHECK(short_run.distance[n] == doctest::Approx(direct.distance[n]).epsilon(1e-9));
        }
    }
}

TEST_CASE("2DTM fractal prototiles") {
    Built b = build("2dtm.rule");
    FractalPrototileSet fps = build_fractal_prototiles(b.doc.rule, *b.doc.graph, b.ps, b.es);
    CHECK(fps.tiles.size() == 8);
    CHECK(spectral_radius(fps.A2.cast<double>()) == doctest::Approx(16.0).epsilon(1e-9));
    IntMatrix printed = read_matrix_file(testing::data_path("2dtm_matrices/A2.txt"));
    Eigen::MatrixXi p(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) p(i, j) = printed(i, j).convert_to<int>();
    CHECK(permutation_equivalent(fps.A2, p));
    SelfSimilarityReport ss = verify_self_similarity(b.doc.rule, b.es, fps);
    CHECK(ss.pass);

    SUBCASE("a corrupted substitution is caught") {
        FractalPrototileSet bad = fps;
        bad.subtiles[0].pop_back();
        CHECK_FALSE(verify_self_similarity(b.doc.rule, b.es, bad).pass);
    }
}

TEST_CASE("permutation equivalence helper") {
    Eigen::MatrixXi a(3, 3), b(3, 3);
    a << 1, 2, 0, 0, 3, 4, 5, 0, 6;
    // relabel 0->2, 1->0, 2->1
    std::vector<int> pi{2, 0, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(pi[i], pi[j]) = a(i, j);
    CHECK(permutation_equivalent(a, b));
    b(0, 1) += 1;
    CHECK_FALSE(permutation_equivalent(a, b));
}

}

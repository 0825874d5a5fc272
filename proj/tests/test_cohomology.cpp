#include "support.hpp"

#include "tilework/cohomology.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace tilework;
using testing::load_valid;
using testing::naive_invariants;
using testing::random_unimodular;

namespace {

IntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int range) {
    std::uniform_int_distribution<int> entry(-range, range);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = entry(rng);
    return m;
}

bool is_diagonal(const IntMatrix& s) {
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j)
            if (i != j && s(i, j) != 0) return false;
    return true;
}

IntMatrix permuted(const IntMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    IntMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(rows[i], cols[j]) = m(i, j);
    return out;
}

CochainComplex built_complex(const std::string& name) {
    RuleDocument doc = load_valid(name);
    PairStructure ps = match_equivalence(doc.rule, *doc.graph, *doc.pair);
    if (!ps.ok) throw std::runtime_error(ps.message);
    EdgeSubstitution es = build_edge_substitution(doc.rule, *doc.graph, ps);
    FractalPrototileSet fps = build_fractal_prototiles(doc.rule, *doc.graph, ps, es);
    return build_ap_complex(doc.rule, ps, es, fps);
}

}  // namespace

TEST_SUITE("cohomology") {

TEST_CASE("Smith normal form against plain elimination") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> dim(1, 6), coin(0, 4);
    for (int trial = 0; trial < 500; ++trial) {
        CAPTURE(trial);
        int r = dim(rng), c = dim(rng);
        IntMatrix m = random_matrix(rng, r, c, 9);
        if (coin(rng) == 0 && r > 1) m.row(r - 1) = m.row(0) * Integer(3) - m.row(r / 2) * Integer(2);
        SmithForm snf = smith_normal_form(m);
        std::vector<Integer> oracle = naive_invariants(m);
        REQUIRE(snf.diagonal == oracle);
        CHECK(snf.U * m * snf.V == snf.S);
        CHECK(is_diagonal(snf.S));
        for (std::size_t i = 0; i + 1 < snf.diagonal.size(); ++i) CHECK(snf.diagonal[i + 1] % snf.diagonal[i] == 0);
        CHECK(snf.U * unimodular_inverse(snf.U) == identity(r));
        CHECK(snf.V * unimodular_inverse(snf.V) == identity(c));
        CHECK(snf.rank() == rank(m));
    }
}

TEST_CASE("characteristic polynomial and integer roots") {
    IntMatrix m(3, 3);
    m << 2, 1, 0, 0, 3, 5, 0, 0, -1;
    std::vector<Integer> cp = characteristic_polynomial(m);
    // (x - 2)(x - 3)(x + 1) = x^3 - 4x^2 + x + 6
    CHECK(cp == std::vector<Integer>{6, 1, -4, 1});
    std::vector<std::pair<Integer, int>> roots;
    CHECK(integer_roots(cp, roots));
    CHECK(roots.size() == 3);
    IntMatrix rot(2, 2);
    rot << 0, -1, 1, 0;
    CHECK_FALSE(integer_roots(characteristic_polynomial(rot), roots));
}

TEST_CASE("direct limit of the identity is the group itself") {
    for (int r = 0; r <= 4; ++r) {
        LimitGroup g = direct_limit(identity(r));
        CHECK(g.closed_form);
        CHECK(g.free_rank == r);
        CHECK(g.localized.empty());
        CHECK(g.torsion.empty());
    }
    LimitGroup t = direct_limit(identity(2), {2, 6}, identity(2));
    CHECK(t.free_rank == 2);
    CHECK(t.torsion == std::vector<Integer>{2, 6});
    CHECK(t.localized.empty());
}

TEST_CASE("direct limit of a diagonal map") {
    IntMatrix d = IntMatrix::Zero(4, 4);
    d(0, 0) = 4;
    d(1, 1) = -1;
    d(2, 2) = 0;
    d(3, 3) = 4;
    LimitGroup g = direct_limit(d);
    CHECK(g.closed_form);
    CHECK(g.free_rank == 1);
    REQUIRE(g.localized.size() == 1);
    CHECK(g.localized[0] == std::pair<Integer, int>{4, 2});
}

TEST_CASE("direct limit is invariant under conjugation") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> size(2, 4), off(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        CAPTURE(trial);
        int n = size(rng);
        std::vector<int> diag{-3, -2, -1, 0, 1, 2, 3, 4, 6};
        std::shuffle(diag.begin(), diag.end(), rng);
        IntMatrix u = IntMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            u(i, i) = diag[i];
            for (int j = i + 1; j < n; ++j) u(i, j) = off(rng);
        }
        auto [p, pinv] = random_unimodular(rng, n);
        REQUIRE(p * pinv == identity(n));
        LimitGroup a = direct_limit(u), b = direct_limit(p * u * pinv);
        CAPTURE(a.str());
        CAPTURE(b.str());
        CHECK(a.closed_form == b.closed_form);
        CHECK(a.localized == b.localized);
        CHECK(a.free_rank == b.free_rank);
        CHECK(a.torsion == b.torsion);
    }
}

TEST_CASE("coboundaries compose to zero") {
    CHECK(check_complex(load_complex(testing::data_path("2dtm_matrices"))).empty());
    for (const std::string& f : testing::pair_files()) {
        CAPTURE(f);
        CochainComplex c = built_complex(f);
        CHECK((c.delta1 * c.delta0).isZero());
        std::vector<std::string> problems = check_complex(c);
        CHECK(problems.empty());
    }
}

TEST_CASE("2DTM cohomology from the printed matrices") {
    CohomologyReport r = compute_cohomology(load_complex(testing::data_path("2dtm_matrices")));
    CHECK(r.problems.empty());
    CHECK(r.H[0].limit.str() == "Z");
    CHECK(r.H[1].approximant.str() == "Z^4");
    CHECK(r.H[1].limit.str() == "Z[1/4]^2 (+) Z^2");
    CHECK(r.H[2].limit.str() == "Z[1/16] (+) Z[1/4]^2 (+) Z");
}

TEST_CASE("2DTM cohomology from the rule") {
    CochainComplex c = built_complex("2dtm.rule");
    CohomologyReport r = compute_cohomology(c);
    CHECK(r.problems.empty());
    CHECK(r.H[0].limit.str() == "Z");
    CHECK(r.H[1].approximant.str() == "Z^4");
    CHECK(r.H[1].limit.str() == "Z[1/4]^2 (+) Z^2");
    CHECK(r.H[2].limit.str() == "Z[1/16] (+) Z[1/4]^2 (+) Z");

    // vertex and edge cochains agree with the printed ones after relabelling
    std::istringstream header(read_text(testing::data_path("2dtm_matrices/delta0.txt")));
    std::string line, word;
    std::vector<std::string> printed_edges;
    while (std::getline(header, line))
        if (line.rfind("# edge order", 0) == 0) {
            std::istringstream words(line.substr(line.find("order") + 5));
            while (words >> word && word != "vertex") printed_edges.push_back(word.back() == ',' ? word.substr(0, word.size() - 1) : word);
        }
    REQUIRE(printed_edges.size() == 8);
    std::vector<int> edge_pos;
    for (const std::string& name : c.edge_names) {
        auto it = std::find(printed_edges.begin(), printed_edges.end(), name);
        REQUIRE(it != printed_edges.end());
        edge_pos.push_back(static_cast<int>(it - printed_edges.begin()));
    }
    REQUIRE(c.vertex_names == std::vector<std::string>{"alpha", "beta"});
    std::vector<int> vertex_pos{0, 1};
    CHECK(permuted(c.delta0, edge_pos, vertex_pos) == read_matrix_file(testing::data_path("2dtm_matrices/delta0.txt")));
    CHECK(permuted(c.A1, edge_pos, edge_pos) == read_matrix_file(testing::data_path("2dtm_matrices/A1.txt")));
    CHECK(c.A0 == read_matrix_file(testing::data_path("2dtm_matrices/A0.txt")));
}

TEST_CASE("square substitution cohomology") {
    CohomologyReport r = compute_cohomology(built_complex("square3.rule"));
    CHECK(r.H[0].limit.str() == "Z");
    CHECK(r.H[1].limit.str() == "Z[1/3]^2");
    CHECK(r.H[2].limit.str() == "Z[1/9]");
}

TEST_CASE("degree zero and the Euler characteristic") {
    std::vector<CochainComplex> complexes{load_complex(testing::data_path("2dtm_matrices"))};
    for (const std::string& f : testing::pair_files()) complexes.push_back(built_complex(f));
    for (const CochainComplex& c : complexes) {
        IntMatrix ones = IntMatrix::Constant(c.delta0.cols(), 1, Integer(1));
        CHECK((c.delta0 * ones).isZero());
        CHECK(c.A0 * ones == ones);
        CohomologyReport r = compute_cohomology(c);
        long euler = static_cast<long>(c.delta0.cols()) - static_cast<long>(c.delta0.rows()) + static_cast<long>(c.delta1.rows());
        CHECK(r.H[0].approximant.rank - r.H[1].approximant.rank + r.H[2].approximant.rank == euler);
    }
}

}

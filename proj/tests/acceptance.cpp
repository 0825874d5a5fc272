#include "support.hpp"

#include "tilework/cohomology.hpp"
#include "tilework/search.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace tilework;
using testing::load_valid;

namespace {

// Collects failed checks with a short reason each.
struct Check {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream o;
    o.precision(digits);
    o << x;
    return o.str();
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Check&)> run;
};

struct PairBuild {
    RuleDocument doc;
    PairStructure ps;
    EdgeSubstitution es;
};

PairBuild build_pair(const std::string& name) {
    PairBuild b{load_valid(name), {}, {}};
    b.ps = match_equivalence(b.doc.rule, *b.doc.graph, *b.doc.pair);
    if (!b.ps.ok) throw std::runtime_error(name + ": " + b.ps.message);
    b.es = build_edge_substitution(b.doc.rule, *b.doc.graph, b.ps);
    return b;
}

CochainComplex complex_of(const PairBuild& b) {
    FractalPrototileSet fps = build_fractal_prototiles(b.doc.rule, *b.doc.graph, b.ps, b.es);
    return build_ap_complex(b.doc.rule, b.ps, b.es, fps);
}

void chair(Check& c) {
    RuleDocument doc = load_rule(testing::data_path("chair.rule"));
    ValidationReport rep = validate_rule(doc.rule);
    c.expect(rep.valid, "chair does not validate: " + rep.summary());
    Eigen::MatrixXi expected(4, 4);
    expected << 2, 1, 0, 1, 1, 2, 1, 0, 0, 1, 2, 1, 1, 0, 1, 2;
    c.expect(rep.valid && rep.M == expected, "substitution matrix differs");
    c.expect(rep.summary() == "valid; primitive; NOT singly edge-to-edge (octagon variant)", "summary: " + rep.summary());
    RuleDocument oct = load_rule(testing::data_path("chair_octagon.rule"));
    ValidationReport orep = validate_rule(oct.rule);
    c.expect(orep.valid && !orep.singly_edge_to_edge, "octagon variant: " + orep.summary());
    c.note(rep.summary());
}

void pair_2dtm(Check& c) {
    PairBuild b = build_pair("2dtm.rule");
    InjectivityScan scan = scan_injectivity(b.doc.rule, b.ps, 1, 4);
    c.expect(scan.least_n >= 1 && scan.least_n <= 4, "I1-I4 fail for every N <= 4");
    FractalPrototileSet fps = build_fractal_prototiles(b.doc.rule, *b.doc.graph, b.ps, b.es);
    c.expect(fps.tiles.size() == 8, std::to_string(fps.tiles.size()) + " fractal prototiles");
    double rho = spectral_radius(fps.A2.cast<double>());
    c.expect(std::abs(rho - 16) <= 1e-6, "rho(A2) = " + fmt(rho, 12));
    IntMatrix printed = read_matrix_file(testing::data_path("2dtm_matrices/A2.txt"));
    Eigen::MatrixXi p = printed.unaryExpr([](const Integer& x) { return x.convert_to<int>(); });
    c.expect(testing::permutation_equivalent(fps.A2, p), "A2 is not the printed matrix up to relabelling");
    c.expect(verify_self_similarity(b.doc.rule, b.es, fps).pass, "fractal prototiles are not self-similar");
    c.note("least N " + std::to_string(scan.least_n) + ", rho(A2) " + fmt(rho, 12));
}

void cohomology_2dtm(Check& c) {
    const std::string h[3] = {"Z", "Z[1/4]^2 (+) Z^2", "Z[1/16] (+) Z[1/4]^2 (+) Z"};
    auto compare = [&](const CohomologyReport& r, const std::string& source) {
        c.expect(r.problems.empty(), source + ": complex problems");
        c.expect(r.H[1].approximant.str() == "Z^4", source + ": H1 of the approximant is " + r.H[1].approximant.str());
        for (int k = 0; k < 3; ++k)
            c.expect(r.H[k].limit.str() == h[k], source + ": H" + std::to_string(k) + " = " + r.H[k].limit.str());
    };
    compare(compute_cohomology(complex_of(build_pair("2dtm.rule"))), "rule");
    compare(compute_cohomology(load_complex(testing::data_path("2dtm_matrices"))), "fixture");
    c.note("H2 = " + h[2]);
}

void dimension(Check& c) {
    PairBuild b = build_pair("2dtm.rule");
    DimensionResult d = hausdorff_dimension(b.es, true);
    BoxCount box = box_counting(b.es, 8);
    double rel = std::abs(box.slope - d.value) / d.value;
    c.expect(rel < 0.05, "box counting " + fmt(box.slope) + " vs " + fmt(d.value));
    PairBuild sq = build_pair("square3.rule");
    DimensionResult one = hausdorff_dimension(sq.es, true);
    c.expect(one.value == 1.0, "straight edges give " + fmt(one.value, 17));
    Eigen::MatrixXi filling(1, 1);
    filling << 9;
    DimensionResult two = hausdorff_dimension(filling, FieldScalar(3), true);
    c.expect(two.value == 2.0, "area-filling system gives " + fmt(two.value, 17));
    c.note("dimension " + fmt(d.value, 9) + ", box " + fmt(box.slope, 9) + " (" + fmt(100 * rel, 3) + "%)");
}

void properties(Check& c) {
    // (a) coboundaries
    std::vector<CochainComplex> complexes{load_complex(testing::data_path("2dtm_matrices"))};
    for (const std::string& f : testing::pair_files()) complexes.push_back(complex_of(build_pair(f)));
    for (const CochainComplex& cx : complexes) c.expect((cx.delta1 * cx.delta0).isZero(), "delta1 delta0 != 0");
    // (b) Cauchy bound
    for (const std::string& f : testing::pair_files()) {
        PairBuild b = build_pair(f);
        c.expect(cauchy_check(b.doc.rule, b.es, 8).pass(), f + ": Cauchy bound fails");
    }
    // (c) direct limits
    std::mt19937 rng(99);
    for (int r = 0; r <= 4; ++r) {
        LimitGroup g = direct_limit(identity(r));
        c.expect(g.free_rank == r && g.localized.empty(), "direct_limit(id) on Z^" + std::to_string(r));
    }
    LimitGroup t = direct_limit(identity(2), {2, 6}, identity(2));
    c.expect(t.free_rank == 2 && t.torsion == std::vector<Integer>{2, 6}, "direct_limit(id) with torsion");
    std::uniform_int_distribution<int> size(2, 4), off(-3, 3);
    int conj_fail = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = size(rng);
        std::vector<int> diag{-3, -2, -1, 0, 1, 2, 3, 4, 6};
        std::shuffle(diag.begin(), diag.end(), rng);
        IntMatrix u = IntMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            u(i, i) = diag[i];
            for (int j = i + 1; j < n; ++j) u(i, j) = off(rng);
        }
        auto [p, pinv] = testing::random_unimodular(rng, n);
        LimitGroup a = direct_limit(u), b = direct_limit(p * u * pinv);
        if (a.localized != b.localized || a.free_rank != b.free_rank || a.torsion != b.torsion) ++conj_fail;
    }
    c.expect(conj_fail == 0, std::to_string(conj_fail) + " of 100 conjugations change the limit");
    // (d) area identity
    for (const std::string& f : testing::rule_files()) {
        SubstitutionRule rule = load_valid(f).rule;
        Eigen::MatrixXi m = rule.substitution_matrix();
        for (int p = 0; p < rule.size(); ++p) {
            FieldScalar sum = 0;
            for (int q = 0; q < rule.size(); ++q) sum += FieldScalar(m(p, q)) * signed_area(rule.prototiles[q].support);
            c.expect(sum == rule.lambda * rule.lambda * signed_area(rule.prototiles[p].support), f + ": area identity");
        }
    }
    // (e) Smith normal form
    std::mt19937 srng(2024);
    std::uniform_int_distribution<int> dim(1, 6), entry(-9, 9);
    int snf_fail = 0;
    for (int trial = 0; trial < 500; ++trial) {
        int r = dim(srng), cols = dim(srng);
        IntMatrix m(r, cols);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = entry(srng);
        SmithForm snf = smith_normal_form(m);
        if (snf.diagonal != testing::naive_invariants(m) || snf.U * m * snf.V != snf.S) ++snf_fail;
    }
    c.expect(snf_fail == 0, std::to_string(snf_fail) + " of 500 Smith forms disagree");
    c.note("(a)-(e) checked");
}

bool passes_validation(const RuleDocument& base, const SearchResult& r, std::string& why) {
    RuleDocument out = base;
    out.graph = r.G;
    out.graph_edges = r.graph_edges;
    out.pair = r.pair;
    RuleDocument back = parse_rule(print_rule(out));
    ValidationReport rep = validate_rule(back.rule);
    if (!rep.valid) return why = rep.summary(), false;
    PairStructure ps = match_equivalence(back.rule, *back.graph, *back.pair);
    if (!ps.ok) return why = ps.message, false;
    if (scan_injectivity(back.rule, ps, 1, 4).least_n < 0) return why = "injectivity fails", false;
    return true;
}

void search(Check& c) {
    std::string why;
    RuleDocument tm = load_valid("2dtm.rule");
    SearchResult q = search_pair(tm.rule, *tm.graph, {});
    c.expect(q.ok, "2DTM quasi-dual search: " + q.diagnosis);
    c.expect(!q.ok || passes_validation(tm, q, why), "2DTM search output: " + why);

    RuleDocument ab = load_valid("ammann_beenker.rule");
    SearchResult d = convex_dual_pair(ab.rule, 4);
    c.expect(d.ok, "Ammann-Beenker dual pair: " + d.diagnosis);
    c.expect(!d.ok || (check_consistency(d.G, ab.rule).dual && d.injectivity.all_pass()), "Ammann-Beenker pair is not dual/dual with I1-I4");
    c.expect(!d.ok || passes_validation(ab, d, why), "Ammann-Beenker output: " + why);

    RuleDocument co = load_valid("chair_octagon.rule");
    SearchOptions opt;
    opt.target = SearchTarget::dual;
    SearchResult x = search_pair(co.rule, *co.graph, opt);
    c.expect(!x.ok && x.diagnosis.find("every interior vertex of degree 8") != std::string::npos,
             "chair octagon dual search: " + x.diagnosis);
    c.note("2DTM N=" + std::to_string(q.pair.N) + ", Ammann-Beenker N=" + std::to_string(d.pair.N));
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "chair validation", 1, chair},
        {2, "2DTM pair and fractal prototiles", 30, pair_2dtm},
        {3, "2DTM cohomology", 5, cohomology_2dtm},
        {4, "dimension against box counting", 60, dimension},
        {5, "property suites", 1e9, properties},
        {6, "pair search", 300, search},
    };
    int failed = 0;
    for (const Criterion& cr : criteria) {
        Check c;
        auto start = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (s > cr.limit_seconds) c.failures.push_back("took " + fmt(s, 3) + " s, limit " + fmt(cr.limit_seconds, 3) + " s");
        bool ok = c.failures.empty();
        failed += !ok;
        std::string detail;
        for (const auto& f : ok ? c.notes : c.failures) detail += (detail.empty() ? "" : "; ") + f;
        std::printf("criterion %d %s: %s (%.2f s) %s\n", cr.id, cr.name, ok ? "PASS" : "FAIL", s, detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}

#pragma once

#include "tilework/fractal.hpp"
#include "tilework/integer_matrix.hpp"

#include <array>
#include <filesystem>

namespace tilework {

// Cochain complex of the approximant with its substitution maps. Cochain maps act as c -> A c.
struct CochainComplex {
    IntMatrix delta0;  // edges x vertices
    IntMatrix delta1;  // faces x edges
    IntMatrix A0, A1, A2;
    std::vector<std::string> vertex_names, edge_names, face_names;
};

// delta1 delta0 = 0 and the A_k commute with the coboundaries
std::vector<std::string> check_complex(const CochainComplex& c);

CochainComplex build_ap_complex(const SubstitutionRule& rule, const PairStructure& ps, const EdgeSubstitution& es,
                                const FractalPrototileSet& fps);
// delta0.txt, delta1.txt, A0.txt, A1.txt, A2.txt
CochainComplex load_complex(const std::filesystem::path& dir);

// A finitely generated abelian group Z^r + sum Z/t
struct FinitelyGenerated {
    int rank = 0;
    std::vector<Integer> torsion;
    std::string str() const;
};

// Direct limit of an endomorphism of Z^r + torsion.
struct LimitGroup {
    std::vector<std::pair<Integer, int>> localized;  // Z[1/k]^m, k > 1
    int free_rank = 0;                               // copies of Z
    std::vector<Integer> torsion;
    bool closed_form = true;
    std::string fallback;          // colim(Z^r, [matrix]) when no closed form is found
    Integer lattice_index = 1;     // index of the sum of eigenlattices, a diagnostic
    std::string str() const;
};

LimitGroup direct_limit(const IntMatrix& m, const std::vector<Integer>& torsion = {}, const IntMatrix& torsion_map = {});

struct CohomologyDegree {
    FinitelyGenerated approximant;
    IntMatrix generators;  // columns: cocycles spanning the free part
    IntMatrix induced;     // action of A on the free part, in those coordinates
    IntMatrix torsion_map; // action on the torsion coordinates (mod the orders)
    LimitGroup limit;
};

// H^k of delta_k o delta_{k-1} with the map induced by a; cochains of size a.rows()
CohomologyDegree cohomology_degree(const IntMatrix& delta_prev, const IntMatrix& delta_next, const IntMatrix& a);

struct CohomologyReport {
    std::array<CohomologyDegree, 3> H;
    std::vector<std::string> problems;
    std::string str() const;
};

CohomologyReport compute_cohomology(const CochainComplex& c);

}  // namespace tilework

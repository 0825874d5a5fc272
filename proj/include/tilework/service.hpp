#pragma once

#include "tilework/cohomology.hpp"
#include "tilework/io.hpp"

#include <json.hpp>

#include <optional>

namespace tilework {

// The computation core shared by the command line and the HTTP session.

struct PairAnalysis {
    PairStructure ps;
    InjectivityScan scan;
    bool equivalent() const { return ps.ok; }
    bool injective() const { return scan.least_n >= 0; }
};

PairAnalysis analyze_pair(const SubstitutionRule& rule, const EmbeddedGraph& g, const RecurrentPair& pair, int max_n = 4);

struct FractalAnalysis {
    EdgeSubstitution es;
    DimensionResult dimension;
    FractalPrototileSet prototiles;
};

// Throws ValidationError when injectivity failed and allow_unverified is not set.
FractalAnalysis analyze_fractal(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairAnalysis& pa,
                                bool allow_unverified = false);
CochainComplex rule_complex(const SubstitutionRule& rule, const PairAnalysis& pa, const FractalAnalysis& fa);

nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const Condition& c);
nlohmann::json to_json(const InjectivityReport& r);
nlohmann::json to_json(const DimensionResult& d);
nlohmann::json to_json(const CohomologyReport& r);

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

// Single-session state behind `serve`. Not thread-safe; the caller serializes requests.
class Session {
public:
    explicit Session(RuleDocument doc);

    Response handle(const std::string& method, const std::string& path, const std::string& body);

private:
    Response scene() const;
    Response select(const nlohmann::json& req);
    Response iterate_level(const nlohmann::json& req);
    Response analyze();
    Response export_svg() const;
    bool valid_pair() const;

    RuleDocument doc_;
    EmbeddedGraph g_;
    int N_ = 1;
    std::vector<std::vector<SubEdgeRef>> selection_;
    std::optional<PairAnalysis> pair_;
    std::optional<FractalAnalysis> fractal_;
};

}  // namespace tilework

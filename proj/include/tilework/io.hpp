#pragma once

#include "tilework/integer_matrix.hpp"
#include "tilework/recurrent.hpp"

#include <filesystem>
#include <optional>

namespace tilework {

struct ParseError : std::runtime_error {
    std::vector<std::string> messages;
    explicit ParseError(std::vector<std::string> m);
};

struct RuleDocument {
    SubstitutionRule rule;
    std::optional<EmbeddedGraph> graph;
    std::optional<RecurrentPair> pair;
    // vertex-id polylines of the graph, kept for printing
    std::vector<std::vector<std::vector<int>>> graph_edges;
};

// Collects every problem found, each prefixed with "line N: <json pointer>:".
RuleDocument parse_rule(const std::string& text);
RuleDocument load_rule(const std::filesystem::path& path);
std::string print_rule(const RuleDocument& doc);

// '#' comment lines, then "rows cols", then the rows
IntMatrix parse_matrix(const std::string& text);
IntMatrix read_matrix_file(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

}  // namespace tilework

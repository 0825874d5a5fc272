#pragma once

#include "tilework/fractal.hpp"

namespace tilework {

struct SvgOptions {
    double width = 800;
    double margin = 10;
    bool outlines = true;
};

// Tiles of a patch carrying G, or the level-n images of G's edges when es is given.
std::string render_patch(const SubstitutionRule& rule, const Patch& patch, const EmbeddedGraph* g,
                         const EdgeSubstitution* es = nullptr, int level = 0, const SvgOptions& opt = {});

// One group per fractal prototile, filled by class, boundary drawn at the given level.
std::string render_fractal_prototiles(const SubstitutionRule& rule, const EdgeSubstitution& es, const FractalPrototileSet& fps,
                                      int level, const SvgOptions& opt = {});

// R^N(G)_p for every prototile, side by side, with the S edges highlighted.
std::string render_selection(const SubstitutionRule& rule, const EmbeddedGraph& g, int N,
                             const std::vector<std::vector<SubEdgeRef>>& S, const SvgOptions& opt = {});

}  // namespace tilework

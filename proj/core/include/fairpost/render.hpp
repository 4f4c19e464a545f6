#pragma once

#include <string>

#include "fairpost/dataset.hpp"
#include "fairpost/rule.hpp"
#include "fairpost/scores.hpp"
#include "fairpost/search.hpp"

namespace fairpost {

/// Scatter of (s0, s1) colored by the (Y, A) cell when a dataset is given,
/// with the rule's separating line {z . s = 1} drawn when a rule is given.
/// Writes a standalone SVG.  Requires K=2 scores.
void render_scatter(const BiasScores& scores, const LabeledDataset* ds,
                    const ModificationRule* rule, const std::string& out_path);

/// Accuracy-versus-criterion polyline over the frontier points, annotated
/// with each delta.  Writes a standalone SVG.
void render_frontier(const std::vector<FrontierPoint>& points,
                     const std::string& out_path);

}  // namespace fairpost

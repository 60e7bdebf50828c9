#pragma once

#include <string>
#include <vector>

#include "ghkit/covers.hpp"
#include "ghkit/metric_space.hpp"

namespace ghkit {

/// Static SVG of a coloured cover: one `<g class="piece">` group per family
/// member, tagged with `data-family`. The first two families are drawn red
/// and blue; points outside every member are grey.
std::string render_cover_svg(const EuclideanPointSet& pts, const std::vector<SubsetFamily>& families,
                             const std::string& title);

}  // namespace ghkit

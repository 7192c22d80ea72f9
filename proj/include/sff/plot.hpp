#pragma once

// Deterministic SVG rendering of a 2-D mission map: regions as rectangles
// or halfplane fills, the zero contour of a value field via marching
// squares, and trajectory polylines. Byte-identical output for identical
// inputs.

#include <optional>
#include <string>
#include <vector>

#include "sff/reach/grid.hpp"
#include "sff/scenario.hpp"

namespace sff::plot {

struct PlotInputs {
    const Scenario* scenario = nullptr;
    std::optional<reach::ValueField> field;  // 2-D, or 4-D sliced beforehand
    std::vector<std::vector<double>> trajectory;  // states, first two dims drawn
};

// Zero-level-set segments of a 2-D field (marching squares), in map
// coordinates: {x1, y1, x2, y2} per segment.
std::vector<std::array<double, 4>> zero_contour(const reach::ValueField& field);

// Slices a 4-D field at the nearest grid node to (vx, vy).
reach::ValueField slice_position_plane(const reach::ValueField& field, double vx, double vy);

std::string render_svg(const PlotInputs& inputs);

}  // namespace sff::plot

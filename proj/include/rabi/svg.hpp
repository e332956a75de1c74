#pragma once
// Hand-emitted SVG 1.1 for the Delta-g plane panels: Juddian loops and
// non-degenerate exceptional lines per level, drawn over the mirrored full
// plane.  No plotting dependency; output is byte-deterministic.

#include <string>
#include <vector>

#include "rabi/exceptional.hpp"

namespace rabi {

struct FigurePanel {
    int n{0};
    PlaneWindow window;  // quadrant tracing window; the drawing mirrors it
    ContourSet juddian;
    ContourSet cofactor_plus;
    ContourSet cofactor_minus;
};

std::string figure_svg(const std::vector<FigurePanel>& panels);

}  // namespace rabi

#pragma once

// Connected components of the certified complement of a raster and their
// digital convexity defect.

#include <vector>

#include "expamoeba/amoeba.hpp"

namespace expamoeba {

struct ComponentReport {
    std::size_t id = 0;          // labels in row-major order of first cell
    std::size_t cells = 0;
    std::size_t hull_cells = 0;  // counted cells of the hull (see defect)
    // Fraction of grid cells inside the hull of the component's cell centers
    // that are not in the component. Unknown cells and the window rim are
    // not counted.
    double convexity_defect = 0.0;
    bool touches_rim = false;
};

/// 4-connected components of CertifiedOut cells. Throws UnsupportedOperation
/// when the raster belongs to a mapping with m >= 2 (the component check
/// only covers 0-convexity).
std::vector<ComponentReport> complement_components(const Raster& r);

/// Component label per cell (-1 outside every component), row-major.
std::vector<int> component_labels(const Raster& r);

}  // namespace expamoeba

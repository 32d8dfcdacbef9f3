#pragma once

// Minimal SVG writer: marching-squares contours of a sigma_min grid plus
// closed-form boundary overlays. Emits paths and polylines only.

#include <string>
#include <vector>

#include "subspec/common.hpp"
#include "subspec/spectral.hpp"

namespace subspec {

struct SvgOptions {
    std::vector<double> levels{1e-2, 1e-3, 1e-4};
    // Each overlay is a closed-form boundary sample, drawn as a polyline.
    std::vector<std::vector<cplx>> overlays;
    int width = 720;
    int height = 720;
};

std::string pseudospectrum_svg(const PseudospectrumGrid& g, const SvgOptions& opts = {});

}  // namespace subspec

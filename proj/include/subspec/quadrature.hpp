#pragma once

// Gauss-Legendre nodes (Golub-Welsch) and composite panel rules.

#include <utility>
#include <vector>

#include "subspec/common.hpp"

namespace subspec {

struct QuadRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule; cached per n, thread-safe.
const QuadRule& gauss_legendre(int n);

// Composite rule over consecutive intervals [breaks[i], breaks[i+1]],
// n points per panel, flattened to absolute nodes/weights.
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
PanelRule composite_panels(const std::vector<double>& breaks, int points_per_panel);

// Geometric subdivision of (0, 1]: breaks 2^-levels, ..., 1/2, 1.
// Resolves endpoint singularities u^alpha (Re alpha > -1) and log factors.
std::vector<double> graded_unit_breaks(int levels);

// Panel boundaries for integrals over [0, T_max] against densities with an
// exp(-omega t) envelope: geometric grading near 0 at scale ~2^-fine_levels,
// then unit panels out to T_max.
std::vector<double> halfline_breaks(int fine_levels, double T_max);

}  // namespace subspec

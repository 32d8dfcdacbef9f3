#pragma once

// Closed-form spectral regions for the catalog semigroups, their images under
// resolvent and Laplace maps, sigma_min pseudospectrum grids, local-radius
// traces, and the analytic eigenvector-field witness.

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "subspec/common.hpp"
#include "subspec/matrices.hpp"
#include "subspec/semiflows.hpp"
#include "subspec/subordination.hpp"

namespace subspec {

// ── Regions ──────────────────────────────────────────────────────────────

enum class RegionKind { halfplane, strip, disk, circle, annulus, mapped, cloud };

// One closed set in the plane. Only the fields for the active kind are
// meaningful. "mapped" regions are images of a base region under a tagged
// map ("negate": z -> -z; "resolvent": z -> 1/(lambda - z), plus {0}).
struct SpectralRegion {
    RegionKind kind = RegionKind::halfplane;
    std::string label;

    // halfplane: Re z <= c (open: strict at the boundary)
    double c = 0.0;
    bool open = false;

    // strip: a <= Re z <= b, with per-edge openness
    double a = 0.0;
    double b = 0.0;
    bool open_lo = false;
    bool open_hi = false;

    // disk / circle / annulus
    cplx center{0.0, 0.0};
    double radius = 0.0;
    double r_in = 0.0;
    double r_out = 0.0;

    // mapped
    std::shared_ptr<const SpectralRegion> base;
    std::string map_tag;
    cplx map_lambda{0.0, 0.0};

    // cloud: sample points with a fill resolution (max nearest-neighbor gap)
    std::vector<cplx> points;
    double resolution = 0.0;
};

// Membership with a +/- tol band so boundary samples always test true.
bool region_contains(const SpectralRegion& r, cplx z, double tol = 1e-9);

// About `count` points on the boundary (cloud regions return their samples).
std::vector<cplx> region_boundary_sample(const SpectralRegion& r, std::size_t count);

// The set {-z : z in r}, as a mapped region.
SpectralRegion negate_region(const SpectralRegion& r);

// ── Catalog region calculators ───────────────────────────────────────────

// Generator spectrum on H^p: half-plane Re <= pi/(p*gamma) when the Koenigs
// image contains no horizontal strip, symmetric strip |Re| <= pi/(p*gamma)
// when it does. Parabolic and elliptic flows are rejected.
SpectralRegion generator_spectrum_region(const Semiflow& flow, double p);

// Point-spectrum sandwich (inner open region included in sigma_p, outer
// region containing it).
std::pair<SpectralRegion, SpectralRegion> generator_point_spectrum_region(const Semiflow& flow,
                                                                          double p);

// Image {1/(lambda - z) : z in region} united with {0}. Closed forms for
// half-plane (disk through 0) and strip (set between two tangent circles)
// bases; every other base is sampled to a point cloud. lambda inside the
// region is rejected.
SpectralRegion map_region_resolvent(const SpectralRegion& region, cplx lambda);

// For a strip base: the two tangent image circles (outer first). Helper for
// tests and labels.
std::pair<std::pair<cplx, double>, std::pair<cplx, double>> resolvent_image_circles(
    const SpectralRegion& strip, cplx lambda);

// Point-cloud image of the region under z -> laplace_transform(nu, z);
// boundary plus interior samples (unbounded regions are clamped to a window
// of width 40 past the finite edge). include_infinity appends the limit
// value at infinity: 0 for densities plus the weight of any atom at t = 0.
SpectralRegion map_region_laplace(const SpectralRegion& region, const BorelMeasure& nu,
                                  bool include_infinity, std::size_t sampling);

// Semigroup spectrum at time t on H^p: t = 0 gives the single point {1};
// strip-free hyperbolic gives the disk |w| <= e^{pi t/(p gamma)}; the
// strip case gives the annulus between the reciprocal radii; the parabolic
// catalog entry returns the unit circle. Elliptic flows are rejected.
SpectralRegion semigroup_spectrum_region(const Semiflow& flow, double p, double t);

// e^{pi t/(p gamma)} for hyperbolic flows; t = 0 returns 1 for every flow.
double spectral_radius_formula(const Semiflow& flow, double p, double t);

// ── Pseudospectra ────────────────────────────────────────────────────────

struct PseudospectrumGrid {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    std::size_t nx = 0, ny = 0;
    std::size_t order = 0;                // truncation order of the operator
    std::vector<double> values;           // values[iy*nx + ix] = sigma_min(A - z I)

    double x_at(std::size_t ix) const {
        return nx < 2 ? x0 : x0 + (x1 - x0) * static_cast<double>(ix) / static_cast<double>(nx - 1);
    }
    double y_at(std::size_t iy) const {
        return ny < 2 ? y0 : y0 + (y1 - y0) * static_cast<double>(iy) / static_cast<double>(ny - 1);
    }
    cplx z_at(std::size_t ix, std::size_t iy) const { return {x_at(ix), y_at(iy)}; }
};

// Smallest singular value via LU-based inverse iteration on (M^H M)^{-1}.
// Exactly singular factors (zero U pivot) and overflowing iterates report 0.
double sigma_min(const Eigen::MatrixXcd& m);

// sigma_min(A - z I).
double sigma_min_shifted(const OperatorMatrix& a, cplx z);

// Dense sigma_min grid over [x0,x1] x [y0,y1]; nx, ny <= 400.
PseudospectrumGrid pseudospectrum_grid(const OperatorMatrix& a, double x0, double x1, double y0,
                                       double y1, std::size_t nx, std::size_t ny);

// Largest |z| with sigma_min(A - z I) <= eps, found by a descending polar
// sweep (96 angles, coarse radial step 0.08 from the norm bound
// sqrt(norm1*normInf) + eps) refined by bisection to radial resolution 0.01.
double pseudospectral_radius(const OperatorMatrix& a, double eps);

// ── Local spectral radius ────────────────────────────────────────────────

struct LocalRadiusTrace {
    std::vector<double> r;        // r[n-1] = ||A^n x||^{1/n}, n = 1..n_max
    std::size_t order = 0;
    // Lower-triangular exactness means r_n reads back ||P_N T^n x|| of the
    // full operator exactly, not just of the compression.
    bool exact_truncation = false;
    std::size_t nilpotent_at = 0;   // first n with A^n x = 0 exactly; 0 = none
    std::size_t first_decrease = 0; // smallest n >= 2 with r_n < r_{n-1}; 0 = none
    std::string note;
};

// Renormalized powering with a log-scale accumulator. renorm_every = 0
// renormalizes only on magnitude overflow risk; any schedule gives the same
// trace to high relative accuracy.
LocalRadiusTrace local_radius_trace(const OperatorMatrix& a, const CoeffVector& x,
                                    std::size_t n_max, std::size_t renorm_every = 1);

// ── Eigenfield witness ───────────────────────────────────────────────────

struct MuGrid {
    std::vector<cplx> points;  // row-major, iy*nx + ix
    std::size_t nx = 0, ny = 0;
};

MuGrid rect_mu_grid(double re0, double re1, double im0, double im1, std::size_t nx,
                    std::size_t ny);

enum class EigenfieldMode { pointwise, coefficient };

inline constexpr double kEigenfieldTol = 1e-8;

struct EigenfieldReport {
    EigenfieldMode mode = EigenfieldMode::pointwise;
    std::vector<cplx> mu;
    std::vector<cplx> eigenvalue;     // laplace_transform(nu, -mu)
    std::vector<double> residual;     // per-mu max residual
    std::vector<double> tolerance;    // per-mu acceptance bound
    double max_residual = 0.0;
    double tail_constant = 0.0;       // C in the coefficient-mode tail bound
    double analyticity_max = 0.0;     // max |closed contour integral| per cell
    std::size_t analyticity_cells = 0;
    bool residuals_pass = false;
    bool analyticity_pass = false;
};

// For each mu in the grid (required to lie in the inner point-spectrum
// region): checks H_nu e^{mu h} = L(nu)(-mu) e^{mu h}, either pointwise at
// 32 disc points (|z| <= 0.9) or on the first floor(N/2) coefficients of
// the compressed residual with a tail-aware tolerance. Also integrates
// mu -> L(nu)(-mu) around every grid cell as an analyticity check.
EigenfieldReport eigenfield_witness(const Semiflow& flow, const BorelMeasure& nu,
                                    const MuGrid& grid, double p, EigenfieldMode mode,
                                    int order = 128);

}  // namespace subspec

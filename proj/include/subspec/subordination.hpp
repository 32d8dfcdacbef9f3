#pragma once

// Borel measures on [0, inf), Laplace transforms, Bochner quadrature of the
// subordination integral over a composition semigroup, closed-form averaging
// operators on the disc, and the sector-regularity checker.

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "subspec/common.hpp"
#include "subspec/matrices.hpp"
#include "subspec/semiflows.hpp"

namespace subspec {

struct BorelMeasure {
    std::vector<std::pair<double, cplx>> atoms;  // (t_j >= 0, weight)

    // Optional density with a declared envelope |rho(t)| <= M_rho e^{-omega_rho t}.
    std::function<cplx(double)> density;
    // Holomorphic extension of the density to a sector around the positive
    // axis; needed by the regularity checker and the segment quadrature,
    // where the density is evaluated at complex arguments.
    std::function<cplx(cplx)> density_sector;
    double M_rho = 0.0;
    // Atoms-only measures have compact support, so any decay rate holds.
    double omega_rho = std::numeric_limits<double>::infinity();
    double margin_delta = 0.0;  // claimed moment margin, must be > 0

    // Provenance of the density for serialization: "", "exp", "exp-poly".
    std::string density_name;
    cplx density_lambda{0.0, 0.0};
    double density_power = 0.0;
};

bool has_density(const BorelMeasure& nu);

// Structural checks: atom times >= 0, margin_delta > 0, and the declared
// envelope spot-verified at 64 log-spaced t in [2^-6, 2^6]
// (|rho(t)| <= 1.01 M_rho e^{-omega_rho t}). Throws std::domain_error.
void validate_measure(const BorelMeasure& nu);

BorelMeasure atom_measure(std::vector<std::pair<double, cplx>> atoms, double margin_delta = 1.0);
// rho(t) = e^{-lambda t}. Any lambda is representable; downstream operations
// enforce their own convergence requirements on Re lambda.
BorelMeasure exp_density_measure(cplx lambda, double margin_delta = 0.25);
// rho(t) = t^power e^{-lambda t} with power > -1 (integrable at 0).
BorelMeasure exp_poly_density_measure(double power, cplx lambda, double margin_delta = 0.25);

// Parses {"atoms":[[t,w_re,w_im],...],
//         "density":{"name":"exp","lambda":[re,im]}
//               or  {"name":"exp-poly","power":p,"lambda":[re,im]},
//         "margin_delta":d}.
// Both keys "atoms" and "density" are optional but not both absent.
BorelMeasure measure_from_json_text(const std::string& text);

// Growth envelope ||T_t|| <= M e^{omega0 t} for the catalog composition
// semigroups on the square-summable coefficient space.
std::pair<double, double> h2_growth_bound(FlowKind kind);

// Admissibility of the measure for the flow: omega_rho > omega0 + delta.
void require_admissible(const Semiflow& flow, const BorelMeasure& nu);

struct QuadraturePlan {
    std::string scheme = "composite-gauss-legendre";
    double T_max = 0.0;
    int panels = 0;
    int nodes_per_panel = 24;
    double tail_bound = 0.0;  // analytic bound on the discarded [T_max, inf) part
    double tolerance = 0.0;   // requested entrywise tolerance
    std::vector<double> panel_breaks;  // first = 0, last = T_max
};

// Panel layout for the subordination integral: geometric grading near 0 at
// scale ~2^-(log2 N + 4) resolves the e^{-N t} boundary layer of the highest
// retained coefficient; unit panels continue to T_max, which is set so the
// exponential tail bound M M_rho e^{-(omega_rho - omega0) T} / (omega_rho -
// omega0) is at most tol / 10.
QuadraturePlan make_bochner_plan(const Semiflow& flow, const BorelMeasure& nu, int N, double tol);

// L(nu)(z) = int e^{-z t} dnu(t): atoms summed exactly, density integrated
// on a graded plan to absolute accuracy ~1e-12. Requires Re z > -omega_rho.
cplx laplace_transform(const BorelMeasure& nu, cplx z);

// H_nu = int T_t dnu(t), entrywise quadrature of t -> M(phi_t). The affine
// flow uses its closed-form upper-triangular compression at every node, so
// the result is upper and exact-upper; other flows go through the sampled
// composition route and come back general. Atoms are added exactly.
OperatorMatrix subordinate_matrix(const Semiflow& flow, const BorelMeasure& nu, int N,
                                  const QuadraturePlan& plan);

struct AveragingResult {
    cplx value{0.0, 0.0};
    // Set when 0 < Re lambda <= omega0 for the flow: the segment integral
    // converges, but lambda sits inside the growth bound, so reading the
    // value as a resolvent is off-label.
    bool spectral_caveat = false;
};

// (H_{nu_lambda} f)(z) = e^{lambda h(z)} int_z^1 h'(s) e^{-lambda h(s)} f(s) ds
// on the straight segment s = 1 + (z-1) u, u in (0, 1]. The u^{lambda-1}
// endpoint factor is absorbed by geometrically graded panels (the complex
// power is kept in the integrand; nodes stay real). h' = 1/G exactly.
// Re lambda <= 0 is rejected (endpoint not integrable); flows without
// Koenigs data are rejected.
AveragingResult averaging_apply(const Semiflow& flow, cplx lambda,
                                const std::function<cplx(cplx)>& f, cplx z);

// (H_{nu_rho} f)(z) = int_z^1 h'(s) rho(h(s) - h(z)) f(s) ds with rho given
// as its holomorphic sector extension (the argument h(s) - h(z) is complex
// off the real axis). Same segment scheme as averaging_apply.
cplx general_subordinated_apply(const Semiflow& flow, const std::function<cplx(cplx)>& rho,
                                const std::function<cplx(cplx)>& f, cplx z);

// (H_nu f)(z) for a full measure: atom part sum_j w_j f(phi_{t_j}(z)) plus
// the density part via the segment integral. Densities must carry a sector
// extension; atom-only measures work for every catalog flow.
cplx subordinated_pointwise_apply(const Semiflow& flow, const BorelMeasure& nu,
                                  const std::function<cplx(cplx)>& f, cplx z);

enum class RegularityVerdict { pass, fail, indeterminate };

struct RegularityReport {
    RegularityVerdict verdict = RegularityVerdict::indeterminate;
    std::string reason;
    double sup_inner = 0.0;  // sup over |z| <= 1 in the sector of |z^{1-eta} rho(z)|
    double sup_outer = 0.0;  // sup over |z| >= 1 of |z^{1+xi} e^{(omega0+delta) z} rho(z)|
    double ratio_inner = 1.0;  // refined-sample sup / base sup
    double ratio_outer = 1.0;
    cplx witness_inner{0.0, 0.0};  // argmax points from the refined pass
    cplx witness_outer{0.0, 0.0};
};

// Samples both suprema over the sector |arg z| <= xi pi/2 on log-spaced
// moduli in [2^-6, 2^6] with `samples` points per ray; the refinement pass
// doubles the point count and widens the modulus range by one octave on
// each side. Pass if both suprema are finite and stable (ratio < 1.1);
// fail on the moment condition, a missing sector extension, a non-finite
// value, or growth >= 10x per refinement; indeterminate between.
RegularityReport check_measure_regularity(const BorelMeasure& nu, double omega0, double delta,
                                          double eta, double xi, int samples);

}  // namespace subspec

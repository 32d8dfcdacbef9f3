#pragma once

// Catalog of holomorphic semiflows on the unit disc with closed-form flow
// maps, generators, Koenigs data, and strip geometry.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subspec/common.hpp"

namespace subspec {

enum class FlowKind {
    affine_hyperbolic,
    hyperbolic_automorphism,
    parabolic_automorphism,
    elliptic_rotationlike,
    elliptic_power,
};

enum class FlowClass { hyperbolic, parabolic, elliptic };

struct Semiflow {
    FlowKind kind;
    std::string name;  // CLI spelling: affine, hyp-auto, para-auto, elliptic-rot, elliptic-pow
    FlowClass classification;

    std::function<cplx(double, cplx)> phi;  // (t, z) -> phi_t(z)
    std::function<cplx(cplx)> G;            // generator symbol, dphi_t/dt = G(phi_t)
    // Monomial coefficients of G when it is a polynomial of degree <= 2.
    std::optional<std::vector<cplx>> G_poly;

    // Koenigs data: h univalent, h(0) = 0, h(phi_t(z)) = h(z) + t.
    // Absent for the elliptic entries.
    std::function<cplx(cplx)> h;
    std::function<cplx(cplx)> h_inv;
    bool has_koenigs = false;

    cplx dw_point{1.0, 0.0};  // Denjoy-Wolff point
    std::optional<double> gamma;       // width of the smallest strip containing h(D)
    std::optional<double> beta_max;    // width of the widest strip contained in h(D)
    std::optional<bool> contains_strip;
};

// Catalog factories.
Semiflow affine_flow();
Semiflow hyperbolic_automorphism_flow();
Semiflow parabolic_automorphism_flow();
Semiflow elliptic_rotationlike_flow();
Semiflow elliptic_power_flow();

// Lookup by CLI name; throws std::domain_error for unknown names.
Semiflow flow_by_name(const std::string& name);

// Synthetic entry with Koenigs data scaled by alpha: h -> alpha h. The flow
// is time-rescaled accordingly so the conjugacy stays a unit-speed
// translation. Used to cross-check the strip-width estimators.
Semiflow scale_koenigs(const Semiflow& base, double alpha);

// phi with the documented preconditions (t >= 0, |z| < 1).
cplx flow_phi(const Semiflow& flow, double t, cplx z);

// Koenigs evaluation and inverse; elliptic flows are rejected, and the
// inverse checks its argument lands inside the disc.
cplx koenigs(const Semiflow& flow, cplx z);
cplx koenigs_inv(const Semiflow& flow, cplx w);

struct FlowClassification {
    FlowClass classification;
    std::optional<double> gamma;
    std::optional<double> beta_max;
    std::optional<bool> contains_strip;
};
FlowClassification classify(const Semiflow& flow);

struct StripGridSpec {
    int theta_samples = 4096;
    // Disc radii for the gamma sweep; defaults to 1-2^-j, j=3..14, plus
    // 1-1e-4 (the deep radius is needed to resolve gamma near pi).
    std::vector<double> radii;
    double height_lo = -2.0;
    double height_hi = 2.0;
    double height_step = 0.005;
    double R = 50.0;      // x range [-R, R] for the contained-strip sweep
    int x_samples = 2001;
    // |h_inv(w)| <= 1 + tol counts as inside: at |x| ~ 40 the true margin
    // underflows the double ulp of 1.0, so a strict < 1 test rejects
    // everything on the far samples.
    double membership_tol = 1e-12;
};

struct StripWidthEstimate {
    double gamma_hat = 0.0;
    std::optional<double> beta_hat;
    double height_resolution = 0.0;
    int x_samples = 0;
};

StripWidthEstimate estimate_strip_widths(const Semiflow& flow, const StripGridSpec& grid = {});

}  // namespace subspec

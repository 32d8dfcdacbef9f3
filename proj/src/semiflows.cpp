#include "subspec/semiflows.hpp"

#include <cmath>
#include <stdexcept>

namespace subspec {

Semiflow affine_flow() {
    Semiflow f;
    f.kind = FlowKind::affine_hyperbolic;
    f.name = "affine";
    f.classification = FlowClass::hyperbolic;
    // phi_t(z) = e^-t z + (1 - e^-t)
    f.phi = [](double t, cplx z) {
        double a = std::exp(-t);
        return a * z + (1.0 - a);
    };
    // G(z) = 1 - z
    f.G = [](cplx z) { return 1.0 - z; };
    f.G_poly = std::vector<cplx>{cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    // h(z) = -log(1-z), principal branch; 1-z has positive real part on D.
    f.h = [](cplx z) { return -std::log(1.0 - z); };
    f.h_inv = [](cplx w) { return 1.0 - std::exp(-w); };
    f.has_koenigs = true;
    f.dw_point = cplx(1.0, 0.0);
    f.gamma = kPi;
    f.beta_max = std::nullopt;  // h(D) contains no horizontal strip
    f.contains_strip = false;
    return f;
}

Semiflow hyperbolic_automorphism_flow() {
    Semiflow f;
    f.kind = FlowKind::hyperbolic_automorphism;
    f.name = "hyp-auto";
    f.classification = FlowClass::hyperbolic;
    // phi_t(z) = ((1+e^-t) z + (1-e^-t)) / ((1-e^-t) z + (1+e^-t));
    // the e^-t form stays stable for large t.
    f.phi = [](double t, cplx z) {
        double e = std::exp(-t);
        return ((1.0 + e) * z + (1.0 - e)) / ((1.0 - e) * z + (1.0 + e));
    };
    // G(z) = (1 - z^2) / 2
    f.G = [](cplx z) { return 0.5 * (1.0 - z * z); };
    f.G_poly = std::vector<cplx>{cplx(0.5, 0.0), cplx(0.0, 0.0), cplx(-0.5, 0.0)};
    // h(z) = log((1+z)/(1-z)) maps D onto the strip |Im| < pi/2.
    f.h = [](cplx z) { return std::log((1.0 + z) / (1.0 - z)); };
    f.h_inv = [](cplx w) { return std::tanh(0.5 * w); };
    f.has_koenigs = true;
    f.dw_point = cplx(1.0, 0.0);
    f.gamma = kPi;
    f.beta_max = kPi;
    f.contains_strip = true;
    return f;
}

Semiflow parabolic_automorphism_flow() {
    Semiflow f;
    f.kind = FlowKind::parabolic_automorphism;
    f.name = "para-auto";
    f.classification = FlowClass::parabolic;
    // phi_t(z) = ((1-it) z + it) / (-it z + 1 + it)
    f.phi = [](double t, cplx z) {
        cplx it(0.0, t);
        return ((1.0 - it) * z + it) / (-it * z + 1.0 + it);
    };
    // G(z) = i (1 - z)^2, so that G h' = 1 with the h below.
    f.G = [](cplx z) {
        cplx u = 1.0 - z;
        return cplx(0.0, 1.0) * u * u;
    };
    f.G_poly = std::vector<cplx>{cplx(0.0, 1.0), cplx(0.0, -2.0), cplx(0.0, 1.0)};
    // The natural conjugacy z/(1-z) translates by i t; rotating it by -i
    // gives a Koenigs map with a real unit-speed translation:
    // h(z) = -i z/(1-z), h(phi_t(z)) = h(z) + t, h(D) = {Im w < 1/2}.
    f.h = [](cplx z) { return cplx(0.0, -1.0) * z / (1.0 - z); };
    f.h_inv = [](cplx w) { return w / (w - cplx(0.0, 1.0)); };
    f.has_koenigs = true;
    f.dw_point = cplx(1.0, 0.0);
    f.gamma = std::nullopt;     // h(D) is a half-plane: no finite containing strip
    f.beta_max = std::nullopt;
    f.contains_strip = std::nullopt;
    return f;
}

Semiflow elliptic_rotationlike_flow() {
    Semiflow f;
    f.kind = FlowKind::elliptic_rotationlike;
    f.name = "elliptic-rot";
    f.classification = FlowClass::elliptic;
    // phi_t(z) = e^-t z / ((e^-t - 1) z + 1), fixing 0
    f.phi = [](double t, cplx z) {
        double e = std::exp(-t);
        return e * z / ((e - 1.0) * z + 1.0);
    };
    // G(z) = z^2 - z
    f.G = [](cplx z) { return z * z - z; };
    f.G_poly = std::vector<cplx>{cplx(0.0, 0.0), cplx(-1.0, 0.0), cplx(1.0, 0.0)};
    f.has_koenigs = false;  // no Koenigs data stored for elliptic entries
    f.dw_point = cplx(0.0, 0.0);
    return f;
}

Semiflow elliptic_power_flow() {
    Semiflow f;
    f.kind = FlowKind::elliptic_power;
    f.name = "elliptic-pow";
    f.classification = FlowClass::elliptic;
    // psi_t(z) = 1 - (1-z)^{e^-t}, fixing 0; principal power
    f.phi = [](double t, cplx z) {
        double e = std::exp(-t);
        return 1.0 - std::exp(e * std::log(1.0 - z));
    };
    // G(z) = (1-z) log(1-z): not a polynomial
    f.G = [](cplx z) { return (1.0 - z) * std::log(1.0 - z); };
    f.G_poly = std::nullopt;
    f.has_koenigs = false;
    f.dw_point = cplx(0.0, 0.0);
    return f;
}

Semiflow flow_by_name(const std::string& name) {
    if (name == "affine") return affine_flow();
    if (name == "hyp-auto") return hyperbolic_automorphism_flow();
    if (name == "para-auto") return parabolic_automorphism_flow();
    if (name == "elliptic-rot") return elliptic_rotationlike_flow();
    if (name == "elliptic-pow") return elliptic_power_flow();
    throw std::domain_error("unknown flow name: " + name);
}

Semiflow scale_koenigs(const Semiflow& base, double alpha) {
    if (!base.has_koenigs) throw std::domain_error("scale_koenigs: base flow has no Koenigs data");
    if (!(alpha > 0.0)) throw std::domain_error("scale_koenigs: alpha must be positive");
    Semiflow f = base;
    f.name = base.name + "-scaled";
    auto base_phi = base.phi;
    auto base_h = base.h;
    auto base_hinv = base.h_inv;
    // h_s = alpha h translates by alpha t under phi_t; rescale time so the
    // scaled entry translates at unit speed again.
    f.phi = [base_phi, alpha](double t, cplx z) { return base_phi(t / alpha, z); };
    f.h = [base_h, alpha](cplx z) { return alpha * base_h(z); };
    f.h_inv = [base_hinv, alpha](cplx w) { return base_hinv(w / alpha); };
    auto base_G = base.G;
    f.G = [base_G, alpha](cplx z) { return base_G(z) / alpha; };
    if (base.G_poly) {
        f.G_poly = base.G_poly;
        for (cplx& c : *f.G_poly) c /= alpha;
    }
    if (base.gamma) f.gamma = alpha * *base.gamma;
    if (base.beta_max) f.beta_max = alpha * *base.beta_max;
    return f;
}

cplx flow_phi(const Semiflow& flow, double t, cplx z) {
    if (t < 0.0) throw std::domain_error("flow_phi: t must be >= 0");
    if (std::abs(z) >= 1.0) throw std::domain_error("flow_phi: |z| >= 1 is outside the disc");
    return flow.phi(t, z);
}

cplx koenigs(const Semiflow& flow, cplx z) {
    if (!flow.has_koenigs) throw std::domain_error("koenigs: flow has no Koenigs data");
    if (std::abs(z) >= 1.0) throw std::domain_error("koenigs: |z| >= 1 is outside the disc");
    return flow.h(z);
}

cplx koenigs_inv(const Semiflow& flow, cplx w) {
    if (!flow.has_koenigs) throw std::domain_error("koenigs_inv: flow has no Koenigs data");
    cplx z = flow.h_inv(w);
    if (!(std::abs(z) < 1.0)) throw std::domain_error("koenigs_inv: w is outside the Koenigs domain");
    return z;
}

FlowClassification classify(const Semiflow& flow) {
    return {flow.classification, flow.gamma, flow.beta_max, flow.contains_strip};
}

StripWidthEstimate estimate_strip_widths(const Semiflow& flow, const StripGridSpec& grid) {
    if (!flow.has_koenigs)
        throw std::domain_error("estimate_strip_widths: flow has no Koenigs data");

    StripGridSpec g = grid;
    if (g.radii.empty()) {
        for (int j = 3; j <= 14; ++j) g.radii.push_back(1.0 - std::ldexp(1.0, -j));
        g.radii.push_back(1.0 - 1e-4);
    }

    // gamma-hat: total vertical extent of Im h over the disc grid.
    double im_lo = 0.0, im_hi = 0.0;  // h(0) = 0 anchors both
    for (double r : g.radii) {
        for (int i = 0; i < g.theta_samples; ++i) {
            double ang = 2.0 * kPi * i / g.theta_samples;
            cplx z = r * cplx(std::cos(ang), std::sin(ang));
            double im = flow.h(z).imag();
            if (std::isfinite(im)) {
                im_lo = std::min(im_lo, im);
                im_hi = std::max(im_hi, im);
            }
        }
    }

    StripWidthEstimate est;
    est.gamma_hat = im_hi - im_lo;
    est.height_resolution = g.height_step;
    est.x_samples = g.x_samples;

    // beta-hat: widest run of consecutive heights c whose full horizontal
    // sample line c i + x, x in [-R, R], stays inside h(D).
    int best_run = 0, cur_run = 0;
    int steps = static_cast<int>(std::floor((g.height_hi - g.height_lo) / g.height_step + 0.5));
    for (int s = 0; s <= steps; ++s) {
        double c = g.height_lo + s * g.height_step;
        bool line_inside = true;
        for (int i = 0; i < g.x_samples; ++i) {
            double x = -g.R + 2.0 * g.R * i / (g.x_samples - 1);
            cplx z = flow.h_inv(cplx(x, c));
            if (!(std::abs(z) <= 1.0 + g.membership_tol)) {
                line_inside = false;
                break;
            }
        }
        cur_run = line_inside ? cur_run + 1 : 0;
        best_run = std::max(best_run, cur_run);
    }
    if (best_run > 0) est.beta_hat = (best_run - 1) * g.height_step;
    return est;
}

}  // namespace subspec

#include "subspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "subspec/analytic.hpp"
#include "subspec/quadrature.hpp"

namespace subspec {

namespace {

// Half-window used when an unbounded boundary line or region interior has to
// be reduced to a finite sample set.
constexpr double kLineWindow = 40.0;

std::vector<cplx> line_samples(double x, std::size_t count) {
    std::vector<cplx> out;
    out.reserve(count);
    if (count == 1) {
        out.emplace_back(x, 0.0);
        return out;
    }
    for (std::size_t j = 0; j < count; ++j) {
        double y = -kLineWindow +
                   2.0 * kLineWindow * static_cast<double>(j) / static_cast<double>(count - 1);
        out.emplace_back(x, y);
    }
    return out;
}

std::vector<cplx> circle_samples(cplx center, double radius, std::size_t count) {
    std::vector<cplx> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
        out.push_back(center + radius * cplx(std::cos(th), std::sin(th)));
    }
    return out;
}

struct Window {
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
};

Window bbox_of(const std::vector<cplx>& pts) {
    Window w;
    if (pts.empty()) return w;
    w.x_lo = w.x_hi = pts[0].real();
    w.y_lo = w.y_hi = pts[0].imag();
    for (cplx p : pts) {
        w.x_lo = std::min(w.x_lo, p.real());
        w.x_hi = std::max(w.x_hi, p.real());
        w.y_lo = std::min(w.y_lo, p.imag());
        w.y_hi = std::max(w.y_hi, p.imag());
    }
    return w;
}

// Finite window covering the region (or a width-40 slab of it when the
// region is unbounded); used to seed interior sampling.
Window region_window(const SpectralRegion& r) {
    switch (r.kind) {
        case RegionKind::halfplane:
            return {r.c - kLineWindow, r.c, -kLineWindow, kLineWindow};
        case RegionKind::strip:
            return {r.a, r.b, -kLineWindow, kLineWindow};
        case RegionKind::disk:
        case RegionKind::circle:
            return {r.center.real() - r.radius, r.center.real() + r.radius,
                    r.center.imag() - r.radius, r.center.imag() + r.radius};
        case RegionKind::annulus:
            return {r.center.real() - r.r_out, r.center.real() + r.r_out,
                    r.center.imag() - r.r_out, r.center.imag() + r.r_out};
        case RegionKind::mapped: {
            if (!r.base) throw std::domain_error("mapped region lacks a base");
            if (r.map_tag == "negate") {
                Window w = region_window(*r.base);
                return {-w.x_hi, -w.x_lo, -w.y_hi, -w.y_lo};
            }
            return bbox_of(region_boundary_sample(r, 512));
        }
        case RegionKind::cloud:
            return bbox_of(r.points);
    }
    return {};
}

// Largest nearest-neighbor gap: every cloud point has another one within
// this distance, so it measures how densely the cloud fills its set.
double cloud_fill_resolution(const std::vector<cplx>& pts) {
    if (pts.size() < 2) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            best = std::min(best, std::abs(pts[i] - pts[j]));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double pi_over_p_gamma(const Semiflow& flow, double p, const char* who) {
    if (!(p > 0.0)) throw std::domain_error(std::string(who) + ": need p > 0");
    if (flow.classification != FlowClass::hyperbolic)
        throw std::domain_error(std::string(who) + ": closed form requires a hyperbolic flow");
    if (!flow.gamma)
        throw std::domain_error(std::string(who) + ": flow lacks the catalog strip width");
    return kPi / (p * *flow.gamma);
}

}  // namespace

// ── Regions ──────────────────────────────────────────────────────────────

bool region_contains(const SpectralRegion& r, cplx z, double tol) {
    switch (r.kind) {
        case RegionKind::halfplane:
            return z.real() <= r.c + tol;
        case RegionKind::strip:
            return z.real() >= r.a - tol && z.real() <= r.b + tol;
        case RegionKind::disk:
            return std::abs(z - r.center) <= r.radius + tol;
        case RegionKind::circle:
            return std::abs(std::abs(z - r.center) - r.radius) <= tol;
        case RegionKind::annulus: {
            double d = std::abs(z - r.center);
            return d >= r.r_in - tol && d <= r.r_out + tol;
        }
        case RegionKind::mapped: {
            if (!r.base) throw std::domain_error("mapped region lacks a base");
            if (r.map_tag == "negate") return region_contains(*r.base, -z, tol);
            if (r.map_tag == "resolvent") {
                // 0 is the image of infinity and always belongs.
                if (std::abs(z) <= tol) return true;
                return region_contains(*r.base, r.map_lambda - 1.0 / z, tol);
            }
            throw std::domain_error("unknown region map tag: " + r.map_tag);
        }
        case RegionKind::cloud: {
            double best = std::numeric_limits<double>::infinity();
            for (cplx p : r.points) best = std::min(best, std::abs(z - p));
            return best <= std::max(tol, r.resolution);
        }
    }
    return false;
}

std::vector<cplx> region_boundary_sample(const SpectralRegion& r, std::size_t count) {
    if (count == 0) throw std::domain_error("region_boundary_sample: count must be positive");
    switch (r.kind) {
        case RegionKind::halfplane:
            return line_samples(r.c, count);
        case RegionKind::strip: {
            std::vector<cplx> out = line_samples(r.a, count - count / 2);
            std::vector<cplx> hi = line_samples(r.b, std::max<std::size_t>(count / 2, 1));
            out.insert(out.end(), hi.begin(), hi.end());
            return out;
        }
        case RegionKind::disk:
        case RegionKind::circle:
            return circle_samples(r.center, r.radius, count);
        case RegionKind::annulus: {
            std::vector<cplx> out = circle_samples(r.center, r.r_out, count - count / 2);
            std::vector<cplx> in = circle_samples(r.center, r.r_in, std::max<std::size_t>(count / 2, 1));
            out.insert(out.end(), in.begin(), in.end());
            return out;
        }
        case RegionKind::mapped: {
            if (!r.base) throw std::domain_error("mapped region lacks a base");
            std::vector<cplx> base_pts = region_boundary_sample(*r.base, count);
            std::vector<cplx> out;
            out.reserve(base_pts.size() + 1);
            if (r.map_tag == "negate") {
                for (cplx s : base_pts) out.push_back(-s);
            } else if (r.map_tag == "resolvent") {
                for (cplx s : base_pts) {
                    cplx w = 1.0 / (r.map_lambda - s);
                    if (std::isfinite(w.real()) && std::isfinite(w.imag())) out.push_back(w);
                }
                out.push_back(cplx(0.0, 0.0));  // tangency point, image of infinity
            } else {
                throw std::domain_error("unknown region map tag: " + r.map_tag);
            }
            return out;
        }
        case RegionKind::cloud:
            return r.points;
    }
    return {};
}

SpectralRegion negate_region(const SpectralRegion& r) {
    SpectralRegion out;
    out.kind = RegionKind::mapped;
    out.base = std::make_shared<SpectralRegion>(r);
    out.map_tag = "negate";
    out.label = "negation of " + (r.label.empty() ? std::string("region") : r.label);
    return out;
}

// ── Catalog region calculators ───────────────────────────────────────────

SpectralRegion generator_spectrum_region(const Semiflow& flow, double p) {
    double edge = pi_over_p_gamma(flow, p, "generator_spectrum_region");
    SpectralRegion r;
    if (flow.contains_strip && *flow.contains_strip) {
        r.kind = RegionKind::strip;
        r.a = -edge;
        r.b = edge;
        r.label = "strip |Re| <= " + fmt_g17(edge);
    } else {
        r.kind = RegionKind::halfplane;
        r.c = edge;
        r.label = "half-plane Re <= " + fmt_g17(edge);
    }
    return r;
}

std::pair<SpectralRegion, SpectralRegion> generator_point_spectrum_region(const Semiflow& flow,
                                                                          double p) {
    double edge = pi_over_p_gamma(flow, p, "generator_point_spectrum_region");
    SpectralRegion inner;
    SpectralRegion outer;
    if (flow.contains_strip && *flow.contains_strip) {
        if (!flow.beta_max)
            throw std::domain_error(
                "generator_point_spectrum_region: flow lacks the widest contained strip width");
        double left = kPi / (p * *flow.beta_max);
        inner.kind = RegionKind::strip;
        inner.a = -left;
        inner.b = edge;
        inner.open_lo = true;
        inner.open_hi = true;
        inner.label = "open strip " + fmt_g17(-left) + " < Re < " + fmt_g17(edge);
        outer.kind = RegionKind::strip;
        outer.a = -edge;
        outer.b = edge;
        outer.open_lo = true;   // left edge excluded
        outer.open_hi = false;  // right edge included
        outer.label = "strip " + fmt_g17(-edge) + " < Re <= " + fmt_g17(edge);
    } else {
        inner.kind = RegionKind::halfplane;
        inner.c = edge;
        inner.open = true;
        inner.label = "open half-plane Re < " + fmt_g17(edge);
        outer.kind = RegionKind::halfplane;
        outer.c = edge;
        outer.label = "half-plane Re <= " + fmt_g17(edge);
    }
    return {inner, outer};
}

std::pair<std::pair<cplx, double>, std::pair<cplx, double>> resolvent_image_circles(
    const SpectralRegion& strip, cplx lambda) {
    if (strip.kind != RegionKind::strip)
        throw std::domain_error("resolvent_image_circles: strip region required");
    double x = lambda.real();
    double d_near;
    double d_far;
    if (x > strip.b) {
        d_near = x - strip.b;
        d_far = x - strip.a;
    } else if (x < strip.a) {
        d_near = x - strip.a;
        d_far = x - strip.b;
    } else {
        throw std::domain_error("resolvent_image_circles: lambda lies between the strip lines");
    }
    // The vertical line Re z = d maps under 1/(lambda - z) to the circle of
    // center 1/(2(Re lambda - d)) and radius 1/(2|Re lambda - d|); both image
    // circles are tangent to each other at 0.
    std::pair<cplx, double> outer{cplx(1.0 / (2.0 * d_near), 0.0), std::abs(1.0 / (2.0 * d_near))};
    std::pair<cplx, double> inner{cplx(1.0 / (2.0 * d_far), 0.0), std::abs(1.0 / (2.0 * d_far))};
    return {outer, inner};
}

SpectralRegion map_region_resolvent(const SpectralRegion& region, cplx lambda) {
    if (region_contains(region, lambda, 1e-9))
        throw std::domain_error("map_region_resolvent: lambda lies inside the region");
    if (region.kind == RegionKind::halfplane) {
        // {Re z <= c} maps to the closed disk with diameter [0, 1/(Re lambda - c)]
        // (real center even for complex lambda; the imaginary part only slides
        // points along the boundary line before inversion).
        double d = lambda.real() - region.c;
        SpectralRegion out;
        out.kind = RegionKind::disk;
        out.center = cplx(1.0 / (2.0 * d), 0.0);
        out.radius = std::abs(1.0 / (2.0 * d));
        out.label = "disk through 0, center " + fmt_g17(out.center.real());
        return out;
    }
    if (region.kind == RegionKind::strip) {
        auto circles = resolvent_image_circles(region, lambda);
        SpectralRegion out;
        out.kind = RegionKind::mapped;
        out.base = std::make_shared<SpectralRegion>(region);
        out.map_tag = "resolvent";
        out.map_lambda = lambda;
        out.label = "between tangent circles of radii " + fmt_g17(circles.first.second) + " and " +
                    fmt_g17(circles.second.second);
        return out;
    }
    // Other bases: sampled image cloud.
    std::vector<cplx> src = region_boundary_sample(region, 2048);
    SpectralRegion out;
    out.kind = RegionKind::cloud;
    out.points.reserve(src.size() + 1);
    for (cplx s : src) {
        cplx w = 1.0 / (lambda - s);
        if (std::isfinite(w.real()) && std::isfinite(w.imag())) out.points.push_back(w);
    }
    out.points.push_back(cplx(0.0, 0.0));
    out.resolution = cloud_fill_resolution(out.points);
    out.label = "sampled resolvent image";
    return out;
}

SpectralRegion map_region_laplace(const SpectralRegion& region, const BorelMeasure& nu,
                                  bool include_infinity, std::size_t sampling) {
    if (sampling < 16) throw std::domain_error("map_region_laplace: sampling >= 16 required");
    validate_measure(nu);

    std::vector<cplx> src = region_boundary_sample(region, sampling);
    Window w = region_window(region);
    std::size_t ng = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(sampling))));
    ng = std::max<std::size_t>(ng, 2);
    // Graded interior grid: x clusters toward both window edges (where the
    // region boundary sits), y toward the real axis (where the transform of
    // the catalog measures varies fastest).
    double mid_x = 0.5 * (w.x_lo + w.x_hi), half_x = 0.5 * (w.x_hi - w.x_lo);
    double mid_y = 0.5 * (w.y_lo + w.y_hi), half_y = 0.5 * (w.y_hi - w.y_lo);
    for (std::size_t iy = 0; iy < ng; ++iy) {
        double uy = -1.0 + 2.0 * static_cast<double>(iy) / static_cast<double>(ng - 1);
        double sy = uy * std::abs(uy);
        for (std::size_t ix = 0; ix < ng; ++ix) {
            double ux = -1.0 + 2.0 * static_cast<double>(ix) / static_cast<double>(ng - 1);
            double sx = (ux >= 0.0 ? 1.0 : -1.0) * (2.0 * std::abs(ux) - ux * ux);
            cplx z(mid_x + half_x * sx, mid_y + half_y * sy);
            if (region_contains(region, z, 1e-9)) src.push_back(z);
        }
    }

    if (has_density(nu)) {
        // The transform only converges where Re z + omega_rho > 0; report any
        // sample that falls outside that half-plane.
        std::size_t bad = 0;
        cplx first_bad(0.0, 0.0);
        for (cplx z : src) {
            if (!(z.real() + nu.omega_rho > 0.0)) {
                if (bad == 0) first_bad = z;
                ++bad;
            }
        }
        if (bad > 0)
            throw std::domain_error("map_region_laplace: transform undefined at " +
                                    std::to_string(bad) + " of " + std::to_string(src.size()) +
                                    " samples; first at (" + fmt_g17(first_bad.real()) + ", " +
                                    fmt_g17(first_bad.imag()) + ")");
    }

    SpectralRegion out;
    out.kind = RegionKind::cloud;
    out.points.reserve(src.size() + 1);
    for (cplx z : src) out.points.push_back(laplace_transform(nu, z));
    if (include_infinity) {
        // e^{-zt} -> 0 for t > 0 as Re z -> +infinity, so only an atom at
        // t = 0 survives in the limit.
        cplx at_inf(0.0, 0.0);
        for (const auto& [t, wt] : nu.atoms)
            if (t == 0.0) at_inf += wt;
        out.points.push_back(at_inf);
    }
    out.resolution = cloud_fill_resolution(out.points);
    out.label = "Laplace-transform image cloud";
    return out;
}

SpectralRegion semigroup_spectrum_region(const Semiflow& flow, double p, double t) {
    if (!(p > 0.0)) throw std::domain_error("semigroup_spectrum_region: need p > 0");
    if (!(t >= 0.0)) throw std::domain_error("semigroup_spectrum_region: need t >= 0");
    if (flow.classification == FlowClass::elliptic)
        throw std::domain_error("semigroup_spectrum_region: elliptic flows are out of scope");
    SpectralRegion r;
    if (t == 0.0) {
        // The time-zero operator is the identity; its spectrum is {1}.
        r.kind = RegionKind::disk;
        r.center = cplx(1.0, 0.0);
        r.radius = 0.0;
        r.label = "point {1}";
        return r;
    }
    if (flow.classification == FlowClass::parabolic) {
        r.kind = RegionKind::circle;
        r.center = cplx(0.0, 0.0);
        r.radius = 1.0;
        r.label = "unit circle";
        return r;
    }
    double rad = std::exp(pi_over_p_gamma(flow, p, "semigroup_spectrum_region") * t);
    if (flow.contains_strip && *flow.contains_strip) {
        r.kind = RegionKind::annulus;
        r.center = cplx(0.0, 0.0);
        r.r_in = 1.0 / rad;
        r.r_out = rad;
        r.label = "annulus [" + fmt_g17(r.r_in) + ", " + fmt_g17(r.r_out) + "]";
    } else {
        r.kind = RegionKind::disk;
        r.center = cplx(0.0, 0.0);
        r.radius = rad;
        r.label = "disk of radius " + fmt_g17(rad);
    }
    return r;
}

double spectral_radius_formula(const Semiflow& flow, double p, double t) {
    if (!(p > 0.0)) throw std::domain_error("spectral_radius_formula: need p > 0");
    if (!(t >= 0.0)) throw std::domain_error("spectral_radius_formula: need t >= 0");
    if (t == 0.0) return 1.0;  // identity operator, any flow
    return std::exp(pi_over_p_gamma(flow, p, "spectral_radius_formula") * t);
}

// ── Pseudospectra ────────────────────────────────────────────────────────

double sigma_min(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::domain_error("sigma_min: square nonempty matrix required");
    const Eigen::Index n = m.rows();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(lu.matrixLU()(i, i)) == 0.0) return 0.0;  // exactly singular

    SplitMix64 rng(probe_seed());
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    v /= v.stableNorm();

    // Power iteration on (M^H M)^{-1}: u = M^{-1} M^{-H} v, sigma ~ 1/sqrt(||u||).
    double sigma = 0.0;
    double prev = -1.0;
    for (int it = 0; it < 300; ++it) {
        Eigen::VectorXcd y = lu.adjoint().solve(v);
        Eigen::VectorXcd u = lu.solve(y);
        double nrm = u.stableNorm();
        if (!std::isfinite(nrm) || nrm == 0.0) return 0.0;  // overflow: below noise floor
        sigma = 1.0 / std::sqrt(nrm);
        if (prev >= 0.0 && std::abs(sigma - prev) <= 1e-11 * sigma) break;
        prev = sigma;
        v = u / nrm;
    }
    return sigma;
}

double sigma_min_shifted(const OperatorMatrix& a, cplx z) {
    Eigen::MatrixXcd m = a.entries;
    m.diagonal().array() -= z;
    return sigma_min(m);
}

PseudospectrumGrid pseudospectrum_grid(const OperatorMatrix& a, double x0, double x1, double y0,
                                       double y1, std::size_t nx, std::size_t ny) {
    if (!(std::isfinite(x0) && std::isfinite(x1) && std::isfinite(y0) && std::isfinite(y1)))
        throw std::domain_error("pseudospectrum_grid: finite box required");
    if (x1 < x0 || y1 < y0) throw std::domain_error("pseudospectrum_grid: box edges reversed");
    if (nx == 0 || ny == 0 || nx > 400 || ny > 400)
        throw std::domain_error("pseudospectrum_grid: resolution must be 1..400 per axis");
    PseudospectrumGrid g;
    g.x0 = x0;
    g.x1 = x1;
    g.y0 = y0;
    g.y1 = y1;
    g.nx = nx;
    g.ny = ny;
    g.order = a.order;
    g.values.assign(nx * ny, 0.0);
    parallel_for(nx * ny, [&](std::size_t idx) {
        std::size_t iy = idx / nx;
        std::size_t ix = idx % nx;
        g.values[idx] = sigma_min_shifted(a, g.z_at(ix, iy));
    });
    return g;
}

double pseudospectral_radius(const OperatorMatrix& a, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("pseudospectral_radius: eps > 0 required");
    double n1 = 0.0;
    double ninf = 0.0;
    for (Eigen::Index k = 0; k < a.entries.cols(); ++k)
        n1 = std::max(n1, a.entries.col(k).cwiseAbs().sum());
    for (Eigen::Index m = 0; m < a.entries.rows(); ++m)
        ninf = std::max(ninf, a.entries.row(m).cwiseAbs().sum());

    constexpr double kStep = 0.08;
    constexpr std::size_t kThetas = 96;
    // sqrt(norm1 * normInf) bounds the spectral radius, and the epsilon blob
    // extends at most eps beyond it.
    double r_hi = std::sqrt(n1 * ninf) + eps + kStep;

    auto ring_hit = [&](double rr) {
        for (std::size_t j = 0; j < kThetas; ++j) {
            double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(kThetas);
            if (sigma_min_shifted(a, rr * cplx(std::cos(th), std::sin(th))) <= eps) return true;
        }
        return false;
    };

    double hit = -1.0;
    for (double rr = r_hi; rr > 0.0; rr -= kStep) {
        if (ring_hit(rr)) {
            hit = rr;
            break;
        }
    }
    // Blob thinner than the angular/radial sweep resolution: report 0.
    if (hit < 0.0) return 0.0;

    double lo = hit;
    double hi = hit + kStep;
    for (int round = 0; round < 3; ++round) {
        double mid = 0.5 * (lo + hi);
        if (ring_hit(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// ── Local spectral radius ────────────────────────────────────────────────

LocalRadiusTrace local_radius_trace(const OperatorMatrix& a, const CoeffVector& x,
                                    std::size_t n_max, std::size_t renorm_every) {
    if (n_max == 0) throw std::domain_error("local_radius_trace: n_max >= 1 required");
    if (x.size() != static_cast<std::size_t>(a.order) + 1)
        throw std::domain_error("local_radius_trace: vector length must be order + 1");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
    if (v.stableNorm() == 0.0) throw std::domain_error("local_radius_trace: x must be nonzero");

    LocalRadiusTrace tr;
    tr.order = a.order;
    tr.exact_truncation = a.exactness == CompressionExactness::exact_lower;
    if (tr.exact_truncation)
        tr.note = "lower-triangular compression: values are exact leading-coordinate norms";

    double log_scale = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        v = a.entries * v;
        double nrm = v.stableNorm();
        if (nrm == 0.0) {
            tr.nilpotent_at = n;
            tr.note += (tr.note.empty() ? "" : "; ");
            tr.note += "power " + std::to_string(n) + " of the compression annihilates x";
            while (tr.r.size() < n_max) tr.r.push_back(0.0);
            break;
        }
        double log_norm = log_scale + std::log(nrm);
        tr.r.push_back(std::exp(log_norm / static_cast<double>(n)));
        bool renorm = renorm_every > 0 ? (n % renorm_every == 0) : (nrm > 1e120 || nrm < 1e-120);
        if (renorm) {
            v /= nrm;
            log_scale = log_norm;
        }
    }
    for (std::size_t n = 2; n <= tr.r.size(); ++n) {
        if (tr.r[n - 1] < tr.r[n - 2]) {
            tr.first_decrease = n;
            break;
        }
    }
    return tr;
}

// ── Eigenfield witness ───────────────────────────────────────────────────

MuGrid rect_mu_grid(double re0, double re1, double im0, double im1, std::size_t nx,
                    std::size_t ny) {
    if (nx == 0 || ny == 0) throw std::domain_error("rect_mu_grid: nx, ny >= 1 required");
    MuGrid g;
    g.nx = nx;
    g.ny = ny;
    g.points.reserve(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        double im = ny < 2 ? im0 : im0 + (im1 - im0) * static_cast<double>(iy) / static_cast<double>(ny - 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            double re = nx < 2 ? re0 : re0 + (re1 - re0) * static_cast<double>(ix) / static_cast<double>(nx - 1);
            g.points.emplace_back(re, im);
        }
    }
    return g;
}

EigenfieldReport eigenfield_witness(const Semiflow& flow, const BorelMeasure& nu,
                                    const MuGrid& grid, double p, EigenfieldMode mode,
                                    int order) {
    validate_measure(nu);
    if (grid.points.empty()) throw std::domain_error("eigenfield_witness: empty mu grid");
    if (grid.nx * grid.ny != grid.points.size())
        throw std::domain_error("eigenfield_witness: grid dimensions disagree with point count");
    if (!flow.has_koenigs)
        throw std::domain_error("eigenfield_witness: flow has no Koenigs data");

    SpectralRegion inner = generator_point_spectrum_region(flow, p).first;
    for (cplx mu : grid.points)
        if (!region_contains(inner, mu, 1e-9))
            throw std::domain_error(
                "eigenfield_witness: mu = (" + fmt_g17(mu.real()) + ", " + fmt_g17(mu.imag()) +
                ") lies outside the point-spectrum region; e^{mu h} is not in H^p");

    EigenfieldReport rep;
    rep.mode = mode;
    rep.mu = grid.points;
    rep.eigenvalue.reserve(grid.points.size());
    for (cplx mu : grid.points) rep.eigenvalue.push_back(laplace_transform(nu, -mu));

    if (mode == EigenfieldMode::pointwise) {
        // 32 deterministic probes spiraling out to |z| = 0.9.
        std::vector<cplx> zs;
        zs.reserve(32);
        for (int j = 0; j < 32; ++j) {
            double r = 0.9 * static_cast<double>(j + 1) / 32.0;
            double th = 2.0 * kPi * std::fmod(static_cast<double>(j) * 0.6180339887498949, 1.0);
            zs.push_back(r * cplx(std::cos(th), std::sin(th)));
        }
        for (std::size_t i = 0; i < grid.points.size(); ++i) {
            cplx mu = grid.points[i];
            auto f = [&](cplx w) { return std::exp(mu * flow.h(w)); };
            double worst = 0.0;
            for (cplx z : zs) {
                cplx val = subordinated_pointwise_apply(flow, nu, f, z);
                worst = std::max(worst, std::abs(val - rep.eigenvalue[i] * f(z)));
            }
            rep.residual.push_back(worst);
            rep.tolerance.push_back(kEigenfieldTol);
        }
    } else {
        if (order < 8) throw std::domain_error("eigenfield_witness: order >= 8 required");
        QuadraturePlan plan = make_bochner_plan(flow, nu, order, 1e-12);
        OperatorMatrix H = subordinate_matrix(flow, nu, order, plan);
        std::size_t head = static_cast<std::size_t>(order) / 2;
        for (std::size_t i = 0; i < grid.points.size(); ++i) {
            cplx mu = grid.points[i];
            CoeffVector c(static_cast<std::size_t>(order) + 1);
            if (flow.kind == FlowKind::affine_hyperbolic) {
                // e^{mu h} = (1-z)^{-mu}: Pochhammer recurrence.
                c[0] = 1.0;
                for (int k = 0; k < order; ++k)
                    c[static_cast<std::size_t>(k) + 1] =
                        c[static_cast<std::size_t>(k)] * (mu + static_cast<double>(k)) /
                        static_cast<double>(k + 1);
            } else {
                CirclePlan cp = CirclePlan::for_order(order);
                std::vector<cplx> samples(static_cast<std::size_t>(cp.sample_count));
                for (std::size_t j = 0; j < samples.size(); ++j) {
                    double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(cp.sample_count);
                    samples[j] = std::exp(mu * flow.h(cp.radius * cplx(std::cos(th), std::sin(th))));
                }
                c = coeffs_from_samples(samples, cp, order).coeffs;
            }
            CoeffVector img = matrix_apply(H, c);
            double worst = 0.0;
            for (std::size_t k = 0; k < head; ++k)
                worst = std::max(worst, std::abs(img[k] - rep.eigenvalue[i] * c[k]));
            rep.residual.push_back(worst);

            // Tail bound: coefficients decay like k^{Re mu - 1}; a dropped tail
            // coefficient enters residual coordinate m < N/2 through row weights
            // of size O(1/k), giving C * sum_{k>N} k^{Re mu - 2}. The witness
            // floor is added on top for the quadrature error of the compression
            // itself; the envelope alone vanishes for polynomial eigenfunctions.
            double env = 0.0;
            for (std::size_t k = std::max<std::size_t>(head, 1);
                 k <= static_cast<std::size_t>(order); ++k)
                env = std::max(env, std::abs(c[k]) /
                                        std::pow(static_cast<double>(k), mu.real() - 1.0));
            double C = 8.0 * env;
            double e2 = mu.real() - 2.0;
            double tail = 0.0;
            std::size_t far = static_cast<std::size_t>(order) * 10;
            for (std::size_t k = static_cast<std::size_t>(order) + 1; k <= far; ++k)
                tail += std::pow(static_cast<double>(k), e2);
            tail += std::pow(static_cast<double>(far), e2 + 1.0) / (-(e2 + 1.0));
            rep.tolerance.push_back(C * tail + kEigenfieldTol);
            rep.tail_constant = std::max(rep.tail_constant, C);
        }
    }

    rep.max_residual = 0.0;
    bool all_pass = true;
    for (std::size_t i = 0; i < rep.residual.size(); ++i) {
        rep.max_residual = std::max(rep.max_residual, rep.residual[i]);
        if (rep.residual[i] > rep.tolerance[i]) all_pass = false;
    }
    rep.residuals_pass = all_pass;

    // Closed contour integrals of mu -> L(nu)(-mu) over every grid cell;
    // analyticity makes each one vanish.
    if (grid.nx >= 2 && grid.ny >= 2) {
        const QuadRule& gl = gauss_legendre(20);
        auto F = [&](cplx mu) { return laplace_transform(nu, -mu); };
        auto edge_int = [&](cplx a, cplx b) {
            cplx mid = 0.5 * (a + b);
            cplx half = 0.5 * (b - a);
            cplx s(0.0, 0.0);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i)
                s += gl.weights[i] * F(mid + half * gl.nodes[i]);
            return s * half;
        };
        auto at = [&](std::size_t ix, std::size_t iy) { return grid.points[iy * grid.nx + ix]; };
        for (std::size_t iy = 0; iy + 1 < grid.ny; ++iy) {
            for (std::size_t ix = 0; ix + 1 < grid.nx; ++ix) {
                cplx c00 = at(ix, iy);
                cplx c10 = at(ix + 1, iy);
                cplx c11 = at(ix + 1, iy + 1);
                cplx c01 = at(ix, iy + 1);
                cplx loop = edge_int(c00, c10) + edge_int(c10, c11) + edge_int(c11, c01) +
                            edge_int(c01, c00);
                rep.analyticity_max = std::max(rep.analyticity_max, std::abs(loop));
                ++rep.analyticity_cells;
            }
        }
    }
    rep.analyticity_pass = rep.analyticity_cells == 0 || rep.analyticity_max <= kEigenfieldTol;
    return rep;
}

}  // namespace subspec

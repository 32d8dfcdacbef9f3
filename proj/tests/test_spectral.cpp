#include "subspec/spectral.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "subspec/matrices.hpp"
#include "subspec/semiflows.hpp"
#include "subspec/subordination.hpp"
#include "test_common.hpp"

using namespace subspec;

static OperatorMatrix diag_matrix(const std::vector<cplx>& d) {
    OperatorMatrix m;
    m.order = static_cast<int>(d.size()) - 1;
    m.entries = Eigen::MatrixXcd::Zero(m.order + 1, m.order + 1);
    for (int i = 0; i <= m.order; ++i) m.entries(i, i) = d[static_cast<std::size_t>(i)];
    m.structure = MatrixStructure::banded;
    m.exactness = CompressionExactness::approximate;
    validate_matrix(m);
    return m;
}

static void test_region_contains() {
    SpectralRegion hp;
    hp.kind = RegionKind::halfplane;
    hp.c = 0.5;
    REQUIRE(region_contains(hp, cplx(0.5, 7.0)));
    REQUIRE(region_contains(hp, cplx(0.5 + 1e-10, 0.0)));  // inside the tolerance band
    REQUIRE(!region_contains(hp, cplx(0.5 + 1e-8, 0.0)));
    REQUIRE(region_contains(hp, cplx(0.5, 0.0), 0.0));
    REQUIRE(!region_contains(hp, cplx(0.5 + 1e-12, 0.0), 0.0));

    SpectralRegion circ;
    circ.kind = RegionKind::circle;
    circ.center = cplx(0, 0);
    circ.radius = 1.0;
    REQUIRE(region_contains(circ, std::polar(1.0, 2.1)));
    REQUIRE(!region_contains(circ, cplx(0.9, 0)));
    REQUIRE(!region_contains(circ, cplx(0, 0)));

    SpectralRegion ann;
    ann.kind = RegionKind::annulus;
    ann.r_in = 0.5;
    ann.r_out = 2.0;
    REQUIRE(region_contains(ann, cplx(1.0, 0)));
    REQUIRE(region_contains(ann, cplx(0, 0.5)));
    REQUIRE(!region_contains(ann, cplx(0.4, 0)));
    REQUIRE(!region_contains(ann, cplx(2.1, 0)));
}

static void test_boundary_invariant() {
    for (const char* nm : {"affine", "hyp-auto"}) {
        SpectralRegion r = generator_spectrum_region(flow_by_name(nm), 2.0);
        for (cplx b : region_boundary_sample(r, 128)) REQUIRE(region_contains(r, b));
    }
    SpectralRegion sg = semigroup_spectrum_region(flow_by_name("hyp-auto"), 2.0, 1.5);
    for (cplx b : region_boundary_sample(sg, 128)) REQUIRE(region_contains(sg, b));
}

static void test_negate_region() {
    SpectralRegion hp = generator_spectrum_region(flow_by_name("affine"), 2.0);
    SpectralRegion neg = negate_region(hp);
    REQUIRE(neg.kind == RegionKind::mapped);
    REQUIRE(region_contains(neg, cplx(-0.5, 3.0)));
    REQUIRE(region_contains(neg, cplx(4.0, 0.0)));
    REQUIRE(!region_contains(neg, cplx(-0.51, 0.0)));
}

static void test_generator_regions() {
    SpectralRegion a2 = generator_spectrum_region(flow_by_name("affine"), 2.0);
    REQUIRE(a2.kind == RegionKind::halfplane);
    REQUIRE(a2.c == 0.5);
    REQUIRE(!a2.open);
    REQUIRE(generator_spectrum_region(flow_by_name("affine"), 4.0).c == 0.25);

    SpectralRegion s2 = generator_spectrum_region(flow_by_name("hyp-auto"), 2.0);
    REQUIRE(s2.kind == RegionKind::strip);
    REQUIRE(s2.a == -0.5);
    REQUIRE(s2.b == 0.5);

    auto [inner, outer] = generator_point_spectrum_region(flow_by_name("affine"), 1.0);
    REQUIRE(inner.kind == RegionKind::halfplane);
    REQUIRE(inner.c == 1.0);
    REQUIRE(inner.open);
    REQUIRE(!outer.open);

    auto [ih, oh] = generator_point_spectrum_region(flow_by_name("hyp-auto"), 2.0);
    REQUIRE(ih.kind == RegionKind::strip);
    REQUIRE(ih.open_lo && ih.open_hi);
    REQUIRE(oh.open_lo && !oh.open_hi);

    REQUIRE_THROWS_DOMAIN(generator_spectrum_region(flow_by_name("para-auto"), 2.0));
    REQUIRE_THROWS_DOMAIN(generator_spectrum_region(flow_by_name("elliptic-rot"), 2.0));
    REQUIRE_THROWS_DOMAIN(generator_spectrum_region(flow_by_name("affine"), 0.0));
}

static void test_resolvent_map() {
    SpectralRegion hp = generator_spectrum_region(flow_by_name("affine"), 2.0);
    SpectralRegion d1 = map_region_resolvent(hp, cplx(1, 0));
    REQUIRE(d1.kind == RegionKind::disk);
    REQUIRE_CNEAR(d1.center, cplx(1, 0), 1e-15);
    REQUIRE_NEAR(d1.radius, 1.0, 1e-15);
    SpectralRegion d2 = map_region_resolvent(hp, cplx(2, 0));
    REQUIRE_CNEAR(d2.center, cplx(1.0 / 3.0, 0), 1e-15);
    REQUIRE_NEAR(d2.radius, 1.0 / 3.0, 1e-15);
    // A complex shift slides the boundary line before inversion, so the
    // image disk still has a real center.
    SpectralRegion d3 = map_region_resolvent(hp, cplx(1.0, 0.8));
    REQUIRE_NEAR(d3.center.imag(), 0.0, 1e-15);
    REQUIRE_THROWS_DOMAIN(map_region_resolvent(hp, cplx(0.3, 0)));

    SpectralRegion strip = generator_spectrum_region(flow_by_name("hyp-auto"), 2.0);
    auto [outer, inner] = resolvent_image_circles(strip, cplx(1, 0));
    REQUIRE_CNEAR(outer.first, cplx(1, 0), 1e-15);
    REQUIRE_NEAR(outer.second, 1.0, 1e-15);
    REQUIRE_CNEAR(inner.first, cplx(1.0 / 3.0, 0), 1e-15);
    REQUIRE_NEAR(inner.second, 1.0 / 3.0, 1e-15);
    SpectralRegion between = map_region_resolvent(strip, cplx(1, 0));
    REQUIRE(between.kind == RegionKind::mapped);
    REQUIRE(region_contains(between, cplx(0, 0)));
    REQUIRE(region_contains(between, cplx(1.5, 0)));
    REQUIRE(!region_contains(between, cplx(0.5, 0)));  // strictly inside the inner circle

    // Other bases fall back to a sampled cloud.
    SpectralRegion disk_base;
    disk_base.kind = RegionKind::disk;
    disk_base.center = cplx(1, 0);
    disk_base.radius = 1.0;
    SpectralRegion cloud = map_region_resolvent(disk_base, cplx(3, 0));
    REQUIRE(cloud.kind == RegionKind::cloud);
    REQUIRE(!cloud.points.empty());
    REQUIRE(region_contains(cloud, cplx(0.5, 0)));  // image of z = 1
}

static void test_laplace_map() {
    SpectralRegion strip = generator_spectrum_region(flow_by_name("hyp-auto"), 2.0);
    BorelMeasure d1 = atom_measure({{1.0, cplx(1, 0)}});
    SpectralRegion ann = map_region_laplace(strip, d1, false, 255);
    double lo = 1e300, hi = 0.0;
    for (cplx p : ann.points) {
        lo = std::min(lo, std::abs(p));
        hi = std::max(hi, std::abs(p));
    }
    REQUIRE_NEAR(lo, std::exp(-0.5), 1e-12);
    REQUIRE_NEAR(hi, std::exp(0.5), 1e-12);
    REQUIRE(ann.resolution > 0.0);

    BorelMeasure d0 = atom_measure({{0.0, cplx(1, 0)}});
    SpectralRegion ones = map_region_laplace(strip, d0, true, 63);
    for (cplx p : ones.points) REQUIRE_CNEAR(p, cplx(1, 0), 1e-15);

    // The exponential density needs Re z > -omega_rho across the region.
    SpectralRegion neg = negate_region(generator_spectrum_region(flow_by_name("affine"), 2.0));
    bool threw = false;
    try {
        map_region_laplace(neg, exp_density_measure(cplx(0.3, 0)), false, 127);
    } catch (const std::domain_error& e) {
        threw = true;
        REQUIRE(std::string(e.what()).find("sample") != std::string::npos);
    }
    REQUIRE(threw);
}

static void test_semigroup_regions_and_radius() {
    SpectralRegion d = semigroup_spectrum_region(flow_by_name("affine"), 2.0, 1.0);
    REQUIRE(d.kind == RegionKind::disk);
    REQUIRE_NEAR(d.radius, std::exp(0.5), 1e-15);
    SpectralRegion an = semigroup_spectrum_region(flow_by_name("hyp-auto"), 2.0, 1.0);
    REQUIRE(an.kind == RegionKind::annulus);
    REQUIRE_NEAR(an.r_in, std::exp(-0.5), 1e-15);
    REQUIRE_NEAR(an.r_out, std::exp(0.5), 1e-15);
    SpectralRegion ci = semigroup_spectrum_region(flow_by_name("para-auto"), 2.0, 1.0);
    REQUIRE(ci.kind == RegionKind::circle);
    REQUIRE_NEAR(ci.radius, 1.0, 0.0);
    SpectralRegion pt = semigroup_spectrum_region(flow_by_name("affine"), 2.0, 0.0);
    REQUIRE(pt.radius == 0.0);
    REQUIRE_CNEAR(pt.center, cplx(1, 0), 0.0);
    REQUIRE_THROWS_DOMAIN(semigroup_spectrum_region(flow_by_name("elliptic-rot"), 2.0, 1.0));

    REQUIRE_NEAR(spectral_radius_formula(flow_by_name("affine"), 2.0, 1.0), std::exp(0.5), 1e-15);
    REQUIRE_NEAR(spectral_radius_formula(flow_by_name("hyp-auto"), 4.0, 2.0), std::exp(0.5),
                 1e-15);
    for (const char* nm : {"affine", "para-auto", "elliptic-pow"})
        REQUIRE_NEAR(spectral_radius_formula(flow_by_name(nm), 2.0, 0.0), 1.0, 0.0);
    REQUIRE_THROWS_DOMAIN(spectral_radius_formula(flow_by_name("para-auto"), 2.0, 1.0));
}

static void test_sigma_min() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = cplx(3, 0);
    m(1, 1) = cplx(-4, 0);
    m(2, 2) = cplx(0, 5);
    REQUIRE_NEAR(sigma_min(m), 3.0, 1e-11);
    m(1, 1) = cplx(0, 0);  // exactly singular
    REQUIRE_NEAR(sigma_min(m), 0.0, 0.0);

    OperatorMatrix id = identity_matrix(6);
    cplx z(0.25, 0.25);
    REQUIRE_NEAR(sigma_min_shifted(id, z), std::abs(cplx(1, 0) - z), 1e-11);
}

static void test_pseudospectrum_grid() {
    OperatorMatrix id = identity_matrix(10);
    PseudospectrumGrid one = pseudospectrum_grid(id, 0.0, 0.0, 0.0, 0.0, 1, 1);
    REQUIRE(one.values.size() == 1);
    REQUIRE_NEAR(one.values[0], 1.0, 1e-12);

    OperatorMatrix c = cesaro_matrix(24);
    PseudospectrumGrid g = pseudospectrum_grid(c, -0.5, 2.5, -1.5, 1.5, 7, 5);
    REQUIRE(g.values.size() == 35);
    for (double v : g.values) REQUIRE(std::isfinite(v) && v >= 0.0);
    REQUIRE_NEAR(g.values[3 * 7 + 2], sigma_min_shifted(c, g.z_at(2, 3)), 1e-12);

    REQUIRE_THROWS_DOMAIN(pseudospectrum_grid(c, -1.0, 1.0, -1.0, 1.0, 401, 10));
    REQUIRE_THROWS_DOMAIN(pseudospectrum_grid(c, 1.0, -1.0, -1.0, 1.0, 10, 10));
}

static void test_pseudospectral_radius() {
    double r_id = pseudospectral_radius(identity_matrix(6), 0.1);
    REQUIRE(r_id >= 1.085 && r_id <= 1.105);

    double r_d = pseudospectral_radius(diag_matrix({cplx(0, 0), cplx(2, 0)}), 0.01);
    REQUIRE(r_d >= 1.995 && r_d <= 2.015);

    // A spectrum tucked between the sweep angles is honestly reported as 0.
    double off_angle = kPi / 96.0;  // half the angular spacing
    double r_miss = pseudospectral_radius(diag_matrix({2.0 * std::polar(1.0, off_angle)}), 0.01);
    REQUIRE(r_miss == 0.0);
}

static void test_local_radius_trace() {
    OperatorMatrix c = cesaro_matrix(256);
    CoeffVector e0(257, cplx(0, 0));
    e0[0] = cplx(1, 0);
    LocalRadiusTrace tr = local_radius_trace(c, e0, 20, 1);
    REQUIRE(tr.r.size() == 20);
    REQUIRE(tr.exact_truncation);

    // Independent recurrence for the same orbit norms.
    std::vector<double> y(257, 0.0);
    y[0] = 1.0;
    for (std::size_t n = 1; n <= 20; ++n) {
        for (std::size_t k = 0; k < y.size(); ++k) {
            double prev = k == 0 ? 0.0 : y[k - 1];
            y[k] = (static_cast<double>(k) * prev + y[k]) / static_cast<double>(k + 1);
        }
        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        double oracle = std::pow(std::sqrt(nrm), 1.0 / static_cast<double>(n));
        REQUIRE(std::abs(tr.r[n - 1] - oracle) / oracle <= 1e-10);
    }

    // Any renormalization schedule gives the same trace.
    LocalRadiusTrace tr5 = local_radius_trace(c, e0, 20, 5);
    LocalRadiusTrace tr0 = local_radius_trace(c, e0, 20, 0);
    for (std::size_t n = 0; n < 20; ++n) {
        REQUIRE(std::abs(tr.r[n] - tr5.r[n]) / tr.r[n] <= 1e-10);
        REQUIRE(std::abs(tr.r[n] - tr0.r[n]) / tr.r[n] <= 1e-10);
    }

    REQUIRE_THROWS_DOMAIN(local_radius_trace(c, CoeffVector(5), 10, 1));
    REQUIRE_THROWS_DOMAIN(local_radius_trace(c, CoeffVector(257, cplx(0, 0)), 10, 1));
}

static void test_mu_grid_and_eigenfield() {
    MuGrid grid = rect_mu_grid(-1.0, 1.0, -0.5, 0.5, 3, 2);
    REQUIRE(grid.points.size() == 6);
    REQUIRE_CNEAR(grid.points[1 * 3 + 2], cplx(1.0, 0.5), 1e-15);

    Semiflow affine = flow_by_name("affine");
    BorelMeasure nu = exp_density_measure(cplx(1, 0));
    MuGrid small = rect_mu_grid(-0.5, 0.0, -0.2, 0.2, 2, 2);
    EigenfieldReport rep = eigenfield_witness(affine, nu, small, 2.0, EigenfieldMode::pointwise);
    REQUIRE(rep.residuals_pass);
    REQUIRE(rep.max_residual <= kEigenfieldTol);
    REQUIRE(rep.analyticity_pass);
    REQUIRE(rep.eigenvalue.size() == 4);
    // Eigenvalue at mu is 1/(1 - mu) for the unit-rate exponential weight.
    REQUIRE_CNEAR(rep.eigenvalue[0], 1.0 / (cplx(1, 0) - small.points[0]), 1e-11);

    // mu outside the admissible half-plane is rejected up front.
    MuGrid outside = rect_mu_grid(0.6, 0.8, 0.0, 0.0, 2, 1);
    REQUIRE_THROWS_DOMAIN(eigenfield_witness(affine, nu, outside, 2.0,
                                             EigenfieldMode::pointwise));
    REQUIRE_THROWS_DOMAIN(eigenfield_witness(flow_by_name("elliptic-rot"), nu, small, 2.0,
                                             EigenfieldMode::pointwise));
}

int main() {
    test_region_contains();
    test_boundary_invariant();
    test_negate_region();
    test_generator_regions();
    test_resolvent_map();
    test_laplace_map();
    test_semigroup_regions_and_radius();
    test_sigma_min();
    test_pseudospectrum_grid();
    test_pseudospectral_radius();
    test_local_radius_trace();
    test_mu_grid_and_eigenfield();
    return testkit::finish("test_spectral");
}

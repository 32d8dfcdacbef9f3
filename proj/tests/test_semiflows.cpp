#include "subspec/semiflows.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "test_common.hpp"

using namespace subspec;

static void test_catalog_lookup() {
    for (const char* nm : {"affine", "hyp-auto", "para-auto", "elliptic-rot", "elliptic-pow"}) {
        Semiflow f = flow_by_name(nm);
        REQUIRE(f.name == nm);
    }
    REQUIRE_THROWS_DOMAIN(flow_by_name("moebius"));
    REQUIRE(flow_by_name("affine").classification == FlowClass::hyperbolic);
    REQUIRE(flow_by_name("hyp-auto").classification == FlowClass::hyperbolic);
    REQUIRE(flow_by_name("para-auto").classification == FlowClass::parabolic);
    REQUIRE(flow_by_name("elliptic-rot").classification == FlowClass::elliptic);
    REQUIRE(flow_by_name("elliptic-pow").classification == FlowClass::elliptic);
}

static void test_affine_closed_form() {
    Semiflow f = flow_by_name("affine");
    double t = 0.7;
    cplx z(0.3, 0.2);
    double a = std::exp(-t);
    REQUIRE_CNEAR(flow_phi(f, t, z), a * z + (1.0 - a), 1e-15);
    REQUIRE_CNEAR(f.G(z), cplx(1.0, 0.0) - z, 0.0);
    REQUIRE(f.G_poly.has_value());
    REQUIRE(f.G_poly->size() == 2);
}

static void test_preconditions() {
    Semiflow f = flow_by_name("affine");
    REQUIRE_THROWS_DOMAIN(flow_phi(f, -0.1, cplx(0, 0)));
    REQUIRE_THROWS_DOMAIN(flow_phi(f, 1.0, cplx(1.0, 0.0)));
    REQUIRE_THROWS_DOMAIN(koenigs(flow_by_name("elliptic-rot"), cplx(0.1, 0)));
    REQUIRE_THROWS_DOMAIN(koenigs(f, cplx(0, 1.0)));
    REQUIRE_THROWS_DOMAIN(scale_koenigs(f, 0.0));
    REQUIRE_THROWS_DOMAIN(scale_koenigs(flow_by_name("elliptic-pow"), 2.0));
}

static void test_koenigs_flow_consistency() {
    // phi_t = h_inv(h + t) where Koenigs data exists.
    for (const char* nm : {"affine", "hyp-auto", "para-auto"}) {
        Semiflow f = flow_by_name(nm);
        REQUIRE(f.has_koenigs);
        for (cplx z : {cplx(0.0, 0.0), cplx(0.4, -0.3), cplx(-0.6, 0.1)}) {
            for (double t : {0.25, 1.5}) {
                cplx via_koenigs = koenigs_inv(f, koenigs(f, z) + t);
                REQUIRE_CNEAR(via_koenigs, flow_phi(f, t, z), 1e-12);
            }
            REQUIRE_CNEAR(koenigs_inv(f, koenigs(f, z)), z, 1e-12);
        }
        REQUIRE_CNEAR(koenigs(f, cplx(0, 0)), cplx(0, 0), 1e-15);
    }
}

static void test_elliptic_members() {
    Semiflow rot = flow_by_name("elliptic-rot");
    REQUIRE(!rot.has_koenigs);
    REQUIRE_CNEAR(rot.dw_point, cplx(0, 0), 0.0);
    // Interior fixed point: phi_t(0) = 0.
    REQUIRE_CNEAR(flow_phi(rot, 1.3, cplx(0, 0)), cplx(0, 0), 1e-15);

    Semiflow pow = flow_by_name("elliptic-pow");
    REQUIRE(!pow.G_poly.has_value());
    cplx z(0.3, -0.4);
    cplx lhs = flow_phi(pow, 0.9, flow_phi(pow, 0.6, z));
    REQUIRE_CNEAR(lhs, flow_phi(pow, 1.5, z), 1e-13);
}

static void test_classification_data() {
    FlowClassification ca = classify(flow_by_name("affine"));
    REQUIRE(ca.classification == FlowClass::hyperbolic);
    REQUIRE(ca.gamma.has_value());
    REQUIRE_NEAR(*ca.gamma, kPi, 1e-15);
    REQUIRE(!ca.beta_max.has_value());
    REQUIRE(ca.contains_strip.has_value() && !*ca.contains_strip);

    FlowClassification ch = classify(flow_by_name("hyp-auto"));
    REQUIRE(ch.beta_max.has_value());
    REQUIRE_NEAR(*ch.beta_max, kPi, 1e-15);
    REQUIRE(ch.contains_strip.has_value() && *ch.contains_strip);
}

static void test_strip_width_estimates() {
    StripWidthEstimate est = estimate_strip_widths(flow_by_name("hyp-auto"));
    REQUIRE_NEAR(est.gamma_hat, kPi, 0.05);
    REQUIRE(est.beta_hat.has_value());
    REQUIRE_NEAR(*est.beta_hat, kPi, 0.05);

    StripWidthEstimate est_a = estimate_strip_widths(flow_by_name("affine"));
    REQUIRE_NEAR(est_a.gamma_hat, kPi, 0.05);
    REQUIRE(!est_a.beta_hat.has_value());
}

static void test_scale_koenigs() {
    Semiflow scaled = scale_koenigs(flow_by_name("affine"), 2.0);
    REQUIRE(scaled.gamma.has_value());
    REQUIRE_NEAR(*scaled.gamma, 2.0 * kPi, 1e-15);
    cplx z(0.25, 0.45);
    double t = 0.8;
    REQUIRE_CNEAR(koenigs(scaled, flow_phi(scaled, t, z)) - koenigs(scaled, z), cplx(t, 0),
                  1e-12);
}

int main() {
    test_catalog_lookup();
    test_affine_closed_form();
    test_preconditions();
    test_koenigs_flow_consistency();
    test_elliptic_members();
    test_classification_data();
    test_strip_width_estimates();
    test_scale_koenigs();
    return testkit::finish("test_semiflows");
}

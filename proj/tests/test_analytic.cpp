#include "subspec/analytic.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "subspec/quadrature.hpp"
#include "test_common.hpp"

using namespace subspec;

static void test_gauss_legendre_exactness() {
    // A 16-point rule integrates degree 31 exactly; map [-1,1] to [0,1].
    const QuadRule& rule = gauss_legendre(16);
    REQUIRE(rule.nodes.size() == 16);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    REQUIRE_NEAR(wsum, 2.0, 1e-14);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double x = 0.5 * (rule.nodes[i] + 1.0);
        acc += 0.5 * rule.weights[i] * std::pow(x, 31);
    }
    REQUIRE_NEAR(acc, 1.0 / 32.0, 1e-15);
}

static void test_panel_rules() {
    std::vector<double> breaks = graded_unit_breaks(4);
    std::vector<double> expect = {1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 1.0};
    REQUIRE(breaks == expect);
    PanelRule rule = composite_panels({0.0, 0.5, 1.0}, 8);
    REQUIRE(rule.nodes.size() == 16);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    REQUIRE_NEAR(acc, 1.0 / 3.0, 1e-15);
    std::vector<double> hb = halfline_breaks(3, 5.0);
    REQUIRE(hb.front() == 0.0);
    REQUIRE(hb.back() == 5.0);
}

static void test_eval_and_derivative() {
    CoeffVector f = {cplx(1, 0), cplx(3, 0), cplx(3, 0), cplx(1, 0)};  // (1+z)^3
    cplx z(0.2, 0.1);
    REQUIRE_CNEAR(eval(f, z), std::pow(cplx(1.2, 0.1), 3), 1e-15);
    CoeffVector d = derivative(f);
    REQUIRE(d.size() == 3);
    REQUIRE_CNEAR(d[0], cplx(3, 0), 0.0);
    REQUIRE_CNEAR(d[1], cplx(6, 0), 0.0);
    REQUIRE_CNEAR(d[2], cplx(3, 0), 0.0);
}

static void test_coeff_extraction_round_trip() {
    const int N = 8;
    CirclePlan plan = CirclePlan::for_order(N);
    REQUIRE(plan.sample_count == 36);
    CoeffVector f(N + 1);
    for (int k = 0; k <= N; ++k) f[k] = cplx(k + 1, 0.5 * k);
    std::vector<cplx> samples(plan.sample_count);
    for (int j = 0; j < plan.sample_count; ++j)
        samples[j] = eval(f, std::polar(plan.radius, 2.0 * kPi * j / plan.sample_count));
    ExtractedCoeffs out = coeffs_from_samples(samples, plan, N);
    REQUIRE(out.coeffs.size() == static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) REQUIRE_CNEAR(out.coeffs[k], f[k], 1e-12);
}

static void test_aliasing_of_high_modes() {
    // z^9 has no mass on indices 0..8; extraction must stay within the
    // reported alias bound.
    const int N = 8;
    CirclePlan plan = CirclePlan::for_order(N);
    std::vector<cplx> samples(plan.sample_count);
    for (int j = 0; j < plan.sample_count; ++j) {
        cplx z = std::polar(plan.radius, 2.0 * kPi * j / plan.sample_count);
        samples[j] = std::pow(z, 9);
    }
    ExtractedCoeffs out = coeffs_from_samples(samples, plan, N);
    for (int k = 0; k <= N; ++k) REQUIRE(std::abs(out.coeffs[k]) <= out.aliasing_bound + 1e-15);
}

static void test_norms() {
    CoeffVector f = {cplx(3, 0), cplx(0, 4)};
    REQUIRE_NEAR(h2_norm(f), 5.0, 1e-15);
    // Parseval at radius r: M_2(r)^2 = sum |c_n|^2 r^{2n}.
    CoeffVector g = {cplx(1, 0), cplx(2, 0), cplx(0.5, 0)};
    CirclePlan plan = CirclePlan::for_order(2);
    double r = plan.radius;
    double expect = std::sqrt(1.0 + 4.0 * r * r + 0.25 * std::pow(r, 4));
    REQUIRE_NEAR(hp_mean(g, 2.0, plan), expect, 1e-13);
    // p = 4 mean of the constant 1 is 1.
    CoeffVector one = {cplx(1, 0)};
    REQUIRE_NEAR(hp_mean(one, 4.0, CirclePlan::for_order(0)), 1.0, 1e-14);
}

static void test_binomial_coeffs() {
    // (1-z)^{-2} = sum (n+1) z^n.
    BinomialCoeffs b2(cplx(2.0, 0.0));
    REQUIRE_CNEAR(b2(0), cplx(1, 0), 0.0);
    REQUIRE_CNEAR(b2(3), cplx(4, 0), 1e-15);
    REQUIRE_CNEAR(b2(7), cplx(8, 0), 1e-14);
    // (1-z)^{-1}: all ones.
    BinomialCoeffs b1(cplx(1.0, 0.0));
    REQUIRE_CNEAR(b1(5), cplx(1, 0), 1e-15);
}

static void test_membership_classifier() {
    std::vector<double> schedule = default_radii_schedule();
    REQUIRE(schedule.size() == 12);
    REQUIRE_NEAR(schedule.front(), 1.0 - 1.0 / 8.0, 1e-15);
    REQUIRE_NEAR(schedule.back(), 1.0 - std::pow(2.0, -14.0), 1e-15);

    BinomialCoeffs inside(cplx(0.25, 0.0));
    MembershipReport in_rep =
        hp_membership_classifier([&inside](int n) { return inside(n); }, 2.0, schedule);
    REQUIRE(in_rep.verdict == Membership::member);
    REQUIRE(!in_rep.overflow);

    BinomialCoeffs outside(cplx(0.75, 0.0));
    MembershipReport out_rep =
        hp_membership_classifier([&outside](int n) { return outside(n); }, 2.0, schedule);
    REQUIRE(out_rep.verdict == Membership::nonmember);
    REQUIRE(out_rep.slope > in_rep.slope);
    REQUIRE(out_rep.radii.size() == schedule.size());
}

int main() {
    test_gauss_legendre_exactness();
    test_panel_rules();
    test_eval_and_derivative();
    test_coeff_extraction_round_trip();
    test_aliasing_of_high_modes();
    test_norms();
    test_binomial_coeffs();
    test_membership_classifier();
    return testkit::finish("test_analytic");
}

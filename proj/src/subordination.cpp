#include "subspec/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "subspec/quadrature.hpp"

namespace subspec {

namespace {

constexpr double kLaplaceTol = 1e-12;

// 64 log-spaced abscissas on [2^-6, 2^6] for envelope spot checks.
std::vector<double> envelope_spot_grid() {
    std::vector<double> ts(64);
    for (int i = 0; i < 64; ++i) ts[i] = std::exp2(-6.0 + 12.0 * i / 63.0);
    return ts;
}

// Composition compression at time t: closed affine form when available,
// sampled route otherwise. Unlike the public sampled factory, this tolerates
// samples that round onto the unit circle: automorphism orbits approach the
// boundary fixed point within one ulp at large t while the true modulus
// stays below 1, and the coefficient extraction remains valid there.
Eigen::MatrixXcd compression_at(const Semiflow& flow, double t, int N) {
    if (flow.kind == FlowKind::affine_hyperbolic) {
        double a = std::exp(-t);
        return composition_matrix_affine(cplx(a, 0.0), cplx(1.0 - a, 0.0), N).entries;
    }
    CirclePlan plan = CirclePlan::for_order(N);
    const int K = plan.sample_count;
    std::vector<cplx> base(K), pw(K, cplx(1.0, 0.0));
    for (int j = 0; j < K; ++j) {
        double ang = 2.0 * kPi * j / K;
        cplx z = plan.radius * cplx(std::cos(ang), std::sin(ang));
        base[j] = flow.phi(t, z);
        if (!(std::abs(base[j]) <= 1.0 + 1e-12))
            throw std::domain_error("subordinate_matrix: flow sample escaped the closed disc");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) {
        ExtractedCoeffs col = coeffs_from_samples(pw, plan, N);
        for (int row = 0; row <= N; ++row) m(row, k) = col.coeffs[row];
        if (k < N)
            for (int j = 0; j < K; ++j) pw[j] *= base[j];
    }
    return m;
}

// Segment rule shared by averaging_apply and general_subordinated_apply:
// graded panels on [0, 1] with a leading stub panel whose interior nodes
// keep u^{lambda-1} integrable evaluations away from 0.
const PanelRule& segment_rule() {
    static const PanelRule rule = [] {
        std::vector<double> breaks = graded_unit_breaks(60);
        breaks.insert(breaks.begin(), 0.0);
        return composite_panels(breaks, 16);
    }();
    return rule;
}

}  // namespace

bool has_density(const BorelMeasure& nu) { return static_cast<bool>(nu.density); }

void validate_measure(const BorelMeasure& nu) {
    for (const auto& [t, w] : nu.atoms) {
        (void)w;
        if (!(t >= 0.0)) throw std::domain_error("validate_measure: atom time must be >= 0");
    }
    if (!(nu.margin_delta > 0.0))
        throw std::domain_error("validate_measure: margin_delta must be > 0");
    if (has_density(nu)) {
        if (!(nu.M_rho > 0.0))
            throw std::domain_error("validate_measure: density declared without a positive M_rho");
        for (double t : envelope_spot_grid()) {
            double bound = 1.01 * nu.M_rho * std::exp(-nu.omega_rho * t);
            if (!(std::abs(nu.density(t)) <= bound))
                throw std::domain_error("validate_measure: declared envelope fails the spot check");
        }
    } else if (nu.atoms.empty()) {
        throw std::domain_error("validate_measure: measure has neither atoms nor a density");
    }
}

BorelMeasure atom_measure(std::vector<std::pair<double, cplx>> atoms, double margin_delta) {
    BorelMeasure nu;
    nu.atoms = std::move(atoms);
    nu.margin_delta = margin_delta;
    validate_measure(nu);
    return nu;
}

BorelMeasure exp_density_measure(cplx lambda, double margin_delta) {
    BorelMeasure nu;
    nu.density = [lambda](double t) { return std::exp(-lambda * t); };
    nu.density_sector = [lambda](cplx z) { return std::exp(-lambda * z); };
    nu.M_rho = 1.0;
    nu.omega_rho = lambda.real();
    nu.margin_delta = margin_delta;
    nu.density_name = "exp";
    nu.density_lambda = lambda;
    validate_measure(nu);
    return nu;
}

BorelMeasure exp_poly_density_measure(double power, cplx lambda, double margin_delta) {
    if (!(power > -1.0))
        throw std::domain_error("exp_poly_density_measure: power must be > -1 for integrability");
    BorelMeasure nu;
    nu.density = [power, lambda](double t) {
        return std::pow(t, power) * std::exp(-lambda * t);
    };
    nu.density_sector = [power, lambda](cplx z) {
        return std::pow(z, cplx(power, 0.0)) * std::exp(-lambda * z);
    };
    // Envelope: for positive powers, give up a slice sigma of the decay rate
    // so that t^power e^{-sigma t} <= (power/(e sigma))^power holds for all
    // t, keeping the tail bound honest beyond the spot grid. Nonpositive
    // powers only peak at the left end of the grid, where the quadrature
    // (not the envelope) handles the integrand.
    double sigma = 0.0;
    if (power > 0.0 && lambda.real() > 0.0) sigma = std::min(0.1, 0.25 * lambda.real());
    nu.omega_rho = lambda.real() - sigma;
    double peak;
    if (power > 0.0) {
        peak = sigma > 0.0 ? std::pow(power / (std::exp(1.0) * sigma), power)
                           : std::pow(64.0, power);
    } else {
        peak = std::pow(std::exp2(-6.0), power);
    }
    nu.M_rho = std::max(1.0, peak);
    nu.margin_delta = margin_delta;
    nu.density_name = "exp-poly";
    nu.density_lambda = lambda;
    nu.density_power = power;
    validate_measure(nu);
    return nu;
}

BorelMeasure measure_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::domain_error(std::string("measure_from_json_text: parse failure: ") + e.what());
    }
    double margin = j.value("margin_delta", 0.25);
    BorelMeasure nu;
    bool any = false;
    if (j.contains("density")) {
        const auto& d = j.at("density");
        std::string name = d.at("name").get<std::string>();
        auto lam = d.at("lambda");
        cplx lambda(lam.at(0).get<double>(), lam.at(1).get<double>());
        if (name == "exp") {
            nu = exp_density_measure(lambda, margin);
        } else if (name == "exp-poly") {
            nu = exp_poly_density_measure(d.at("power").get<double>(), lambda, margin);
        } else {
            throw std::domain_error("measure_from_json_text: unknown density name: " + name);
        }
        any = true;
    }
    nu.margin_delta = margin;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            nu.atoms.emplace_back(a.at(0).get<double>(),
                                  cplx(a.at(1).get<double>(), a.at(2).get<double>()));
        }
        any = true;
    }
    if (!any)
        throw std::domain_error("measure_from_json_text: need at least one of atoms, density");
    validate_measure(nu);
    return nu;
}

std::pair<double, double> h2_growth_bound(FlowKind kind) {
    switch (kind) {
        // ||C_phi|| <= sqrt((1 + |phi(0)|) / (1 - |phi(0)|)) gives:
        case FlowKind::affine_hyperbolic: return {2.0, 0.5};        // sqrt(2) e^{t/2}
        case FlowKind::hyperbolic_automorphism: return {1.0, 0.5};  // e^{t/2} exactly
        case FlowKind::parabolic_automorphism: return {4.0, 0.25};  // 2t+1 <= 4 e^{t/4}
        case FlowKind::elliptic_rotationlike: return {1.0, 0.0};    // fixes 0: contraction
        case FlowKind::elliptic_power: return {1.0, 0.0};           // fixes 0: contraction
    }
    return {1.0, 0.0};
}

void require_admissible(const Semiflow& flow, const BorelMeasure& nu) {
    validate_measure(nu);
    if (!has_density(nu)) return;  // compact support: every moment is finite
    auto [M0, omega0] = h2_growth_bound(flow.kind);
    (void)M0;
    if (!(nu.omega_rho > omega0 + nu.margin_delta))
        throw std::domain_error(
            "require_admissible: density decay omega_rho must exceed omega0 + margin_delta");
}

QuadraturePlan make_bochner_plan(const Semiflow& flow, const BorelMeasure& nu, int N, double tol) {
    if (N < 0) throw std::domain_error("make_bochner_plan: N must be >= 0");
    if (!(tol > 0.0)) throw std::domain_error("make_bochner_plan: tolerance must be > 0");
    require_admissible(flow, nu);
    QuadraturePlan plan;
    plan.tolerance = tol;
    double atom_horizon = 0.0;
    for (const auto& [t, w] : nu.atoms) {
        (void)w;
        atom_horizon = std::max(atom_horizon, t);
    }
    if (!has_density(nu)) {
        plan.T_max = atom_horizon;  // atoms are added exactly; no panels needed
        return plan;
    }
    auto [M0, omega0] = h2_growth_bound(flow.kind);
    double a = nu.omega_rho - omega0;  // > margin_delta > 0 by admissibility
    double T = std::log(10.0 * M0 * nu.M_rho / (a * tol)) / a;
    plan.T_max = std::max(std::ceil(T), 2.0);
    plan.tail_bound = M0 * nu.M_rho * std::exp(-a * plan.T_max) / a;
    int fine = 4;
    while ((1 << fine) < N + 1) ++fine;
    fine += 4;
    plan.panel_breaks = halfline_breaks(fine, plan.T_max);
    plan.panels = static_cast<int>(plan.panel_breaks.size()) - 1;
    return plan;
}

cplx laplace_transform(const BorelMeasure& nu, cplx z) {
    validate_measure(nu);
    cplx acc(0.0, 0.0);
    for (const auto& [t, w] : nu.atoms) acc += w * std::exp(-z * t);
    if (!has_density(nu)) return acc;
    double a = nu.omega_rho + z.real();
    if (!(a > 0.0))
        throw std::domain_error("laplace_transform: Re z <= -omega_rho, integral diverges");
    double T = std::log(10.0 * nu.M_rho / (a * kLaplaceTol)) / a;
    // Deep grading near 0 keeps power-law density factors (t^p, p > -1)
    // inside the panel resolution.
    PanelRule rule = composite_panels(halfline_breaks(60, std::max(std::ceil(T), 2.0)), 24);
    cplx sum(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double t = rule.nodes[i];
        sum += rule.weights[i] * nu.density(t) * std::exp(-z * t);
    }
    return acc + sum;
}

OperatorMatrix subordinate_matrix(const Semiflow& flow, const BorelMeasure& nu, int N,
                                  const QuadraturePlan& plan) {
    if (N < 0) throw std::domain_error("subordinate_matrix: N must be >= 0");
    require_admissible(flow, nu);
    if (plan.tolerance > 0.0 && plan.tail_bound > plan.tolerance) {
        auto [M0, omega0] = h2_growth_bound(flow.kind);
        double a = nu.omega_rho - omega0;
        double T = std::log(10.0 * M0 * nu.M_rho / (a * plan.tolerance)) / a;
        throw std::domain_error("subordinate_matrix: plan tail bound exceeds the tolerance; "
                                "required T_max ~ " + std::to_string(std::ceil(T)));
    }
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    if (has_density(nu)) {
        if (plan.panel_breaks.size() < 2)
            throw std::domain_error("subordinate_matrix: plan has no panels for the density");
        PanelRule rule = composite_panels(plan.panel_breaks, plan.nodes_per_panel);
        // Nodes whose density factor cannot move any entry past the budget
        // are skipped; compression entries are O(1), so the total skipped
        // mass stays under tolerance / 100.
        double skip_tol =
            plan.tolerance > 0.0 ? 0.005 * plan.tolerance / rule.nodes.size() : 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double t = rule.nodes[i];
            cplx coef = rule.weights[i] * nu.density(t);
            if (std::abs(coef) <= skip_tol) continue;
            acc += coef * compression_at(flow, t, N);
        }
    }
    for (const auto& [t, w] : nu.atoms) acc += w * compression_at(flow, t, N);

    OperatorMatrix out;
    out.order = N;
    out.entries = std::move(acc);
    if (flow.kind == FlowKind::affine_hyperbolic) {
        out.structure = MatrixStructure::upper;
        out.exactness = CompressionExactness::exact_upper;
    } else {
        out.structure = MatrixStructure::general;
        out.exactness = CompressionExactness::approximate;
    }
    validate_matrix(out);
    return out;
}

AveragingResult averaging_apply(const Semiflow& flow, cplx lambda,
                                const std::function<cplx(cplx)>& f, cplx z) {
    if (!flow.has_koenigs)
        throw std::domain_error("averaging_apply: flow has no Koenigs data");
    if (std::abs(z) >= 1.0) throw std::domain_error("averaging_apply: |z| >= 1");
    if (!(lambda.real() > 0.0))
        throw std::domain_error("averaging_apply: Re lambda <= 0, endpoint not integrable");
    AveragingResult res;
    res.spectral_caveat = lambda.real() <= h2_growth_bound(flow.kind).second;
    const PanelRule& rule = segment_rule();
    cplx hz = flow.h(z);
    cplx sum(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double u = rule.nodes[i];
        cplx s = 1.0 + (z - 1.0) * u;
        // The deepest stub nodes can round s onto the endpoint itself, where
        // h and 1/G are singular; the true contribution there is below the
        // rounding scale whenever Re lambda is positive, so the node is
        // dropped rather than evaluated as 0 times infinity.
        if (s == cplx(1.0, 0.0)) continue;
        // h'(s) = 1/G(s) by the conjugacy relation.
        sum += rule.weights[i] * std::exp(lambda * (hz - flow.h(s))) * f(s) / flow.G(s);
    }
    res.value = (1.0 - z) * sum;
    return res;
}

cplx general_subordinated_apply(const Semiflow& flow, const std::function<cplx(cplx)>& rho,
                                const std::function<cplx(cplx)>& f, cplx z) {
    if (!flow.has_koenigs)
        throw std::domain_error("general_subordinated_apply: flow has no Koenigs data");
    if (std::abs(z) >= 1.0) throw std::domain_error("general_subordinated_apply: |z| >= 1");
    const PanelRule& rule = segment_rule();
    cplx hz = flow.h(z);
    cplx sum(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double u = rule.nodes[i];
        cplx s = 1.0 + (z - 1.0) * u;
        // Same endpoint-collapse guard as the resolvent rule above.
        if (s == cplx(1.0, 0.0)) continue;
        sum += rule.weights[i] * rho(flow.h(s) - hz) * f(s) / flow.G(s);
    }
    return (1.0 - z) * sum;
}

cplx subordinated_pointwise_apply(const Semiflow& flow, const BorelMeasure& nu,
                                  const std::function<cplx(cplx)>& f, cplx z) {
    validate_measure(nu);
    if (std::abs(z) >= 1.0) throw std::domain_error("subordinated_pointwise_apply: |z| >= 1");
    cplx acc(0.0, 0.0);
    if (has_density(nu)) {
        if (!nu.density_sector)
            throw std::domain_error("subordinated_pointwise_apply: density lacks a sector extension");
        acc += general_subordinated_apply(flow, nu.density_sector, f, z);
    }
    for (const auto& [t, w] : nu.atoms) acc += w * f(flow_phi(flow, t, z));
    return acc;
}

RegularityReport check_measure_regularity(const BorelMeasure& nu, double omega0, double delta,
                                          double eta, double xi, int samples) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::domain_error("check_measure_regularity: need 0 < eta <= 1");
    if (!(xi > 0.0 && xi < 1.0))
        throw std::domain_error("check_measure_regularity: need 0 < xi < 1");
    if (samples < 8) throw std::domain_error("check_measure_regularity: need samples >= 8");

    RegularityReport rep;
    if (!has_density(nu)) {
        rep.verdict = RegularityVerdict::fail;
        rep.reason = "measure has no density to extend";
        return rep;
    }
    if (!(nu.omega_rho > omega0 + delta)) {
        rep.verdict = RegularityVerdict::fail;
        rep.reason = "exponential moment condition fails: omega_rho <= omega0 + delta";
        return rep;
    }
    if (!nu.density_sector) {
        rep.verdict = RegularityVerdict::fail;
        rep.reason = "density lacks a sector extension";
        return rep;
    }

    // Sup of both sector quantities over log-spaced moduli 2^lo .. 2^hi and
    // five rays filling |arg z| <= xi pi/2.
    auto scan = [&](int count, double lo, double hi, double& sup_in, double& sup_out,
                    cplx& wit_in, cplx& wit_out) {
        static const double fracs[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
        sup_in = 0.0;
        sup_out = 0.0;
        for (int i = 0; i < count; ++i) {
            double r = std::exp2(lo + (hi - lo) * i / (count - 1));
            for (double frac : fracs) {
                double ang = frac * xi * kPi / 2.0;
                cplx zz = r * cplx(std::cos(ang), std::sin(ang));
                cplx val = nu.density_sector(zz);
                if (r <= 1.0) {
                    double q = std::abs(std::pow(zz, cplx(1.0 - eta, 0.0)) * val);
                    if (q > sup_in) { sup_in = q; wit_in = zz; }
                }
                if (r >= 1.0) {
                    double q = std::abs(std::pow(zz, cplx(1.0 + xi, 0.0)) *
                                        std::exp((omega0 + delta) * zz) * val);
                    if (q > sup_out) { sup_out = q; wit_out = zz; }
                }
            }
        }
    };

    double base_in, base_out;
    cplx w_in, w_out;
    scan(samples, -6.0, 6.0, base_in, base_out, w_in, w_out);
    scan(2 * samples, -7.0, 7.0, rep.sup_inner, rep.sup_outer, rep.witness_inner,
         rep.witness_outer);
    rep.ratio_inner = base_in > 0.0 ? rep.sup_inner / base_in : 1.0;
    rep.ratio_outer = base_out > 0.0 ? rep.sup_outer / base_out : 1.0;

    bool finite = std::isfinite(rep.sup_inner) && std::isfinite(rep.sup_outer);
    if (!finite || rep.ratio_inner >= 10.0 || rep.ratio_outer >= 10.0) {
        rep.verdict = RegularityVerdict::fail;
        rep.reason = finite ? "supremum grows by >= 10x under sample refinement"
                            : "non-finite sector sample";
    } else if (rep.ratio_inner < 1.1 && rep.ratio_outer < 1.1) {
        rep.verdict = RegularityVerdict::pass;
        rep.reason = "both suprema finite and stable under refinement";
    } else {
        rep.verdict = RegularityVerdict::indeterminate;
        rep.reason = "supremum still drifting under refinement";
    }
    return rep;
}

}  // namespace subspec

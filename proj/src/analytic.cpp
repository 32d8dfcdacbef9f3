#include "subspec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subspec {

cplx eval(const CoeffVector& f, cplx z) {
    if (std::abs(z) > 1.0) throw std::domain_error("eval: |z| > 1 is outside the domain of validity");
    cplx acc(0.0, 0.0);
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * z + f[i];
    return acc;
}

CoeffVector derivative(const CoeffVector& f) {
    if (f.size() <= 1) return CoeffVector{cplx(0.0, 0.0)};
    CoeffVector out(f.size() - 1);
    for (std::size_t n = 0; n + 1 < f.size(); ++n) out[n] = static_cast<double>(n + 1) * f[n + 1];
    return out;
}

ExtractedCoeffs coeffs_from_samples(const std::vector<cplx>& samples,
                                    const CirclePlan& plan, int N) {
    const int K = plan.sample_count;
    if (static_cast<int>(samples.size()) != K)
        throw std::domain_error("coeffs_from_samples: sample count does not match plan");
    if (K < 2 * (N + 1))
        throw std::domain_error("coeffs_from_samples: K < 2(N+1) would alias retained coefficients");
    if (!(plan.radius > 0.0 && plan.radius < 1.0))
        throw std::domain_error("coeffs_from_samples: radius must lie in (0,1)");

    ExtractedCoeffs out;
    out.coeffs.assign(N + 1, cplx(0.0, 0.0));

    // Twiddle table w^{-m} for m = 0..K-1, reused across n.
    std::vector<cplx> tw(K);
    for (int m = 0; m < K; ++m) {
        double ang = -2.0 * kPi * m / K;
        tw[m] = cplx(std::cos(ang), std::sin(ang));
    }
    double max_s = 0.0;
    for (const cplx& s : samples) max_s = std::max(max_s, std::abs(s));

    double rinv = 1.0 / plan.radius;
    double scale = 1.0;  // r^{-n}
    for (int n = 0; n <= N; ++n) {
        cplx acc(0.0, 0.0);
        int idx = 0;
        for (int j = 0; j < K; ++j) {
            acc += samples[j] * tw[idx];
            idx += n;
            if (idx >= K) idx -= K;
        }
        out.coeffs[n] = acc * (scale / K);
        scale *= rinv;
    }
    double rK = std::pow(plan.radius, K);
    out.aliasing_bound = max_s * std::pow(plan.radius, K - N) / (1.0 - rK);
    return out;
}

double h2_norm(const CoeffVector& f) {
    double s = 0.0;
    for (const cplx& c : f) s += std::norm(c);
    return std::sqrt(s);
}

double hp_mean(const CoeffVector& f, double p, const CirclePlan& plan) {
    if (p < 1.0) throw std::domain_error("hp_mean: requires p >= 1");
    const int K = plan.sample_count;
    if (K <= 0) throw std::domain_error("hp_mean: plan has no samples");
    double acc = 0.0;
    for (int j = 0; j < K; ++j) {
        double ang = 2.0 * kPi * j / K;
        cplx z = plan.radius * cplx(std::cos(ang), std::sin(ang));
        acc += std::pow(std::abs(eval(f, z)), p);
    }
    return std::pow(acc / K, 1.0 / p);
}

std::vector<double> default_radii_schedule() {
    std::vector<double> r;
    for (int j = 3; j <= 14; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
    return r;
}

// M_2(r)^2 = sum |c_n|^2 r^{2n}, summed until terms are negligible.
static double m2_squared(const std::function<cplx(int)>& coeff_source, double r, bool& overflow) {
    double r2 = r * r;
    double pow_r2 = 1.0;
    double sum = 0.0;
    const int hard_cap = 4'000'000;
    for (int n = 0; n < hard_cap; ++n) {
        double term = std::norm(coeff_source(n)) * pow_r2;
        if (!std::isfinite(term)) {
            overflow = true;
            return sum;
        }
        sum += term;
        pow_r2 *= r2;
        if (n > 64 && term < 1e-18 * sum) break;
    }
    return sum;
}

MembershipReport hp_membership_classifier(const std::function<cplx(int)>& coeff_source,
                                          double p,
                                          const std::vector<double>& radii_schedule,
                                          const ClassifierOptions& opts) {
    if (radii_schedule.size() < 2) throw std::domain_error("classifier: schedule needs >= 2 radii");
    for (std::size_t i = 1; i < radii_schedule.size(); ++i) {
        if (!(radii_schedule[i] > radii_schedule[i - 1]) || !(radii_schedule[i] < 1.0))
            throw std::domain_error("classifier: schedule must increase strictly toward 1");
    }

    MembershipReport rep;
    for (double r : radii_schedule) {
        double mean;
        if (p == 2.0) {
            // Coefficient route is exact for p = 2 and avoids circle sums.
            mean = std::sqrt(m2_squared(coeff_source, r, rep.overflow));
        } else {
            // Truncate where |c_n| r^n is negligible, capped at desk scale.
            int Nr = static_cast<int>(std::min(42.0 / -std::log(r), 32768.0));
            CoeffVector f(Nr + 1);
            for (int n = 0; n <= Nr; ++n) f[n] = coeff_source(n);
            CirclePlan plan;
            plan.radius = r;
            plan.sample_count = 2 * (Nr + 1);
            mean = hp_mean(f, p, plan);
        }
        if (rep.overflow || !std::isfinite(mean)) {
            rep.overflow = true;
            rep.verdict = Membership::nonmember;
            return rep;
        }
        rep.radii.push_back(r);
        rep.log_means.push_back(std::log(std::max(mean, 1e-300)));
    }

    // Least-squares slope of log M_p against log(1/(1-r)) over the deepest
    // tail points: the shallow schedule entries are pre-asymptotic for the
    // borderline growth rates this classifier has to separate.
    int tail = std::min<int>(opts.tail_points, static_cast<int>(rep.radii.size()));
    int begin = static_cast<int>(rep.radii.size()) - tail;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = begin; i < static_cast<int>(rep.radii.size()); ++i) {
        double x = std::log(1.0 / (1.0 - rep.radii[i]));
        double y = rep.log_means[i];
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double denom = tail * sxx - sx * sx;
    rep.slope = (tail * sxy - sx * sy) / denom;

    if (rep.slope <= opts.member_tol) rep.verdict = Membership::member;
    else if (rep.slope >= opts.nonmember_tol) rep.verdict = Membership::nonmember;
    else rep.verdict = Membership::indeterminate;
    return rep;
}

cplx BinomialCoeffs::operator()(int n) const {
    if (n < 0) throw std::domain_error("binomial_coeffs: n must be >= 0");
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(cache_.size()) <= n) {
        int m = static_cast<int>(cache_.size()) - 1;
        // c_{m+1} = c_m (lambda + m) / (m + 1)
        cache_.push_back(cache_.back() * (lambda_ + static_cast<double>(m)) / (m + 1.0));
    }
    return cache_[n];
}

}  // namespace subspec

#pragma once

// Truncated power-series arithmetic, circle sampling, Hardy-norm estimation,
// and the growth-slope membership classifier.

#include <functional>
#include <mutex>
#include <vector>

#include "subspec/common.hpp"

namespace subspec {

// Index n holds the coefficient of z^n; truncation order is size()-1.
using CoeffVector = std::vector<cplx>;

struct CirclePlan {
    double radius = 0.9;  // strictly inside the disc
    int sample_count = 0; // K, a positive multiple of 4, K >= 4(N+1)

    static CirclePlan for_order(int N, double radius = 0.9) {
        CirclePlan p;
        p.radius = radius;
        p.sample_count = 4 * (N + 1);
        return p;
    }
};

// Horner evaluation of the truncated series at |z| <= 1.
cplx eval(const CoeffVector& f, cplx z);

// Termwise derivative: coefficient n of output is (n+1) c_{n+1}.
CoeffVector derivative(const CoeffVector& f);

struct ExtractedCoeffs {
    CoeffVector coeffs;
    // Heuristic alias bound from the sample magnitude: assumes the sampled
    // function's coefficients decay no slower than max|s_j| r^{-m}, giving
    // max|s| r^{K-N} / (1 - r^K) for the worst retained index.
    double aliasing_bound = 0.0;
};

// Inverse DFT with radius rescaling: c_n = r^{-n} (1/K) sum_j s_j w^{-jn}.
// samples[j] must be f(r w^j) with w = exp(2 pi i / K).
ExtractedCoeffs coeffs_from_samples(const std::vector<cplx>& samples,
                                    const CirclePlan& plan, int N);

// sqrt(sum |c_n|^2): the H2 norm of the truncation.
double h2_norm(const CoeffVector& f);

// Integral mean on the sampled circle: ((1/K) sum |f(r w^j)|^p)^{1/p}.
double hp_mean(const CoeffVector& f, double p, const CirclePlan& plan);

enum class Membership { member, nonmember, indeterminate };

struct ClassifierOptions {
    // Growth-slope thresholds on log M_p vs log(1/(1-r)), fitted over the
    // deepest tail_points schedule entries. Calibrated on the binomial
    // family: exponents for the decisive cases sit at 0.025 (member side)
    // and 0.075 (nonmember side) on the default schedule, so the gap
    // [0.035, 0.055] separates them with margin on both sides.
    double member_tol = 0.035;
    double nonmember_tol = 0.055;
    int tail_points = 3;
};

struct MembershipReport {
    Membership verdict = Membership::indeterminate;
    double slope = 0.0;        // fitted growth exponent
    bool overflow = false;     // |f|^p overflowed at some radius
    std::vector<double> radii;
    std::vector<double> log_means;
};

// Default radii schedule r_j = 1 - 2^-j, j = 3..14.
std::vector<double> default_radii_schedule();

// coeff_source(n) must return c_n for any n >= 0.
MembershipReport hp_membership_classifier(const std::function<cplx(int)>& coeff_source,
                                          double p,
                                          const std::vector<double>& radii_schedule,
                                          const ClassifierOptions& opts = {});

// Coefficients of (1-z)^{-lambda}: c_0 = 1, c_{n+1} = c_n (lambda+n)/(n+1).
// Memoizing functor, safe for concurrent use.
class BinomialCoeffs {
  public:
    explicit BinomialCoeffs(cplx lambda) : lambda_(lambda), cache_{cplx(1.0, 0.0)} {}
    cplx operator()(int n) const;
    cplx lambda() const { return lambda_; }

  private:
    cplx lambda_;
    mutable std::mutex mu_;
    mutable std::vector<cplx> cache_;
};

}  // namespace subspec

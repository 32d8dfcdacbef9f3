#include "subspec/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace subspec {

// ── Gauss-Legendre via Golub-Welsch ──
// Jacobi matrix for Legendre polynomials: diagonal 0, off-diagonal
// b_k = k / sqrt(4k^2 - 1). Eigenvalues are the nodes; weights are
// 2 * (first eigenvector component)^2.
static QuadRule build_gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) {
        sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss_legendre: eigensolve failed");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        double q0 = es.eigenvectors()(0, i);
        rule.weights[i] = 2.0 * q0 * q0;
    }
    return rule;
}

const QuadRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

PanelRule composite_panels(const std::vector<double>& breaks, int points_per_panel) {
    if (breaks.size() < 2) throw std::domain_error("composite_panels: need at least one panel");
    const QuadRule& gl = gauss_legendre(points_per_panel);
    PanelRule out;
    out.nodes.reserve((breaks.size() - 1) * gl.nodes.size());
    out.weights.reserve(out.nodes.capacity());
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        double lo = breaks[p], hi = breaks[p + 1];
        if (!(hi > lo)) throw std::domain_error("composite_panels: breaks must increase");
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            out.nodes.push_back(mid + half * gl.nodes[i]);
            out.weights.push_back(half * gl.weights[i]);
        }
    }
    return out;
}

std::vector<double> graded_unit_breaks(int levels) {
    if (levels < 1) throw std::domain_error("graded_unit_breaks: levels must be >= 1");
    std::vector<double> breaks;
    breaks.reserve(levels + 1);
    for (int j = levels; j >= 0; --j) breaks.push_back(std::ldexp(1.0, -j));
    return breaks;  // [2^-levels, ..., 1/2, 1]
}

std::vector<double> halfline_breaks(int fine_levels, double T_max) {
    if (fine_levels < 1 || T_max < 2.0) throw std::domain_error("halfline_breaks: bad parameters");
    std::vector<double> breaks;
    breaks.push_back(0.0);
    for (int j = fine_levels; j >= 0; --j) breaks.push_back(std::ldexp(1.0, -j));
    for (double t = 2.0; t < T_max + 0.5; t += 1.0) breaks.push_back(t);
    return breaks;
}

}  // namespace subspec

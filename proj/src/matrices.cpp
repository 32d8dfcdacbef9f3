#include "subspec/matrices.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subspec {

namespace {

// Zero-pattern bounds (max subdiagonals, max superdiagonals) implied by a
// structure flag, used both for validation and for product propagation.
std::pair<int, int> band_bounds(const OperatorMatrix& m) {
    switch (m.structure) {
        case MatrixStructure::lower: return {m.order, 0};
        case MatrixStructure::upper: return {0, m.order};
        case MatrixStructure::banded: return {m.band_sub, m.band_super};
        case MatrixStructure::general: return {m.order, m.order};
    }
    return {m.order, m.order};
}

OperatorMatrix finish(OperatorMatrix m) {
    validate_matrix(m);
    return m;
}

}  // namespace

void validate_matrix(const OperatorMatrix& m) {
    const int n = m.order + 1;
    if (m.order < 0 || m.entries.rows() != n || m.entries.cols() != n)
        throw std::domain_error("validate_matrix: entry block does not match the order");
    if (!m.entries.allFinite())
        throw std::domain_error("validate_matrix: non-finite entry");
    auto [sub, super] = band_bounds(m);
    if (sub < 0 || super < 0)
        throw std::domain_error("validate_matrix: negative bandwidth");
    for (int row = 0; row < n; ++row) {
        for (int k = 0; k < n; ++k) {
            bool flagged_zero = (row - k > sub) || (k - row > super);
            if (flagged_zero && m.entries(row, k) != cplx(0.0, 0.0))
                throw std::domain_error("validate_matrix: nonzero entry in a flagged zero position");
        }
    }
    if (m.exactness == CompressionExactness::exact_lower && m.structure != MatrixStructure::lower)
        throw std::domain_error("validate_matrix: exact-lower requires lower structure");
    if (m.exactness == CompressionExactness::exact_upper && m.structure != MatrixStructure::upper)
        throw std::domain_error("validate_matrix: exact-upper requires upper structure");
}

OperatorMatrix identity_matrix(int N) {
    if (N < 0) throw std::domain_error("identity_matrix: N must be >= 0");
    OperatorMatrix m;
    m.order = N;
    m.entries = Eigen::MatrixXcd::Identity(N + 1, N + 1);
    m.structure = MatrixStructure::banded;
    m.band_sub = 0;
    m.band_super = 0;
    m.exactness = CompressionExactness::approximate;
    return finish(std::move(m));
}

OperatorMatrix cesaro_matrix(int N) {
    if (N < 0) throw std::domain_error("cesaro_matrix: N must be >= 0");
    OperatorMatrix m;
    m.order = N;
    m.entries = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int row = 0; row <= N; ++row) {
        cplx v(1.0 / (row + 1), 0.0);
        for (int k = 0; k <= row; ++k) m.entries(row, k) = v;
    }
    m.structure = MatrixStructure::lower;
    m.exactness = CompressionExactness::exact_lower;
    return finish(std::move(m));
}

OperatorMatrix composition_matrix_affine(cplx a, cplx b, int N) {
    if (N < 0) throw std::domain_error("composition_matrix_affine: N must be >= 0");
    if (std::abs(a) + std::abs(b) > 1.0 + 1e-12)
        throw std::domain_error("composition_matrix_affine: |a| + |b| > 1, symbol is not a disc self-map");
    OperatorMatrix m;
    m.order = N;
    m.entries = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    m.entries(0, 0) = cplx(1.0, 0.0);
    // Column k of (a z + b)^k = (a z + b) * (a z + b)^{k-1}:
    // coeff_m = a * prev_{m-1} + b * prev_m.
    for (int k = 1; k <= N; ++k) {
        for (int row = k; row >= 1; --row)
            m.entries(row, k) = a * m.entries(row - 1, k - 1) + b * m.entries(row, k - 1);
        m.entries(0, k) = b * m.entries(0, k - 1);
    }
    m.structure = MatrixStructure::upper;
    m.exactness = CompressionExactness::exact_upper;
    return finish(std::move(m));
}

GeneralCompositionResult composition_matrix_general(const std::function<cplx(cplx)>& symbol,
                                                    int N, const CirclePlan& plan) {
    if (N < 0) throw std::domain_error("composition_matrix_general: N must be >= 0");
    const int K = plan.sample_count;
    if (K < 2 * (N + 1))
        throw std::domain_error("composition_matrix_general: sample count below 2(N+1)");
    std::vector<cplx> base(K), pw(K, cplx(1.0, 0.0));
    for (int j = 0; j < K; ++j) {
        double ang = 2.0 * kPi * j / K;
        cplx z = plan.radius * cplx(std::cos(ang), std::sin(ang));
        base[j] = symbol(z);
        if (!(std::abs(base[j]) < 1.0))
            throw std::domain_error("composition_matrix_general: symbol leaves the open disc at sample " +
                                    std::to_string(j));
    }
    GeneralCompositionResult out;
    out.matrix.order = N;
    out.matrix.entries = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    out.matrix.structure = MatrixStructure::general;
    out.matrix.exactness = CompressionExactness::approximate;
    for (int k = 0; k <= N; ++k) {
        ExtractedCoeffs col = coeffs_from_samples(pw, plan, N);
        for (int row = 0; row <= N; ++row) out.matrix.entries(row, k) = col.coeffs[row];
        out.aliasing_bound = std::max(out.aliasing_bound, col.aliasing_bound);
        if (k < N)
            for (int j = 0; j < K; ++j) pw[j] *= base[j];
    }
    validate_matrix(out.matrix);
    return out;
}

OperatorMatrix generator_matrix(const Semiflow& flow, int N) {
    if (N < 0) throw std::domain_error("generator_matrix: N must be >= 0");
    if (!flow.G_poly)
        throw std::domain_error("generator_matrix: flow generator is not polynomial");
    const auto& g = *flow.G_poly;
    if (g.size() > 3)
        throw std::domain_error("generator_matrix: generator degree exceeds 2");
    cplx g0 = g.size() > 0 ? g[0] : cplx(0.0, 0.0);
    cplx g1 = g.size() > 1 ? g[1] : cplx(0.0, 0.0);
    cplx g2 = g.size() > 2 ? g[2] : cplx(0.0, 0.0);
    OperatorMatrix m;
    m.order = N;
    m.entries = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    // G f' on z^k contributes k g0 z^{k-1} + k g1 z^k + k g2 z^{k+1}.
    for (int k = 0; k <= N; ++k) {
        double kd = static_cast<double>(k);
        if (k >= 1) m.entries(k - 1, k) = kd * g0;
        m.entries(k, k) = kd * g1;
        if (k + 1 <= N) m.entries(k + 1, k) = kd * g2;
    }
    m.structure = MatrixStructure::banded;
    m.band_sub = g2 != cplx(0.0, 0.0) ? 1 : 0;
    m.band_super = g0 != cplx(0.0, 0.0) ? 1 : 0;
    return finish(std::move(m));
}

CoeffVector resolvent_solve(const Semiflow& flow, cplx lambda, const CoeffVector& f) {
    if (f.empty()) throw std::domain_error("resolvent_solve: empty right-hand side");
    if (!flow.G_poly)
        throw std::domain_error("resolvent_solve: flow generator is not polynomial");
    const auto& g = *flow.G_poly;
    if (g.size() > 3)
        throw std::domain_error("resolvent_solve: generator degree exceeds 2");
    cplx g0 = g.size() > 0 ? g[0] : cplx(0.0, 0.0);
    cplx g1 = g.size() > 1 ? g[1] : cplx(0.0, 0.0);
    cplx g2 = g.size() > 2 ? g[2] : cplx(0.0, 0.0);
    const int n = static_cast<int>(f.size());

    // Tridiagonal rows of (lambda I - Delta): sub(m) multiplies g_{m-1},
    // diag(m) multiplies g_m, super(m) multiplies g_{m+1}.
    std::vector<cplx> sub(n), diag(n), super(n), fill(n, cplx(0.0, 0.0)), rhs(f);
    for (int row = 0; row < n; ++row) {
        sub[row] = row >= 1 ? -static_cast<double>(row - 1) * g2 : cplx(0.0, 0.0);
        diag[row] = lambda - static_cast<double>(row) * g1;
        super[row] = row + 1 < n ? -static_cast<double>(row + 1) * g0 : cplx(0.0, 0.0);
    }

    // Banded LU with partial pivoting between adjacent rows; a swap fills a
    // second superdiagonal (fill). With g2 = 0 the sub entries vanish and
    // this reduces to plain back substitution from the last row.
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(diag[i]) < std::abs(sub[i + 1])) {
            std::swap(diag[i], sub[i + 1]);      // pivot row becomes row i+1
            cplx tmp = super[i];
            super[i] = diag[i + 1];
            diag[i + 1] = tmp;
            fill[i] = i + 2 < n ? super[i + 1] : cplx(0.0, 0.0);
            if (i + 2 < n) super[i + 1] = cplx(0.0, 0.0);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (std::abs(diag[i]) <= kResolventPivotTol)
            throw std::domain_error("resolvent_solve: singular pivot at index " + std::to_string(i));
        cplx l = sub[i + 1] / diag[i];
        diag[i + 1] -= l * super[i];
        if (i + 2 < n) super[i + 1] -= l * fill[i];
        rhs[i + 1] -= l * rhs[i];
    }
    if (std::abs(diag[n - 1]) <= kResolventPivotTol)
        throw std::domain_error("resolvent_solve: singular pivot at index " + std::to_string(n - 1));

    CoeffVector gsol(n);
    for (int i = n - 1; i >= 0; --i) {
        cplx acc = rhs[i];
        if (i + 1 < n) acc -= super[i] * gsol[i + 1];
        if (i + 2 < n) acc -= fill[i] * gsol[i + 2];
        gsol[i] = acc / diag[i];
    }
    return gsol;
}

CoeffVector matrix_apply(const OperatorMatrix& m, const CoeffVector& v) {
    const int n = m.order + 1;
    if (static_cast<int>(v.size()) != n)
        throw std::domain_error("matrix_apply: vector length does not match the order");
    Eigen::Map<const Eigen::VectorXcd> x(v.data(), n);
    Eigen::VectorXcd y = m.entries * x;
    return CoeffVector(y.data(), y.data() + n);
}

OperatorMatrix matrix_product(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.order != b.order)
        throw std::domain_error("matrix_product: order mismatch");
    OperatorMatrix m;
    m.order = a.order;
    m.entries = a.entries * b.entries;
    auto [sub_a, super_a] = band_bounds(a);
    auto [sub_b, super_b] = band_bounds(b);
    int sub = std::min(m.order, sub_a + sub_b);
    int super = std::min(m.order, super_a + super_b);
    if (super == 0 && sub == m.order) {
        m.structure = MatrixStructure::lower;
    } else if (sub == 0 && super == m.order) {
        m.structure = MatrixStructure::upper;
    } else if (sub == m.order && super == m.order) {
        m.structure = MatrixStructure::general;
    } else {
        m.structure = MatrixStructure::banded;
        m.band_sub = sub;
        m.band_super = super;
    }
    bool both_lower = a.exactness == CompressionExactness::exact_lower &&
                      b.exactness == CompressionExactness::exact_lower;
    bool both_upper = a.exactness == CompressionExactness::exact_upper &&
                      b.exactness == CompressionExactness::exact_upper;
    if (both_lower && m.structure == MatrixStructure::lower)
        m.exactness = CompressionExactness::exact_lower;
    else if (both_upper && m.structure == MatrixStructure::upper)
        m.exactness = CompressionExactness::exact_upper;
    else
        m.exactness = CompressionExactness::approximate;
    return finish(std::move(m));
}

OperatorMatrix matrix_power(const OperatorMatrix& m, int n) {
    if (n < 0) throw std::domain_error("matrix_power: exponent must be >= 0");
    if (n == 0) return identity_matrix(m.order);
    OperatorMatrix out = m;
    for (int i = 1; i < n; ++i) out = matrix_product(out, m);
    return out;
}

OperatorMatrix adjoint_matrix(const OperatorMatrix& m) {
    OperatorMatrix out;
    out.order = m.order;
    out.entries = m.entries.adjoint();
    switch (m.structure) {
        case MatrixStructure::lower: out.structure = MatrixStructure::upper; break;
        case MatrixStructure::upper: out.structure = MatrixStructure::lower; break;
        case MatrixStructure::banded:
            out.structure = MatrixStructure::banded;
            out.band_sub = m.band_super;
            out.band_super = m.band_sub;
            break;
        case MatrixStructure::general: out.structure = MatrixStructure::general; break;
    }
    if (m.exactness == CompressionExactness::exact_lower)
        out.exactness = CompressionExactness::exact_upper;
    else if (m.exactness == CompressionExactness::exact_upper)
        out.exactness = CompressionExactness::exact_lower;
    else
        out.exactness = CompressionExactness::approximate;
    return finish(std::move(out));
}

}  // namespace subspec

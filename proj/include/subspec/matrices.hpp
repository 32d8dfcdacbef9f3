#pragma once

// Finite compressions of disc operators in the monomial basis: Cesaro,
// composition, generator, and banded resolvent solves.

#include <functional>

#include <Eigen/Core>

#include "subspec/analytic.hpp"
#include "subspec/common.hpp"
#include "subspec/semiflows.hpp"

namespace subspec {

enum class MatrixStructure { lower, upper, banded, general };

// Whether products and powers of the compression equal compressions of the
// operator products. Lower (resp. upper) triangular compressions of lower
// (resp. upper) operators have this property; sampled matrices do not.
enum class CompressionExactness { exact_lower, exact_upper, approximate };

struct OperatorMatrix {
    int order = 0;             // N; entries is (N+1) x (N+1)
    // entries(m, k) = coefficient m of the image of z^k.
    Eigen::MatrixXcd entries;
    MatrixStructure structure = MatrixStructure::general;
    int band_sub = 0;          // subdiagonals kept when structure == banded
    int band_super = 0;        // superdiagonals kept when structure == banded
    CompressionExactness exactness = CompressionExactness::approximate;
};

// Checks the structure flag against the entries: flagged zero positions must
// hold exact zeros, every entry must be finite, and the exactness flag must
// match the structure. Throws std::domain_error on violation. Every factory
// and algebra operation below runs this before returning.
void validate_matrix(const OperatorMatrix& m);

OperatorMatrix identity_matrix(int N);

// Averaging operator: entry(n, k) = 1/(n+1) for k <= n, zero above.
OperatorMatrix cesaro_matrix(int N);

// Compression of f -> f(a z + b): column k holds the coefficients of
// (a z + b)^k, so entry(m, k) = C(k, m) a^m b^{k-m} for m <= k.
// Requires |a| + |b| <= 1 so the symbol maps the closed disc to itself.
OperatorMatrix composition_matrix_affine(cplx a, cplx b, int N);

struct GeneralCompositionResult {
    OperatorMatrix matrix;
    double aliasing_bound = 0.0;  // worst per-column extraction bound
};

// Sampling route for non-affine symbols: column k is extracted from circle
// samples of symbol(z)^k. The symbol must map the sample circle into the
// open unit disc; a sample with modulus >= 1 is rejected.
GeneralCompositionResult composition_matrix_general(const std::function<cplx(cplx)>& symbol,
                                                    int N, const CirclePlan& plan);

// Matrix of f -> G f' in monomial coordinates for polynomial G of degree
// <= 2: a tridiagonal band with entry(m, m+1) = (m+1) g0,
// entry(m, m) = m g1, entry(m, m-1) = (m-1) g2. Flows without a polynomial
// generator are rejected.
OperatorMatrix generator_matrix(const Semiflow& flow, int N);

// Solves (lambda I - Delta) g = f at order f.size() - 1 by banded
// elimination with partial pivoting on the tridiagonal generator band.
// A pivot at or below kResolventPivotTol raises an error naming the index.
inline constexpr double kResolventPivotTol = 1e-12;
CoeffVector resolvent_solve(const Semiflow& flow, cplx lambda, const CoeffVector& f);

// Standard linear algebra on matching orders; order mismatch is rejected.
// Structure flags propagate through products (lower x lower stays lower,
// band widths add, anything touching general degrades to general).
CoeffVector matrix_apply(const OperatorMatrix& m, const CoeffVector& v);
OperatorMatrix matrix_product(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix matrix_power(const OperatorMatrix& m, int n);
OperatorMatrix adjoint_matrix(const OperatorMatrix& m);  // conjugate transpose

}  // namespace subspec

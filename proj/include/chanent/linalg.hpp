#pragma once

// Dense complex matrix kernel.
//
// Subsystem ordering: in every tensor product the leftmost factor is the
// slowest-varying index, so for dims (d0, d1, ...) the basis vector
// |i0 i1 ...> sits at position i0*d1*d2*... + i1*d2*... + ...

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace chanent {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kDefaultCutoff = 1e-14;

struct HermitianEigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary
};

/// How eigenvalues at (numerical) zero are treated by matrix_func.
enum class ZeroPolicy {
  keep,     // f is applied to every eigenvalue
  support,  // eigenvalues <= cutoff * ||M||_inf map to 0 and never reach f
};

/// Largest entrywise |M - M^dagger|.
double hermitian_defect(const Matrix& m);

/// Validated decomposition. Throws ValidationError naming the worst entry
/// when M is not square or not Hermitian within kHermitianTol.
HermitianEigenDecomposition hermitian_eig(const Matrix& m);

/// Unvalidated variant for internal use on matrices that are Hermitian by
/// construction; the input is symmetrized first.
HermitianEigenDecomposition eigh(const Matrix& m);

/// V f(Lambda) V^dagger. Throws DomainError when f yields a non-finite value
/// on a retained eigenvalue.
Matrix matrix_func(const Matrix& m, const std::function<double(double)>& f,
                   ZeroPolicy zero_policy = ZeroPolicy::support,
                   double cutoff = kDefaultCutoff);
Matrix matrix_func(const HermitianEigenDecomposition& eig,
                   const std::function<double(double)>& f,
                   ZeroPolicy zero_policy = ZeroPolicy::support,
                   double cutoff = kDefaultCutoff);

/// Gradient of X -> Tr[Z f(X)] at X (Hermitian Z), i.e. the matrix W with
/// d/dt Tr[Z f(X + tH)] = Tr[W H], built from divided differences of f in
/// the eigenbasis of X. Eigenvalues below the support cutoff are left out.
Matrix frechet_gradient(const HermitianEigenDecomposition& eig_x,
                        const Matrix& z,
                        const std::function<double(double)>& f,
                        const std::function<double(double)>& fprime,
                        double cutoff = kDefaultCutoff);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Traces out every subsystem whose index is not listed in `keep`. The
/// kept subsystems retain their relative order.
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep);

/// Reorders tensor factors: output factor k is input factor perm[k].
Matrix permute_subsystems(const Matrix& m, const std::vector<int>& dims,
                          const std::vector<int>& perm);

/// Schatten p-norm via singular values; p = +inf gives the operator norm.
/// Throws DomainError for p < 1.
double schatten_norm(const Matrix& m, double p);

/// |phi> = sum_i sqrt(lambda_i) |i>_S |v_i>_A from the eigendecomposition
/// of rho; the purifying system S comes first.
Vector canonical_purification(const Matrix& rho);

/// Unnormalized maximally entangled operator |Gamma><Gamma| on R (x) A,
/// |Gamma> = sum_i |i>_R |i>_A.
Matrix gamma_operator(int d);

/// Normalized maximally entangled state Gamma / d.
Matrix max_entangled_state(int d);

Matrix maximally_mixed(int d);
Matrix outer(const Vector& v);
Matrix hermitian_part(const Matrix& m);
double max_abs(const Matrix& m);
double trace_real(const Matrix& m);

}  // namespace linalg
}  // namespace chanent

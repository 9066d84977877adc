#pragma once

// Dense Hermitian linear algebra and the quantum primitives everything else
// is built on: layouts, states, entropies, partial trace and transpose.
//
// Party 0 is the most significant digit of a basis index, so the ket
// |b0 b1 ... b(n-1)> has index sum_i b_i * prod_{j>i} d_j.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reelab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

/// Raised whenever an input violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace tol {
inline constexpr double kNorm = 1e-12;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kMinEigenvalue = -1e-10;
// Eigenvalues below kSupport * lambda_max count as zero.
inline constexpr double kSupport = 1e-12;
// Weight of rho on the null space of sigma above which S(rho||sigma) = +inf.
inline constexpr double kOffSupportWeight = 1e-9;
}  // namespace tol

class HilbertLayout {
 public:
  explicit HilbertLayout(std::vector<int> party_dims);

  static HilbertLayout qubits(int n) { return uniform(n, 2); }
  static HilbertLayout uniform(int n, int d);

  const std::vector<int>& party_dims() const { return dims_; }
  int parties() const { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  Index total_dim() const { return total_; }

  /// Per-party digits of a basis index.
  std::vector<int> digits(Index index) const;
  Index index_of(std::span<const int> digits) const;
  /// Stride of a party's digit within a basis index.
  Index stride(int party) const;

  HilbertLayout concat(const HilbertLayout& other) const;
  HilbertLayout without(const std::vector<int>& parties) const;

  bool operator==(const HilbertLayout&) const = default;

 private:
  std::vector<int> dims_;
  Index total_ = 1;
};

class PureState {
 public:
  /// Throws ValidationError unless the amplitudes have unit norm (1e-12).
  PureState(HilbertLayout layout, Vector amplitudes);
  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(HilbertLayout layout, Vector amplitudes);
  static PureState basis(HilbertLayout layout, Index index);

  const HilbertLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amps_; }
  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  HilbertLayout layout_;
  Vector amps_;
};

class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity; stores the exactly
  /// Hermitian part of the input.
  DensityOperator(HilbertLayout layout, const Matrix& matrix);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(HilbertLayout layout);

  const HilbertLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return rho_; }
  Index dim() const { return layout_.total_dim(); }

 private:
  HilbertLayout layout_;
  Matrix rho_;
};

/// A fully product pure state: one unit vector per party.
class ProductState {
 public:
  ProductState(HilbertLayout layout, std::vector<Vector> factors);

  const HilbertLayout& layout() const { return layout_; }
  const std::vector<Vector>& factors() const { return factors_; }
  const Vector& factor(int party) const { return factors_.at(static_cast<std::size_t>(party)); }
  Vector to_vector() const;
  /// Real-amplitude qubit product state (cos t_j, sin t_j) per party.
  static ProductState from_angles(std::span<const double> thetas);

 private:
  HilbertLayout layout_;
  std::vector<Vector> factors_;
};

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

/// Throws ValidationError if `h` is not Hermitian within 1e-10.
Eigensystem hermitian_eigensystem(const Matrix& h);

double shannon_entropy(std::span<const double> probabilities);
double von_neumann_entropy(const DensityOperator& rho);

/// S(rho||sigma) in bits; +infinity when rho leaves the support of sigma.
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);
/// Same quantity on raw matrices with a precomputed spectrum of sigma; used
/// by the solver's inner loops, which never leave the validated set.
double relative_entropy_raw(const Matrix& rho, double rho_entropy_nats, const Eigensystem& sigma);

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& drop);
Matrix partial_transpose(const DensityOperator& rho, const std::vector<int>& parties);
double negativity(const DensityOperator& rho, const std::vector<int>& parties);

PureState tensor_product(const PureState& a, const PureState& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);
ProductState tensor_product(const ProductState& a, const ProductState& b);

// Sampling. Pure states are Haar distributed (normalized complex Gaussians).
Vector random_unit_vector(Index dim, Rng& rng);
PureState random_pure_state(const HilbertLayout& layout, Rng& rng);
ProductState random_product_state(const HilbertLayout& layout, Rng& rng);
Matrix random_unitary(Index dim, Rng& rng);
/// Random rank-limited density operator (partial trace of a Haar pure state).
DensityOperator random_density(const HilbertLayout& layout, Index rank, Rng& rng);

/// Derives an independent stream seed for a subtask (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace reelab

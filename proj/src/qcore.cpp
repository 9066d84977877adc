#include "reelab/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

namespace reelab {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_same_layout(const HilbertLayout& a, const HilbertLayout& b, const char* what) {
  if (!(a == b)) throw ValidationError(std::string(what) + ": layouts differ");
}

std::set<int> checked_party_set(const HilbertLayout& layout, const std::vector<int>& parties,
                                const char* what) {
  std::set<int> out;
  for (int p : parties) {
    if (p < 0 || p >= layout.parties())
      throw ValidationError(std::string(what) + ": party index " + std::to_string(p) + " out of range");
    out.insert(p);
  }
  return out;
}

// sum_i -p_i ln p_i over the strictly positive entries.
double entropy_nats(const RealVector& values) {
  double s = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- layout

HilbertLayout::HilbertLayout(std::vector<int> party_dims) : dims_(std::move(party_dims)) {
  if (dims_.empty()) throw ValidationError("HilbertLayout: at least one party required");
  for (int d : dims_) {
    if (d < 2) throw ValidationError("HilbertLayout: every party dimension must be >= 2");
    total_ *= d;
  }
}

HilbertLayout HilbertLayout::uniform(int n, int d) {
  if (n < 1) throw ValidationError("HilbertLayout: party count must be positive");
  return HilbertLayout(std::vector<int>(static_cast<std::size_t>(n), d));
}

std::vector<int> HilbertLayout::digits(Index index) const {
  std::vector<int> out(dims_.size());
  for (int p = parties() - 1; p >= 0; --p) {
    out[static_cast<std::size_t>(p)] = static_cast<int>(index % dims_[static_cast<std::size_t>(p)]);
    index /= dims_[static_cast<std::size_t>(p)];
  }
  return out;
}

Index HilbertLayout::index_of(std::span<const int> digits) const {
  Index idx = 0;
  for (std::size_t p = 0; p < dims_.size(); ++p) idx = idx * dims_[p] + digits[p];
  return idx;
}

Index HilbertLayout::stride(int party) const {
  Index s = 1;
  for (int p = parties() - 1; p > party; --p) s *= dims_[static_cast<std::size_t>(p)];
  return s;
}

HilbertLayout HilbertLayout::concat(const HilbertLayout& other) const {
  std::vector<int> d = dims_;
  d.insert(d.end(), other.dims_.begin(), other.dims_.end());
  return HilbertLayout(std::move(d));
}

HilbertLayout HilbertLayout::without(const std::vector<int>& parties) const {
  const auto drop = checked_party_set(*this, parties, "HilbertLayout::without");
  std::vector<int> d;
  for (int p = 0; p < this->parties(); ++p)
    if (!drop.contains(p)) d.push_back(dims_[static_cast<std::size_t>(p)]);
  return HilbertLayout(std::move(d));
}

// ---------------------------------------------------------------- states

PureState::PureState(HilbertLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_.total_dim())
    throw ValidationError("PureState: amplitude count does not match layout");
  if (std::abs(amps_.norm() - 1.0) > tol::kNorm)
    throw ValidationError("PureState: amplitudes are not normalized");
}

PureState PureState::normalized(HilbertLayout layout, Vector amplitudes) {
  const double nrm = amplitudes.norm();
  if (!(nrm > 0.0)) throw ValidationError("PureState: zero vector cannot be normalized");
  amplitudes /= nrm;
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(HilbertLayout layout, Index index) {
  Vector v = Vector::Zero(layout.total_dim());
  v[index] = 1.0;
  return PureState(std::move(layout), std::move(v));
}

DensityOperator::DensityOperator(HilbertLayout layout, const Matrix& matrix) : layout_(std::move(layout)) {
  const Index d = layout_.total_dim();
  if (matrix.rows() != d || matrix.cols() != d)
    throw ValidationError("DensityOperator: matrix shape does not match layout");
  if (!matrix.allFinite()) throw ValidationError("DensityOperator: non-finite entries");
  if (max_abs(matrix - matrix.adjoint()) > tol::kHermitian)
    throw ValidationError("DensityOperator: matrix is not Hermitian");
  rho_ = 0.5 * (matrix + matrix.adjoint());
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) throw ValidationError("DensityOperator: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < tol::kMinEigenvalue)
    throw ValidationError("DensityOperator: matrix is not positive semidefinite");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.layout(), psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(HilbertLayout layout) {
  const Index d = layout.total_dim();
  Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  return DensityOperator(std::move(layout), m);
}

ProductState::ProductState(HilbertLayout layout, std::vector<Vector> factors)
    : layout_(std::move(layout)), factors_(std::move(factors)) {
  if (static_cast<int>(factors_.size()) != layout_.parties())
    throw ValidationError("ProductState: one factor per party required");
  for (int p = 0; p < layout_.parties(); ++p) {
    const Vector& f = factors_[static_cast<std::size_t>(p)];
    if (f.size() != layout_.dim(p)) throw ValidationError("ProductState: factor dimension mismatch");
    if (std::abs(f.norm() - 1.0) > tol::kNorm) throw ValidationError("ProductState: factor not normalized");
  }
}

Vector ProductState::to_vector() const {
  Vector v = factors_.front();
  for (std::size_t p = 1; p < factors_.size(); ++p) {
    const Vector& f = factors_[p];
    Vector next(v.size() * f.size());
    for (Index i = 0; i < v.size(); ++i) next.segment(i * f.size(), f.size()) = v[i] * f;
    v = std::move(next);
  }
  return v;
}

ProductState ProductState::from_angles(std::span<const double> thetas) {
  std::vector<Vector> factors;
  factors.reserve(thetas.size());
  for (double t : thetas) {
    Vector f(2);
    f << std::cos(t), std::sin(t);
    factors.push_back(std::move(f));
  }
  return ProductState(HilbertLayout::qubits(static_cast<int>(thetas.size())), std::move(factors));
}

// ---------------------------------------------------------------- spectra

Eigensystem hermitian_eigensystem(const Matrix& h) {
  if (h.rows() != h.cols()) throw ValidationError("hermitian_eigensystem: matrix is not square");
  if (max_abs(h - h.adjoint()) > 1e-10) throw ValidationError("hermitian_eigensystem: matrix is not Hermitian");
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eigensystem: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities)
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  const double s = entropy_nats(es.eigenvalues()) / std::numbers::ln2;
  return std::max(0.0, s);
}

double relative_entropy_raw(const Matrix& rho, double rho_entropy_nats, const Eigensystem& sigma) {
  const RealVector& mu = sigma.values;
  const double mu_max = mu.size() ? mu.maxCoeff() : 0.0;
  const double cutoff = tol::kSupport * mu_max;
  // Diagonal of rho in sigma's eigenbasis.
  const Matrix rv = rho * sigma.vectors;
  double cross = 0.0;
  double off_support = 0.0;
  for (Index j = 0; j < mu.size(); ++j) {
    const double w = sigma.vectors.col(j).dot(rv.col(j)).real();
    if (mu[j] <= cutoff) {
      off_support += std::max(0.0, w);
    } else if (w != 0.0) {
      cross -= w * std::log(mu[j]);
    }
  }
  if (off_support > tol::kOffSupportWeight) return std::numeric_limits<double>::infinity();
  return (cross - rho_entropy_nats) / std::numbers::ln2;
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_layout(rho.layout(), sigma.layout(), "relative_entropy");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  const double s = relative_entropy_raw(rho.matrix(), entropy_nats(es.eigenvalues()),
                                        hermitian_eigensystem(sigma.matrix()));
  // Klein's inequality; remove round-off below zero.
  return (s < 0.0 && s > -1e-12) ? 0.0 : s;
}

// ---------------------------------------------------------------- partial operations

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& drop) {
  const HilbertLayout& layout = rho.layout();
  const auto dropped = checked_party_set(layout, drop, "partial_trace");
  if (dropped.empty()) throw ValidationError("partial_trace: nothing to trace out");
  if (static_cast<int>(dropped.size()) == layout.parties())
    throw ValidationError("partial_trace: cannot trace out every party");

  std::vector<int> kept;
  for (int p = 0; p < layout.parties(); ++p)
    if (!dropped.contains(p)) kept.push_back(p);
  const HilbertLayout reduced = layout.without(drop);

  // Offsets of kept / dropped digit combinations inside a full basis index.
  auto offsets = [&](const std::vector<int>& parties) {
    std::vector<Index> off{0};
    for (int p : parties) {
      std::vector<Index> next;
      next.reserve(off.size() * static_cast<std::size_t>(layout.dim(p)));
      for (Index o : off)
        for (int a = 0; a < layout.dim(p); ++a) next.push_back(o + a * layout.stride(p));
      off = std::move(next);
    }
    return off;
  };
  std::vector<int> dropped_list(dropped.begin(), dropped.end());
  const auto keep_off = offsets(kept);
  const auto drop_off = offsets(dropped_list);

  const Index rd = reduced.total_dim();
  Matrix out = Matrix::Zero(rd, rd);
  const Matrix& m = rho.matrix();
  for (Index i = 0; i < rd; ++i)
    for (Index j = 0; j < rd; ++j) {
      cplx acc = 0.0;
      for (Index r : drop_off) acc += m(keep_off[static_cast<std::size_t>(i)] + r, keep_off[static_cast<std::size_t>(j)] + r);
      out(i, j) = acc;
    }
  return DensityOperator(reduced, out);
}

Matrix partial_transpose(const DensityOperator& rho, const std::vector<int>& parties) {
  const HilbertLayout& layout = rho.layout();
  const auto subset = checked_party_set(layout, parties, "partial_transpose");
  const Index d = layout.total_dim();
  const Matrix& m = rho.matrix();
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Index ii = i, jj = j;
      for (int p : subset) {
        const Index s = layout.stride(p);
        const Index di = (i / s) % layout.dim(p);
        const Index dj = (j / s) % layout.dim(p);
        ii += (dj - di) * s;
        jj += (di - dj) * s;
      }
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

double negativity(const DensityOperator& rho, const std::vector<int>& parties) {
  const auto subset = checked_party_set(rho.layout(), parties, "negativity");
  if (subset.empty() || static_cast<int>(subset.size()) == rho.layout().parties())
    throw ValidationError("negativity: bipartition must be a nonempty proper subset");
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose(rho, parties), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) neg += std::max(0.0, -es.eigenvalues()[i]);
  return neg;
}

// ---------------------------------------------------------------- tensor products

PureState tensor_product(const PureState& a, const PureState& b) {
  Vector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes());
  return PureState::normalized(a.layout().concat(b.layout()), std::move(v));
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  return DensityOperator(a.layout().concat(b.layout()), m);
}

ProductState tensor_product(const ProductState& a, const ProductState& b) {
  std::vector<Vector> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return ProductState(a.layout().concat(b.layout()), std::move(f));
}

// ---------------------------------------------------------------- sampling

Vector random_unit_vector(Index dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = cplx(re, im);
  }
  return v / v.norm();
}

PureState random_pure_state(const HilbertLayout& layout, Rng& rng) {
  return PureState::normalized(layout, random_unit_vector(layout.total_dim(), rng));
}

ProductState random_product_state(const HilbertLayout& layout, Rng& rng) {
  std::vector<Vector> factors;
  for (int p = 0; p < layout.parties(); ++p) {
    Vector f = random_unit_vector(layout.dim(p), rng);
    factors.push_back(f / f.norm());
  }
  return ProductState(layout, std::move(factors));
}

Matrix random_unitary(Index dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

DensityOperator random_density(const HilbertLayout& layout, Index rank, Rng& rng) {
  const Index d = layout.total_dim();
  rank = std::clamp<Index>(rank, 1, d);
  Matrix g(d, rank);
  std::normal_distribution<double> n(0.0, 1.0);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rank; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(layout, m);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace reelab

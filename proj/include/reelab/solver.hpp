#pragma once

// Numerical REE over the fully separable set by conditional gradient (with
// away steps), plus the product-state oracle it shares with the numerical
// entanglement eigenvalue and the geometric measure.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reelab/qcore.hpp"

namespace reelab {

/// rho leaves the support of sigma; `weight` is its mass on sigma's null space.
class SupportError : public ValidationError {
 public:
  SupportError(const std::string& what, double weight) : ValidationError(what), weight_(weight) {}
  double weight() const { return weight_; }

 private:
  double weight_;
};

class SeparableEnsemble {
 public:
  SeparableEnsemble(HilbertLayout layout, std::vector<std::pair<double, ProductState>> atoms);

  const HilbertLayout& layout() const { return layout_; }
  const std::vector<std::pair<double, ProductState>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Matrix matrix() const;
  DensityOperator density() const { return DensityOperator(layout_, matrix()); }

 private:
  HilbertLayout layout_;
  std::vector<std::pair<double, ProductState>> atoms_;
};

struct SolverConfig {
  int max_outer = 500;
  double gap_tolerance = 1e-6;
  int restarts = 32;
  int sweeps = 200;
  double line_search_tolerance = 1e-10;
  std::uint64_t seed = 2008;

  void validate() const;
};

struct SolverReport {
  double value = 0.0;  // bits
  SeparableEnsemble ensemble;
  // max over the oracle's product states of <Phi|T|Phi> - 1; bounds the
  // remaining suboptimality by gap / ln 2 bits, up to oracle optimality.
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<double, double>> trace;  // (value, gap) per outer iteration

  std::string to_json() const;
  std::string trace_csv() const;
};

/// T = int_0^inf (sigma+t)^-1 rho (sigma+t)^-1 dt, the derivative of
/// -Tr rho ln sigma. Throws SupportError when rho leaves supp(sigma).
Matrix gradient_operator(const Matrix& rho, const Matrix& sigma);
Matrix gradient_operator(const DensityOperator& rho, const DensityOperator& sigma);

/// 1 - Tr[T candidate]
double stationarity_gap(const DensityOperator& rho, const DensityOperator& sigma, const ProductState& candidate);
double stationarity_gap(const DensityOperator& rho, const DensityOperator& sigma, const SeparableEnsemble& candidate);

struct ProductDirection {
  ProductState state;
  double value;  // <Phi|T|Phi>, a lower bound on the maximum over product states
};

/// Maximizes <Phi|T|Phi> over product states by alternating per-party
/// leading eigenvectors from random starts and any supplied warm starts.
ProductDirection best_product_direction(const Matrix& t, const HilbertLayout& layout, const SolverConfig& config,
                                        const std::vector<ProductState>& warm_starts = {});

SolverReport minimize_ree(const DensityOperator& rho, const SolverConfig& config = {});

/// max_Phi |<Phi|psi>|
double lambda_max_numeric(const PureState& psi, const SolverConfig& config = {});
/// Geometric measure -log2 max_Phi <Phi|rho|Phi>.
double g_of_rho(const DensityOperator& rho, const SolverConfig& config = {});

struct RobustnessBounds {
  double lower;                 // -log2 Lambda_max^2 from the witness 1 - rho / Lambda^2
  std::optional<double> upper;  // log2(1 + t) from an explicit separable mixture
  std::string method;
};
/// Bounds on log-robustness of a pure state. The upper bound needs a
/// construction: product states (t = 0) and symmetric basis states.
RobustnessBounds robustness_bounds(const PureState& psi, const SolverConfig& config = {});

}  // namespace reelab

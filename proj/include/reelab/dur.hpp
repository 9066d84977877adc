#pragma once

// The bound-entangled family
//   rho_N(x) = x |G><G| + (1-x)/(2N) sum_k (P_k + Pbar_k),
// with |G> the N-qubit GHZ state, P_k the projector on the string with a
// single 1 at party k and Pbar_k its bitwise complement.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reelab/solver.hpp"

namespace reelab {

struct DurParams {
  int N;
  double x;

  void validate() const;
};

DensityOperator dur_state(const DurParams& p);
/// GHZ component (|0..0> + e^{i alpha}|1..1>)/sqrt2; for local-unitary tests.
DensityOperator dur_state(const DurParams& p, double alpha);
/// (x/2)(|G><G| + |G-><G-|) + (1-x)/(2N) sum_k (P_k + Pbar_k)
DensityOperator dur_closest_separable(const DurParams& p);
/// 2 |G><G| + sum_k (P_k + Pbar_k)
Matrix dur_gradient_closed_form(int N);

/// E_R = x. Throws ValidationError for N < 4, where the result is not established.
double dur_ree(const DurParams& p);
/// log2(2 / (2 - x))
double dur_e_log(const DurParams& p);

/// (prod c + prod s)^2 + sum_k [(c..s_k..c)^2 + (s..c_k..s)^2]
double g_function(std::span<const double> angles);

struct GMaximum {
  double value;
  std::vector<double> angles;
};
/// Uniform-angle sampling followed by exact coordinate ascent on the best samples.
GMaximum g_max(int N, int samples, std::uint64_t seed);

struct ClosestCertificate {
  DurParams params{4, 0.0};
  int samples = 0;
  double gradient_error = 0.0;  // max |T - T_closed| entry
  double min_sample_gap = 0.0;
  double oracle_gap = 0.0;      // gap at best_product_direction's maximizer
  bool passed = false;
  std::optional<ProductState> violating;

  std::string to_json() const;
};
/// Checks the closed-form gradient and the stationarity gap over random
/// (Haar per party) product states and the oracle's maximizer. Needs 0 < x < 1.
ClosestCertificate verify_closest(const DurParams& p, int samples, std::uint64_t seed,
                                  const SolverConfig& config = {});

}  // namespace reelab

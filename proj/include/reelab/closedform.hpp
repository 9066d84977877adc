#pragma once

// Analytic evaluators for mixtures of symmetric states: entanglement
// eigenvalues, the F function whose convex envelope is the REE, the
// phase-averaged separable states that realize it, and E_log.
//
// All values are in bits. Conventions: 0 log 0 = 0 and 0^0 = 1.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "reelab/dicke.hpp"
#include "reelab/envelope.hpp"

namespace reelab {

/// A value together with how it was obtained.
struct MeasureValue {
  double value = 0.0;
  std::string method;  // "closed-form", "envelope", "approximate-envelope", "numeric"
};

class AngleTheta {
 public:
  explicit AngleTheta(double radians);
  static AngleTheta from_cos2(double cos2);
  double radians() const { return theta_; }
  double cos2() const;
  double sin2() const;

 private:
  double theta_;
};

double lambda_max_dicke(const DickeIndex& idx);
double lambda_max_qudit(const QuditComposition& c);
/// -2 log2 Lambda_max; equals E_R and LR for these states.
double pure_dicke_ree(const DickeIndex& idx);
double pure_dicke_ree(const QuditComposition& c);

/// Stationary angle: cos^2(theta) = alpha / n with alpha = sum_k p_k k.
AngleTheta theta_star(const DickeMixture& m);
/// sum_k C(n,k) cos^{2k} sin^{2(n-k)} |S(n,k)><S(n,k)|
DickeMixture dephased_separable_sigma(const AngleTheta& theta, int n);
/// Phase average of (sum_l sqrt(u_l)|l>)^{(x)n}: sum_kvec C(n;kvec) prod u^k |S><S|.
QuditDickeMixture dephased_separable_sigma(const std::vector<double>& u, int n);

/// S(rho(p) || sigma(theta)) for the dephased family, in closed form.
double relative_entropy_to_dephased(const DickeMixture& m, const AngleTheta& theta);
/// F(p): the relative entropy at the stationary angle.
double f_value(const DickeMixture& m);
/// ubar_j = (1/n) sum_kvec p_kvec k_j
std::vector<double> mean_occupation(const QuditDickeMixture& m);
double f_value_qudit(const QuditDickeMixture& m);

/// rho(s) = s |A><A| + (1-s) |B><B| for two distinct symmetric basis states.
class TwoComponentFamily {
 public:
  static TwoComponentFamily qubit(int n, int k1, int k2);
  static TwoComponentFamily qudit(QuditComposition a, QuditComposition b);

  int n() const { return a_.n(); }
  int d() const { return a_.d(); }
  const QuditComposition& first() const { return a_; }
  const QuditComposition& second() const { return b_; }
  bool is_qubit() const { return qubit_; }
  /// "3;0,1" for qubits, "(2,0,0,1)|(1,1,1,0)" for qudits.
  std::string label() const;

  QuditDickeMixture mixture(double s) const;
  DensityOperator density(double s) const;

  double f(double s) const;
  /// The pure-superposition quantity E at weights (s, 1-s).
  double e(double s) const;

  FCurve f_curve(int points) const;
  FCurve e_curve(int points) const;
  ConvexEnvelope ree_envelope(int points = 401) const;
  ConvexEnvelope elog_envelope(int points = 201) const;

 private:
  TwoComponentFamily(QuditComposition a, QuditComposition b, bool qubit);
  QuditComposition a_;
  QuditComposition b_;
  bool qubit_;
};

/// co F along s e_{k1} + (1-s) e_{k2}.
double ree_two_component(int n, int k1, int k2, double s);
double ree_two_component(const TwoComponentFamily& family, double s);

/// Closest separable state sum_i w_i sigma(u_i) realizing co F.
struct ClosestSeparable {
  std::vector<std::pair<double, std::vector<double>>> atoms;  // (weight, u)
  QuditDickeMixture sigma;
  double value;        // co F in bits
  std::string method;  // see MeasureValue
  bool convexified;    // more than one atom
};

ClosestSeparable closest_separable_dicke(const DickeMixture& m);
ClosestSeparable closest_separable_dicke(const QuditDickeMixture& m);
/// Qubit view of a closest separable state: weights indexed by k.
DickeMixture to_qubit(const QuditDickeMixture& m);

/// E_R of a symmetric mixture: exact on vertices and segments, grid-LP
/// envelope ("approximate-envelope") for supports of 3 to 5 states.
MeasureValue ree_dicke(const DickeMixture& m);
MeasureValue ree_dicke(const QuditDickeMixture& m);

struct SuperpositionEigenvalue {
  double lambda;
  double e;  // -2 log2 lambda
  std::vector<double> u;  // maximizing single-party occupations
};
/// Entanglement eigenvalue of sum_k sqrt(q_k)|S(n,k)>, q indexed by k.
SuperpositionEigenvalue entanglement_eigenvalue_superposition(int n, const std::vector<double>& q);
/// Qudit analogue with q over enumerate_compositions(n, d).
SuperpositionEigenvalue entanglement_eigenvalue_superposition(int n, int d, const std::vector<double>& q,
                                                              int restarts = 50, std::uint64_t seed = 2008);

/// E_log = co E along the mixture's support.
MeasureValue e_log_mixture(const DickeMixture& m);
MeasureValue e_log_mixture(const QuditDickeMixture& m);

}  // namespace reelab

#pragma once

// Symmetric (Dicke) states of n qubits or qudits and their diagonal mixtures.
//
// Qubit convention: |S(n,k)> carries k zeros and n-k ones, so the W state
// (|001>+|010>+|100>)/sqrt(3) is |S(3,2)>. Qudit levels are 0-based here;
// a composition counts how many parties sit in each level.

#include <utility>
#include <vector>

#include "reelab/qcore.hpp"

namespace reelab {

double binomial(int n, int k);
double log_binomial(int n, int k);

class DickeIndex {
 public:
  DickeIndex(int n, int k);
  int n() const { return n_; }
  int k() const { return k_; }
  double binomial() const { return reelab::binomial(n_, k_); }
  bool operator==(const DickeIndex&) const = default;

 private:
  int n_;
  int k_;
};

class QuditComposition {
 public:
  explicit QuditComposition(std::vector<int> counts);
  /// Composition (k, n-k) in d = 2, the qudit form of |S(n,k)>.
  static QuditComposition from_dicke(const DickeIndex& idx);

  int n() const { return n_; }
  int d() const { return static_cast<int>(counts_.size()); }
  int count(int level) const { return counts_.at(static_cast<std::size_t>(level)); }
  const std::vector<int>& counts() const { return counts_; }
  /// n! / prod k_i!
  double multinomial() const;
  double log_multinomial() const;

  auto operator<=>(const QuditComposition&) const = default;

 private:
  std::vector<int> counts_;
  int n_ = 0;
};

/// All compositions of n into d parts, lexicographically descending:
/// (n,0,...,0) first and (0,...,0,n) last.
std::vector<QuditComposition> enumerate_compositions(int n, int d);
/// Position of `c` within enumerate_compositions(c.n(), c.d()).
std::size_t composition_position(const QuditComposition& c);

/// sum_k p_k |S(n,k)><S(n,k)|, weights indexed by k = 0..n.
class DickeMixture {
 public:
  DickeMixture(int n, std::vector<double> weights);
  static DickeMixture pure(const DickeIndex& idx);
  /// s |S(n,k1)><S(n,k1)| + (1-s) |S(n,k2)><S(n,k2)|
  static DickeMixture two_component(int n, int k1, int k2, double s);

  int n() const { return n_; }
  const std::vector<double>& weights() const { return p_; }
  double weight(int k) const { return p_.at(static_cast<std::size_t>(k)); }
  /// sum_k p_k k
  double mean_zeros() const;
  std::vector<int> support() const;

 private:
  int n_;
  std::vector<double> p_;
};

/// sum_kvec p_kvec |S(n;kvec)><S(n;kvec)|, weights in enumerate_compositions order.
class QuditDickeMixture {
 public:
  QuditDickeMixture(int n, int d, std::vector<double> weights);
  static QuditDickeMixture from_terms(int n, int d, const std::vector<std::pair<QuditComposition, double>>& terms);
  static QuditDickeMixture from_qubit(const DickeMixture& m);

  int n() const { return n_; }
  int d() const { return d_; }
  const std::vector<double>& weights() const { return p_; }
  const std::vector<QuditComposition>& compositions() const { return comps_; }
  double weight(const QuditComposition& c) const { return p_.at(composition_position(c)); }

 private:
  int n_;
  int d_;
  std::vector<QuditComposition> comps_;
  std::vector<double> p_;
};

/// Pure superposition sum_k a_k |S(n,k)>, amplitudes indexed by k.
struct SymmetricQubitState {
  int n = 0;
  std::vector<cplx> amplitudes;
};

/// Pure superposition sum_kvec a_kvec |S(n;kvec)> in composition order.
struct SymmetricQuditState {
  int n = 0;
  int d = 0;
  std::vector<cplx> amplitudes;
};

PureState dicke_state_vector(const DickeIndex& idx);
PureState qudit_dicke_state_vector(const QuditComposition& c);
PureState embed(const SymmetricQubitState& psi);
PureState embed(const SymmetricQuditState& psi);

DensityOperator mixture_density(const DickeMixture& m);
DensityOperator mixture_density(const QuditDickeMixture& m);

/// Traces out `drop_count` parties, one at a time.
DickeMixture partial_trace_dicke(const DickeMixture& m, int drop_count);

/// Groups `copies` copies of each party into one 2^copies-level party.
/// Copy 1 supplies the most significant bit of the new level label.
SymmetricQuditState collapse_copies(int copies, const SymmetricQubitState& base);
/// The mixture case: rho^{(x)m} is an ensemble of collapsed products of
/// Dicke states, which is generally not diagonal in the qudit Dicke basis.
std::vector<std::pair<double, SymmetricQuditState>> collapse_copies(int copies, const DickeMixture& base);

/// <S(n,k)|Phi>
cplx product_overlap(const DickeIndex& idx, const ProductState& phi);
/// <S(n;kvec)|Phi>
cplx product_overlap(const QuditComposition& c, const ProductState& phi);

}  // namespace reelab

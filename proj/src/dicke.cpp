#include "reelab/dicke.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace reelab {

namespace {

void check_weights(std::vector<double>& p, const char* what) {
  double total = 0.0;
  for (double w : p) {
    if (!std::isfinite(w) || w < -1e-12) throw ValidationError(std::string(what) + ": weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError(std::string(what) + ": weights must sum to 1");
  for (double& w : p) w = std::max(0.0, w) / total;
}

int popcount(Index v) { return __builtin_popcountll(static_cast<unsigned long long>(v)); }

void enumerate_into(int remaining, int parts, std::vector<int>& prefix, std::vector<QuditComposition>& out) {
  if (parts == 1) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = remaining; first >= 0; --first) {
    prefix.push_back(first);
    enumerate_into(remaining - first, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

// Amplitude of the basis string `levels` in the collapse of per-copy
// symmetric qubit states.
cplx collapsed_amplitude(const std::vector<SymmetricQubitState>& copies, const std::vector<int>& levels) {
  const int m = static_cast<int>(copies.size());
  const int n = static_cast<int>(levels.size());
  cplx amp = 1.0;
  for (int c = 0; c < m; ++c) {
    int zeros = 0;
    for (int level : levels)
      if (((level >> (m - 1 - c)) & 1) == 0) ++zeros;
    amp *= copies[static_cast<std::size_t>(c)].amplitudes[static_cast<std::size_t>(zeros)] / std::sqrt(binomial(n, zeros));
  }
  return amp;
}

SymmetricQuditState collapse(const std::vector<SymmetricQubitState>& copies) {
  const int m = static_cast<int>(copies.size());
  const int n = copies.front().n;
  const int d = 1 << m;
  SymmetricQuditState out{n, d, {}};
  for (const auto& c : enumerate_compositions(n, d)) {
    std::vector<int> levels;
    for (int l = 0; l < d; ++l) levels.insert(levels.end(), static_cast<std::size_t>(c.count(l)), l);
    out.amplitudes.push_back(std::sqrt(c.multinomial()) * collapsed_amplitude(copies, levels));
  }
  return out;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(log_binomial(n, k)));
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// ---------------------------------------------------------------- index types

DickeIndex::DickeIndex(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw ValidationError("DickeIndex: n must be positive");
  if (k < 0 || k > n) throw ValidationError("DickeIndex: require 0 <= k <= n");
}

QuditComposition::QuditComposition(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) throw ValidationError("QuditComposition: need at least two levels");
  for (int c : counts_) {
    if (c < 0) throw ValidationError("QuditComposition: counts must be nonnegative");
    n_ += c;
  }
  if (n_ < 1) throw ValidationError("QuditComposition: counts must sum to a positive n");
}

QuditComposition QuditComposition::from_dicke(const DickeIndex& idx) {
  return QuditComposition({idx.k(), idx.n() - idx.k()});
}

double QuditComposition::log_multinomial() const {
  double v = std::lgamma(n_ + 1.0);
  for (int c : counts_) v -= std::lgamma(c + 1.0);
  return v;
}

double QuditComposition::multinomial() const { return std::round(std::exp(log_multinomial())); }

std::vector<QuditComposition> enumerate_compositions(int n, int d) {
  if (n < 1 || d < 2) throw ValidationError("enumerate_compositions: need n >= 1 and d >= 2");
  std::vector<QuditComposition> out;
  std::vector<int> prefix;
  enumerate_into(n, d, prefix, out);
  return out;
}

std::size_t composition_position(const QuditComposition& c) {
  // Count compositions that precede c in descending lexicographic order.
  std::size_t pos = 0;
  int remaining = c.n();
  for (int i = 0; i + 1 < c.d(); ++i) {
    const int parts_after = c.d() - i - 1;
    for (int larger = remaining; larger > c.count(i); --larger)
      pos += static_cast<std::size_t>(binomial(remaining - larger + parts_after - 1, parts_after - 1));
    remaining -= c.count(i);
  }
  return pos;
}

// ---------------------------------------------------------------- mixtures

DickeMixture::DickeMixture(int n, std::vector<double> weights) : n_(n), p_(std::move(weights)) {
  if (n < 1) throw ValidationError("DickeMixture: n must be positive");
  if (static_cast<int>(p_.size()) != n + 1) throw ValidationError("DickeMixture: need n+1 weights");
  check_weights(p_, "DickeMixture");
}

DickeMixture DickeMixture::pure(const DickeIndex& idx) {
  std::vector<double> p(static_cast<std::size_t>(idx.n() + 1), 0.0);
  p[static_cast<std::size_t>(idx.k())] = 1.0;
  return DickeMixture(idx.n(), std::move(p));
}

DickeMixture DickeMixture::two_component(int n, int k1, int k2, double s) {
  DickeIndex a(n, k1), b(n, k2);
  if (k1 == k2) throw ValidationError("DickeMixture::two_component: k1 and k2 must differ");
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("DickeMixture::two_component: s must lie in [0,1]");
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  p[static_cast<std::size_t>(k1)] = s;
  p[static_cast<std::size_t>(k2)] = 1.0 - s;
  return DickeMixture(n, std::move(p));
}

double DickeMixture::mean_zeros() const {
  double a = 0.0;
  for (int k = 0; k <= n_; ++k) a += p_[static_cast<std::size_t>(k)] * k;
  return a;
}

std::vector<int> DickeMixture::support() const {
  std::vector<int> s;
  for (int k = 0; k <= n_; ++k)
    if (p_[static_cast<std::size_t>(k)] > 0.0) s.push_back(k);
  return s;
}

QuditDickeMixture::QuditDickeMixture(int n, int d, std::vector<double> weights)
    : n_(n), d_(d), comps_(enumerate_compositions(n, d)), p_(std::move(weights)) {
  if (p_.size() != comps_.size()) throw ValidationError("QuditDickeMixture: one weight per composition required");
  check_weights(p_, "QuditDickeMixture");
}

QuditDickeMixture QuditDickeMixture::from_terms(int n, int d,
                                                const std::vector<std::pair<QuditComposition, double>>& terms) {
  std::vector<double> p(enumerate_compositions(n, d).size(), 0.0);
  for (const auto& [c, w] : terms) {
    if (c.n() != n || c.d() != d) throw ValidationError("QuditDickeMixture: composition does not match (n, d)");
    p[composition_position(c)] += w;
  }
  return QuditDickeMixture(n, d, std::move(p));
}

QuditDickeMixture QuditDickeMixture::from_qubit(const DickeMixture& m) {
  std::vector<std::pair<QuditComposition, double>> terms;
  for (int k = 0; k <= m.n(); ++k) terms.emplace_back(QuditComposition({k, m.n() - k}), m.weight(k));
  return from_terms(m.n(), 2, terms);
}

// ---------------------------------------------------------------- full-space vectors

PureState dicke_state_vector(const DickeIndex& idx) {
  const auto layout = HilbertLayout::qubits(idx.n());
  const double amp = 1.0 / std::sqrt(idx.binomial());
  Vector v = Vector::Zero(layout.total_dim());
  for (Index i = 0; i < v.size(); ++i)
    if (idx.n() - popcount(i) == idx.k()) v[i] = amp;
  return PureState::normalized(layout, std::move(v));
}

PureState qudit_dicke_state_vector(const QuditComposition& c) {
  const auto layout = HilbertLayout::uniform(c.n(), c.d());
  const double amp = 1.0 / std::sqrt(c.multinomial());
  Vector v = Vector::Zero(layout.total_dim());
  std::vector<int> counts(static_cast<std::size_t>(c.d()));
  for (Index i = 0; i < v.size(); ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int digit : layout.digits(i)) ++counts[static_cast<std::size_t>(digit)];
    if (counts == c.counts()) v[i] = amp;
  }
  return PureState::normalized(layout, std::move(v));
}

PureState embed(const SymmetricQubitState& psi) {
  if (static_cast<int>(psi.amplitudes.size()) != psi.n + 1)
    throw ValidationError("SymmetricQubitState: need n+1 amplitudes");
  const auto layout = HilbertLayout::qubits(psi.n);
  Vector v(layout.total_dim());
  for (Index i = 0; i < v.size(); ++i) {
    const int zeros = psi.n - popcount(i);
    v[i] = psi.amplitudes[static_cast<std::size_t>(zeros)] / std::sqrt(binomial(psi.n, zeros));
  }
  return PureState(layout, std::move(v));
}

PureState embed(const SymmetricQuditState& psi) {
  const auto comps = enumerate_compositions(psi.n, psi.d);
  if (psi.amplitudes.size() != comps.size()) throw ValidationError("SymmetricQuditState: one amplitude per composition");
  const auto layout = HilbertLayout::uniform(psi.n, psi.d);
  Vector v(layout.total_dim());
  std::vector<int> counts(static_cast<std::size_t>(psi.d));
  for (Index i = 0; i < v.size(); ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int digit : layout.digits(i)) ++counts[static_cast<std::size_t>(digit)];
    const QuditComposition c(counts);
    v[i] = psi.amplitudes[composition_position(c)] / std::sqrt(c.multinomial());
  }
  return PureState(layout, std::move(v));
}

DensityOperator mixture_density(const DickeMixture& m) {
  const auto layout = HilbertLayout::qubits(m.n());
  Matrix rho = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (int k : m.support()) {
    const Vector v = dicke_state_vector(DickeIndex(m.n(), k)).amplitudes();
    rho += m.weight(k) * (v * v.adjoint());
  }
  return DensityOperator(layout, rho);
}

DensityOperator mixture_density(const QuditDickeMixture& m) {
  const auto layout = HilbertLayout::uniform(m.n(), m.d());
  Matrix rho = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (std::size_t i = 0; i < m.compositions().size(); ++i) {
    if (m.weights()[i] <= 0.0) continue;
    const Vector v = qudit_dicke_state_vector(m.compositions()[i]).amplitudes();
    rho += m.weights()[i] * (v * v.adjoint());
  }
  return DensityOperator(layout, rho);
}

// ---------------------------------------------------------------- reductions

DickeMixture partial_trace_dicke(const DickeMixture& m, int drop_count) {
  if (drop_count < 1 || drop_count >= m.n())
    throw ValidationError("partial_trace_dicke: require 1 <= drop_count < n");
  int n = m.n();
  std::vector<double> p = m.weights();
  for (int step = 0; step < drop_count; ++step, --n) {
    std::vector<double> q(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k <= n; ++k) {
      const double w = p[static_cast<std::size_t>(k)];
      if (w == 0.0) continue;
      if (k < n) q[static_cast<std::size_t>(k)] += w * (n - k) / n;
      if (k > 0) q[static_cast<std::size_t>(k - 1)] += w * k / n;
    }
    p = std::move(q);
  }
  return DickeMixture(n, std::move(p));
}

SymmetricQuditState collapse_copies(int copies, const SymmetricQubitState& base) {
  if (copies < 1) throw ValidationError("collapse_copies: copy count must be positive");
  if (static_cast<int>(base.amplitudes.size()) != base.n + 1)
    throw ValidationError("collapse_copies: need n+1 amplitudes");
  return collapse(std::vector<SymmetricQubitState>(static_cast<std::size_t>(copies), base));
}

std::vector<std::pair<double, SymmetricQuditState>> collapse_copies(int copies, const DickeMixture& base) {
  if (copies < 1) throw ValidationError("collapse_copies: copy count must be positive");
  const auto support = base.support();
  std::vector<std::pair<double, SymmetricQuditState>> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(copies), 0);
  while (true) {
    double w = 1.0;
    std::vector<SymmetricQubitState> states;
    for (std::size_t idx : pick) {
      const int k = support[idx];
      w *= base.weight(k);
      SymmetricQubitState s{base.n(), std::vector<cplx>(static_cast<std::size_t>(base.n() + 1), 0.0)};
      s.amplitudes[static_cast<std::size_t>(k)] = 1.0;
      states.push_back(std::move(s));
    }
    out.emplace_back(w, collapse(states));
    // odometer over the support
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == support.size()) pick[c++] = 0;
    if (c == pick.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------- overlaps

cplx product_overlap(const DickeIndex& idx, const ProductState& phi) {
  if (!(phi.layout() == HilbertLayout::qubits(idx.n())))
    throw ValidationError("product_overlap: layout is not n qubits");
  // poly[z]: sum over partial strings with z zeros of the product amplitude
  std::vector<cplx> poly{1.0};
  for (const Vector& f : phi.factors()) {
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t z = 0; z < poly.size(); ++z) {
      next[z] += poly[z] * f[1];
      next[z + 1] += poly[z] * f[0];
    }
    poly = std::move(next);
  }
  return poly[static_cast<std::size_t>(idx.k())] / std::sqrt(idx.binomial());
}

cplx product_overlap(const QuditComposition& c, const ProductState& phi) {
  if (!(phi.layout() == HilbertLayout::uniform(c.n(), c.d())))
    throw ValidationError("product_overlap: layout does not match composition");
  std::map<std::vector<int>, cplx> partial{{std::vector<int>(static_cast<std::size_t>(c.d()), 0), 1.0}};
  for (const Vector& f : phi.factors()) {
    std::map<std::vector<int>, cplx> next;
    for (const auto& [counts, amp] : partial) {
      for (int l = 0; l < c.d(); ++l) {
        if (counts[static_cast<std::size_t>(l)] >= c.count(l)) continue;
        auto key = counts;
        ++key[static_cast<std::size_t>(l)];
        next[key] += amp * f[l];
      }
    }
    partial = std::move(next);
  }
  return partial[c.counts()] / std::sqrt(c.multinomial());
}

}  // namespace reelab

#include "reelab/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace reelab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// A mixture restricted to the compositions it is supported on. Everything
// here works in that reduced simplex: x_i is the weight of support_[i].
class SupportModel {
 public:
  SupportModel(int n, int d, std::vector<QuditComposition> support)
      : n_(n), d_(d), support_(std::move(support)) {}

  static SupportModel of(const QuditDickeMixture& m, std::vector<double>& x) {
    std::vector<QuditComposition> comps;
    x.clear();
    for (std::size_t i = 0; i < m.compositions().size(); ++i)
      if (m.weights()[i] > 0.0) {
        comps.push_back(m.compositions()[i]);
        x.push_back(m.weights()[i]);
      }
    return SupportModel(m.n(), m.d(), std::move(comps));
  }

  std::size_t size() const { return support_.size(); }
  const QuditComposition& comp(std::size_t i) const { return support_[i]; }

  std::vector<double> ubar(const std::vector<double>& x) const {
    std::vector<double> u(static_cast<std::size_t>(d_), 0.0);
    for (std::size_t i = 0; i < support_.size(); ++i)
      for (int j = 0; j < d_; ++j) u[static_cast<std::size_t>(j)] += x[i] * support_[i].count(j) / n_;
    return u;
  }

  double f(const std::vector<double>& x) const {
    const auto u = ubar(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (x[i] <= 0.0) continue;
      double log_r = support_[i].log_multinomial();
      for (int j = 0; j < d_; ++j)
        if (support_[i].count(j) > 0) log_r += support_[i].count(j) * std::log(u[static_cast<std::size_t>(j)]);
      acc += x[i] * (std::log(x[i]) - log_r);
    }
    return std::max(0.0, acc / std::numbers::ln2);
  }

  SuperpositionEigenvalue eigenvalue(const std::vector<double>& x, int restarts, std::uint64_t seed) const;

  QuditDickeMixture embed_weights(const std::vector<double>& x) const {
    std::vector<std::pair<QuditComposition, double>> terms;
    for (std::size_t i = 0; i < support_.size(); ++i) terms.emplace_back(support_[i], x[i]);
    return QuditDickeMixture::from_terms(n_, d_, terms);
  }

  int n() const { return n_; }
  int d() const { return d_; }

 private:
  int n_;
  int d_;
  std::vector<QuditComposition> support_;
};

// Lambda(u) = sum_i a_i prod_j v_j^{k_ij} with u_j = v_j^2, v on the unit sphere.
struct SphereObjective {
  std::vector<double> a;
  std::vector<std::vector<int>> k;
  int d;

  double value(const std::vector<double>& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double t = a[i];
      for (int j = 0; j < d; ++j) t *= std::pow(v[static_cast<std::size_t>(j)], k[i][static_cast<std::size_t>(j)]);
      acc += t;
    }
    return acc;
  }

  std::vector<double> gradient(const std::vector<double>& v) const {
    std::vector<double> g(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (int j = 0; j < d; ++j) {
        const int kij = k[i][static_cast<std::size_t>(j)];
        if (kij == 0) continue;
        double t = a[i] * kij * std::pow(v[static_cast<std::size_t>(j)], kij - 1);
        for (int l = 0; l < d; ++l)
          if (l != j) t *= std::pow(v[static_cast<std::size_t>(l)], k[i][static_cast<std::size_t>(l)]);
        g[static_cast<std::size_t>(j)] += t;
      }
    return g;
  }
};

std::vector<double> project_to_sphere(std::vector<double> v) {
  double nrm = 0.0;
  for (double& x : v) {
    x = std::max(0.0, x);
    nrm += x * x;
  }
  nrm = std::sqrt(nrm);
  for (double& x : v) x /= nrm;
  return v;
}

// Projected gradient ascent with an adaptive step; returns the local maximum.
std::pair<double, std::vector<double>> ascend(const SphereObjective& obj, std::vector<double> v) {
  v = project_to_sphere(std::move(v));
  double val = obj.value(v);
  double step = 0.1;
  for (int iter = 0; iter < 5000 && step > 1e-16; ++iter) {
    const auto g = obj.gradient(v);
    std::vector<double> trial(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) trial[j] = v[j] + step * g[j];
    trial = project_to_sphere(std::move(trial));
    const double tv = obj.value(trial);
    if (tv > val) {
      const double gain = tv - val;
      v = std::move(trial);
      val = tv;
      step *= 2.0;
      if (gain < 1e-16 * std::max(1.0, val)) break;
    } else {
      step *= 0.5;
    }
  }
  return {val, v};
}

SuperpositionEigenvalue SupportModel::eigenvalue(const std::vector<double>& x, int restarts,
                                                 std::uint64_t seed) const {
  SphereObjective obj{{}, {}, d_};
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (x[i] <= 0.0) continue;
    obj.a.push_back(std::sqrt(x[i] * support_[i].multinomial()));
    obj.k.push_back(support_[i].counts());
  }

  double best = -1.0;
  std::vector<double> best_u;
  auto consider = [&](double val, const std::vector<double>& v) {
    if (val > best) {
      best = val;
      best_u.resize(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) best_u[j] = v[j] * v[j];
    }
  };

  if (d_ == 2) {
    // One angle: v = (cos t, sin t). Scan, then golden-section on the best bracket.
    auto lam = [&](double t) { return obj.value({std::cos(t), std::sin(t)}); };
    constexpr int kScan = 2000;
    int arg = 0;
    double top = -1.0;
    for (int i = 0; i <= kScan; ++i) {
      const double v = lam(kHalfPi * i / kScan);
      if (v > top) {
        top = v;
        arg = i;
      }
    }
    const double lo = kHalfPi * std::max(0, arg - 1) / kScan;
    const double hi = kHalfPi * std::min(kScan, arg + 1) / kScan;
    const double t = golden_section_minimize([&](double s) { return -lam(s); }, lo, hi, 1e-12);
    for (double cand : {t, lo, hi}) consider(lam(cand), {std::cos(cand), std::sin(cand)});
  } else {
    Rng rng(seed);
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::vector<std::vector<double>> starts;
    starts.emplace_back(static_cast<std::size_t>(d_), 1.0);
    for (const auto& k : obj.k) {
      std::vector<double> v(k.size());
      for (std::size_t j = 0; j < k.size(); ++j) v[j] = std::sqrt(static_cast<double>(k[j]));
      starts.push_back(v);
    }
    for (int r = 0; r < restarts; ++r) {
      std::vector<double> v(static_cast<std::size_t>(d_));
      for (double& c : v) c = std::sqrt(gamma(rng));
      starts.push_back(std::move(v));
    }
    for (const auto& s : starts) {
      const auto [val, v] = ascend(obj, s);
      consider(val, v);
    }
  }
  const double lambda = std::min(1.0, best);
  return {lambda, -2.0 * std::log2(lambda), best_u};
}

std::string comp_label(const QuditComposition& c) {
  std::ostringstream os;
  os << '(';
  for (int j = 0; j < c.d(); ++j) os << (j ? "," : "") << c.count(j);
  os << ')';
  return os.str();
}

int lp_resolution(std::size_t support) {
  switch (support) {
    case 3: return 100;
    case 4: return 36;
    default: return 20;
  }
}

constexpr std::size_t kMaxLpSupport = 5;

QuditDickeMixture mix_sigmas(const std::vector<std::pair<double, std::vector<double>>>& atoms, int n) {
  std::vector<double> acc;
  int d = 0;
  for (const auto& [w, u] : atoms) {
    const auto s = dephased_separable_sigma(u, n);
    if (acc.empty()) {
      acc.assign(s.weights().size(), 0.0);
      d = s.d();
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * s.weights()[i];
  }
  double total = 0.0;
  for (double v : acc) total += v;
  for (double& v : acc) v /= total;
  return QuditDickeMixture(n, d, std::move(acc));
}

ClosestSeparable closest_generic(const QuditDickeMixture& m) {
  std::vector<double> x;
  const SupportModel model = SupportModel::of(m, x);
  std::vector<std::pair<double, std::vector<double>>> atoms;
  double value = 0.0;
  std::string method = "closed-form";

  if (model.size() == 1) {
    atoms.emplace_back(1.0, model.ubar(x));
    value = pure_dicke_ree(model.comp(0));
  } else if (model.size() == 2) {
    const bool qubit = m.d() == 2;
    const auto family = qubit ? TwoComponentFamily::qubit(m.n(), model.comp(0).count(0), model.comp(1).count(0))
                              : TwoComponentFamily::qudit(model.comp(0), model.comp(1));
    const auto env = family.ree_envelope();
    const double s = x[0];
    if (const auto bridge = env.bridge_at(s)) {
      const double w = (bridge->right - s) / (bridge->right - bridge->left);
      atoms.emplace_back(w, model.ubar({bridge->left, 1.0 - bridge->left}));
      atoms.emplace_back(1.0 - w, model.ubar({bridge->right, 1.0 - bridge->right}));
      value = env(s);
      method = "envelope";
    } else {
      atoms.emplace_back(1.0, model.ubar(x));
      value = model.f(x);
    }
  } else if (model.size() <= kMaxLpSupport) {
    const auto lp = simplex_envelope([&](const std::vector<double>& y) { return model.f(y); }, x,
                                     lp_resolution(model.size()));
    for (const auto& [w, y] : lp.atoms) atoms.emplace_back(w, model.ubar(y));
    value = lp.value;
    method = "approximate-envelope";
  } else {
    atoms.emplace_back(1.0, model.ubar(x));
    value = model.f(x);
    method = "F-unconvexified";
  }
  const bool convexified = atoms.size() > 1;
  return {atoms, mix_sigmas(atoms, m.n()), value, method, convexified};
}

MeasureValue elog_generic(const QuditDickeMixture& m) {
  std::vector<double> x;
  const SupportModel model = SupportModel::of(m, x);
  if (model.size() == 1) return {pure_dicke_ree(model.comp(0)), "closed-form"};
  if (model.size() == 2) {
    const bool qubit = m.d() == 2;
    const auto family = qubit ? TwoComponentFamily::qubit(m.n(), model.comp(0).count(0), model.comp(1).count(0))
                              : TwoComponentFamily::qudit(model.comp(0), model.comp(1));
    return {family.elog_envelope()(x[0]), "envelope"};
  }
  auto e = [&](const std::vector<double>& y) { return model.eigenvalue(y, 50, 2008).e; };
  if (model.size() <= kMaxLpSupport)
    return {simplex_envelope(e, x, lp_resolution(model.size()) / 2).value, "approximate-envelope"};
  return {e(x), "E-unconvexified"};
}

}  // namespace

// ---------------------------------------------------------------- angles and eigenvalues

AngleTheta::AngleTheta(double radians) : theta_(radians) {
  if (!(radians >= 0.0 && radians <= kHalfPi + 1e-15)) throw ValidationError("AngleTheta: theta must lie in [0, pi/2]");
  theta_ = std::min(radians, kHalfPi);
}

AngleTheta AngleTheta::from_cos2(double cos2) {
  if (!(cos2 >= -1e-15 && cos2 <= 1.0 + 1e-15)) throw ValidationError("AngleTheta: cos^2 must lie in [0,1]");
  return AngleTheta(std::acos(std::sqrt(std::clamp(cos2, 0.0, 1.0))));
}

double AngleTheta::cos2() const {
  if (theta_ == kHalfPi) return 0.0;
  const double c = std::cos(theta_);
  return c * c;
}

double AngleTheta::sin2() const {
  const double s = std::sin(theta_);
  return s * s;
}

double lambda_max_dicke(const DickeIndex& idx) { return lambda_max_qudit(QuditComposition::from_dicke(idx)); }

double lambda_max_qudit(const QuditComposition& c) {
  double log_l = 0.5 * c.log_multinomial();
  for (int j = 0; j < c.d(); ++j) {
    const int k = c.count(j);
    if (k > 0) log_l += 0.5 * k * std::log(static_cast<double>(k) / c.n());
  }
  return std::min(1.0, std::exp(log_l));
}

double pure_dicke_ree(const DickeIndex& idx) { return pure_dicke_ree(QuditComposition::from_dicke(idx)); }

double pure_dicke_ree(const QuditComposition& c) {
  double log_l2 = c.log_multinomial();
  for (int j = 0; j < c.d(); ++j) {
    const int k = c.count(j);
    if (k > 0) log_l2 += k * std::log(static_cast<double>(k) / c.n());
  }
  return std::max(0.0, -log_l2 / std::numbers::ln2);
}

// ---------------------------------------------------------------- F and the dephased family

AngleTheta theta_star(const DickeMixture& m) {
  const double alpha = m.mean_zeros();
  if (alpha <= 0.0) return AngleTheta(kHalfPi);
  if (alpha >= m.n()) return AngleTheta(0.0);
  return AngleTheta::from_cos2(alpha / m.n());
}

DickeMixture dephased_separable_sigma(const AngleTheta& theta, int n) {
  const double c2 = theta.cos2(), s2 = theta.sin2();
  std::vector<double> r(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) r[static_cast<std::size_t>(k)] = binomial(n, k) * std::pow(c2, k) * std::pow(s2, n - k);
  double total = 0.0;
  for (double v : r) total += v;
  for (double& v : r) v /= total;
  return DickeMixture(n, std::move(r));
}

QuditDickeMixture dephased_separable_sigma(const std::vector<double>& u, int n) {
  const int d = static_cast<int>(u.size());
  double usum = 0.0;
  for (double v : u) {
    if (!(v >= 0.0)) throw ValidationError("dephased_separable_sigma: occupations must be nonnegative");
    usum += v;
  }
  if (std::abs(usum - 1.0) > 1e-10) throw ValidationError("dephased_separable_sigma: occupations must sum to 1");
  const auto comps = enumerate_compositions(n, d);
  std::vector<double> r;
  r.reserve(comps.size());
  double total = 0.0;
  for (const auto& c : comps) {
    double v = c.multinomial();
    for (int j = 0; j < d; ++j) v *= std::pow(u[static_cast<std::size_t>(j)] / usum, c.count(j));
    r.push_back(v);
    total += v;
  }
  for (double& v : r) v /= total;
  return QuditDickeMixture(n, d, std::move(r));
}

double relative_entropy_to_dephased(const DickeMixture& m, const AngleTheta& theta) {
  const auto r = dephased_separable_sigma(theta, m.n());
  double acc = 0.0;
  for (int k : m.support()) {
    const double p = m.weight(k), q = r.weight(k);
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    acc += p * std::log2(p / q);
  }
  return std::max(0.0, acc);
}

double f_value(const DickeMixture& m) {
  const int n = m.n();
  const double alpha = m.mean_zeros();
  double acc = 0.0;
  for (int k : m.support()) {
    const double p = m.weight(k);
    // log2 [ p n^n / (C alpha^k (n - alpha)^(n-k)) ]
    double term = std::log2(p) + n * std::log2(static_cast<double>(n)) - log_binomial(n, k) / std::numbers::ln2;
    if (k > 0) term -= k * std::log2(alpha);
    if (n - k > 0) term -= (n - k) * std::log2(n - alpha);
    acc += p * term;
  }
  return std::max(0.0, acc);
}

std::vector<double> mean_occupation(const QuditDickeMixture& m) {
  std::vector<double> x;
  return SupportModel::of(m, x).ubar(x);
}

double f_value_qudit(const QuditDickeMixture& m) {
  std::vector<double> x;
  return SupportModel::of(m, x).f(x);
}

// ---------------------------------------------------------------- two-component families

TwoComponentFamily::TwoComponentFamily(QuditComposition a, QuditComposition b, bool qubit)
    : a_(std::move(a)), b_(std::move(b)), qubit_(qubit) {
  if (a_.n() != b_.n() || a_.d() != b_.d()) throw ValidationError("TwoComponentFamily: compositions differ in (n, d)");
  if (a_ == b_) throw ValidationError("TwoComponentFamily: components must differ");
}

TwoComponentFamily TwoComponentFamily::qubit(int n, int k1, int k2) {
  return TwoComponentFamily(QuditComposition::from_dicke(DickeIndex(n, k1)),
                            QuditComposition::from_dicke(DickeIndex(n, k2)), true);
}

TwoComponentFamily TwoComponentFamily::qudit(QuditComposition a, QuditComposition b) {
  return TwoComponentFamily(std::move(a), std::move(b), false);
}

std::string TwoComponentFamily::label() const {
  std::ostringstream os;
  if (qubit_)
    os << n() << ';' << a_.count(0) << ',' << b_.count(0);
  else
    os << comp_label(a_) << '|' << comp_label(b_);
  return os.str();
}

QuditDickeMixture TwoComponentFamily::mixture(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("TwoComponentFamily: s must lie in [0,1]");
  return QuditDickeMixture::from_terms(n(), d(), {{a_, s}, {b_, 1.0 - s}});
}

DensityOperator TwoComponentFamily::density(double s) const { return mixture_density(mixture(s)); }

double TwoComponentFamily::f(double s) const { return SupportModel(n(), d(), {a_, b_}).f({s, 1.0 - s}); }

double TwoComponentFamily::e(double s) const {
  return SupportModel(n(), d(), {a_, b_}).eigenvalue({s, 1.0 - s}, 50, 2008).e;
}

FCurve TwoComponentFamily::f_curve(int points) const {
  const TwoComponentFamily self = *this;
  return FCurve::sample("F " + label(), [self](double s) { return self.f(s); }, points);
}

FCurve TwoComponentFamily::e_curve(int points) const {
  const TwoComponentFamily self = *this;
  return FCurve::sample("E " + label(), [self](double s) { return self.e(s); }, points);
}

ConvexEnvelope TwoComponentFamily::ree_envelope(int points) const { return convex_envelope_1d(f_curve(points)); }

ConvexEnvelope TwoComponentFamily::elog_envelope(int points) const { return convex_envelope_1d(e_curve(points)); }

double ree_two_component(int n, int k1, int k2, double s) {
  return ree_two_component(TwoComponentFamily::qubit(n, k1, k2), s);
}

double ree_two_component(const TwoComponentFamily& family, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("ree_two_component: s must lie in [0,1]");
  return family.ree_envelope()(s);
}

// ---------------------------------------------------------------- closest separable states

ClosestSeparable closest_separable_dicke(const DickeMixture& m) {
  return closest_generic(QuditDickeMixture::from_qubit(m));
}

ClosestSeparable closest_separable_dicke(const QuditDickeMixture& m) { return closest_generic(m); }

DickeMixture to_qubit(const QuditDickeMixture& m) {
  if (m.d() != 2) throw ValidationError("to_qubit: mixture is not over qubits");
  std::vector<double> p(static_cast<std::size_t>(m.n() + 1), 0.0);
  for (std::size_t i = 0; i < m.compositions().size(); ++i)
    p[static_cast<std::size_t>(m.compositions()[i].count(0))] = m.weights()[i];
  return DickeMixture(m.n(), std::move(p));
}

MeasureValue ree_dicke(const DickeMixture& m) {
  const auto c = closest_separable_dicke(m);
  return {c.value, c.method};
}

MeasureValue ree_dicke(const QuditDickeMixture& m) {
  const auto c = closest_separable_dicke(m);
  return {c.value, c.method};
}

// ---------------------------------------------------------------- E and E_log

SuperpositionEigenvalue entanglement_eigenvalue_superposition(int n, const std::vector<double>& q) {
  const DickeMixture weights(n, q);  // validates q as a probability vector
  return entanglement_eigenvalue_superposition(n, 2, QuditDickeMixture::from_qubit(weights).weights());
}

SuperpositionEigenvalue entanglement_eigenvalue_superposition(int n, int d, const std::vector<double>& q,
                                                              int restarts, std::uint64_t seed) {
  const QuditDickeMixture weights(n, d, q);
  std::vector<double> x;
  const SupportModel model = SupportModel::of(weights, x);
  return model.eigenvalue(x, restarts, seed);
}

MeasureValue e_log_mixture(const DickeMixture& m) { return elog_generic(QuditDickeMixture::from_qubit(m)); }

MeasureValue e_log_mixture(const QuditDickeMixture& m) { return elog_generic(m); }

}  // namespace reelab

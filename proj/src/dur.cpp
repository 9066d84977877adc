#include "reelab/dur.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "reelab/parallel.hpp"

namespace reelab {

namespace {

constexpr double kGradientTolerance = 1e-10;
constexpr double kGapTolerance = -1e-9;

Index all_ones(int n) { return (Index{1} << n) - 1; }
// Party k (0-based) is the k-th most significant bit.
Index single_one(int n, int k) { return Index{1} << (n - 1 - k); }

Vector ghz(int n, double alpha, double sign = 1.0) {
  Vector v = Vector::Zero(Index{1} << n);
  v[0] = 1.0 / std::numbers::sqrt2;
  v[all_ones(n)] = sign * std::polar(1.0, alpha) / std::numbers::sqrt2;
  return v;
}

// sum_k (P_k + Pbar_k)
Matrix flip_projectors(int n) {
  const Index dim = Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const Index u = single_one(n, k);
    m(u, u) += 1.0;
    m(all_ones(n) ^ u, all_ones(n) ^ u) += 1.0;
  }
  return m;
}

Matrix dur_matrix(const DurParams& p, double alpha) {
  const Vector g = ghz(p.N, alpha);
  return p.x * (g * g.adjoint()) + ((1.0 - p.x) / (2.0 * p.N)) * flip_projectors(p.N);
}

// Largest eigenvalue of the 2x2 form in (cos t_i, sin t_i) with the other
// angles fixed, and the maximizing angle.
std::pair<double, double> coordinate_optimum(const std::vector<double>& theta, std::size_t i) {
  const std::size_t n = theta.size();
  double x = 1.0, y = 1.0, diag_c = 0.0, diag_s = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) {
      x *= std::cos(theta[j]);
      y *= std::sin(theta[j]);
    }
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    double a = 1.0, b = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      a *= j == k ? std::sin(theta[j]) : std::cos(theta[j]);
      b *= j == k ? std::cos(theta[j]) : std::sin(theta[j]);
    }
    diag_c += a * a;
    diag_s += b * b;
  }
  // The k = i terms contribute (s_i x)^2 + (c_i y)^2, the GHZ term (c_i x + s_i y)^2.
  const double mcc = x * x + y * y + diag_c;
  const double mss = y * y + x * x + diag_s;
  const double mcs = x * y;
  const double half = 0.5 * (mcc - mss);
  const double rad = std::hypot(half, mcs);
  const double top = 0.5 * (mcc + mss) + rad;
  // Eigenvector (c, s) of [[mcc, mcs], [mcs, mss]] with nonnegative entries.
  double c, s;
  if (half >= 0.0) {
    c = half + rad;
    s = mcs;
  } else {
    c = mcs;
    s = rad - half;
  }
  if (c == 0.0 && s == 0.0) c = 1.0;
  return {top, std::atan2(s, c)};
}

}  // namespace

void DurParams::validate() const {
  if (N < 3) throw ValidationError("DurParams: N must be at least 3");
  if (N > 12) throw ValidationError("DurParams: N above 12 exceeds the dense dimension limit");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("DurParams: x must lie in [0,1]");
}

DensityOperator dur_state(const DurParams& p) { return dur_state(p, 0.0); }

DensityOperator dur_state(const DurParams& p, double alpha) {
  p.validate();
  return DensityOperator(HilbertLayout::qubits(p.N), dur_matrix(p, alpha));
}

DensityOperator dur_closest_separable(const DurParams& p) {
  p.validate();
  const Vector g = ghz(p.N, 0.0), gm = ghz(p.N, 0.0, -1.0);
  const Matrix m = (p.x / 2.0) * (g * g.adjoint() + gm * gm.adjoint()) +
                   ((1.0 - p.x) / (2.0 * p.N)) * flip_projectors(p.N);
  return DensityOperator(HilbertLayout::qubits(p.N), m);
}

Matrix dur_gradient_closed_form(int N) {
  const Vector g = ghz(N, 0.0);
  return 2.0 * (g * g.adjoint()) + flip_projectors(N);
}

double dur_ree(const DurParams& p) {
  p.validate();
  if (p.N < 4) throw ValidationError("dur_ree: E_R = x is established only for N >= 4");
  return p.x;
}

double dur_e_log(const DurParams& p) {
  p.validate();
  return std::log2(2.0 / (2.0 - p.x));
}

double g_function(std::span<const double> angles) {
  const std::size_t n = angles.size();
  if (n == 0) throw ValidationError("g_function: no angles");
  double pc = 1.0, ps = 1.0;
  for (double t : angles) {
    pc *= std::cos(t);
    ps *= std::sin(t);
  }
  double g = (pc + ps) * (pc + ps);
  for (std::size_t k = 0; k < n; ++k) {
    double a = 1.0, b = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      a *= j == k ? std::sin(angles[j]) : std::cos(angles[j]);
      b *= j == k ? std::cos(angles[j]) : std::sin(angles[j]);
    }
    g += a * a + b * b;
  }
  return g;
}

GMaximum g_max(int N, int samples, std::uint64_t seed) {
  if (N < 2) throw ValidationError("g_max: N must be at least 2");
  if (samples < 1) throw ValidationError("g_max: need at least one sample");
  constexpr std::size_t kPolished = 32;
  constexpr int kSweeps = 50;

  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
  std::vector<std::pair<double, std::vector<double>>> best;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> theta(static_cast<std::size_t>(N));
    for (double& t : theta) t = angle(rng);
    const double g = g_function(theta);
    if (best.size() < kPolished || g > best.back().first) {
      best.emplace_back(g, std::move(theta));
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      if (best.size() > kPolished) best.pop_back();
    }
  }

  GMaximum out{-1.0, {}};
  for (auto& [g, theta] : best) {
    double value = g;
    for (int sweep = 0; sweep < kSweeps; ++sweep) {
      const double before = value;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const auto [top, t] = coordinate_optimum(theta, i);
        theta[i] = t;
        value = top;
      }
      if (value - before <= 1e-12) break;
    }
    value = g_function(theta);
    if (value > out.value) out = {value, theta};
  }
  return out;
}

ClosestCertificate verify_closest(const DurParams& p, int samples, std::uint64_t seed, const SolverConfig& config) {
  p.validate();
  if (p.N < 4) throw ValidationError("verify_closest: needs N >= 4");
  if (!(p.x > 0.0 && p.x < 1.0)) throw ValidationError("verify_closest: needs 0 < x < 1");
  if (samples < 0) throw ValidationError("verify_closest: negative sample count");

  ClosestCertificate cert;
  cert.params = p;
  cert.samples = samples;
  const DensityOperator rho = dur_state(p);
  const DensityOperator sigma = dur_closest_separable(p);
  const Matrix t = gradient_operator(rho, sigma);
  cert.gradient_error = (t - dur_gradient_closed_form(p.N)).cwiseAbs().maxCoeff();

  const HilbertLayout layout = HilbertLayout::qubits(p.N);
  std::vector<double> gaps(static_cast<std::size_t>(samples));
  parallel_for(gaps.size(), [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const Vector v = random_product_state(layout, rng).to_vector();
    gaps[i] = 1.0 - v.dot(t * v).real();
  });
  cert.min_sample_gap = 1.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i)
    if (gaps[i] < cert.min_sample_gap) {
      cert.min_sample_gap = gaps[i];
      worst = i;
    }

  SolverConfig inner = config;
  inner.seed = derive_seed(seed, static_cast<std::uint64_t>(samples) + 1);
  const ProductDirection dir = best_product_direction(t, layout, inner);
  cert.oracle_gap = 1.0 - dir.value;

  const bool sample_ok = cert.min_sample_gap >= kGapTolerance;
  const bool oracle_ok = cert.oracle_gap >= kGapTolerance;
  cert.passed = cert.gradient_error <= kGradientTolerance && sample_ok && oracle_ok;
  if (!sample_ok) {
    Rng rng(derive_seed(seed, worst));
    cert.violating = random_product_state(layout, rng);
  } else if (!oracle_ok) {
    cert.violating = dir.state;
  }
  return cert;
}

std::string ClosestCertificate::to_json() const {
  using nlohmann::json;
  json j = {{"N", params.N},
            {"x", params.x},
            {"samples", samples},
            {"gradient_error", gradient_error},
            {"min_sample_gap", min_sample_gap},
            {"oracle_gap", oracle_gap},
            {"passed", passed},
            {"method", "numeric"}};
  if (violating) {
    json factors = json::array();
    for (const auto& f : violating->factors()) {
      json v = json::array();
      for (Index i = 0; i < f.size(); ++i) v.push_back({f[i].real(), f[i].imag()});
      factors.push_back(v);
    }
    j["violating_state"] = factors;
  }
  return j.dump(2);
}

}  // namespace reelab

#include "reelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "reelab/closedform.hpp"
#include "reelab/dicke.hpp"
#include "reelab/envelope.hpp"

namespace reelab {

namespace {

// (ln a - ln b) / (a - b), with the symmetric series near the diagonal.
double log_divided_difference(double a, double b) {
  const double m = 0.5 * (a + b);
  const double h = 0.5 * (a - b);
  if (std::abs(a - b) < 1e-9 * std::max(a, b)) {
    const double r2 = (h / m) * (h / m);
    return (1.0 + r2 / 3.0 + r2 * r2 / 5.0) / m;
  }
  return 2.0 * std::atanh(h / m) / (a - b);
}

double entropy_nats(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

double expectation(const Matrix& t, const Vector& v) { return v.dot(t * v).real(); }

// S(rho||sigma) in bits without the relative support cutoff: every positive
// eigenvalue keeps its -w log mu term, so the value rises smoothly as sigma
// thins out under rho instead of jumping from a truncated sum to +inf.
double barrier_relative_entropy(const Matrix& rho, double rho_entropy_nats, const Eigensystem& sigma) {
  const Matrix rv = rho * sigma.vectors;
  double cross = 0.0;
  double off_support = 0.0;
  for (Index j = 0; j < sigma.values.size(); ++j) {
    const double w = sigma.vectors.col(j).dot(rv.col(j)).real();
    const double mu = sigma.values[j];
    if (mu > 0.0) {
      if (w > 0.0) cross -= w * std::log(mu);
    } else {
      off_support += std::max(0.0, w);
    }
  }
  if (off_support > tol::kOffSupportWeight) return std::numeric_limits<double>::infinity();
  return (cross - rho_entropy_nats) / std::numbers::ln2;
}

// Below this relative eigenvalue the eigensolver's round-off dominates both mu
// and rho's components, so the solver's T ignores those directions.
constexpr double kNoiseFloor = 1e-14;

// The solver's fast T drops directions with eigenvalue below kFaint * mu_max
// that carry at most kFaintWeight of rho; a few times 1e-7 bits at stake.
constexpr double kFaint = 1e-6;
constexpr double kFaintWeight = 1e-7;

// T built on the eigenbasis of sigma, restricted to eigenvalues above
// `support * mu_max`. With `strict`, rho weight beyond the off-support
// tolerance on the excluded directions is an error. Directions below
// `faint * mu_max` carrying at most kFaintWeight of rho are dropped too: their
// w / mu ratios tend to dominate the operator and stall progress, but when
// several of them cluster their cross terms matter, so callers fall back to
// faint = 0 when the trimmed operator points uphill.
Matrix divided_difference_operator(const Matrix& rho, const Matrix& sigma, double support, double faint,
                                   bool strict) {
  const Eigensystem es = hermitian_eigensystem(sigma);
  const RealVector& mu = es.values;
  const double mu_max = mu.maxCoeff();
  const double cutoff = support * mu_max;
  const Matrix r = es.vectors.adjoint() * rho * es.vectors;
  const Index dim = mu.size();

  double off_support = 0.0;
  std::vector<char> active(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    const double w = std::max(0.0, r(i, i).real());
    active[static_cast<std::size_t>(i)] = mu[i] > cutoff && !(mu[i] <= faint * mu_max && w <= kFaintWeight);
    if (mu[i] <= cutoff) off_support += w;
  }
  if (strict && off_support > tol::kOffSupportWeight) {
    std::ostringstream os;
    os << "gradient_operator: rho has weight " << off_support << " outside the support of sigma";
    throw SupportError(os.str(), off_support);
  }

  Matrix t = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    for (Index j = 0; j < dim; ++j)
      if (active[static_cast<std::size_t>(j)]) t(i, j) = r(i, j) * log_divided_difference(mu[i], mu[j]);
  }
  Matrix out = es.vectors * t * es.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}


// Index tables for contracting an operator with all factors but one.
class ContractionPlan {
 public:
  explicit ContractionPlan(const HilbertLayout& layout) : layout_(layout) {
    const Index dim = layout.total_dim();
    const int n = layout.parties();
    digits_.resize(static_cast<std::size_t>(dim * n));
    for (Index i = 0; i < dim; ++i) {
      const auto d = layout.digits(i);
      std::copy(d.begin(), d.end(), digits_.begin() + i * n);
    }
    full_.resize(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
      const Index dp = layout.dim(p), stride = layout.stride(p), rest = dim / dp;
      auto& table = full_[static_cast<std::size_t>(p)];
      table.resize(static_cast<std::size_t>(dim));
      for (Index a = 0; a < dp; ++a)
        for (Index r = 0; r < rest; ++r)
          table[static_cast<std::size_t>(a * rest + r)] = (r / stride) * stride * dp + a * stride + r % stride;
    }
  }

  // M_ab = <a, rest| T |b, rest> with rest the product of the other factors.
  Matrix reduced(const Matrix& t, const std::vector<Vector>& factors, int p) const {
    const int n = layout_.parties();
    const Index dp = layout_.dim(p), rest = layout_.total_dim() / dp;
    const auto& table = full_[static_cast<std::size_t>(p)];
    Vector r(rest);
    for (Index j = 0; j < rest; ++j) {
      const Index full = table[static_cast<std::size_t>(j)];
      cplx acc = 1.0;
      for (int q = 0; q < n; ++q)
        if (q != p) acc *= factors[static_cast<std::size_t>(q)][digits_[static_cast<std::size_t>(full * n + q)]];
      r[j] = acc;
    }
    Matrix m(dp, dp);
    for (Index a = 0; a < dp; ++a)
      for (Index b = a; b < dp; ++b) {
        cplx acc = 0.0;
        for (Index i = 0; i < rest; ++i) {
          const Index row = table[static_cast<std::size_t>(a * rest + i)];
          cplx inner = 0.0;
          for (Index j = 0; j < rest; ++j) inner += t(row, table[static_cast<std::size_t>(b * rest + j)]) * r[j];
          acc += std::conj(r[i]) * inner;
        }
        m(a, b) = acc;
        m(b, a) = std::conj(acc);
      }
    return m;
  }

 private:
  HilbertLayout layout_;
  std::vector<int> digits_;
  std::vector<std::vector<Index>> full_;
};

std::pair<double, Vector> leading_eigenpair(const Matrix& m) {
  if (m.rows() == 2) {
    // Closed form for 2x2 Hermitian blocks, the common case.
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const cplx b = m(0, 1);
    const double half = 0.5 * (a - d), rad = std::hypot(half, std::abs(b));
    const double top = 0.5 * (a + d) + rad;
    Vector v(2);
    if (std::abs(b) == 0.0) {
      v << (a >= d ? 1.0 : 0.0), (a >= d ? 0.0 : 1.0);
    } else if (half >= 0.0) {
      v << half + rad, std::conj(b);
    } else {
      v << b, rad - half;
    }
    return {top, v / v.norm()};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Index last = m.rows() - 1;
  return {es.eigenvalues()[last], es.eigenvectors().col(last)};
}

// Alternating maximization from one start; returns the final value.
double polish(const ContractionPlan& plan, const Matrix& t, std::vector<Vector>& factors, int sweeps,
              double tolerance) {
  double value = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(factors.size());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double current = value;
    for (int p = 0; p < n; ++p) {
      auto [top, v] = leading_eigenpair(plan.reduced(t, factors, p));
      factors[static_cast<std::size_t>(p)] = std::move(v);
      current = top;
    }
    const double gain = current - value;
    value = current;
    if (gain <= tolerance * std::max(1.0, std::abs(value))) break;
  }
  return value;
}

struct Atom {
  double weight;
  ProductState state;
  Vector vec;
};

Matrix ensemble_matrix(const std::vector<Atom>& atoms, Index dim) {
  Matrix s = Matrix::Zero(dim, dim);
  for (const auto& a : atoms) s.noalias() += a.weight * (a.vec * a.vec.adjoint());
  return s;
}

}  // namespace

// ---------------------------------------------------------------- ensembles

SeparableEnsemble::SeparableEnsemble(HilbertLayout layout, std::vector<std::pair<double, ProductState>> atoms)
    : layout_(std::move(layout)), atoms_(std::move(atoms)) {
  double total = 0.0;
  for (const auto& [w, phi] : atoms_) {
    if (!(w >= 0.0)) throw ValidationError("SeparableEnsemble: negative weight");
    if (!(phi.layout() == layout_)) throw ValidationError("SeparableEnsemble: atom layout mismatch");
    total += w;
  }
  if (atoms_.empty() || std::abs(total - 1.0) > 1e-10) throw ValidationError("SeparableEnsemble: weights must sum to 1");
}

Matrix SeparableEnsemble::matrix() const {
  Matrix s = Matrix::Zero(layout_.total_dim(), layout_.total_dim());
  for (const auto& [w, phi] : atoms_) {
    const Vector v = phi.to_vector();
    s.noalias() += w * (v * v.adjoint());
  }
  return s;
}

void SolverConfig::validate() const {
  if (max_outer <= 0 || restarts <= 0 || sweeps <= 0 || !(gap_tolerance > 0.0) || !(line_search_tolerance > 0.0))
    throw ValidationError("SolverConfig: all limits and tolerances must be positive");
}

// ---------------------------------------------------------------- gradient and gap

Matrix gradient_operator(const Matrix& rho, const Matrix& sigma) {
  return divided_difference_operator(rho, sigma, tol::kSupport, 0.0, true);
}

Matrix gradient_operator(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!(rho.layout() == sigma.layout())) throw ValidationError("gradient_operator: layouts differ");
  return gradient_operator(rho.matrix(), sigma.matrix());
}

double stationarity_gap(const DensityOperator& rho, const DensityOperator& sigma, const ProductState& candidate) {
  return 1.0 - expectation(gradient_operator(rho, sigma), candidate.to_vector());
}

double stationarity_gap(const DensityOperator& rho, const DensityOperator& sigma, const SeparableEnsemble& candidate) {
  return 1.0 - (gradient_operator(rho, sigma) * candidate.matrix()).trace().real();
}

// ---------------------------------------------------------------- product-state oracle

ProductDirection best_product_direction(const Matrix& t, const HilbertLayout& layout, const SolverConfig& config,
                                        const std::vector<ProductState>& warm_starts) {
  config.validate();
  if (t.rows() != layout.total_dim() || t.cols() != layout.total_dim())
    throw ValidationError("best_product_direction: operator does not match layout");
  if ((t - t.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, t.cwiseAbs().maxCoeff()))
    throw ValidationError("best_product_direction: operator is not Hermitian");

  const ContractionPlan plan(layout);

  // Every start gets a short climb, enough to tell the basins apart; only the
  // leading few are then run to the full sweep budget.
  constexpr int kCoarseSweeps = 20;
  constexpr double kCoarse = 1e-9, kFine = 1e-14;
  constexpr std::size_t kFinalists = 4;
  std::vector<std::pair<double, std::vector<Vector>>> climbed;
  auto run = [&](std::vector<Vector> factors) {
    const double v = polish(plan, t, factors, std::min(config.sweeps, kCoarseSweeps), kCoarse);
    climbed.emplace_back(v, std::move(factors));
  };
  for (const auto& w : warm_starts) run(w.factors());
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    run(random_product_state(layout, rng).factors());
  }
  const std::size_t keep = std::min(kFinalists, climbed.size());
  std::partial_sort(climbed.begin(), climbed.begin() + static_cast<std::ptrdiff_t>(keep), climbed.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Vector> best_factors;
  for (std::size_t i = 0; i < keep; ++i) {
    auto& [v, factors] = climbed[i];
    v = std::max(v, polish(plan, t, factors, config.sweeps, kFine));
    if (v > best) {
      best = v;
      best_factors = std::move(factors);
    }
  }
  for (auto& f : best_factors) f /= f.norm();
  ProductState state(layout, std::move(best_factors));
  return {state, expectation(t, state.to_vector())};
}

// ---------------------------------------------------------------- conditional gradient

namespace {

// Merges coincident atoms, drops negligible ones and renormalizes.
void tidy(std::vector<Atom>& atoms) {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[j].weight > 0.0 && std::norm(atoms[i].vec.dot(atoms[j].vec)) > 1.0 - 1e-12) {
        atoms[i].weight += atoms[j].weight;
        atoms[j].weight = 0.0;
      }
  std::erase_if(atoms, [](const Atom& a) { return a.weight < 1e-12; });
  double total = 0.0;
  for (const auto& a : atoms) total += a.weight;
  for (auto& a : atoms) a.weight /= total;
}

// Reweights the active atoms with w_i <- w_i <a_i|T|a_i>, the factor clamped
// to [1/2, 2] so no atom vanishes in one round. The fixed points are the
// stationary ensembles. Proposals are damped by halving until they descend.
template <class Objective>
void reweight(std::vector<Atom>& atoms, const Matrix& rho, Matrix& sigma, double& value, int rounds,
              double tolerance, double faint, const Objective& objective) {
  const Index dim = sigma.rows();
  std::vector<double> proposal(atoms.size());
  for (int round = 0; round < rounds; ++round) {
    const Matrix t = divided_difference_operator(rho, sigma, kNoiseFloor, faint, false);
    double spread = 0.0, total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double v = expectation(t, atoms[i].vec);
      spread = std::max(spread, std::abs(v - 1.0));
      proposal[i] = atoms[i].weight * std::clamp(v, 0.5, 2.0);
      total += proposal[i];
    }
    if (spread <= tolerance || !(total > 0.0)) return;
    Matrix target = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      proposal[i] /= total;
      target.noalias() += proposal[i] * (atoms[i].vec * atoms[i].vec.adjoint());
    }
    const Matrix direction = target - sigma;
    double x = 1.0;
    double next = objective(sigma + direction);
    for (int halving = 0; halving < 12 && !(next < value); ++halving) {
      x *= 0.5;
      next = objective(sigma + x * direction);
    }
    if (!(next < value)) return;
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].weight += x * (proposal[i] - atoms[i].weight);
    sigma += x * direction;
    value = next;
  }
}

}  // namespace

SolverReport minimize_ree(const DensityOperator& rho, const SolverConfig& config) {
  config.validate();
  const HilbertLayout& layout = rho.layout();
  const Index dim = layout.total_dim();
  const Matrix& r = rho.matrix();
  const double s_rho = entropy_nats(r);

  auto objective = [&](const Matrix& sigma) {
    return barrier_relative_entropy(r, s_rho, hermitian_eigensystem(sigma));
  };

  // Start from the dephased diagonal mixed with a little white noise: every
  // computational basis state is an atom, so the support is full.
  constexpr double kEps = 1e-3;
  std::vector<Atom> atoms;
  for (Index i = 0; i < dim; ++i) {
    const double w = (1.0 - kEps) * std::max(0.0, r(i, i).real()) + kEps / static_cast<double>(dim);
    const auto digits = layout.digits(i);
    std::vector<Vector> factors;
    for (int p = 0; p < layout.parties(); ++p) factors.push_back(Vector::Unit(layout.dim(p), digits[static_cast<std::size_t>(p)]));
    ProductState phi(layout, std::move(factors));
    Vector vec = phi.to_vector();
    atoms.push_back({w, std::move(phi), std::move(vec)});
  }
  {
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    for (auto& a : atoms) a.weight /= total;
  }

  Matrix sigma = ensemble_matrix(atoms, dim);
  double value = objective(sigma);
  SolverReport report{value, SeparableEnsemble(layout, {{1.0, atoms.front().state}}), 0.0, 0, false, {}};
  std::vector<ProductState> warm;
  constexpr int kCorrectiveRounds = 5;
  // Merging and pruning are skipped if they would push rho off the support.
  auto settle = [&] {
    std::vector<Atom> trial = atoms;
    tidy(trial);
    Matrix s = ensemble_matrix(trial, dim);
    if (const double v = objective(s); std::isfinite(v)) {
      atoms = std::move(trial);
      sigma = std::move(s);
      value = v;
    }
  };

  bool full = false;
  for (int it = 0; it < config.max_outer; ++it) {
    const Matrix t = divided_difference_operator(r, sigma, kNoiseFloor, full ? 0.0 : kFaint, false);
    SolverConfig inner = config;
    inner.seed = derive_seed(config.seed, static_cast<std::uint64_t>(it));
    const ProductDirection dir = best_product_direction(t, layout, inner, warm);
    const double gap = dir.value - 1.0;
    report.trace.emplace_back(value, gap);
    report.iterations = it + 1;
    report.gap = gap;
    if (gap <= config.gap_tolerance) {
      report.converged = true;
      break;
    }

    // Away candidate: the active atom least aligned with the gradient.
    std::size_t away = 0;
    double away_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double v = expectation(t, atoms[i].vec);
      if (v < away_value) {
        away_value = v;
        away = i;
      }
    }

    const Vector fw_vec = dir.state.to_vector();
    bool toward = gap >= 1.0 - away_value || atoms[away].weight >= 1.0 - 1e-15;
    Matrix direction;
    double step_max = 1.0, x = 0.0, next = value;
    auto search = [&] {
      if (toward) {
        direction = fw_vec * fw_vec.adjoint() - sigma;
        step_max = 1.0;
      } else {
        direction = sigma - atoms[away].vec * atoms[away].vec.adjoint();
        step_max = atoms[away].weight / (1.0 - atoms[away].weight);
      }
      auto along = [&](double y) { return objective(sigma + y * direction); };
      x = golden_section_minimize(along, 0.0, step_max, config.line_search_tolerance);
      next = along(x);
      if (const double end = along(step_max); end <= next) {
        x = step_max;
        next = end;
      }
      // Near the boundary the useful step can be far below the line-search
      // resolution; seed the new atom with a tiny weight so the reweighting
      // rounds can grow it.
      for (double seed = 1e-9; toward && !(next < value) && seed >= 1e-15; seed *= 0.1) {
        x = seed;
        next = along(x);
      }
    };
    search();
    // Dropping a faint atom can push rho off the support; step toward instead.
    if (!toward && !(next < value)) {
      toward = true;
      search();
    }
    const bool stepped = next < value;
    if (stepped) {
      if (toward) {
        for (auto& a : atoms) a.weight *= 1.0 - x;
        atoms.push_back({x, dir.state, fw_vec});
      } else {
        for (auto& a : atoms) a.weight *= 1.0 + x;
        atoms[away].weight -= x;
        if (x == step_max) atoms[away].weight = 0.0;
      }
      sigma += x * direction;
      value = next;
      settle();
    }

    // Corrective rounds on the weights of the active atoms.
    const double before = value;
    reweight(atoms, r, sigma, value, kCorrectiveRounds, 0.1 * config.gap_tolerance, full ? 0.0 : kFaint, objective);
    const bool moved = value < before;
    if (!stepped && !moved) {
      if (full) break;  // round-off floor
      full = true;
      continue;
    }
    full = false;
    settle();
    warm.assign(1, dir.state);
  }

  std::vector<std::pair<double, ProductState>> out;
  for (const auto& a : atoms) out.emplace_back(a.weight, a.state);
  report.ensemble = SeparableEnsemble(layout, std::move(out));
  report.value = std::max(0.0, value);
  return report;
}

// ---------------------------------------------------------------- derived quantities

double lambda_max_numeric(const PureState& psi, const SolverConfig& config) {
  const auto dir = best_product_direction(psi.projector(), psi.layout(), config);
  return std::sqrt(std::clamp(dir.value, 0.0, 1.0));
}

double g_of_rho(const DensityOperator& rho, const SolverConfig& config) {
  const auto dir = best_product_direction(rho.matrix(), rho.layout(), config);
  return std::max(0.0, -std::log2(dir.value));
}

RobustnessBounds robustness_bounds(const PureState& psi, const SolverConfig& config) {
  const double lambda = lambda_max_numeric(psi, config);
  const double lower = std::max(0.0, -2.0 * std::log2(lambda));
  if (lambda >= 1.0 - 1e-12) return {0.0, 0.0, "product"};

  // Symmetric basis states: sigma(u = k/n) = Lambda^2 |S><S| + (1 - Lambda^2) tau,
  // so |S><S| + t tau is separable with t = (1 - Lambda^2) / Lambda^2.
  const auto& dims = psi.layout().party_dims();
  if (std::all_of(dims.begin(), dims.end(), [&](int d) { return d == dims.front(); })) {
    const int n = psi.layout().parties(), d = dims.front();
    for (const auto& c : enumerate_compositions(n, d)) {
      const Vector s = qudit_dicke_state_vector(c).amplitudes();
      if (std::norm(s.dot(psi.amplitudes())) > 1.0 - 1e-12) {
        const double l2 = lambda_max_qudit(c) * lambda_max_qudit(c);
        return {lower, std::log2(1.0 + (1.0 - l2) / l2), "symmetric-basis"};
      }
    }
  }
  return {lower, std::nullopt, "witness-only"};
}

// ---------------------------------------------------------------- export

std::string SolverReport::to_json() const {
  using nlohmann::json;
  json atoms = json::array();
  for (const auto& [w, phi] : ensemble.atoms()) {
    json factors = json::array();
    for (const auto& f : phi.factors()) {
      json v = json::array();
      for (Index i = 0; i < f.size(); ++i) v.push_back({f[i].real(), f[i].imag()});
      factors.push_back(v);
    }
    atoms.push_back({{"weight", w}, {"factors", factors}});
  }
  json j = {{"value", value},   {"method", "numeric"}, {"gap", gap},
            {"iterations", iterations}, {"converged", converged}, {"party_dims", ensemble.layout().party_dims()},
            {"atoms", atoms}};
  return j.dump(2);
}

std::string SolverReport::trace_csv() const {
  std::ostringstream os;
  os << "iteration,value,gap\n";
  char buf[96];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", i, trace[i].first, trace[i].second);
    os << buf;
  }
  return os.str();
}

}  // namespace reelab

#include "reelab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "reelab/qcore.hpp"

namespace reelab {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double cross(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

// Maximizes g over [lo, hi], also trying both ends exactly.
double argmax_with_ends(const ScalarFunction& g, double lo, double hi, double tolerance) {
  const double inner = golden_section_minimize([&](double t) { return -g(t); }, lo, hi, tolerance);
  double best = inner;
  double best_val = g(inner);
  for (double end : {lo, hi}) {
    const double v = g(end);
    // An exact end of [0,1] wins ties, which keeps envelope = curve there.
    const bool boundary = end == 0.0 || end == 1.0;
    const double slack = boundary ? 1e-12 * std::max(1.0, std::abs(best_val)) : 0.0;
    if (v > best_val || (boundary && v >= best_val - slack)) {
      best = end;
      best_val = v;
    }
  }
  return best;
}

void enumerate_grid(int parts, int remaining, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    prefix.push_back(v);
    enumerate_grid(parts - 1, remaining - v, prefix, out);
    prefix.pop_back();
  }
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

double golden_section_minimize(const ScalarFunction& f, double lo, double hi, double tolerance) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

FCurve FCurve::sample(std::string family, ScalarFunction f, int points) {
  if (points < 2) throw ValidationError("FCurve::sample: need at least two points");
  FCurve c{std::move(family), {}, {}, std::move(f)};
  for (int i = 0; i < points; ++i) {
    const double s = (i == points - 1) ? 1.0 : static_cast<double>(i) / (points - 1);
    c.s.push_back(s);
    c.value.push_back(c.evaluator(s));
  }
  return c;
}

ConvexEnvelope::ConvexEnvelope(FCurve curve, std::vector<Bridge> bridges)
    : curve_(std::move(curve)), bridges_(std::move(bridges)) {}

double ConvexEnvelope::curve(double s) const {
  if (curve_.evaluator) return curve_.evaluator(s);
  const auto it = std::lower_bound(curve_.s.begin(), curve_.s.end(), s);
  if (it == curve_.s.begin()) return curve_.value.front();
  if (it == curve_.s.end()) return curve_.value.back();
  const auto j = static_cast<std::size_t>(it - curve_.s.begin());
  const double t = (s - curve_.s[j - 1]) / (curve_.s[j] - curve_.s[j - 1]);
  return (1 - t) * curve_.value[j - 1] + t * curve_.value[j];
}

std::optional<Bridge> ConvexEnvelope::bridge_at(double s) const {
  for (const Bridge& b : bridges_)
    if (s > b.left && s < b.right) return b;
  return std::nullopt;
}

double ConvexEnvelope::operator()(double s) const {
  if (auto b = bridge_at(s)) {
    const double t = (s - b->left) / (b->right - b->left);
    return (1 - t) * b->left_value + t * b->right_value;
  }
  return curve(s);
}

std::vector<std::pair<double, double>> ConvexEnvelope::breakpoints() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < curve_.s.size(); ++i)
    if (!bridge_at(curve_.s[i])) out.emplace_back(curve_.s[i], curve(curve_.s[i]));
  for (const Bridge& b : bridges_) {
    out.emplace_back(b.left, b.left_value);
    out.emplace_back(b.right, b.right_value);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) { return std::abs(a.first - b.first) < 1e-15; }),
            out.end());
  return out;
}

std::string ConvexEnvelope::to_csv() const {
  std::ostringstream os;
  os << "s,F,coF\n";
  for (std::size_t i = 0; i < curve_.s.size(); ++i)
    os << fmt9(curve_.s[i]) << ',' << fmt9(curve_.value[i]) << ',' << fmt9((*this)(curve_.s[i])) << '\n';
  return os.str();
}

ConvexEnvelope convex_envelope_1d(const FCurve& curve, double tolerance) {
  const auto& xs = curve.s;
  const auto& ys = curve.value;
  if (xs.size() < 3 || xs.size() != ys.size())
    throw ValidationError("convex_envelope_1d: need at least three samples");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw ValidationError("convex_envelope_1d: non-finite sample");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw ValidationError("convex_envelope_1d: samples must be increasing");
  }
  if (xs.front() != 0.0 || xs.back() != 1.0)
    throw ValidationError("convex_envelope_1d: samples must include both endpoints of [0,1]");

  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      if (cross(xs[a], ys[a], xs[b], ys[b], xs[i], ys[i]) <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  std::vector<Bridge> bridges;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t i = hull[h], j = hull[h + 1];
    if (j == i + 1) continue;
    double excess = 0.0;
    for (std::size_t m = i + 1; m < j; ++m) {
      const double t = (xs[m] - xs[i]) / (xs[j] - xs[i]);
      excess = std::max(excess, ys[m] - ((1 - t) * ys[i] + t * ys[j]));
    }
    // Samples on the chord up to round-off: the curve is locally linear.
    if (excess <= 1e-12 * std::max(1.0, std::abs(ys[i]) + std::abs(ys[j]))) continue;

    double a = xs[i], b = xs[j];
    if (curve.evaluator) {
      const auto& f = curve.evaluator;
      const double a_lo = xs[i == 0 ? 0 : i - 1], a_hi = xs[i + 1];
      const double b_lo = xs[j - 1], b_hi = xs[j + 1 == xs.size() ? j : j + 1];
      for (int iter = 0; iter < 200; ++iter) {
        const double fb = f(b);
        const double a_new =
            argmax_with_ends([&](double t) { return (fb - f(t)) / (b - t); }, a_lo, std::min(a_hi, b - tolerance), tolerance);
        const double fa = f(a_new);
        const double b_new =
            argmax_with_ends([&](double t) { return -(f(t) - fa) / (t - a_new); }, std::max(b_lo, a_new + tolerance), b_hi, tolerance);
        const bool settled = std::abs(a_new - a) <= tolerance && std::abs(b_new - b) <= tolerance;
        a = a_new;
        b = b_new;
        if (settled) break;
      }
      bridges.push_back({a, b, f(a), f(b)});
    } else {
      bridges.push_back({a, b, ys[i], ys[j]});
    }
  }
  return ConvexEnvelope(curve, std::move(bridges));
}

SimplexEnvelopeResult simplex_envelope(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& point, int resolution) {
  const int m = static_cast<int>(point.size());
  if (m < 1 || resolution < 1) throw ValidationError("simplex_envelope: need a point and a positive resolution");
  if (m == 1) return {f(point), {{1.0, point}}};

  std::vector<std::vector<int>> grid;
  std::vector<int> prefix;
  enumerate_grid(m, resolution, prefix, grid);

  std::vector<std::vector<double>> atoms;
  std::vector<double> cost;
  // The first m columns are the vertices, which start as the basis.
  for (int v = 0; v < m; ++v) {
    std::vector<double> e(static_cast<std::size_t>(m), 0.0);
    e[static_cast<std::size_t>(v)] = 1.0;
    atoms.push_back(e);
    cost.push_back(f(e));
  }
  auto add_atom = [&](std::vector<double> x) {
    const double c = f(x);
    if (std::isfinite(c)) {
      atoms.push_back(std::move(x));
      cost.push_back(c);
    }
  };
  add_atom(point);
  for (const auto& g : grid) {
    int nonzero = 0;
    for (int v : g) nonzero += v != 0;
    if (nonzero <= 1) continue;  // vertices already present
    std::vector<double> x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = static_cast<double>(g[i]) / resolution;
    add_atom(std::move(x));
  }
  for (int v = 0; v < m; ++v)
    if (!std::isfinite(cost[static_cast<std::size_t>(v)]))
      throw ValidationError("simplex_envelope: function must be finite at the vertices");

  const std::size_t cols = atoms.size();
  std::vector<std::size_t> basis(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) basis[static_cast<std::size_t>(v)] = static_cast<std::size_t>(v);
  Eigen::VectorXd xb(m);
  for (int v = 0; v < m; ++v) xb[v] = point[static_cast<std::size_t>(v)];

  for (int iter = 0; iter < 20000; ++iter) {
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r) {
      const auto& a = atoms[basis[static_cast<std::size_t>(r)]];
      for (int i = 0; i < m; ++i) B(i, r) = a[static_cast<std::size_t>(i)];
      cb[r] = cost[basis[static_cast<std::size_t>(r)]];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const Eigen::VectorXd y = lu.transpose().solve(cb);
    // Bland's rule after many pivots guards against cycling.
    const bool bland = iter > 2000;
    std::size_t enter = cols;
    double best = -1e-13;
    for (std::size_t j = 0; j < cols; ++j) {
      double r = cost[j];
      for (int i = 0; i < m; ++i) r -= y[i] * atoms[j][static_cast<std::size_t>(i)];
      if (r < best) {
        best = r;
        enter = j;
        if (bland) break;
      }
    }
    if (enter == cols) break;
    Eigen::VectorXd a(m);
    for (int i = 0; i < m; ++i) a[i] = atoms[enter][static_cast<std::size_t>(i)];
    const Eigen::VectorXd dir = lu.solve(a);
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (dir[r] > 1e-12) {
        const double t = std::max(0.0, xb[r]) / dir[r];
        if (t < ratio) {
          ratio = t;
          leave = r;
        }
      }
    }
    if (leave < 0) break;  // unbounded cannot happen on a simplex
    xb -= ratio * dir;
    xb[leave] = ratio;
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  SimplexEnvelopeResult out;
  for (int r = 0; r < m; ++r) {
    const double w = std::max(0.0, xb[r]);
    if (w <= 1e-14) continue;
    out.value += w * cost[basis[static_cast<std::size_t>(r)]];
    out.atoms.emplace_back(w, atoms[basis[static_cast<std::size_t>(r)]]);
  }
  return out;
}

}  // namespace reelab

// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "reelab/closedform.hpp"
#include "reelab/dicke.hpp"
#include "reelab/dur.hpp"
#include "reelab/inequalities.hpp"
#include "reelab/parallel.hpp"
#include "reelab/solver.hpp"

using namespace reelab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Recorder {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      out_.pass = false;
      if (!out_.detail.empty()) out_.detail += "; ";
      out_.detail += what;
    }
  }
  void note(const std::string& what) { notes_ += (notes_.empty() ? "" : "; ") + what; }
  Outcome done() {
    if (out_.pass) out_.detail = notes_;
    return out_;
  }

 private:
  Outcome out_;
  std::string notes_;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const QuditComposition kA({2, 0, 0, 1}), kB({1, 1, 1, 0}), kC({1, 0, 0, 2});
const int kFamilies[8][3] = {{3, 0, 1}, {3, 0, 2}, {3, 1, 2}, {4, 0, 1}, {4, 0, 2}, {4, 0, 3}, {4, 1, 2}, {4, 1, 3}};

double f201(double s) { return s * std::log2(4 * s / ((1 + s) * (1 + s))) + (1 - s) * std::log2(2 / (1 + s)); }

Outcome golden_values() {
  Recorder r;
  const double lam = lambda_max_dicke(DickeIndex(3, 2));
  const double er = pure_dicke_ree(DickeIndex(4, 1));
  r.expect(near(lam, 2.0 / 3.0, 1e-9), "Lambda(3,2) = " + num(lam));
  r.expect(near(er, 3 * std::log2(4.0 / 3.0), 1e-9), "E_R(4,1) = " + num(er));
  r.expect(near(er, 1.245112, 1e-6), "E_R(4,1) vs 1.245112");
  r.note("Lambda=" + num(lam) + " E_R=" + num(er));
  return r.done();
}

Outcome trace_down() {
  Recorder r;
  const auto stages = trace_down_report(DickeIndex(4, 1));
  const double expect[3] = {1.245112, 0.433834, 0.122556};
  r.expect(stages.size() == 3, "stage count " + std::to_string(stages.size()));
  std::string seq;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, stages.size()); ++i) {
    r.expect(near(stages[i].e_r, expect[i], 5e-6), "stage " + std::to_string(i) + " = " + num(stages[i].e_r));
    seq += (i ? " -> " : "") + num(stages[i].e_r);
  }
  r.note(seq);
  return r.done();
}

Outcome f201_curve() {
  Recorder r;
  double worst = 0;
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;
    worst = std::max(worst, std::abs(ree_two_component(2, 0, 1, s) - f201(s)));
  }
  r.expect(worst <= 1e-10, "max deviation " + num(worst));
  r.expect(!TwoComponentFamily::qubit(2, 0, 1).ree_envelope().convexified(), "envelope differs from curve");
  r.note("max deviation " + num(worst));
  return r.done();
}

Outcome solver_vs_envelope() {
  Recorder r;
  struct Point {
    int family;
    double s;
    double err = 0;
    double gap = 0;
  };
  std::vector<Point> pts;
  for (int f = 0; f < 8; ++f)
    for (int i = 0; i <= 20; ++i) pts.push_back({f, i / 20.0});
  const auto t0 = Clock::now();
  parallel_for(pts.size(), [&](std::size_t idx) {
    Point& p = pts[idx];
    const auto& fam = kFamilies[p.family];
    SolverConfig c;
    c.seed = derive_seed(2008, idx);
    const auto rep = minimize_ree(mixture_density(DickeMixture::two_component(fam[0], fam[1], fam[2], p.s)), c);
    p.err = std::abs(rep.value - ree_two_component(fam[0], fam[1], fam[2], p.s));
    p.gap = rep.gap;
  });
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  double worst = 0;
  for (const auto& p : pts) {
    worst = std::max(worst, p.err);
    if (p.err > 2e-3) {
      const auto& fam = kFamilies[p.family];
      r.expect(false, std::to_string(fam[0]) + ";" + std::to_string(fam[1]) + "," + std::to_string(fam[2]) +
                          " s=" + num(p.s) + " err " + num(p.err));
    }
  }
  r.expect(seconds <= 900, "runtime " + num(seconds) + " s");
  r.note("168 points, max |E_R - coF| " + num(worst) + ", " + num(seconds) + " s");
  return r.done();
}

Outcome qudit_family() {
  Recorder r;
  const auto ab = TwoComponentFamily::qudit(kA, kB);
  const double lo = ree_two_component(ab, 0.0), hi = ree_two_component(ab, 1.0);
  const double l3 = std::log2(3.0);
  r.expect(near(hi, 2 * l3 - 2, 1e-9), "E_R(a) = " + num(hi));
  r.expect(near(lo, 2 * l3 - 1, 1e-9), "E_R(b) = " + num(lo));
  const auto ac = TwoComponentFamily::qudit(kA, kC);
  double lin = 0, acdev = 0;
  for (int i = 0; i <= 20; ++i) {
    const double s = i / 20.0;
    lin = std::max(lin, std::abs(ree_two_component(ab, s) - (s * hi + (1 - s) * lo)));
    acdev = std::max(acdev, std::abs(ree_two_component(ac, s) - ree_two_component(3, 1, 2, s)));
  }
  r.expect(lin <= 1e-9, "rho_ab off the chord by " + num(lin));
  r.expect(acdev <= 1e-9, "rho_ac off rho_{3;1,2} by " + num(acdev));
  r.note("chord dev " + num(lin) + ", ac dev " + num(acdev));
  return r.done();
}

Outcome dur_family() {
  Recorder r;
  double closed = 0, numeric = 0;
  std::vector<ClosestCertificate> certs(9);
  std::vector<double> solved(9);
  parallel_for(9, [&](std::size_t i) {
    const DurParams p{4, (static_cast<double>(i) + 1) / 10.0};
    SolverConfig c;
    c.seed = derive_seed(2008, i);
    solved[i] = minimize_ree(dur_state(p), c).value;
    certs[i] = verify_closest(p, 10000, derive_seed(2009, i), c);
  });
  for (int i = 0; i < 9; ++i) {
    const DurParams p{4, (i + 1) / 10.0};
    const double re = relative_entropy(dur_state(p), dur_closest_separable(p));
    closed = std::max(closed, std::abs(re - p.x));
    numeric = std::max(numeric, std::abs(solved[static_cast<std::size_t>(i)] - p.x));
    r.expect(certs[static_cast<std::size_t>(i)].passed, "certificate fails at x=" + num(p.x));
  }
  r.expect(closed <= 1e-9, "S(rho||sigma*) off x by " + num(closed));
  r.expect(numeric <= 1e-3, "solver off x by " + num(numeric));
  r.note("closed dev " + num(closed) + ", solver dev " + num(numeric) + ", 9 certificates");
  return r.done();
}

Outcome g_certificate() {
  Recorder r;
  std::string vals;
  for (int N : {3, 4, 5}) {
    const auto g = g_max(N, 100000, derive_seed(2008, static_cast<std::uint64_t>(N)));
    vals += (N == 3 ? "" : " ") + std::string("N=") + std::to_string(N) + ":" + num(g.value);
    if (N >= 4) r.expect(g.value <= 1 + 1e-9, "g_max(" + std::to_string(N) + ") = " + num(g.value));
    else r.expect(g.value > 1, "g_max(3) = " + num(g.value) + " does not exceed 1");
  }
  r.note(vals);
  return r.done();
}

Outcome werner_point() {
  Recorder r;
  const auto rho = werner_state(1.0 / 3.0);
  const double er = minimize_ree(rho).value;
  const double slack = 2.0 - von_neumann_entropy(rho);
  r.expect(er <= 1e-4, "E_R = " + num(er));
  r.expect(near(slack, 1 - std::log2(3.0) / 2, 1e-6), "log2 r - S = " + num(slack));
  r.note("E_R " + num(er) + ", log2 r - S " + num(slack));
  return r.done();
}

Outcome copy_collapse() {
  Recorder r;
  const auto q = collapse_copies(2, SymmetricQubitState{3, {0.0, 0.0, 1.0, 0.0}});
  const auto comps = enumerate_compositions(3, 4);
  double dev = 0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    double expect = 0;
    if (comps[i].counts() == kA.counts()) expect = 1 / std::sqrt(3.0);
    if (comps[i].counts() == kB.counts()) expect = std::sqrt(2.0) / std::sqrt(3.0);
    dev = std::max(dev, std::abs(q.amplitudes[i] - cplx(expect)));
  }
  r.expect(dev <= 1e-12, "amplitude deviation " + num(dev));
  r.note("amplitude deviation " + num(dev));
  return r.done();
}

Outcome property_suites() {
  Recorder r;
  const auto mac = overlap_bound_suite(5, 2, 10000, 2008);
  const auto perm = overlap_bound_suite(4, 3, 10000, 2008);
  r.expect(mac.pass, "Maclaurin bound: " + mac.note);
  r.expect(perm.pass, "permanent bound: " + perm.note);

  Rng rng(2008);
  double trace_dev = 0;
  int klein = 0, convexity = 0;
  for (int i = 0; i < 200; ++i) {
    const auto l = HilbertLayout::qubits(2 + i % 2);
    const auto a = random_density(l, static_cast<int>(l.total_dim()), rng);
    const auto b = random_density(l, static_cast<int>(l.total_dim()), rng);
    const Matrix t = gradient_operator(a, b);
    trace_dev = std::max(trace_dev, std::abs((t * b.matrix()).trace() - cplx(1.0)));
    if (relative_entropy(a, b) < 0) ++klein;
    const auto c = random_density(l, 2, rng), d = random_density(l, static_cast<int>(l.total_dim()), rng);
    const double w = 0.25 + 0.5 * (i % 3) / 2.0;
    const DensityOperator rm(l, w * a.matrix() + (1 - w) * c.matrix());
    const DensityOperator sm(l, w * b.matrix() + (1 - w) * d.matrix());
    if (relative_entropy(rm, sm) > w * relative_entropy(a, b) + (1 - w) * relative_entropy(c, d) + 1e-12) ++convexity;
  }
  r.expect(trace_dev <= 1e-10, "Tr[T sigma] off 1 by " + num(trace_dev));
  r.expect(klein == 0, std::to_string(klein) + " negative relative entropies");
  r.expect(convexity == 0, std::to_string(convexity) + " joint-convexity violations");

  double pv = 0;
  for (auto [n, k] : {std::pair{3, 1}, {3, 2}, {4, 1}, {4, 2}}) pv = std::max(pv, std::abs(plenio_vedral_bound(DickeIndex(n, k)).margin));
  r.expect(pv <= 1e-9, "Plenio-Vedral deviation " + num(pv));

  int elog = 0;
  std::vector<TwoComponentFamily> fams;
  for (const auto& f : kFamilies) fams.push_back(TwoComponentFamily::qubit(f[0], f[1], f[2]));
  fams.push_back(TwoComponentFamily::qubit(2, 0, 1));
  fams.push_back(TwoComponentFamily::qudit(kA, kB));
  fams.push_back(TwoComponentFamily::qudit(kA, kC));
  for (const auto& fam : fams) {
    const auto er = fam.ree_envelope();
    const auto el = fam.elog_envelope();
    for (int i = 0; i <= 20; ++i) {
      const double s = i / 20.0;
      if (el(s) > er(s) + 1e-9) ++elog;
    }
  }
  for (int i = 0; i <= 20; ++i)
    if (dur_e_log({4, i / 20.0}) > dur_ree({4, i / 20.0}) + 1e-12) ++elog;
  r.expect(elog == 0, std::to_string(elog) + " grid points with E_log > E_R");
  r.note("overlap bounds clean, Tr[T sigma] dev " + num(trace_dev) + ", PV dev " + num(pv));
  return r.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form golden values", golden_values},
      {"trace-down sequence (4,1)", trace_down},
      {"two-qubit curve is its own envelope", f201_curve},
      {"numerical solver vs envelope, eight families", solver_vs_envelope},
      {"qudit family rho_ab / rho_ac", qudit_family},
      {"bound-entangled family N=4", dur_family},
      {"g certificate", g_certificate},
      {"Werner point", werner_point},
      {"copy collapse of W x W", copy_collapse},
      {"property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu  %-46s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), sec,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures;
}

#pragma once

// Numerical checks of the inequalities tying E_R to robustness, the
// geometric measure and E_log, over generated families of states.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reelab/closedform.hpp"
#include "reelab/dicke.hpp"
#include "reelab/solver.hpp"

namespace reelab {

/// A chain left >= middle >= right (any of which may be absent), in bits.
struct CheckReport {
  std::string id;
  std::string state;
  std::optional<double> left;
  std::optional<double> middle;
  std::optional<double> right;
  double margin = 0.0;  // smallest slack of the chain; negative means violated
  double tolerance = 1e-6;
  bool pass = false;
  std::string method;
  std::string note;
};

/// LR upper >= E_R (numeric) >= -2 log2 Lambda_max (numeric).
CheckReport check_pure_chain(const PureState& psi, const std::string& descriptor, const SolverConfig& config = {});

struct Inequality6Input {
  std::string descriptor;
  DensityOperator rho;
  std::optional<double> e_log;
  std::optional<double> e_r;       // computed numerically when absent
  std::optional<double> lr_upper;  // only where a construction exists
  bool strengthened = false;       // additionally require E_R >= E_log
};
/// LR >= E_R >= E_log - S(rho).
CheckReport check_inequality6(const Inequality6Input& in, const SolverConfig& config = {});

/// log2 r - S >= E_R at the two-qubit Werner state gamma |psi-><psi-| + (1-gamma) I/4,
/// with r = 4 the rank of its support; the margin is the slack.
CheckReport werner_gap(double gamma, const SolverConfig& config = {});
DensityOperator werner_state(double gamma);

/// E_R(Tr_1 rho) + S(Tr_1 rho) = E_R(|S(n,k)>) for the reduced mixture.
CheckReport plenio_vedral_bound(const DickeIndex& idx);

struct TraceDownStage {
  std::string state;
  DickeMixture mixture;
  double e_r;
  std::string method;
};
/// Traces out one party at a time down to two parties, with E_R at each stage.
std::vector<TraceDownStage> trace_down_report(const DickeIndex& idx);

/// Maclaurin (qubit) or permanent (qudit) overlap bounds on random product states.
CheckReport overlap_bound_suite(int n, int d, int samples, std::uint64_t seed);

struct SuiteOptions {
  int samples = 10000;
  std::uint64_t seed = 2008;
  SolverConfig solver;
};
/// Every check of the default suite, ordered by id; checks run concurrently.
std::vector<CheckReport> run_default_suite(const SuiteOptions& options = {});

std::string reports_to_json(const std::vector<CheckReport>& reports);
std::string reports_to_table(const std::vector<CheckReport>& reports);

}  // namespace reelab

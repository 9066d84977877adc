#pragma once

// Lower convex envelopes of scalar functions: exact (refined) on [0,1], and a
// grid-sampled linear-programming envelope over a probability simplex.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace reelab {

using ScalarFunction = std::function<double(double)>;

/// Samples of a curve on [0,1], optionally with the function they came from.
struct FCurve {
  std::string family;
  std::vector<double> s;
  std::vector<double> value;
  ScalarFunction evaluator;  // may be empty

  /// Samples `f` on `points` equally spaced nodes including both endpoints.
  static FCurve sample(std::string family, ScalarFunction f, int points);
};

/// A segment on which the envelope is the chord rather than the curve.
struct Bridge {
  double left;
  double right;
  double left_value;
  double right_value;
};

class ConvexEnvelope {
 public:
  ConvexEnvelope(FCurve curve, std::vector<Bridge> bridges);

  double operator()(double s) const;
  /// Curve value, from the evaluator when present, else interpolated samples.
  double curve(double s) const;

  const std::vector<Bridge>& bridges() const { return bridges_; }
  const FCurve& samples() const { return curve_; }
  /// The bridge containing s, if the envelope is strictly below the curve there.
  std::optional<Bridge> bridge_at(double s) const;
  /// Envelope breakpoints: sample nodes off bridges plus bridge endpoints.
  std::vector<std::pair<double, double>> breakpoints() const;
  bool convexified() const { return !bridges_.empty(); }

  /// CSV with header "s,F,coF" on the sample grid, 9 significant digits.
  std::string to_csv() const;

 private:
  FCurve curve_;
  std::vector<Bridge> bridges_;
};

/// Lower convex envelope by monotone chain over the samples; bridge endpoints
/// are then located on the evaluator to `tolerance` in s.
ConvexEnvelope convex_envelope_1d(const FCurve& curve, double tolerance = 1e-10);

/// Value of the lower convex envelope of `f` at `point` of the probability
/// simplex, restricted to atoms on the grid with spacing 1/resolution plus
/// the point itself. An upper bound on the exact envelope.
struct SimplexEnvelopeResult {
  double value = 0.0;
  std::vector<std::pair<double, std::vector<double>>> atoms;  // (weight, simplex point)
};
SimplexEnvelopeResult simplex_envelope(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& point, int resolution);

/// Minimizer of a unimodal function on [lo, hi] by golden-section search.
double golden_section_minimize(const ScalarFunction& f, double lo, double hi, double tolerance);

}  // namespace reelab

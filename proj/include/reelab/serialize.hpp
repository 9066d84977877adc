#pragma once

// JSON forms of states and mixtures.
//
//   density:  {"party_dims": [2, 2], "matrix": [[re, im], ...]}   row-major, flat
//             (nested rows [[[re, im], ...], ...] are accepted on input)
//   pure:     {"party_dims": [2, 2], "amplitudes": [[re, im], ...]}
//   mixture:  {"n": 3, "d": 2, "weights": [...]}   enumerate_compositions order

#include <string>

#include "reelab/dicke.hpp"
#include "reelab/qcore.hpp"

namespace reelab {

/// Malformed JSON or a document of the wrong shape. The message carries the
/// byte offset for syntax errors and the offending key otherwise.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_json(const DensityOperator& rho);
std::string to_json(const PureState& psi);
std::string to_json(const QuditDickeMixture& m);

/// Accepts either a density document or a pure-state document.
DensityOperator density_from_json(const std::string& text);
PureState pure_from_json(const std::string& text);
QuditDickeMixture mixture_from_json(const std::string& text);

DensityOperator read_density_file(const std::string& path);

}  // namespace reelab

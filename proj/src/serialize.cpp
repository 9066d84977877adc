#include "reelab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reelab {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  return doc.at(key);
}

cplx complex_entry(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ParseError(where + ": expected a number or a [re, im] pair");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

HilbertLayout layout_of(const json& doc) {
  const json& dims = require(doc, "party_dims");
  if (!dims.is_array() || dims.empty()) throw ParseError("\"party_dims\" must be a nonempty array");
  std::vector<int> out;
  for (const auto& d : dims) {
    if (!d.is_number_integer()) throw ParseError("\"party_dims\" entries must be integers");
    out.push_back(d.get<int>());
  }
  return HilbertLayout(std::move(out));
}

Vector vector_of(const json& arr, Index size, const char* key) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != size)
    throw ParseError(std::string("\"") + key + "\" must hold " + std::to_string(size) + " entries");
  Vector v(size);
  for (Index i = 0; i < size; ++i)
    v[i] = complex_entry(arr[static_cast<std::size_t>(i)], std::string(key) + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix_of(const json& arr, Index dim) {
  if (!arr.is_array()) throw ParseError("\"matrix\" must be an array");
  Matrix m(dim, dim);
  const bool nested = !arr.empty() && arr[0].is_array() && !arr[0].empty() && arr[0][0].is_array();
  if (nested) {
    if (static_cast<Index>(arr.size()) != dim) throw ParseError("\"matrix\" must have " + std::to_string(dim) + " rows");
    for (Index i = 0; i < dim; ++i) {
      const json& row = arr[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != dim)
        throw ParseError("\"matrix\" row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
      for (Index j = 0; j < dim; ++j)
        m(i, j) = complex_entry(row[static_cast<std::size_t>(j)],
                                "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    return m;
  }
  if (static_cast<Index>(arr.size()) != dim * dim)
    throw ParseError("\"matrix\" must hold " + std::to_string(dim * dim) + " entries in row-major order");
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j)
      m(i, j) = complex_entry(arr[static_cast<std::size_t>(i * dim + j)],
                              "matrix[" + std::to_string(i * dim + j) + "]");
  return m;
}

}  // namespace

std::string to_json(const DensityOperator& rho) {
  json entries = json::array();
  const Matrix& m = rho.matrix();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(complex_json(m(i, j)));
  return json({{"party_dims", rho.layout().party_dims()}, {"matrix", entries}}).dump();
}

std::string to_json(const PureState& psi) {
  json entries = json::array();
  for (Index i = 0; i < psi.amplitudes().size(); ++i) entries.push_back(complex_json(psi.amplitudes()[i]));
  return json({{"party_dims", psi.layout().party_dims()}, {"amplitudes", entries}}).dump();
}

std::string to_json(const QuditDickeMixture& m) {
  return json({{"n", m.n()}, {"d", m.d()}, {"weights", m.weights()}}).dump();
}

DensityOperator density_from_json(const std::string& text) {
  const json doc = parse(text);
  if (doc.is_object() && doc.contains("amplitudes") && !doc.contains("matrix"))
    return DensityOperator::from_pure(pure_from_json(text));
  const HilbertLayout layout = layout_of(doc);
  return DensityOperator(layout, matrix_of(require(doc, "matrix"), layout.total_dim()));
}

PureState pure_from_json(const std::string& text) {
  const json doc = parse(text);
  const HilbertLayout layout = layout_of(doc);
  return PureState(layout, vector_of(require(doc, "amplitudes"), layout.total_dim(), "amplitudes"));
}

QuditDickeMixture mixture_from_json(const std::string& text) {
  const json doc = parse(text);
  const json& n = require(doc, "n");
  const json& w = require(doc, "weights");
  if (!n.is_number_integer()) throw ParseError("\"n\" must be an integer");
  const int d = doc.contains("d") ? doc.at("d").get<int>() : 2;
  if (!w.is_array()) throw ParseError("\"weights\" must be an array");
  std::vector<double> weights;
  for (const auto& v : w) {
    if (!v.is_number()) throw ParseError("\"weights\" entries must be numbers");
    weights.push_back(v.get<double>());
  }
  return QuditDickeMixture(n.get<int>(), d, std::move(weights));
}

DensityOperator read_density_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open state file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return density_from_json(buf.str());
}

}  // namespace reelab

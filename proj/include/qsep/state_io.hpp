#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qsep/linalg.hpp"

namespace qsep {

using json = nlohmann::json;

// Parsed document plus its raw text, so errors can point at a line.
struct JsonDoc {
  std::string source;
  std::string text;
  json value;

  int line_of(const std::string& key) const;
  [[noreturn]] void error_at(const std::string& key, const std::string& msg) const;
};

JsonDoc parse_json(const std::string& text, const std::string& source);
JsonDoc read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

struct LoadedState {
  RegisterLayout layout;
  std::optional<CVec> pure;
  CMat density;

  DensityMatrix as_density() const { return DensityMatrix::make(density, layout); }
};

LoadedState load_state(const JsonDoc& doc);
LoadedState load_state_file(const std::string& path);

// Hermitian operator in the same dims/data format, without state checks.
struct LoadedOperator {
  std::vector<int> dims;
  CMat matrix;
};
LoadedOperator load_operator(const JsonDoc& doc);

json layout_to_json(const RegisterLayout& l);
json matrix_to_json(const CMat& m);
json vector_to_json(const CVec& v);
json state_to_json(const DensityMatrix& rho);
json state_to_json(const PureState& psi);

// Fixed formatting so repeated runs are byte-identical.
std::string dump_json(const json& j);
std::string format_double(double x);

}  // namespace qsep

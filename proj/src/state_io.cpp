#include "qsep/state_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsep {

namespace {

int line_at_offset(const std::string& text, std::size_t offset) {
  if (offset > text.size()) offset = text.size();
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

cplx read_entry(const JsonDoc& doc, const json& e) {
  if (e.is_number()) return cplx(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return cplx(e[0].get<double>(), e[1].get<double>());
  doc.error_at("data", "entries must be numbers or [re, im] pairs");
}

std::vector<int> read_dims(const JsonDoc& doc) {
  const json& j = doc.value;
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
    doc.error_at("dims", "missing or empty \"dims\" array");
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1)
      doc.error_at("dims", "dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

}  // namespace

int JsonDoc::line_of(const std::string& key) const {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_at_offset(text, pos);
}

void JsonDoc::error_at(const std::string& key, const std::string& msg) const {
  fail(ErrorKind::InvalidInput, source + ":" + std::to_string(line_of(key)) + ": " + msg);
}

JsonDoc parse_json(const std::string& text, const std::string& source) {
  JsonDoc doc{source, text, json()};
  try {
    doc.value = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_at_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    fail(ErrorKind::InvalidInput,
         source + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.value.is_object())
    fail(ErrorKind::InvalidInput, source + ":1: top-level value must be an object");
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

JsonDoc read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

LoadedState load_state(const JsonDoc& doc) {
  const json& j = doc.value;
  std::vector<int> dims = read_dims(doc);
  std::vector<Role> roles;
  if (j.contains("roles")) {
    if (!j["roles"].is_array() || j["roles"].size() != dims.size())
      doc.error_at("roles", "\"roles\" must list one role per register");
    for (const auto& r : j["roles"]) {
      if (!r.is_string()) doc.error_at("roles", "roles must be strings");
      try {
        roles.push_back(role_from_string(r.get<std::string>()));
      } catch (const Error& e) {
        doc.error_at("roles", e.what());
      }
    }
  } else {
    static const Role defaults[] = {Role::A, Role::B, Role::C};
    if (dims.size() == 2) roles = {Role::B, Role::C};
    else if (dims.size() <= 3) roles.assign(defaults, defaults + dims.size());
    else doc.error_at("dims", "\"roles\" is required for more than three registers");
  }
  RegisterLayout layout;
  try {
    layout = RegisterLayout::make(dims, roles);
  } catch (const Error& e) {
    doc.error_at("dims", e.what());
  }
  if (!j.contains("data") || !j["data"].is_array()) doc.error_at("data", "missing \"data\" array");
  const auto& data = j["data"];
  const std::size_t n = static_cast<std::size_t>(layout.total_dim());
  LoadedState out{layout, std::nullopt, CMat()};
  if (data.size() == n) {
    CVec v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = read_entry(doc, data[i]);
    if (std::abs(v.squaredNorm() - 1.0) > kTraceTol)
      doc.error_at("data", "pure state is not normalized");
    out.density = v * v.adjoint();
    out.pure = v;
  } else if (data.size() == n * n) {
    CMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n * n; ++i)
      m(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) = read_entry(doc, data[i]);
    out.density = m;
  } else {
    doc.error_at("data", "\"data\" has " + std::to_string(data.size()) + " entries, expected " +
                             std::to_string(n) + " or " + std::to_string(n * n));
  }
  try {
    (void)DensityMatrix::make(out.density, layout);
  } catch (const Error& e) {
    doc.error_at("data", e.what());
  }
  out.density = hermitize(out.density);
  return out;
}

LoadedState load_state_file(const std::string& path) { return load_state(read_json_file(path)); }

LoadedOperator load_operator(const JsonDoc& doc) {
  std::vector<int> dims = read_dims(doc);
  int n = 1;
  for (int d : dims) {
    n *= d;
    if (n > kMaxDim) doc.error_at("dims", "operator exceeds dimension cap");
  }
  const json& j = doc.value;
  if (!j.contains("data") || !j["data"].is_array()) doc.error_at("data", "missing \"data\" array");
  const auto& data = j["data"];
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (data.size() != nn)
    doc.error_at("data", "\"data\" has " + std::to_string(data.size()) + " entries, expected " +
                             std::to_string(nn));
  CMat m(n, n);
  for (std::size_t i = 0; i < nn; ++i)
    m(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) = read_entry(doc, data[i]);
  if (hermiticity_defect(m) > kHermitianTol) doc.error_at("data", "operator is not Hermitian");
  return {dims, hermitize(m)};
}

json layout_to_json(const RegisterLayout& l) {
  json roles = json::array();
  for (Role r : l.roles) roles.push_back(r == Role::Scratch ? std::string("S") : std::string(1, role_letter(r)));
  return {{"dims", l.dims}, {"roles", roles}};
}

json matrix_to_json(const CMat& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
  return data;
}

json vector_to_json(const CVec& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back({v(i).real(), v(i).imag()});
  return data;
}

json state_to_json(const DensityMatrix& rho) {
  json j = layout_to_json(rho.layout());
  j["data"] = matrix_to_json(rho.matrix());
  return j;
}

json state_to_json(const PureState& psi) {
  json j = layout_to_json(psi.layout());
  j["data"] = vector_to_json(psi.vector());
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qsep

#include "qsep/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace qsep {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

double h(double y) { return 2.0 * y * (1.0 - y); }

}  // namespace

CspInstance CspInstance::make(int R, int kappa, std::vector<std::vector<int>> sat) {
  require(R >= 1 && is_pow2(R), ErrorKind::InvalidInput, "CSP size R must be a power of two");
  require(kappa >= 2, ErrorKind::InvalidInput, "alphabet size kappa must be at least 2");
  require(static_cast<int>(sat.size()) == R, ErrorKind::InvalidInput,
          "sat must list one set per constraint");
  for (auto& s : sat) {
    for (int a : s)
      require(a >= 0 && a < kappa, ErrorKind::InvalidInput, "satisfying value out of range");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return CspInstance{R, kappa, std::move(sat)};
}

bool CspInstance::satisfies(int j, int a) const {
  const auto& s = sat[static_cast<size_t>(j)];
  return std::binary_search(s.begin(), s.end(), a);
}

double CspInstance::value(const std::vector<int>& assignment) const {
  require(static_cast<int>(assignment.size()) == R, ErrorKind::InvalidInput, "assignment has the wrong length");
  int ok = 0;
  for (int j = 0; j < R; ++j) ok += satisfies(j, assignment[static_cast<size_t>(j)]) ? 1 : 0;
  return static_cast<double>(ok) / R;
}

double CspInstance::best_value() const {
  // Constraints are unary, so each one is maximized independently.
  int ok = 0;
  for (const auto& s : sat) ok += s.empty() ? 0 : 1;
  return static_cast<double>(ok) / R;
}

CspInstance csp_from_json(const JsonDoc& doc) {
  const json& j = doc.value;
  if (!j.contains("R") || !j["R"].is_number_integer()) doc.error_at("R", "missing integer \"R\"");
  if (!j.contains("kappa") || !j["kappa"].is_number_integer())
    doc.error_at("kappa", "missing integer \"kappa\"");
  if (!j.contains("sat") || !j["sat"].is_array()) doc.error_at("sat", "missing \"sat\" array");
  std::vector<std::vector<int>> sat;
  for (const auto& s : j["sat"]) {
    if (!s.is_array()) doc.error_at("sat", "each sat entry must be an array");
    std::vector<int> row;
    for (const auto& a : s) {
      if (!a.is_number_integer()) doc.error_at("sat", "sat values must be integers");
      row.push_back(a.get<int>());
    }
    sat.push_back(std::move(row));
  }
  try {
    return CspInstance::make(j["R"].get<int>(), j["kappa"].get<int>(), std::move(sat));
  } catch (const Error& e) {
    doc.error_at("sat", e.what());
  }
}

json csp_to_json(const CspInstance& csp) {
  return {{"R", csp.R}, {"kappa", csp.kappa}, {"sat", csp.sat}};
}

RegisterLayout protocol_layout(int R, int kappa) {
  return RegisterLayout::make({R, kappa, R, kappa}, {Role::A, Role::B, Role::B, Role::C});
}

ProtocolState ProtocolState::make(int R, int kappa, CVec amps) {
  require(R >= 1 && kappa >= 2, ErrorKind::InvalidInput, "protocol state needs R >= 1 and kappa >= 2");
  const long n = static_cast<long>(R) * kappa * R * kappa;
  require(n <= kMaxDim * 16L, ErrorKind::DimensionCap, "protocol state exceeds the dimension cap");
  require(amps.size() == n, ErrorKind::InvalidInput,
          "protocol state needs " + std::to_string(n) + " amplitudes");
  require(std::abs(amps.squaredNorm() - 1.0) <= 1e-10, ErrorKind::InvalidInput,
          "protocol state is not normalized");
  return ProtocolState{R, kappa, std::move(amps)};
}

CMat ProtocolState::reduced_bc() const {
  const int dBC = kappa * R * kappa;
  // rows of the A-major reshape are the A index
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      amps.data(), R, dBC);
  return m.transpose() * m.conjugate();
}

ProtocolState quasirigid_state(int R, int kappa, const std::vector<int>& colors, const CVec& alpha) {
  require(static_cast<int>(colors.size()) == R, ErrorKind::InvalidInput, "need one color per vertex");
  CVec al = alpha.size() == 0 ? CVec(CVec::Constant(R, 1.0 / std::sqrt(static_cast<double>(R)))) : alpha;
  require(al.size() == R, ErrorKind::InvalidInput, "need one amplitude per vertex");
  ProtocolState s{R, kappa, CVec::Zero(static_cast<Eigen::Index>(R) * kappa * R * kappa)};
  for (int v = 0; v < R; ++v) {
    const int c = colors[static_cast<size_t>(v)];
    require(c >= 0 && c < kappa, ErrorKind::InvalidInput, "color out of range");
    s.amps(s.index(v, c, v, c)) = al(v);
  }
  return ProtocolState::make(R, kappa, s.amps / s.amps.norm());
}

ProtocolState protocol_state_from_json(const JsonDoc& doc, int R, int kappa) {
  const json& j = doc.value;
  if (j.contains("colors")) {
    if (!j["colors"].is_array()) doc.error_at("colors", "\"colors\" must be an array");
    std::vector<int> colors;
    for (const auto& c : j["colors"]) {
      if (!c.is_number_integer()) doc.error_at("colors", "colors must be integers");
      colors.push_back(c.get<int>());
    }
    CVec alpha;
    if (j.contains("alpha")) {
      if (!j["alpha"].is_array()) doc.error_at("alpha", "\"alpha\" must be an array");
      alpha.resize(static_cast<Eigen::Index>(j["alpha"].size()));
      for (size_t i = 0; i < j["alpha"].size(); ++i) {
        if (!j["alpha"][i].is_number()) doc.error_at("alpha", "alpha entries must be numbers");
        alpha(static_cast<Eigen::Index>(i)) = j["alpha"][i].get<double>();
      }
    }
    try {
      return quasirigid_state(R, kappa, colors, alpha);
    } catch (const Error& e) {
      doc.error_at("colors", e.what());
    }
  }
  JsonDoc d = doc;
  if (!d.value.contains("dims")) d.value["dims"] = {R, kappa, R, kappa};
  if (!d.value.contains("roles")) d.value["roles"] = {"A", "B", "B", "C"};
  const LoadedState ls = load_state(d);
  if (!ls.pure) doc.error_at("data", "protocol proofs must be pure states");
  if (ls.layout.dims != std::vector<int>{R, kappa, R, kappa})
    doc.error_at("dims", "proof dims must be [R, kappa, R, kappa] of the CSP");
  return ProtocolState::make(R, kappa, *ls.pure);
}

double matchcheck_prob(const ProtocolState& psi) {
  double s = 0.0;
  for (int v = 0; v < psi.R; ++v)
    for (int c = 0; c < psi.kappa; ++c) s += std::norm(psi.a(v, c, v, c));
  return s;
}

ProtocolState apply_register_cnots(const ProtocolState& psi) {
  require(is_pow2(psi.R) && is_pow2(psi.kappa), ErrorKind::InvalidInput,
          "register CNOTs need power-of-two R and kappa");
  ProtocolState out{psi.R, psi.kappa, CVec::Zero(psi.amps.size())};
  for (int v = 0; v < psi.R; ++v)
    for (int c = 0; c < psi.kappa; ++c)
      for (int w = 0; w < psi.R; ++w)
        for (int d = 0; d < psi.kappa; ++d) out.amps(out.index(v, c, w ^ v, d ^ c)) = psi.a(v, c, w, d);
  return out;
}

ProtocolState apply_register_shifts(const ProtocolState& psi) {
  ProtocolState out{psi.R, psi.kappa, CVec::Zero(psi.amps.size())};
  for (int v = 0; v < psi.R; ++v)
    for (int c = 0; c < psi.kappa; ++c)
      for (int w = 0; w < psi.R; ++w)
        for (int d = 0; d < psi.kappa; ++d)
          out.amps(out.index(v, c, (w - v + psi.R) % psi.R, (d - c + psi.kappa) % psi.kappa)) =
              psi.a(v, c, w, d);
  return out;
}

CVec plus_prime(int R, int kappa) {
  ProtocolState s{R, kappa, CVec::Zero(static_cast<Eigen::Index>(R) * kappa * R * kappa)};
  const double amp = 1.0 / std::sqrt(static_cast<double>(R) * kappa);
  for (int v = 0; v < R; ++v)
    for (int c = 0; c < kappa; ++c) s.amps(s.index(v, c, v, c)) = amp;
  return s.amps;
}

double density_prob(const ProtocolState& psi) {
  cplx acc = 0;
  for (int v = 0; v < psi.R; ++v)
    for (int c = 0; c < psi.kappa; ++c) acc += psi.a(v, c, v, c);
  return std::norm(acc) / (static_cast<double>(psi.R) * psi.kappa);
}

double constraint_prob(const ProtocolState& psi, const CspInstance& csp) {
  require(csp.R == psi.R && csp.kappa == psi.kappa, ErrorKind::InvalidInput,
          "CSP and proof dimensions differ");
  // The CNOTs leave (v, c) untouched, so the (j, a) marginal is read off directly.
  double s = 0.0;
  for (int v = 0; v < psi.R; ++v)
    for (int c = 0; c < psi.kappa; ++c) {
      if (!csp.satisfies(v, c)) continue;
      for (int w = 0; w < psi.R; ++w)
        for (int d = 0; d < psi.kappa; ++d) s += std::norm(psi.a(v, c, w, d));
    }
  return s;
}

TestOutcome protocol_accept_prob(const ProtocolState& psi, const ProtocolSchedule& sched,
                                 const CspInstance& csp) {
  require(sched.kappa == psi.kappa, ErrorKind::InvalidInput, "schedule kappa differs from the proof");
  TestOutcome t;
  t.w_D = density_prob(psi);
  t.w_M = matchcheck_prob(psi);
  t.w_C = sched.c_yes * constraint_prob(psi, csp);
  t.accept = sched.p1 * t.w_D + sched.p2 * t.w_M + sched.p3 * t.w_C;
  return t;
}

json outcome_to_json(const TestOutcome& t) {
  return {{"w_D", t.w_D}, {"w_M", t.w_M}, {"w_C", t.w_C}, {"accept", t.accept}};
}

double swap_test_prob(const CMat& rho1, const CMat& rho2) {
  require(rho1.rows() == rho2.rows() && rho1.cols() == rho2.cols() && rho1.rows() == rho1.cols(),
          ErrorKind::InvalidInput, "SWAP test needs states of equal dimension");
  const double overlap = (rho1.array() * rho2.transpose().array()).sum().real();
  return 0.5 * (1.0 + overlap);
}

double two_proof_mixer(const CMat& rho1, const CMat& rho2, double p,
                       const std::function<double(const CMat&)>& verifier_prob) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidInput, "mixing probability must lie in [0,1]");
  return p * swap_test_prob(rho1, rho2) + (1.0 - p) * 0.5 * (verifier_prob(rho1) + verifier_prob(rho2));
}

double comp_basis_detector_prob(const CVec& mu, const CVec& nu) {
  require(mu.size() == nu.size(), ErrorKind::InvalidInput, "detector needs registers of equal dimension");
  return (mu.cwiseAbs2().array() * nu.cwiseAbs2().array()).sum();
}

double comp_basis_literal_gap(double eps, int k) {
  const double x = std::min({eps, std::sqrt(1.0 - eps), std::sqrt((1.0 - eps) / std::ldexp(1.0, k))});
  return h(x);
}

double comp_basis_no_bound(double eps, int k) {
  require(eps > 0.0 && eps <= 0.5, ErrorKind::InvalidInput, "eps must lie in (0, 1/2]");
  const double hi = std::sqrt(1.0 - eps);
  const double lo = std::sqrt((1.0 - 2.0 * eps) / std::ldexp(1.0, k));
  return 1.0 - std::min({2.0 * eps, h(hi), h(lo)});
}

}  // namespace qsep

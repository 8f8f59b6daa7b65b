#include "qsep/oracles.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace qsep {

std::string to_string(Answer a) { return a == Answer::Yes ? "YES" : "NO"; }

RegisterLayout qubit_layout(const std::vector<int>& dims) {
  require(dims.size() == 3, ErrorKind::InvalidInput, "layout needs three registers A,B,C");
  for (int d : dims)
    require(d >= 2 && (d & (d - 1)) == 0, ErrorKind::InvalidInput,
            "register dimensions must be powers of two");
  return RegisterLayout::tripartite(dims[0], dims[1], dims[2]);
}

int total_qubits(const RegisterLayout& layout) { return qubit_count(layout.total_dim()); }

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Halfspace {x : Tr[W rho(x)] >= 0} where rho(x) is decoded from coordinates idx scaled by s.
Halfspace witness_halfspace(const CMat& W, int M_total, const std::vector<int>& idx, double s) {
  const BlochVector w = encode(hermitize(W));
  Halfspace h;
  h.a = RVec::Zero(static_cast<Eigen::Index>(M_total) * M_total - 1);
  for (size_t j = 0; j < idx.size(); ++j) h.a(idx[j]) = -0.5 * s * w.coords(static_cast<Eigen::Index>(j));
  h.b = W.trace().real() / static_cast<double>(W.rows());
  return h;
}

std::vector<int> identity_indices(int M) {
  std::vector<int> idx(static_cast<size_t>(M) * M - 1);
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return idx;
}

}  // namespace

MembershipResult wmem_k1(const RVec& y, double beta, int M) {
  require(beta > 0, ErrorKind::InvalidInput, "WMEM slack must be positive");
  const BlochVector r = BlochVector::make(M, y);
  const CMat P = decode(r);
  const PsdRecursion rec = psd_check_recursion(P, beta / (2.0 * kSqrt2));
  MembershipResult out;
  if (rec.psd) {
    out.answer = Answer::Yes;
    out.reason = "psd";
    return out;
  }
  const Eigs e = hermitian_eigs(P);
  const Eigen::Index last = e.values.size() - 1;
  if (e.values(last) >= 0.0) {
    out.answer = Answer::Yes;
    out.reason = "psd within slack";
    return out;
  }
  const CVec v = e.vectors.col(last);
  out.answer = Answer::No;
  out.reason = "negative eigenvalue";
  out.cut = witness_halfspace(v * v.adjoint(), M, identity_indices(M), 1.0);
  return out;
}

MembershipResult wmem_k2(const RVec& y, double zeta, const RegisterLayout& layout, int max_level) {
  require(zeta > 0, ErrorKind::InvalidInput, "WMEM slack must be positive");
  const int M = layout.total_dim();
  require(y.size() == static_cast<Eigen::Index>(M) * M - 1, ErrorKind::InvalidInput,
          "point has the wrong dimension");
  MembershipResult out;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y(i)) > 2.0) {
      out.answer = Answer::No;
      out.reason = "coordinate bound";
      Halfspace h;
      h.a = RVec::Zero(y.size());
      h.a(i) = y(i) > 0 ? 1.0 : -1.0;
      h.b = 2.0;
      out.cut = h;
      return out;
    }
  }
  const auto idx = subsystem_indices(layout, {Role::A});
  const double s = std::sqrt(static_cast<double>(layout.dim_of(Role::A)));
  const BlochVector bc = subsystem_project(BlochVector{M, y}, layout, {Role::A});
  const CMat rho = decode(bc);
  const int dB = layout.dim_of(Role::B), dC = layout.dim_of(Role::C);
  const double tau = zeta / (2.0 * M);

  const Eigs e = hermitian_eigs(rho);
  const Eigen::Index last = e.values.size() - 1;
  if (e.values(last) < -tau) {
    const CVec v = e.vectors.col(last);
    out.answer = Answer::No;
    out.reason = "reduced state not psd";
    out.cut = witness_halfspace(v * v.adjoint(), M, idx, s);
    return out;
  }
  const CMat pt = partial_transpose(rho, {dB, dC}, {1});
  const Eigs ept = hermitian_eigs(hermitize(pt));
  if (ept.values(last) < -tau) {
    const CVec v = ept.vectors.col(last);
    out.answer = Answer::No;
    out.reason = "ppt witness";
    out.cut = witness_halfspace(partial_transpose(v * v.adjoint(), {dB, dC}, {1}), M, idx, s);
    return out;
  }
  if (exact_ppt_regime(dB, dC)) {
    out.answer = Answer::Yes;
    out.reason = "ppt exact";
    return out;
  }
  CMat clipped = psd_part(rho);
  clipped /= clipped.trace().real();
  ExtensionOptions opt;
  opt.delta = std::max(tau, 1e-9);
  const SepResult sr = separability_test(clipped, dB, dC, max_level, opt);
  if (sr.verdict == Verdict::SeparableWithin) {
    out.answer = Answer::Yes;
    out.reason = "extension feasible";
    return out;
  }
  out.answer = Answer::No;
  if (sr.verdict == Verdict::Entangled && sr.witness) {
    out.reason = "extension witness";
    out.cut = witness_halfspace(*sr.witness, M, idx, s);
  } else {
    out.reason = "inconclusive";
  }
  return out;
}

double intersection_slack(double beta, const RegisterLayout& layout) {
  const double r3 = 1.0 / std::pow(4.0, total_qubits(layout));
  return beta * r3 / (2.0 * kSqrt2);
}

MembershipResult wmem_intersection(const RVec& y, double beta, const RegisterLayout& layout) {
  const double zeta = intersection_slack(beta, layout);
  MembershipResult a = wmem_k1(y, zeta, layout.total_dim());
  if (a.answer == Answer::No) return a;
  MembershipResult b = wmem_k2(y, zeta, layout);
  if (b.answer == Answer::No) return b;
  return a;
}

ConvexBodyOracle k1_body(const RegisterLayout& layout) {
  const int M = layout.total_dim();
  const int p = total_qubits(layout);
  ConvexBodyOracle o;
  o.name = "K1";
  o.dim = M * M - 1;
  o.outer_radius = kSqrt2;
  o.inner_radius = 1.0 / std::pow(4.0, p);
  o.center = RVec::Zero(o.dim);
  o.query = [M](const RVec& y, double beta) { return wmem_k1(y, beta, M); };
  return o;
}

ConvexBodyOracle k2_body(const RegisterLayout& layout) {
  const int M = layout.total_dim();
  const int p = total_qubits(layout);
  ConvexBodyOracle o;
  o.name = "K2";
  o.dim = M * M - 1;
  o.outer_radius = std::pow(4.0, p);
  o.inner_radius = 1.0 / std::pow(4.0, p);
  o.center = RVec::Zero(o.dim);
  o.query = [layout](const RVec& y, double beta) { return wmem_k2(y, beta, layout); };
  return o;
}

ConvexBodyOracle wis_body(const RegisterLayout& layout) {
  const int M = layout.total_dim();
  const int p = total_qubits(layout);
  ConvexBodyOracle o;
  o.name = "W_IS";
  o.dim = M * M - 1;
  o.outer_radius = kSqrt2;
  o.inner_radius = 1.0 / std::pow(4.0, p);
  o.center = RVec::Zero(o.dim);
  o.query = [layout](const RVec& y, double beta) { return wmem_intersection(y, beta, layout); };
  return o;
}

WvalInstance make_wval_instance(const RegisterLayout& layout, RVec c, double gamma, double eps) {
  require(eps > 0, ErrorKind::InvalidInput, "WVAL slack must be positive");
  const double n = c.norm();
  require(n > 0, ErrorKind::InvalidInput, "objective direction is zero");
  WvalInstance inst;
  inst.layout = layout;
  inst.c = c / n;
  inst.gamma = gamma;
  inst.eps = eps;
  inst.slack = eps / std::pow(4.0, total_qubits(layout) + 1);
  inst.body = wis_body(layout);
  require(inst.c.size() == inst.body.dim, ErrorKind::InvalidInput, "objective has the wrong dimension");
  return inst;
}

WvalInstance build_wval_from_verifier(const CMat& V, const RegisterLayout& layout, double delta,
                                      double soundness) {
  const int M = layout.total_dim();
  const int p = total_qubits(layout);
  require(V.rows() == M && V.cols() == M, ErrorKind::InvalidInput, "verifier does not match the layout");
  require(delta > 0, ErrorKind::InvalidInput, "delta must be positive");
  const Eigs e = hermitian_eigs(V);
  require(e.values(e.values.size() - 1) >= -kMinEigTol && e.values(0) <= 1.0 + kMinEigTol,
          ErrorKind::InvalidInput, "verifier must satisfy 0 <= V <= I");
  const BlochVector d = encode(V);
  const double dn = d.coords.norm();
  require(dn > 1e-12, ErrorKind::InvalidInput, "verifier is proportional to the identity (d = 0)");
  const double tr = V.trace().real() / std::pow(2.0, p);
  const double gamma = (2.0 / dn) * (soundness - tr) + delta / dn;
  const double eps = std::min(1.0 / (2.0 * std::pow(4.0, p)), delta / (2.0 * dn));
  WvalInstance inst = make_wval_instance(layout, d.coords, gamma, eps);
  inst.d_norm = dn;
  inst.trace_term = tr;
  return inst;
}

WvalResult wval_solve(const WvalInstance& inst, const WvalOptions& opt) {
  const int d = inst.body.dim;
  const double R = inst.body.outer_radius;
  const double r = inst.body.inner_radius;
  const double eps = inst.eps;
  const double dd = d;
  const double scale = dd / std::sqrt(dd * dd - 1.0);
  const double shrink = 1.0 - std::sqrt((dd - 1.0) / (dd + 1.0));
  const double log_step = dd * std::log(scale) + std::log(1.0 - shrink);
  // Below this log-volume ratio every point within eps of the optimum has been seen.
  const double log_target = dd * std::log(eps * r / (R * (R + r)));

  RVec z = inst.body.center;
  RMat L = R * RMat::Identity(d, d);
  double log_vol = 0.0;
  WvalResult out;
  out.value = -std::numeric_limits<double>::infinity();
  out.best_point = z;
  const double beta = inst.slack;

  for (int it = 1; it <= opt.max_iterations; ++it) {
    out.iterations = it;
    const MembershipResult m = inst.body.query(z, beta);
    ++out.oracle_calls;
    RVec g;
    if (m.answer == Answer::Yes) {
      const double val = inst.c.dot(z);
      if (val > out.value) {
        out.value = val;
        out.best_point = z;
        out.found_feasible = true;
      }
      g = -inst.c;
    } else {
      if (!m.cut) fail(ErrorKind::Budget, "separation oracle returned no hyperplane (" + m.reason + ")");
      g = m.cut->a;
    }
    const RVec Ltg = L.transpose() * inst.c;
    const double width = Ltg.norm();
    out.upper = std::max(out.value, inst.c.dot(z) + width);
    if (out.found_feasible && out.upper - out.value <= eps) {
      out.stop_reason = "gap";
      break;
    }
    if (log_vol <= log_target) {
      out.stop_reason = "volume";
      break;
    }
    const RVec u0 = L.transpose() * g;
    const double un = u0.norm();
    if (!(un > 0)) fail(ErrorKind::Budget, "degenerate cut");
    const RVec u = u0 / un;
    const RVec Lu = L * u;
    z -= Lu / (dd + 1.0);
    L = scale * (L - shrink * Lu * u.transpose());
    log_vol += log_step;
    if (it % opt.resymmetrize_every == 0) {
      RMat P = L * L.transpose();
      P = 0.5 * (P + P.transpose());
      Eigen::LLT<RMat> llt(P);
      if (llt.info() == Eigen::Success) L = llt.matrixL();
    }
    if (it == opt.max_iterations) {
      out.status = SolveStatus::BudgetExceeded;
      out.stop_reason = "budget";
    }
  }
  out.verdict = (out.found_feasible && out.value >= inst.gamma) ? Answer::Yes : Answer::No;
  return out;
}

json wval_result_to_json(const WvalInstance& inst, const WvalResult& r) {
  json j;
  j["verdict"] = r.status == SolveStatus::BudgetExceeded ? std::string("BUDGET_EXCEEDED") : to_string(r.verdict);
  j["value"] = r.found_feasible ? json(r.value) : json(nullptr);
  j["upper_bound"] = r.upper;
  j["probability"] = r.found_feasible ? json(inst.probability(r.value)) : json(nullptr);
  j["gamma"] = inst.gamma;
  j["eps"] = inst.eps;
  j["iterations"] = r.iterations;
  j["oracle_calls"] = r.oracle_calls;
  j["stop"] = r.stop_reason;
  return j;
}

}  // namespace qsep

#include "qsep/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace qsep {

namespace {

CVec unit(CVec v) { return v / v.norm(); }

CVec gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

CVec basis(int n, int i) {
  CVec v = CVec::Zero(n);
  v(i) = 1.0;
  return v;
}

// Left-multiply the A register (rows of the A-major reshape) by U.
ProtocolState rotate_a(const ProtocolState& psi, const CMat& U) {
  const int dBC = psi.kappa * psi.R * psi.kappa;
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMat m = Eigen::Map<const RowMat>(psi.amps.data(), psi.R, dBC);
  RowMat out = U * m;
  CVec v = Eigen::Map<const CVec>(out.data(), out.size());
  return ProtocolState::make(psi.R, psi.kappa, unit(v));
}

CMat near_identity_unitary(int n, double t, Rng& rng) {
  CMat H = CMat(gaussian_vector(n * n, rng).reshaped(n, n));
  H = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  CVec ph(n);
  for (int i = 0; i < n; ++i) ph(i) = std::exp(cplx(0.0, t * es.eigenvalues()(i)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<int> random_colors(int R, int kappa, Rng& rng) {
  std::vector<int> c(static_cast<size_t>(R));
  for (auto& x : c) x = uniform_int(rng, 0, kappa - 1);
  return c;
}

// Colors concentrated on c with weight 1 - eta.
CVec skewed_color(int kappa, int c, double eta, Rng& rng) {
  CVec v = std::sqrt(1.0 - eta) * basis(kappa, c) + std::sqrt(eta) * unit(gaussian_vector(kappa, rng));
  return unit(v);
}

CVec embed_color(const CVec& col, int R, int w) {
  CVec mu = CVec::Zero(col.size() * R);
  for (Eigen::Index c = 0; c < col.size(); ++c) mu(c * R + w) = col(c);
  return mu;
}

}  // namespace

double schedule_third_lhs(int kappa, double nu_low) {
  const double k = kappa;
  return std::sqrt(k * nu_low + (k + 1.0) * std::sqrt((k + 1.0) * nu_low));
}

ProtocolSchedule schedule_compute(int kappa, double c_yes, double xi) {
  require(kappa >= 2, ErrorKind::InvalidInput, "kappa must be at least 2");
  require(xi > 0.0 && xi <= c_yes && c_yes < 1.0, ErrorKind::InvalidInput,
          "need 0 < xi <= C_YES < 1");
  const double target = xi / 2.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 2000 && hi > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (schedule_third_lhs(kappa, mid) <= target ? lo : hi) = mid;
  }
  ProtocolSchedule s;
  s.kappa = kappa;
  s.c_yes = c_yes;
  s.xi = xi;
  s.nu_low = 0.5 * lo;
  require(s.nu_low > 0.0 && std::isnormal(s.nu_low), ErrorKind::Precondition,
          "infeasible schedule: (kappa nu_low + (kappa+1) sqrt((kappa+1) nu_low))^{1/2} <= xi/2 "
          "has no positive solution in double range");
  const double ratio = xi / (6.0 * (1.0 - c_yes));
  s.nu_high = std::min(s.nu_low / kappa, s.nu_low * ratio);
  while (s.nu_high > 0.0 && (s.nu_high > s.nu_low / kappa || s.nu_high / s.nu_low > ratio))
    s.nu_high = std::nextafter(s.nu_high, 0.0);
  const double nh2 = s.nu_high * s.nu_high;
  require(s.nu_high > 0.0 && std::isnormal(nh2), ErrorKind::Precondition,
          "infeasible schedule: nu_high^2 underflows, so Z is not finite");
  s.Z = 1.0 + (s.nu_low + s.nu_high) / nh2 + s.nu_low / (2.0 * (1.0 - c_yes));
  require(std::isfinite(s.Z), ErrorKind::Precondition, "infeasible schedule: Z overflows");
  s.p1 = 1.0 / s.Z;
  s.p3 = s.nu_low / (2.0 * (1.0 - c_yes) * s.Z);
  s.p2 = 1.0 - s.p1 - s.p3;
  // p2 takes the rounding so that (p1 + p2) + p3 == 1 exactly.
  for (int it = 0; it < 64 && (s.p1 + s.p2) + s.p3 != 1.0; ++it)
    s.p2 = std::nextafter(s.p2, (s.p1 + s.p2) + s.p3 < 1.0 ? 2.0 : 0.0);
  s.p_yes = s.p1 / kappa + s.p2 + s.p3 * c_yes;
  s.gap = s.nu_high / (2.0 * s.Z);
  require(s.gap > 0.0, ErrorKind::Precondition, "infeasible schedule: gap underflows to zero");
  return s;
}

std::vector<std::string> schedule_violations(const ProtocolSchedule& s) {
  std::vector<std::string> bad;
  if (!(s.nu_high >= 0.0 && s.nu_high <= s.nu_low / s.kappa)) bad.push_back("nu_high <= nu_low/kappa");
  if (!(s.nu_high / s.nu_low <= s.xi / (6.0 * (1.0 - s.c_yes))))
    bad.push_back("nu_high/nu_low <= xi/(6(1-C_YES))");
  if (!(schedule_third_lhs(s.kappa, s.nu_low) <= s.xi / 2.0))
    bad.push_back("(kappa nu_low + (kappa+1) sqrt((kappa+1) nu_low))^{1/2} <= xi/2");
  if ((s.p1 + s.p2) + s.p3 != 1.0) bad.push_back("p1 + p2 + p3 = 1");
  if (!(s.gap > 0.0)) bad.push_back("gap > 0");
  return bad;
}

json schedule_to_json(const ProtocolSchedule& s) {
  return {{"kappa", s.kappa}, {"c_yes", s.c_yes}, {"xi", s.xi},     {"nu_low", s.nu_low},
          {"nu_high", s.nu_high}, {"Z", s.Z},     {"p1", s.p1},     {"p2", s.p2},
          {"p3", s.p3},         {"P_YES", s.p_yes}, {"gap", s.gap}};
}

ProtocolSchedule schedule_from_json(const JsonDoc& doc) {
  const json& j = doc.value;
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) doc.error_at(key, std::string("missing number \"") + key + "\"");
    return j[key].get<double>();
  };
  ProtocolSchedule s;
  if (!j.contains("kappa") || !j["kappa"].is_number_integer()) doc.error_at("kappa", "missing integer \"kappa\"");
  s.kappa = j["kappa"].get<int>();
  s.c_yes = num("c_yes");
  s.xi = num("xi");
  s.nu_low = num("nu_low");
  s.nu_high = num("nu_high");
  s.Z = num("Z");
  s.p1 = num("p1");
  s.p2 = num("p2");
  s.p3 = num("p3");
  s.p_yes = num("P_YES");
  s.gap = num("gap");
  const auto bad = schedule_violations(s);
  if (!bad.empty()) doc.error_at("p1", "schedule violates " + bad.front());
  return s;
}

std::string to_string(ProofFamily f) {
  switch (f) {
    case ProofFamily::OffMatch: return "off_match";
    case ProofFamily::MultiColor: return "multi_color";
    case ProofFamily::SkewedAlpha: return "skewed_alpha";
    case ProofFamily::ARotated: return "a_rotated";
    case ProofFamily::RandomComp: return "random_comp";
    case ProofFamily::NearRigid: return "near_rigid";
  }
  return "?";
}

ProtocolState comp_proof(int R, int kappa, const CVec& alpha, const std::vector<CVec>& mu,
                         const std::vector<CVec>& nu) {
  require(alpha.size() == R && static_cast<int>(mu.size()) == R && static_cast<int>(nu.size()) == R,
          ErrorKind::InvalidInput, "comp_proof needs one term per vertex");
  ProtocolState s{R, kappa, CVec::Zero(static_cast<Eigen::Index>(R) * kappa * R * kappa)};
  const int dB = kappa * R;
  for (int v = 0; v < R; ++v) {
    require(mu[v].size() == dB && nu[v].size() == kappa, ErrorKind::InvalidInput, "comp_proof term has wrong size");
    const CVec bc = kron(mu[v], nu[v]);
    s.amps.segment(static_cast<Eigen::Index>(v) * dB * kappa, dB * kappa) = alpha(v) * bc;
  }
  return ProtocolState::make(R, kappa, unit(s.amps));
}

ProtocolState adversarial_proof(ProofFamily f, int R, int kappa, Rng& rng) {
  const int dB = kappa * R;
  const auto colors = random_colors(R, kappa, rng);
  CVec alpha = CVec::Constant(R, 1.0 / std::sqrt(static_cast<double>(R)));
  std::vector<CVec> mu(static_cast<size_t>(R)), nu(static_cast<size_t>(R));
  switch (f) {
    case ProofFamily::OffMatch: {
      const double eta = uniform(rng, 0.0, 0.3);
      for (int v = 0; v < R; ++v) {
        const CVec rigid_mu = embed_color(basis(kappa, colors[v]), R, v);
        mu[v] = unit(std::sqrt(1.0 - eta) * rigid_mu + std::sqrt(eta) * unit(gaussian_vector(dB, rng)));
        nu[v] = skewed_color(kappa, colors[v], uniform(rng, 0.0, eta), rng);
      }
      break;
    }
    case ProofFamily::MultiColor: {
      for (int v = 0; v < R; ++v) {
        const CVec col = skewed_color(kappa, colors[v], uniform(rng, 0.0, 0.6), rng);
        mu[v] = embed_color(col, R, v);
        nu[v] = uniform(rng, 0.0, 1.0) < 0.5 ? col : skewed_color(kappa, colors[v], uniform(rng, 0.0, 0.6), rng);
      }
      break;
    }
    case ProofFamily::SkewedAlpha: {
      // a quarter of the draws are exactly rigid
      const bool rigid = uniform(rng, 0.0, 1.0) < 0.25;
      const double spread = rigid ? 0.0 : uniform(rng, 0.0, 1.0);
      for (int v = 0; v < R; ++v) {
        alpha(v) = 1.0 + spread * uniform(rng, -1.0, 1.0);
        if (!rigid && uniform(rng, 0.0, 1.0) < 0.3) alpha(v) *= std::exp(cplx(0.0, uniform(rng, -0.5, 0.5)));
        mu[v] = embed_color(basis(kappa, colors[v]), R, v);
        nu[v] = basis(kappa, colors[v]);
      }
      alpha = unit(alpha);
      break;
    }
    case ProofFamily::ARotated: {
      const ProofFamily base = uniform(rng, 0.0, 1.0) < 0.5 ? ProofFamily::OffMatch : ProofFamily::MultiColor;
      const ProtocolState b = adversarial_proof(base, R, kappa, rng);
      const CMat U = uniform(rng, 0.0, 1.0) < 0.3 ? haar_unitary(R, rng)
                                                   : near_identity_unitary(R, uniform(rng, 0.0, 0.5), rng);
      return rotate_a(b, U);
    }
    case ProofFamily::RandomComp: {
      alpha = haar_vector(R, rng);
      for (int v = 0; v < R; ++v) {
        mu[v] = haar_vector(dB, rng);
        nu[v] = haar_vector(kappa, rng);
      }
      break;
    }
    case ProofFamily::NearRigid: {
      const double eta = uniform(rng, 0.0, 1e-3);
      for (int v = 0; v < R; ++v) {
        alpha(v) = 1.0 + uniform(rng, -1e-2, 1e-2);
        const CVec rigid_mu = embed_color(basis(kappa, colors[v]), R, v);
        mu[v] = unit(std::sqrt(1.0 - eta) * rigid_mu + std::sqrt(eta) * unit(gaussian_vector(dB, rng)));
        nu[v] = skewed_color(kappa, colors[v], uniform(rng, 0.0, eta), rng);
      }
      alpha = unit(alpha);
      break;
    }
  }
  return comp_proof(R, kappa, alpha, mu, nu);
}

bool reduced_bc_is_ppt(const ProtocolState& psi, double tol) {
  const CMat rho = psi.reduced_bc();
  const CMat pt = partial_transpose(rho, {psi.kappa * psi.R, psi.kappa}, {1});
  return min_eigenvalue(hermitize(pt)) >= -tol;
}

std::vector<int> argmax_colors(const ProtocolState& psi) {
  std::vector<int> sigma(static_cast<size_t>(psi.R), 0);
  for (int v = 0; v < psi.R; ++v) {
    double best = -1.0;
    for (int d = 0; d < psi.kappa; ++d) {
      const double m = std::norm(psi.a(v, d, v, d));
      if (m > best) {
        best = m;
        sigma[v] = d;
      }
    }
  }
  return sigma;
}

namespace {

void require_separable(const ProtocolState& psi, bool check) {
  if (check && !reduced_bc_is_ppt(psi))
    fail(ErrorKind::Precondition, "proof has an entangled B|C reduction");
}

LemmaReport lower_bound_report(double value, double bound, double tol) {
  LemmaReport r;
  r.value = value;
  r.bound = bound;
  r.margin = value - bound;
  r.pass = r.margin >= -tol;
  return r;
}

LemmaReport upper_bound_report(double value, double bound, double tol) {
  LemmaReport r;
  r.value = value;
  r.bound = bound;
  r.margin = bound - value;
  r.pass = r.margin >= -tol;
  return r;
}

}  // namespace

LemmaReport quasirigid_overlap_check(const ProtocolState& psi, bool check_precondition) {
  require_separable(psi, check_precondition);
  const double eps = std::max(0.0, 1.0 - matchcheck_prob(psi));
  const auto sigma = argmax_colors(psi);
  double overlap = 0.0;
  for (int v = 0; v < psi.R; ++v) overlap += std::norm(psi.a(v, sigma[v], v, sigma[v]));
  LemmaReport r = lower_bound_report(overlap, 1.0 - (psi.kappa + 1.0) * eps, 1e-9);
  r.eps = eps;
  return r;
}

LemmaReport rigidity_bound_check(const ProtocolState& psi, bool check_precondition) {
  require_separable(psi, check_precondition);
  const double k = psi.kappa;
  const double d_D = 1.0 / k - density_prob(psi);
  const double d_M = std::max(0.0, 1.0 - matchcheck_prob(psi));
  const auto sigma = argmax_colors(psi);
  cplx acc = 0;
  for (int v = 0; v < psi.R; ++v) acc += psi.a(v, sigma[v], v, sigma[v]);
  const double overlap = std::norm(acc) / psi.R;
  LemmaReport r = lower_bound_report(overlap, 1.0 - k * d_D - (k + 1.0) * std::sqrt((k + 1.0) * d_M), 1e-9);
  r.eps = d_M;
  return r;
}

LemmaReport quadratic_tradeoff_check(const ProtocolState& psi, bool check_precondition) {
  require_separable(psi, check_precondition);
  const double k = psi.kappa;
  const double w_D = density_prob(psi);
  const double w_M = matchcheck_prob(psi);
  LemmaReport r;
  r.eps = 1.0 - w_M;
  if (w_D < 1.0 / k - 1e-12) {
    r.applicable = false;
    r.note = "w_D < 1/kappa";
    r.value = w_D;
    r.bound = 1.0 / k;
    return r;
  }
  const double ex = std::max(0.0, w_D - 1.0 / k);
  r = upper_bound_report(ex * ex + (k + 1.0) * w_M, k + 1.0, 1e-9);
  r.eps = 1.0 - w_M;
  return r;
}

SoundnessCase classify_case(const TestOutcome& t, const ProtocolSchedule& s) {
  const double d = t.w_D - 1.0 / s.kappa;
  if (d <= -s.nu_low) return SoundnessCase::LowDensity;
  if (d >= s.nu_high) return SoundnessCase::HighDensity;
  if (t.w_M <= 1.0 - s.nu_low) return SoundnessCase::LowMatch;
  return SoundnessCase::NearRigid;
}

std::vector<ProtocolState> adversarial_family(int R, int kappa, int count, std::uint64_t seed) {
  std::vector<ProtocolState> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    out.push_back(adversarial_proof(kAllFamilies[static_cast<size_t>(i) % kAllFamilies.size()], R, kappa, rng));
  }
  return out;
}

AuditReport soundness_case_audit(const ProtocolSchedule& s, const CspInstance& no_csp,
                                 const std::vector<ProtocolState>& proofs,
                                 const CspInstance& yes_csp) {
  const auto bad = schedule_violations(s);
  require(bad.empty(), ErrorKind::Precondition, bad.empty() ? "" : "schedule violates " + bad.front());
  AuditReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double limit = s.p_yes - s.gap;
  for (const auto& psi : proofs) {
    const TestOutcome t = protocol_accept_prob(psi, s, no_csp);
    const auto c = classify_case(t, s);
    ++rep.case_counts[static_cast<size_t>(c) - 1];
    ++rep.proofs;
    const double margin = limit - t.accept;
    rep.min_margin = std::min(rep.min_margin, margin);
    rep.max_accept = std::max(rep.max_accept, t.accept);
    if (margin < -1e-9) ++rep.violations;
  }
  // Honest proof: rigid with a fully satisfying assignment of the YES instance.
  std::vector<int> colors(static_cast<size_t>(yes_csp.R));
  for (int j = 0; j < yes_csp.R; ++j) {
    require(!yes_csp.sat[j].empty(), ErrorKind::InvalidInput, "YES instance must be satisfiable");
    colors[j] = yes_csp.sat[j].front();
  }
  const TestOutcome honest = protocol_accept_prob(quasirigid_state(yes_csp.R, yes_csp.kappa, colors), s, yes_csp);
  rep.honest_accept = honest.accept;
  rep.honest_error = std::abs(honest.accept - s.p_yes);
  return rep;
}

LemmaReport offdiagonal_check(const CMat& rho, int m, int n, int w, int x, int y, int z) {
  require(rho.rows() == static_cast<Eigen::Index>(m) * n, ErrorKind::InvalidInput, "state does not match m x n");
  auto diag = [&](int a, int b) { return std::max(0.0, rho(a * n + b, a * n + b).real()); };
  const double value = std::abs(rho(w * n + x, y * n + z));
  const double sq = std::sqrt(std::min({diag(w, x), diag(w, z), diag(y, x), diag(y, z)}));
  const double am = 0.5 * std::min(diag(w, x) + diag(y, z), diag(w, z) + diag(y, x));
  LemmaReport r = upper_bound_report(value, std::min(sq, am), 1e-9);
  return r;
}

LemmaReport mixed_swap_check(const CMat& rho1, const CMat& rho2) {
  const double p1 = hermitian_eigs(rho1).values(0);
  const double q1 = hermitian_eigs(rho2).values(0);
  const double eps = 1.0 - p1 * q1;
  LemmaReport r = upper_bound_report(swap_test_prob(rho1, rho2), 1.0 - 0.5 * eps + 0.5 * eps * eps, 1e-9);
  r.eps = eps;
  if (eps >= 1.0 / 3.0) {
    r.applicable = false;
    r.pass = true;
    r.note = "eps >= 1/3";
  }
  return r;
}

LemmaReport swap_overlap_check(const CMat& rho1, const CMat& rho2) {
  const double p1 = hermitian_eigs(rho1).values(0);
  const double q1 = hermitian_eigs(rho2).values(0);
  const double overlap = 2.0 * swap_test_prob(rho1, rho2) - 1.0;
  LemmaReport r = upper_bound_report(overlap, std::min(p1, q1), 1e-9);
  r.eps = 1.0 - p1 * q1;
  return r;
}

std::string to_string(ContinuitySet s) {
  switch (s) {
    case ContinuitySet::IsStar: return "is_star";
    case ContinuitySet::Nonneg: return "nonneg";
    case ContinuitySet::Proper: return "proper";
  }
  return "?";
}

double continuity_f(ContinuitySet s, double x) {
  switch (s) {
    case ContinuitySet::IsStar: return 2.0 * x;
    case ContinuitySet::Nonneg: return x;
    case ContinuitySet::Proper: return 4.0 * std::pow(x, 0.25);
  }
  return 1.0;
}

double continuity_domain(ContinuitySet s) {
  switch (s) {
    case ContinuitySet::IsStar: return 0.5;
    case ContinuitySet::Nonneg: return 1.0;
    case ContinuitySet::Proper: return std::ldexp(1.0, -8);
  }
  return 0.0;
}

CVec uhlmann_purification(const CMat& rho_bc, const CVec& psi, int dA) {
  const int dBC = static_cast<int>(rho_bc.rows());
  require(dA >= dBC, ErrorKind::Precondition, "purification needs dim(A) >= dim(B) dim(C)");
  require(psi.size() == static_cast<Eigen::Index>(dA) * dBC, ErrorKind::InvalidInput, "vector does not match dims");
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMat Mpsi = Eigen::Map<const RowMat>(psi.data(), dA, dBC);
  const CMat S = psd_sqrt(rho_bc.transpose());
  const CMat K = S * Mpsi.adjoint();
  Eigen::JacobiSVD<CMat> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CMat V = svd.matrixV() * svd.matrixU().adjoint();
  const RowMat X = V * S;
  return Eigen::Map<const CVec>(X.data(), X.size());
}

LemmaReport continuity_check(ContinuitySet s, const CMat& rho, const RegisterLayout& layout) {
  require(hermiticity_defect(rho) <= kHermitianTol, ErrorKind::NotHermitian, "state is not Hermitian");
  const int n = static_cast<int>(rho.rows());
  const Eigs e = hermitian_eigs(rho);
  const double x = std::max(0.0, 1.0 - e.values(0));
  CVec top = e.vectors.col(0);
  // Fix the global phase on the largest entry so real sets give real vectors.
  Eigen::Index imax = 0;
  top.cwiseAbs().maxCoeff(&imax);
  top *= std::conj(top(imax)) / std::abs(top(imax));
  CVec wit;
  switch (s) {
    case ContinuitySet::IsStar: {
      require(layout.size() == 3 && layout.total_dim() == n, ErrorKind::InvalidInput,
              "IS_star check needs a matching A,B,C layout");
      const int dA = layout.dims[0], dB = layout.dims[1], dC = layout.dims[2];
      require(dA >= dB * dC, ErrorKind::Precondition, "IS_star needs dim(A) >= dim(B) dim(C)");
      const CMat bc = partial_trace(rho, layout.dims, {1, 2});
      require(min_eigenvalue(hermitize(partial_transpose(bc, {dB, dC}, {1}))) >= -1e-9,
              ErrorKind::Precondition, "state is not internally separable");
      wit = uhlmann_purification(bc, top, dA);
      break;
    }
    case ContinuitySet::Nonneg: {
      require((rho.real().array() >= -1e-12).all() && rho.imag().cwiseAbs().maxCoeff() <= 1e-12,
              ErrorKind::Precondition, "state has negative or complex entries");
      wit = top.cwiseAbs().cast<cplx>();
      break;
    }
    case ContinuitySet::Proper: {
      const double d0 = rho(0, 0).real();
      require(rho.imag().cwiseAbs().maxCoeff() <= 1e-12 &&
                  (rho.diagonal().real().array() - d0).abs().maxCoeff() <= 1e-12,
              ErrorKind::Precondition, "state is not real with equal diagonal");
      wit.resize(n);
      for (int i = 0; i < n; ++i) wit(i) = (top(i).real() >= 0.0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(n));
      break;
    }
  }
  const double value = (wit.adjoint() * rho * wit)(0, 0).real();
  LemmaReport r;
  r.eps = x;
  if (x > continuity_domain(s)) {
    r.applicable = false;
    r.note = "x outside the domain";
    r.value = value;
    return r;
  }
  r = lower_bound_report(value, 1.0 - continuity_f(s, x), 1e-8);
  r.eps = x;
  return r;
}

CMat sample_continuity_state(ContinuitySet s, Rng& rng, const RegisterLayout& layout) {
  switch (s) {
    case ContinuitySet::IsStar: {
      const RegisterLayout l = layout.size() == 3 ? layout : RegisterLayout::tripartite(4, 2, 2);
      const int dA = l.dims[0], dB = l.dims[1], dC = l.dims[2];
      auto member = [&]() {
        CVec v = comp_basis_purification(dA, dB, dC, rng);
        const CMat U = haar_unitary(dA, rng);
        using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const RowMat m = U * Eigen::Map<const RowMat>(v.data(), dA, dB * dC);
        return CVec(Eigen::Map<const CVec>(m.data(), m.size()));
      };
      const double t = std::pow(uniform(rng, 0.0, 1.0), 2) * 0.5;
      const int terms = uniform_int(rng, 1, 4);
      const RVec w = simplex_weights(terms, rng);
      const CVec p0 = member();
      CMat rho = (1.0 - t) * p0 * p0.adjoint();
      for (int k = 0; k < terms; ++k) {
        const CVec pk = member();
        rho += t * w(k) * pk * pk.adjoint();
      }
      return hermitize(rho);
    }
    case ContinuitySet::Nonneg: {
      const int n = 1 << uniform_int(rng, 1, 4);
      const int terms = uniform_int(rng, 1, 4);
      const double t = std::pow(uniform(rng, 0.0, 1.0), 2);
      const RVec w = simplex_weights(terms, rng);
      CMat rho = CMat::Zero(n, n);
      for (int k = 0; k <= terms; ++k) {
        RVec u(n);
        for (int i = 0; i < n; ++i) u(i) = uniform(rng, 0.0, 1.0);
        // sparse supports make the top eigenvector non-trivial
        if (k > 0 && uniform(rng, 0.0, 1.0) < 0.5) u(uniform_int(rng, 0, n - 1)) += 3.0;
        u.normalize();
        const double weight = k == 0 ? 1.0 - t : t * w(k - 1);
        rho += weight * (u * u.transpose()).cast<cplx>();
      }
      return rho;
    }
    case ContinuitySet::Proper: {
      const int n = 1 << uniform_int(rng, 2, 4);
      const double x0 = uniform(rng, 0.0, 1.0) < 0.1 ? 0.0 : uniform(rng, 0.0, continuity_domain(s));
      const double lam = 1.0 - x0;
      RVec u(n);
      for (int i = 0; i < n; ++i) u(i) = uniform(rng, -1.0, 1.0);
      u.array() -= u.mean();
      const double room = x0 > 0.0 ? (1.0 / lam - 1.0) : 0.0;
      const double scale = u.cwiseAbs().maxCoeff() > 0 ? room / u.cwiseAbs().maxCoeff() : 0.0;
      RVec a(n), b(n);
      for (int i = 0; i < n; ++i) {
        const double sign_a = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        const double sign_b = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        const double a2 = (1.0 + scale * u(i)) / n;
        a(i) = sign_a * std::sqrt(a2);
        b(i) = x0 > 0.0 ? sign_b * std::sqrt(std::max(0.0, (1.0 / n - lam * a2) / (1.0 - lam))) : 0.0;
      }
      RMat rho = lam * a * a.transpose();
      if (x0 > 0.0) rho += (1.0 - lam) * b * b.transpose();
      // equal diagonal up to rounding
      for (int i = 0; i < n; ++i) rho(i, i) = 1.0 / n;
      return rho.cast<cplx>();
    }
  }
  return {};
}

LemmaReport pigeonhole_overlap(const CVec& psi, const RegisterLayout& layout) {
  require(layout.size() == 3 && layout.total_dim() == psi.size(), ErrorKind::InvalidInput,
          "pigeonhole needs a tripartite layout matching the state");
  const int dAB = layout.dims[0] * layout.dims[1], dC = layout.dims[2];
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMat m = Eigen::Map<const RowMat>(psi.data(), dAB, dC);
  Eigen::JacobiSVD<CMat> svd{CMat(m)};
  const double top = svd.singularValues()(0);
  return lower_bound_report(top * top, 1.0 / dC, 1e-12);
}

QmaConstants qma_in_qma_constants(double ell) {
  require(ell > 0.0 && ell <= 1.0, ErrorKind::InvalidInput, "ell must lie in (0, 1]");
  QmaConstants q;
  q.ell = ell;
  q.c = 1.0 - ell * ell / 4.0;
  q.s = ell / 4.0;
  q.lhs = 1.0 - ell + ell * q.s + 2.0 * std::sqrt(q.s * ell * (1.0 - ell));
  q.margin = q.c - q.lhs;
  q.holds = q.margin > 0.0;
  return q;
}

MixerSchedule mixer_schedule(double s, double delta_gap) {
  require(s >= 0.0 && delta_gap > 0.0 && s + delta_gap <= 1.0, ErrorKind::InvalidInput,
          "need s >= 0, Delta > 0 and s + Delta <= 1");
  MixerSchedule m;
  m.s = s;
  m.delta_gap = delta_gap;
  const double far = 0.5 * (1.0 - std::sqrt(2.0 / 3.0));
  m.gamma = std::min(delta_gap * delta_gap / 8.0, 1.0 / 3.0);
  const double gg = m.gamma * (1.0 - m.gamma);
  m.delta = 0.25 * std::min(1.0 - std::sqrt(2.0 / 3.0), gg);
  const double c = s + delta_gap;
  m.threshold_far = (1.0 - c + m.delta) / (1.0 - c + far);
  m.threshold_mixed = (1.0 - delta_gap + m.delta) / (1.0 - delta_gap + 0.5 * gg);
  m.p = 0.5 * (std::max(m.threshold_far, m.threshold_mixed) + 1.0);
  m.gap_far = m.p * far + (1.0 - m.p) * (c - 1.0);
  m.gap_mixed = 0.5 * m.p * gg + (1.0 - m.p) * (delta_gap - 1.0);
  m.gap_close = (1.0 - m.p) * delta_gap / 2.0;
  m.ok = m.p < 1.0 && m.gap_far >= m.delta && m.gap_mixed >= m.delta && m.gap_close > 0.0;
  return m;
}

LemmaReport comp_basis_check(const CVec& mu, const CVec& nu, int k) {
  require(mu.size() == (1 << k) && nu.size() == (1 << k), ErrorKind::InvalidInput, "registers must hold k qubits");
  const double best = (mu.cwiseAbs2().array() * nu.cwiseAbs2().array()).maxCoeff();
  const double eps = std::min(0.5, 1.0 - best);
  LemmaReport r;
  r.eps = eps;
  if (eps <= 0.0) {
    r.applicable = false;
    r.note = "YES instance";
    return r;
  }
  const double acc = comp_basis_detector_prob(mu, nu);
  r = upper_bound_report(acc, comp_basis_no_bound(eps, k), 1e-9);
  r.eps = eps;
  if (acc > 1.0 - comp_basis_literal_gap(eps, k) + 1e-12) r.note = "exceeds literal gap bound";
  return r;
}

}  // namespace qsep

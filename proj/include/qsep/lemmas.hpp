#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qsep/protocol.hpp"
#include "qsep/sampling.hpp"

namespace qsep {

// Schedule

ProtocolSchedule schedule_compute(int kappa, double c_yes, double xi);
// Names of violated schedule invariants; empty when valid.
std::vector<std::string> schedule_violations(const ProtocolSchedule& s);
double schedule_third_lhs(int kappa, double nu_low);
json schedule_to_json(const ProtocolSchedule& s);
ProtocolSchedule schedule_from_json(const JsonDoc& doc);

// Adversarial proofs. Every family keeps Tr_A separable by construction.

enum class ProofFamily { OffMatch, MultiColor, SkewedAlpha, ARotated, RandomComp, NearRigid };
std::string to_string(ProofFamily f);
inline constexpr std::array<ProofFamily, 6> kAllFamilies = {
    ProofFamily::OffMatch,  ProofFamily::MultiColor, ProofFamily::SkewedAlpha,
    ProofFamily::ARotated,  ProofFamily::RandomComp, ProofFamily::NearRigid};

// sum_v alpha_v |v>_A |mu_v>_B |nu_v>_C with mu_v over (c, w) and nu_v over d.
ProtocolState comp_proof(int R, int kappa, const CVec& alpha, const std::vector<CVec>& mu,
                         const std::vector<CVec>& nu);
ProtocolState adversarial_proof(ProofFamily f, int R, int kappa, Rng& rng);

// Tr_A is PPT within tol (exact separability is guaranteed by the samplers).
bool reduced_bc_is_ppt(const ProtocolState& psi, double tol = 1e-9);

// Lemma checks. margin = value - bound (or bound - value for upper bounds); pass = margin >= -tol.

struct LemmaReport {
  bool applicable = true;
  bool pass = true;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double eps = 0.0;
  std::string note;
};

std::vector<int> argmax_colors(const ProtocolState& psi);
LemmaReport quasirigid_overlap_check(const ProtocolState& psi, bool check_precondition = true);
LemmaReport rigidity_bound_check(const ProtocolState& psi, bool check_precondition = true);
LemmaReport quadratic_tradeoff_check(const ProtocolState& psi, bool check_precondition = true);

enum class SoundnessCase { LowDensity = 1, HighDensity = 2, LowMatch = 3, NearRigid = 4 };
SoundnessCase classify_case(const TestOutcome& t, const ProtocolSchedule& s);

struct AuditReport {
  int proofs = 0;
  int violations = 0;
  double min_margin = 0.0;  // (P_YES - gap) - accept
  double max_accept = 0.0;
  std::array<int, 4> case_counts{};
  double honest_accept = 0.0;
  double honest_error = 0.0;  // |honest_accept - P_YES|
};

AuditReport soundness_case_audit(const ProtocolSchedule& s, const CspInstance& no_csp,
                                 const std::vector<ProtocolState>& proofs,
                                 const CspInstance& yes_csp);
std::vector<ProtocolState> adversarial_family(int R, int kappa, int count, std::uint64_t seed);

// Off-diagonal bounds for separable bipartite states.
LemmaReport offdiagonal_check(const CMat& rho, int m, int n, int w, int x, int y, int z);

// SWAP-test bounds.
LemmaReport mixed_swap_check(const CMat& rho1, const CMat& rho2);
LemmaReport swap_overlap_check(const CMat& rho1, const CMat& rho2);

// Continuity witnesses.

enum class ContinuitySet { IsStar, Nonneg, Proper };
std::string to_string(ContinuitySet s);
double continuity_f(ContinuitySet s, double x);
double continuity_domain(ContinuitySet s);
// Purification of Tr_A rho closest to psi; needs dA >= dB*dC.
CVec uhlmann_purification(const CMat& rho_bc, const CVec& psi, int dA);
LemmaReport continuity_check(ContinuitySet s, const CMat& rho, const RegisterLayout& layout = {});
CMat sample_continuity_state(ContinuitySet s, Rng& rng, const RegisterLayout& layout = {});

LemmaReport pigeonhole_overlap(const CVec& psi, const RegisterLayout& layout);

struct QmaConstants {
  double ell = 0.0;
  double c = 0.0;
  double s = 0.0;
  double lhs = 0.0;
  double margin = 0.0;
  bool holds = false;
};
QmaConstants qma_in_qma_constants(double ell);

struct MixerSchedule {
  double s = 0.0;
  double delta_gap = 0.0;  // completeness-soundness gap of the inner protocol
  double gamma = 0.0;
  double delta = 0.0;
  double threshold_far = 0.0;    // p bound for the very mixed case
  double threshold_mixed = 0.0;  // p bound for gamma < eps < 1/3
  double p = 0.0;
  double gap_far = 0.0;
  double gap_mixed = 0.0;
  double gap_close = 0.0;
  bool ok = false;
};
// Uses f(x) = 2x.
MixerSchedule mixer_schedule(double s, double delta_gap);

// Detector bound on product states whose best basis overlap is at most 1 - eps.
LemmaReport comp_basis_check(const CVec& mu, const CVec& nu, int k);

}  // namespace qsep

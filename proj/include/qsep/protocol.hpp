#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/state_io.hpp"

namespace qsep {

struct CspInstance {
  int R = 0;
  int kappa = 0;
  std::vector<std::vector<int>> sat;

  static CspInstance make(int R, int kappa, std::vector<std::vector<int>> sat);
  bool satisfies(int j, int a) const;
  // Fraction of constraints satisfied by a full assignment.
  double value(const std::vector<int>& assignment) const;
  double best_value() const;  // brute force, small R only
};

CspInstance csp_from_json(const JsonDoc& doc);
json csp_to_json(const CspInstance& csp);

// Registers v, c, w, d with dims (R, kappa, R, kappa) and roles A, B, B, C.
RegisterLayout protocol_layout(int R, int kappa);

struct ProtocolState {
  int R = 0;
  int kappa = 0;
  CVec amps;

  static ProtocolState make(int R, int kappa, CVec amps);
  int index(int v, int c, int w, int d) const { return ((v * kappa + c) * R + w) * kappa + d; }
  cplx a(int v, int c, int w, int d) const { return amps(index(v, c, w, d)); }
  RegisterLayout layout() const { return protocol_layout(R, kappa); }
  // Tr_A as a (kappa*R) x kappa bipartite state.
  CMat reduced_bc() const;
};

// sum_v alpha_v |v>|c_v, v>|c_v>; alpha defaults to uniform (rigid).
ProtocolState quasirigid_state(int R, int kappa, const std::vector<int>& colors,
                               const CVec& alpha = CVec());
ProtocolState protocol_state_from_json(const JsonDoc& doc, int R, int kappa);

double matchcheck_prob(const ProtocolState& psi);
ProtocolState apply_register_cnots(const ProtocolState& psi);
// Amplitude-level permutation (v,c,w,d) -> (v,c,w-v,d-c) mod dims; valid for any dims.
ProtocolState apply_register_shifts(const ProtocolState& psi);
CVec plus_prime(int R, int kappa);
double density_prob(const ProtocolState& psi);
double constraint_prob(const ProtocolState& psi, const CspInstance& csp);

struct ProtocolSchedule {
  int kappa = 2;
  double c_yes = 0.0;
  double xi = 0.0;
  double nu_low = 0.0;
  double nu_high = 0.0;
  double Z = 0.0;
  double p1 = 0.0;  // Density
  double p2 = 0.0;  // MatchCheck
  double p3 = 0.0;  // ConstraintCheck
  double p_yes = 0.0;
  double gap = 0.0;
};

struct TestOutcome {
  double w_D = 0.0;
  double w_M = 0.0;
  double w_C = 0.0;
  double accept = 0.0;
};

// w_C is C_YES times the constraint pass rate.
TestOutcome protocol_accept_prob(const ProtocolState& psi, const ProtocolSchedule& sched,
                                 const CspInstance& csp);
json outcome_to_json(const TestOutcome& t);

double swap_test_prob(const CMat& rho1, const CMat& rho2);
double two_proof_mixer(const CMat& rho1, const CMat& rho2, double p,
                       const std::function<double(const CMat&)>& verifier_prob);

double comp_basis_detector_prob(const CVec& mu, const CVec& nu);
// Gap 2x(1-x) with x = min(eps, sqrt(1-eps), sqrt((1-eps)/2^k)) as literally stated.
double comp_basis_literal_gap(double eps, int k);
// Acceptance bound that follows from the Cauchy-Schwarz argument.
double comp_basis_no_bound(double eps, int k);

}  // namespace qsep

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qsep/bloch.hpp"
#include "qsep/septest.hpp"

namespace qsep {

enum class Answer { Yes, No };
std::string to_string(Answer a);

// K lies inside {x : a.x <= b}.
struct Halfspace {
  RVec a;
  double b = 0.0;
};

struct MembershipResult {
  Answer answer = Answer::No;
  std::optional<Halfspace> cut;
  std::string reason;
};

struct ConvexBodyOracle {
  std::string name;
  int dim = 0;
  double outer_radius = 0.0;
  double inner_radius = 0.0;
  RVec center;
  std::function<MembershipResult(const RVec&, double)> query;
};

// Qubit-only layout with A, B and C registers.
RegisterLayout qubit_layout(const std::vector<int>& dims);
int total_qubits(const RegisterLayout& layout);

MembershipResult wmem_k1(const RVec& y, double beta, int M);
MembershipResult wmem_k2(const RVec& y, double zeta, const RegisterLayout& layout, int max_level = 2);
MembershipResult wmem_intersection(const RVec& y, double beta, const RegisterLayout& layout);
double intersection_slack(double beta, const RegisterLayout& layout);

ConvexBodyOracle k1_body(const RegisterLayout& layout);
ConvexBodyOracle k2_body(const RegisterLayout& layout);
ConvexBodyOracle wis_body(const RegisterLayout& layout);

struct WvalInstance {
  RegisterLayout layout;
  RVec c;
  double gamma = 0.0;
  double eps = 0.0;
  double slack = 0.0;       // onward WMEM slack eps / 4^{p+1}
  double d_norm = 1.0;
  double trace_term = 0.0;  // Tr[V] / 2^p
  ConvexBodyOracle body;

  double probability(double value) const { return trace_term + 0.5 * d_norm * value; }
};

WvalInstance build_wval_from_verifier(const CMat& V, const RegisterLayout& layout, double delta,
                                      double soundness);
WvalInstance make_wval_instance(const RegisterLayout& layout, RVec c, double gamma, double eps);

enum class SolveStatus { Certified, BudgetExceeded };

struct WvalOptions {
  int max_iterations = 200000;
  int resymmetrize_every = 50;
};

struct WvalResult {
  Answer verdict = Answer::No;
  SolveStatus status = SolveStatus::Certified;
  double value = -1.0;  // best certified c.x, -inf if none
  double upper = 0.0;
  int iterations = 0;
  long oracle_calls = 0;
  bool found_feasible = false;
  RVec best_point;
  std::string stop_reason;
};

WvalResult wval_solve(const WvalInstance& inst, const WvalOptions& opt = {});

json wval_result_to_json(const WvalInstance& inst, const WvalResult& r);

}  // namespace qsep

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsep/oracles.hpp"
#include "qsep/sampling.hpp"

using namespace qsep;

namespace {

const RegisterLayout kL = qubit_layout({2, 2, 2});

WvalInstance ball_instance(int d, double gamma, double eps, std::uint64_t seed) {
  Rng rng = stream_rng(seed, 0);
  std::normal_distribution<double> g;
  WvalInstance inst;
  inst.c = RVec(d);
  for (int i = 0; i < d; ++i) inst.c(i) = g(rng);
  inst.c.normalize();
  inst.gamma = gamma;
  inst.eps = eps;
  inst.slack = eps / 4;
  inst.body.name = "ball";
  inst.body.dim = d;
  inst.body.outer_radius = 1.0;
  inst.body.inner_radius = 1.0;
  inst.body.center = RVec::Zero(d);
  inst.body.query = [](const RVec& y, double) {
    MembershipResult m;
    if (y.norm() <= 1.0) {
      m.answer = Answer::Yes;
    } else {
      m.cut = Halfspace{y / y.norm(), 1.0};
    }
    return m;
  };
  return inst;
}

// Points of the body: states whose B:C reduction is separable.
std::vector<RVec> body_points(int n, std::uint64_t seed) {
  Rng rng = stream_rng(seed, 0);
  std::vector<RVec> pts;
  for (int i = 0; i < n; ++i) {
    CMat rho;
    if (i % 2 == 0) {
      const CVec v = comp_basis_purification(2, 2, 2, rng);
      rho = v * v.adjoint();
    } else {
      SampleSpec spec{StateKind::SeparableMixture, RegisterLayout::tripartite(2, 2, 2), 3};
      rho = sample_state(spec, rng).matrix();
    }
    pts.push_back(encode(rho).coords);
  }
  return pts;
}

RVec random_direction(int d, Rng& rng) {
  std::normal_distribution<double> g;
  RVec x(d);
  for (int i = 0; i < d; ++i) x(i) = g(rng);
  return x / x.norm();
}

CMat random_verifier(Rng& rng) {
  const CMat G = ginibre_state(8, rng);
  const Eigs e = hermitian_eigs(G);
  const double hi = e.values(0), lo = e.values(7);
  RVec w = (e.values.array() - lo) / (hi - lo);
  return e.vectors * w.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace

TEST_CASE("qubit layout") {
  CHECK(total_qubits(kL) == 3);
  CHECK(qubit_layout({2, 4, 2}).total_dim() == 16);
  CHECK_THROWS_AS(qubit_layout({3, 2, 2}), Error);
}

TEST_CASE("wmem_k1 on states and non-states") {
  Rng rng = stream_rng(41, 0);
  for (int i = 0; i < 30; ++i) {
    const CMat rho = ginibre_state(8, rng);
    CHECK(wmem_k1(encode(rho).coords, 1e-3, 8).answer == Answer::Yes);
  }
  const std::vector<RVec> pts = body_points(40, 43);
  for (int i = 0; i < 30; ++i) {
    const RVec y = random_direction(63, rng) * 2.0;
    const MembershipResult m = wmem_k1(y, 1e-3, 8);
    REQUIRE(m.answer == Answer::No);
    REQUIRE(m.cut.has_value());
    CHECK(m.cut->a.dot(y) > m.cut->b);
    for (const RVec& x : pts) CHECK(m.cut->a.dot(x) <= m.cut->b + 1e-9);
  }
}

TEST_CASE("wmem_k2 rejects entangled reductions with a valid cut") {
  CVec bell = CVec::Zero(8);
  // |0>_A (|00> + |11>)_BC / sqrt2
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const RVec y = encode(CMat(bell * bell.adjoint())).coords;
  const MembershipResult m = wmem_k2(y, 1e-3, kL);
  REQUIRE(m.answer == Answer::No);
  REQUIRE(m.cut.has_value());
  CHECK(m.cut->a.dot(y) > m.cut->b);
  for (const RVec& x : body_points(60, 44)) CHECK(m.cut->a.dot(x) <= m.cut->b + 1e-9);
}

TEST_CASE("body points are accepted by the intersection oracle") {
  for (const RVec& x : body_points(30, 45)) CHECK(wmem_intersection(x, 1e-3, kL).answer == Answer::Yes);
}

TEST_CASE("intersection YES implies both sub-oracles YES") {
  Rng rng = stream_rng(41, 1);
  const double beta = 1e-3;
  const double zeta = intersection_slack(beta, kL);
  int yes = 0;
  for (int i = 0; i < 200; ++i) {
    // mix body points, noisy states and points just outside
    RVec y = encode(ginibre_state(8, rng, 1 + i % 8)).coords;
    y *= std::uniform_real_distribution<double>(0.5, 1.3)(rng);
    const MembershipResult m = wmem_intersection(y, beta, kL);
    if (m.answer != Answer::Yes) {
      if (m.cut) CHECK(m.cut->a.dot(y) > m.cut->b - 1e-12);
      continue;
    }
    ++yes;
    CHECK(wmem_k1(y, zeta, 8).answer == Answer::Yes);
    CHECK(wmem_k2(y, zeta, kL).answer == Answer::Yes);
  }
  CHECK(yes > 0);
}

TEST_CASE("wval on the unit ball") {
  const WvalInstance yes = ball_instance(5, 0.5, 0.1, 1);
  const WvalResult a = wval_solve(yes);
  CHECK(a.verdict == Answer::Yes);
  CHECK(a.value >= 0.5 + 0.1 - 1e-12);
  const WvalInstance no = ball_instance(5, 1.2, 0.1, 2);
  const WvalResult b = wval_solve(no);
  CHECK(b.verdict == Answer::No);
  CHECK(b.value <= 1.0 + 1e-12);
  CHECK(b.upper >= 1.0 - 0.1);
}

TEST_CASE("wval certifies a separable pure optimum") {
  // |+>_A |0>_B |1>_C
  CVec plus(2), z0(2), z1(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  z0 << 1, 0;
  z1 << 0, 1;
  const CVec psi = kron(kron(plus, z0), z1);
  const CMat V = psi * psi.adjoint();
  const BlochVector d = encode(V);
  const double gamma = (0.9 - 1.0 / 8) / (0.5 * d.coords.norm());
  const WvalInstance inst = make_wval_instance(kL, d.coords, gamma, 0.02);
  const WvalResult r = wval_solve(inst);
  CHECK(r.status == SolveStatus::Certified);
  CHECK(r.verdict == Answer::Yes);
  CHECK(1.0 / 8 + 0.5 * d.coords.norm() * r.value >= 0.9);
  CHECK(1.0 / 8 + 0.5 * d.coords.norm() * r.value <= 1.0 + 0.02 * d.coords.norm());
}

TEST_CASE("wval budget exhaustion is distinct from NO") {
  Rng rng = stream_rng(41, 2);
  const WvalInstance inst = build_wval_from_verifier(random_verifier(rng), kL, 0.1, 0.4);
  WvalOptions opt;
  opt.max_iterations = 5;
  const WvalResult r = wval_solve(inst, opt);
  CHECK(r.status == SolveStatus::BudgetExceeded);
  CHECK(wval_result_to_json(inst, r)["verdict"] == "BUDGET_EXCEEDED");
}

TEST_CASE("verifier validation") {
  CHECK_THROWS_AS(build_wval_from_verifier(CMat::Identity(8, 8) * 0.5, kL, 0.1, 0.4), Error);
  CHECK_THROWS_AS(build_wval_from_verifier(CMat::Identity(8, 8) * 2.0, kL, 0.1, 0.4), Error);
  CHECK_THROWS_AS(build_wval_from_verifier(CMat::Identity(4, 4), kL, 0.1, 0.4), Error);
}

TEST_CASE("probability map matches direct trace") {
  Rng rng = stream_rng(41, 3);
  for (int i = 0; i < 20; ++i) {
    const CMat V = random_verifier(rng);
    const WvalInstance inst = build_wval_from_verifier(V, kL, 0.1, 0.4);
    const CMat rho = ginibre_state(8, rng);
    const double value = inst.c.dot(encode(rho).coords);
    CHECK(std::abs(inst.probability(value) - (V * rho).trace().real()) < 1e-9);
  }
}

TEST_CASE("wval never beats the PPT relaxation by more than 2 eps") {
  Rng rng = stream_rng(41, 4);
  for (int i = 0; i < 2; ++i) {
    const CMat V = random_verifier(rng);
    const BlochVector d = encode(V);
    const WvalInstance inst = make_wval_instance(kL, d.coords, 0.0, 0.02);
    const WvalResult r = wval_solve(inst);
    REQUIRE(r.found_feasible);
    const double brute = testing::brute_wis_max(V).value;
    const double brute_value = (brute - V.trace().real() / 8) / (0.5 * d.coords.norm());
    CHECK(r.value <= brute_value + 2 * 0.02);
    CHECK(r.value >= brute_value - 2 * 0.02);
  }
}

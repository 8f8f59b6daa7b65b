#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsep/lemmas.hpp"
#include "qsep/suite.hpp"

using namespace qsep;

TEST_CASE("schedule satisfies its inequalities exactly") {
  for (int kappa : {2, 3, 4, 8})
    for (double c : {0.6, 0.9, 0.99})
      for (double xi : {0.05, 0.1, 0.3}) {
        if (xi >= c) continue;
        const ProtocolSchedule s = schedule_compute(kappa, c, xi);
        CHECK(schedule_violations(s).empty());
        CHECK((s.p1 + s.p2) + s.p3 == 1.0);
        CHECK(s.nu_high <= s.nu_low / kappa);
        CHECK(schedule_third_lhs(kappa, s.nu_low) <= xi / 2);
        CHECK(s.gap > 0);
        CHECK(s.p_yes == doctest::Approx(s.p1 / kappa + s.p2 + s.p3 * c).epsilon(1e-15));
      }
}

TEST_CASE("schedule rejects infeasible parameters") {
  CHECK_THROWS_AS(schedule_compute(1, 0.9, 0.1), Error);
  CHECK_THROWS_AS(schedule_compute(2, 0.9, 0.0), Error);
  CHECK_THROWS_AS(schedule_compute(2, 1.0, 0.1), Error);
  CHECK_THROWS_AS(schedule_compute(2, 0.1, 0.2), Error);
}

TEST_CASE("schedule json roundtrip") {
  const ProtocolSchedule s = schedule_compute(2, 0.9, 0.1);
  const ProtocolSchedule t = schedule_from_json(parse_json(dump_json(schedule_to_json(s)), "mem"));
  CHECK(t.p1 == s.p1);
  CHECK(t.p2 == s.p2);
  CHECK(t.p3 == s.p3);
  CHECK(t.nu_low == s.nu_low);
}

TEST_CASE("rigid proofs sit on the rigidity boundaries") {
  const ProtocolState psi = quasirigid_state(4, 3, {0, 2, 1, 1});
  CHECK(argmax_colors(psi) == std::vector<int>{0, 2, 1, 1});
  const LemmaReport q = quasirigid_overlap_check(psi);
  CHECK(q.pass);
  CHECK(std::abs(q.margin) < 1e-12);
  CHECK(rigidity_bound_check(psi).pass);
  const LemmaReport quad = quadratic_tradeoff_check(psi);
  CHECK(quad.applicable);
  CHECK(quad.pass);
}

TEST_CASE("rigidity lemmas hold on every family") {
  Rng rng = stream_rng(61, 0);
  for (int i = 0; i < 120; ++i) {
    const int kappa = 2 + i % 3, R = 1 << (1 + (i / 3) % 3);
    const ProtocolState psi = adversarial_proof(kAllFamilies[static_cast<size_t>(i) % 6], R, kappa, rng);
    CHECK(quasirigid_overlap_check(psi).pass);
    CHECK(rigidity_bound_check(psi).pass);
    CHECK(quadratic_tradeoff_check(psi).pass);
  }
}

TEST_CASE("rigidity checks refuse entangled reductions") {
  // |0>_A (|c=0,w=0>|d=0> + |c=1,w=0>|d=1>)/sqrt2 is entangled between B and C
  CVec amps = CVec::Zero(2 * 2 * 2 * 2);
  ProtocolState psi{2, 2, amps};
  psi.amps(psi.index(0, 0, 0, 0)) = 1 / std::sqrt(2.0);
  psi.amps(psi.index(0, 1, 0, 1)) = 1 / std::sqrt(2.0);
  CHECK_FALSE(reduced_bc_is_ppt(psi));
  CHECK_THROWS_AS(quasirigid_overlap_check(psi), Error);
  CHECK_NOTHROW(quasirigid_overlap_check(psi, false));
}

TEST_CASE("soundness audit on the toy instance") {
  const ProtocolSchedule s = schedule_compute(2, 0.9, 0.1);
  const CspInstance no = toy_no_csp();
  const auto proofs = adversarial_family(no.R, no.kappa, 120, 5);
  const AuditReport a = soundness_case_audit(s, no, proofs, toy_yes_csp());
  CHECK(a.proofs == 120);
  CHECK(a.violations == 0);
  CHECK(a.honest_error <= 1e-12);
  CHECK(a.max_accept <= s.p_yes - s.gap + 1e-9);
}

TEST_CASE("off-diagonal bounds on separable mixtures") {
  Rng rng = stream_rng(61, 1);
  for (int i = 0; i < 50; ++i) {
    SampleSpec spec{StateKind::SeparableMixture, RegisterLayout::bipartite(3, 2), 1 + i % 4};
    const CMat rho = sample_state(spec, rng).matrix();
    for (int w = 0; w < 3; ++w)
      for (int y = 0; y < 3; ++y) CHECK(offdiagonal_check(rho, 3, 2, w, 0, y, 1).pass);
  }
}

TEST_CASE("swap bounds") {
  Rng rng = stream_rng(61, 2);
  int applicable = 0;
  for (int i = 0; i < 200; ++i) {
    const CVec v = haar_vector(3, rng);
    const double t = std::uniform_real_distribution<double>(0.0, 0.4)(rng);
    const CMat a = (1 - t) * v * v.adjoint() + t * ginibre_state(3, rng);
    const CMat b = (1 - t) * v * v.adjoint() + t * ginibre_state(3, rng);
    const LemmaReport m = mixed_swap_check(a, b);
    if (m.applicable) {
      ++applicable;
      CHECK(m.pass);
    }
    CHECK(swap_overlap_check(a, b).pass);
  }
  CHECK(applicable > 50);
}

TEST_CASE("continuity witnesses") {
  CHECK(continuity_f(ContinuitySet::IsStar, 0.25) == doctest::Approx(0.5));
  CHECK(continuity_f(ContinuitySet::Nonneg, 0.25) == doctest::Approx(0.25));
  CHECK(continuity_f(ContinuitySet::Proper, 1.0 / 256) == doctest::Approx(4.0 * std::pow(1.0 / 256, 0.25)));
  Rng rng = stream_rng(61, 3);
  for (ContinuitySet s : {ContinuitySet::IsStar, ContinuitySet::Nonneg, ContinuitySet::Proper})
    for (int i = 0; i < 20; ++i) {
      const RegisterLayout l = RegisterLayout::tripartite(4, 2, 2);
      CHECK(continuity_check(s, sample_continuity_state(s, rng, l), l).pass);
    }
}

TEST_CASE("uhlmann purification reproduces the reduced state") {
  Rng rng = stream_rng(61, 4);
  const CMat sigma = ginibre_state(4, rng);
  const CVec psi = haar_vector(16, rng);
  const CVec p = uhlmann_purification(sigma, psi, 4);
  const CMat red = testing::loop_partial_trace(p * p.adjoint(), {4, 4}, 0);
  CHECK((red - sigma).norm() < 1e-10);
  // no other purification has larger overlap: compare against random isometries
  const double best = std::abs(p.dot(psi));
  for (int i = 0; i < 20; ++i) {
    const CMat U = haar_unitary(4, rng);
    const CMat s = psd_sqrt(sigma.transpose());
    CVec q(16);
    const CMat X = U * s;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) q(a * 4 + b) = X(a, b);
    CHECK(std::abs(q.dot(psi)) <= best + 1e-10);
  }
}

TEST_CASE("pigeonhole and constants") {
  Rng rng = stream_rng(61, 5);
  const RegisterLayout l = RegisterLayout::tripartite(2, 2, 3);
  for (int i = 0; i < 30; ++i) CHECK(pigeonhole_overlap(haar_vector(12, rng), l).pass);
  for (double ell : {0.01, 0.5, 1.0}) CHECK(qma_in_qma_constants(ell).holds);
  const MixerSchedule m = mixer_schedule(0.3, 0.2);
  CHECK(m.ok);
  CHECK(m.p > 0);
  CHECK(m.p < 1);
}

TEST_CASE("suite reports are deterministic and independent of threads") {
  SuiteOptions a;
  a.trials = 20;
  a.seed = 99;
  SuiteOptions b = a;
  b.jobs = 4;
  const std::string ra = dump_json(run_suites({"all"}, a));
  CHECK(ra == dump_json(run_suites({"all"}, a)));
  CHECK(ra == dump_json(run_suites({"all"}, b)));
  a.seed = 100;
  CHECK(ra != dump_json(run_suites({"all"}, a)));
  CHECK_THROWS_AS(run_suites({"nope"}, a), Error);
}

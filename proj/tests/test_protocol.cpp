#include <doctest.h>

#include <cmath>

#include "qsep/lemmas.hpp"
#include "qsep/protocol.hpp"

using namespace qsep;

namespace {

ProtocolState random_state(int R, int kappa, Rng& rng) {
  return ProtocolState::make(R, kappa, haar_vector(R * kappa * R * kappa, rng));
}

const CspInstance kNo = CspInstance::make(4, 2, {{0}, {1}, {0, 1}, {}});
const CspInstance kYes = CspInstance::make(4, 2, {{0}, {1}, {0, 1}, {1}});

}  // namespace

TEST_CASE("csp values") {
  CHECK(kYes.best_value() == 1.0);
  CHECK(kNo.best_value() == 0.75);
  CHECK(kYes.value({0, 1, 0, 1}) == 1.0);
  CHECK_THROWS_AS(CspInstance::make(3, 2, {{0}, {1}, {0}}), Error);
  CHECK_THROWS_AS(CspInstance::make(2, 2, {{0}, {2}}), Error);
  const CspInstance back = csp_from_json(parse_json(dump_json(csp_to_json(kNo)), "mem"));
  CHECK(back.sat == kNo.sat);
}

TEST_CASE("malformed csp json reports a line") {
  const std::string text = "{\n  \"R\": 4,\n  \"kappa\": 2,\n  \"sat\": [[0], [5], [0], [1]]\n}\n";
  try {
    csp_from_json(parse_json(text, "csp.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("csp.json:4") != std::string::npos);
  }
}

TEST_CASE("matchcheck equals the zero-register probability after CNOTs") {
  Rng rng = stream_rng(51, 0);
  for (int i = 0; i < 200; ++i) {
    const int R = 1 << (1 + i % 3), kappa = 1 << (1 + (i / 3) % 2);
    const ProtocolState psi = random_state(R, kappa, rng);
    const ProtocolState out = apply_register_cnots(psi);
    double p = 0.0;
    for (int v = 0; v < R; ++v)
      for (int c = 0; c < kappa; ++c) p += std::norm(out.a(v, c, 0, 0));
    CHECK(std::abs(p - matchcheck_prob(psi)) < 1e-10);
    CHECK(std::abs(out.amps.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("register shifts agree with CNOTs on matched mass for any alphabet") {
  Rng rng = stream_rng(51, 1);
  const ProtocolState psi = random_state(2, 3, rng);
  CHECK_THROWS_AS(apply_register_cnots(psi), Error);
  const ProtocolState out = apply_register_shifts(psi);
  double p = 0.0;
  for (int v = 0; v < 2; ++v)
    for (int c = 0; c < 3; ++c) p += std::norm(out.a(v, c, 0, 0));
  CHECK(std::abs(p - matchcheck_prob(psi)) < 1e-12);
}

TEST_CASE("rigid states pass matchcheck and hit density 1/kappa") {
  for (int kappa : {2, 3, 4}) {
    const ProtocolState psi = quasirigid_state(4, kappa, {0, 1, kappa - 1, 0});
    CHECK(matchcheck_prob(psi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(density_prob(psi) == doctest::Approx(1.0 / kappa).epsilon(1e-12));
  }
}

TEST_CASE("density is below 1/kappa on Tr_A-separable families") {
  Rng rng = stream_rng(51, 2);
  for (int i = 0; i < 60; ++i) {
    const ProofFamily f = kAllFamilies[static_cast<size_t>(i) % kAllFamilies.size()];
    const int kappa = 2 + i % 3;
    const ProtocolState psi = adversarial_proof(f, 4, kappa, rng);
    CHECK(density_prob(psi) <= 1.0 / kappa + 1e-12);
    CHECK(reduced_bc_is_ppt(psi));
  }
}

TEST_CASE("acceptance of honest and cheating rigid proofs") {
  const ProtocolSchedule s = schedule_compute(2, 0.9, 0.1);
  const ProtocolState honest = quasirigid_state(4, 2, {0, 1, 0, 1});
  const TestOutcome h = protocol_accept_prob(honest, s, kYes);
  CHECK(std::abs(h.accept - s.p_yes) < 1e-12);
  CHECK(h.w_C == doctest::Approx(0.9));
  // best assignment for the unsatisfiable instance still fails one constraint
  const ProtocolState cheat = quasirigid_state(4, 2, {0, 1, 0, 0});
  const TestOutcome c = protocol_accept_prob(cheat, s, kNo);
  CHECK(c.accept <= s.p_yes - s.p3 * s.xi + 1e-15);
}

TEST_CASE("low density costs at least nu_low / 2Z") {
  const ProtocolSchedule s = schedule_compute(2, 0.9, 0.1);
  Rng rng = stream_rng(51, 3);
  int seen = 0;
  for (int i = 0; i < 300; ++i) {
    const ProtocolState psi = adversarial_proof(kAllFamilies[static_cast<size_t>(i) % 6], 4, 2, rng);
    const TestOutcome t = protocol_accept_prob(psi, s, kNo);
    if (t.w_D - 0.5 > -s.nu_low) continue;
    ++seen;
    CHECK(t.accept <= s.p_yes - s.nu_low / (2 * s.Z) + 1e-12);
  }
  CHECK(seen > 0);
}

TEST_CASE("swap test") {
  CMat z0 = CMat::Zero(2, 2), z1 = CMat::Zero(2, 2);
  z0(0, 0) = 1;
  z1(1, 1) = 1;
  CHECK(swap_test_prob(z0, z0) == doctest::Approx(1.0));
  CHECK(swap_test_prob(z0, z1) == doctest::Approx(0.5));
  CHECK(swap_test_prob(CMat::Identity(2, 2) / 2.0, CMat::Identity(2, 2) / 2.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(swap_test_prob(z0, CMat::Identity(3, 3) / 3.0), Error);
}

TEST_CASE("two proof mixer") {
  Rng rng = stream_rng(51, 4);
  const CMat a = ginibre_state(3, rng), b = ginibre_state(3, rng);
  auto f = [](const CMat& r) { return r(0, 0).real(); };
  CHECK(two_proof_mixer(a, b, 1.0, f) == doctest::Approx(swap_test_prob(a, b)));
  CHECK(two_proof_mixer(a, a, 0.0, f) == doctest::Approx(f(a)));
  // pure product proof accepted with probability s + Delta by the inner verifier
  const CVec v = haar_vector(3, rng);
  const CMat pv = v * v.adjoint();
  const double p = 0.3;
  CHECK(two_proof_mixer(pv, pv, p, f) == doctest::Approx(p + (1 - p) * f(pv)));
  CHECK_THROWS_AS(two_proof_mixer(a, b, 1.5, f), Error);
}

TEST_CASE("computational basis detector") {
  CVec e0 = CVec::Zero(4), e1 = CVec::Zero(4), u = CVec::Constant(4, 0.5);
  e0(0) = 1;
  e1(1) = 1;
  CHECK(comp_basis_detector_prob(e0, e0) == doctest::Approx(1.0));
  CHECK(comp_basis_detector_prob(e0, e1) == doctest::Approx(0.0));
  CHECK(comp_basis_detector_prob(u, u) == doctest::Approx(0.25));
}

TEST_CASE("detector bound on adversarial grids") {
  for (int k = 1; k <= 3; ++k) {
    const int dim = 1 << k;
    for (int a = 0; a <= 40; ++a)
      for (int b = 0; b <= 40; ++b) {
        // weight on |0> for each state; the rest is spread uniformly
        const double wa = a / 40.0, wb = b / 40.0;
        CVec mu = CVec::Constant(dim, std::sqrt((1 - wa) / dim));
        CVec nu = CVec::Constant(dim, std::sqrt((1 - wb) / dim));
        mu(0) += std::sqrt(wa);
        nu(0) += std::sqrt(wb);
        mu.normalize();
        nu.normalize();
        const LemmaReport r = comp_basis_check(mu, nu, k);
        if (r.applicable) CHECK(r.pass);
      }
  }
}

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsep/bloch.hpp"
#include "qsep/sampling.hpp"

using namespace qsep;

TEST_CASE("generators are orthogonal with trace 2 overlaps") {
  for (int M : {2, 4, 8}) {
    const int n = M * M - 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx t = (generator(i, M) * generator(j, M)).trace();
        CHECK(std::abs(t - cplx(i == j ? 2.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("single qubit coordinates") {
  CMat zero = CMat::Zero(2, 2);
  zero(0, 0) = 1.0;
  const BlochVector r = encode(zero);
  // |0><0| = I/2 + Z/2 and the generators are the Pauli matrices
  CHECK(r.coords.norm() == doctest::Approx(1.0));
  CHECK(pauli_word(2, 2) == "Z");
  CHECK(std::abs(r.coords(2) - 1.0) < 1e-12);
}

TEST_CASE("roundtrip and norm identity on random states") {
  Rng rng = stream_rng(21, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int M = 1 << (1 + trial % 3);
    const CMat rho = ginibre_state(M, rng, 1 + trial % M);
    const BlochVector r = encode(rho);
    CHECK((decode(r) - rho).norm() < 1e-10);
    const double purity = (rho * rho).trace().real();
    CHECK(std::abs(r.coords.squaredNorm() - 2.0 * (purity - 1.0 / M)) < 1e-9);
  }
}

TEST_CASE("affine trace relation") {
  Rng rng = stream_rng(21, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int M = 1 << (1 + trial % 3);
    const CMat rho = ginibre_state(M, rng);
    const CMat V = ginibre_state(M, rng) * M * 0.5;
    const double direct = (V * rho).trace().real();
    const double via = V.trace().real() / M + 0.5 * encode(V).coords.dot(encode(rho).coords);
    CHECK(std::abs(direct - via) < 1e-9);
  }
}

TEST_CASE("euclidean distance is dominated by trace distance") {
  Rng rng = stream_rng(21, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const int M = 1 << (1 + trial % 3);
    const CMat a = ginibre_state(M, rng), b = ginibre_state(M, rng, 1);
    CHECK((encode(a).coords - encode(b).coords).norm() <= std::sqrt(2.0) * trace_distance(a, b) + 1e-9);
  }
}

TEST_CASE("subsystem projection matches encoding the reduced state") {
  Rng rng = stream_rng(21, 2);
  const RegisterLayout l = RegisterLayout::tripartite(2, 2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat rho = ginibre_state(8, rng);
    const BlochVector full = encode(rho);
    const BlochVector bc = encode(testing::loop_partial_trace(rho, {2, 2, 2}, 0));
    const BlochVector proj = subsystem_project(full, l);
    REQUIRE(proj.size() == bc.size());
    CHECK((proj.coords - bc.coords).norm() < 1e-10);
  }
}

TEST_CASE("psd recursion agrees with eigenvalues") {
  Rng rng = stream_rng(21, 3);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int M = 1 << (1 + trial % 3);
    CMat h = ginibre_state(M, rng);
    const double shift = std::uniform_real_distribution<double>(-0.5, 0.5)(rng) / M;
    h = (h + shift * CMat::Identity(M, M)) / (1.0 + shift * M);
    const double lmin = testing::eig_min(h);
    if (std::abs(lmin) <= 1e-8) continue;
    ++checked;
    CHECK(psd_check_recursion(h).psd == (lmin > 0));
    CHECK(psd_check_recursion(encode(h)).psd == (lmin > 0));
  }
  CHECK(checked > 150);
}

TEST_CASE("gurvits ball decodes to Tr_A-PPT states") {
  const RegisterLayout l = RegisterLayout::tripartite(2, 2, 2);
  const double r = gurvits_ball_radius(l);
  CHECK(r > 0);
  Rng rng = stream_rng(21, 4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    RVec x(63);
    for (int i = 0; i < 63; ++i) x(i) = g(rng);
    x *= r / x.norm();
    const CMat rho = decode(BlochVector::make(8, x));
    CHECK(testing::eig_min(rho) >= -1e-12);
    const CMat bc = testing::loop_partial_trace(rho, {2, 2, 2}, 0);
    CHECK(testing::eig_min(testing::loop_partial_transpose_2(bc, 2, 2)) >= -1e-12);
  }
}

TEST_CASE("json roundtrip") {
  Rng rng = stream_rng(21, 5);
  const BlochVector r = encode(ginibre_state(4, rng));
  const BlochVector back = bloch_from_json(parse_json(dump_json(bloch_to_json(r)), "mem"));
  CHECK(back.M == 4);
  CHECK((back.coords - r.coords).norm() == 0.0);
}

TEST_CASE("non power of two dimension is rejected") {
  CHECK_THROWS_AS(encode(CMat::Identity(3, 3) / 3.0), Error);
}

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsep/linalg.hpp"

namespace qsep {

enum class StateKind {
  HaarPure,
  GinibreMixed,
  ProductPure,
  SeparableMixture,
  CompBasisPurification,
  Quasirigid,
};

StateKind state_kind_from_string(const std::string& s);
std::string to_string(StateKind k);

using Rng = std::mt19937_64;

// Independent stream for (master seed, trial index).
Rng stream_rng(std::uint64_t seed, std::uint64_t trial);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial);

CVec haar_vector(int dim, Rng& rng);
CMat haar_unitary(int dim, Rng& rng);
CMat ginibre_state(int dim, Rng& rng, int rank = -1);
RVec simplex_weights(int n, Rng& rng);

struct SampleSpec {
  StateKind kind = StateKind::HaarPure;
  RegisterLayout layout;
  int mixture_terms = 4;
};

// Pure kinds return their projector; the layout must keep roles grouped A, B, C.
std::vector<DensityMatrix> sample_states(const SampleSpec& spec, int count, std::uint64_t seed);
DensityMatrix sample_state(const SampleSpec& spec, Rng& rng);
PureState sample_pure(const SampleSpec& spec, Rng& rng);
bool is_pure_kind(StateKind k);

// sum_i a_i |i>_A |mu_i>_B |nu_i>_C with Haar mu_i, nu_i.
CVec comp_basis_purification(int dA, int dB, int dC, Rng& rng);

}  // namespace qsep

#include "qsep/sampling.hpp"

#include <cmath>

#include <Eigen/QR>

namespace qsep {

StateKind state_kind_from_string(const std::string& s) {
  if (s == "haar_pure") return StateKind::HaarPure;
  if (s == "ginibre_mixed") return StateKind::GinibreMixed;
  if (s == "product_pure") return StateKind::ProductPure;
  if (s == "separable_mixture") return StateKind::SeparableMixture;
  if (s == "comp_basis_purification") return StateKind::CompBasisPurification;
  if (s == "quasirigid") return StateKind::Quasirigid;
  fail(ErrorKind::InvalidInput, "unknown state kind '" + s + "'");
}

std::string to_string(StateKind k) {
  switch (k) {
    case StateKind::HaarPure: return "haar_pure";
    case StateKind::GinibreMixed: return "ginibre_mixed";
    case StateKind::ProductPure: return "product_pure";
    case StateKind::SeparableMixture: return "separable_mixture";
    case StateKind::CompBasisPurification: return "comp_basis_purification";
    case StateKind::Quasirigid: return "quasirigid";
  }
  return "?";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer over both words
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ (trial + 0x632be59bd9b4e019ULL));
}

Rng stream_rng(std::uint64_t seed, std::uint64_t trial) { return Rng(mix_seed(seed, trial)); }

CVec haar_vector(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

CMat haar_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

CMat ginibre_state(int dim, Rng& rng, int rank) {
  if (rank <= 0) rank = dim;
  std::normal_distribution<double> g(0.0, 1.0);
  CMat z(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = cplx(re, im);
    }
  CMat m = z * z.adjoint();
  m /= m.trace().real();
  return hermitize(m);
}

RVec simplex_weights(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  RVec w(n);
  for (int i = 0; i < n; ++i) w(i) = e(rng);
  return w / w.sum();
}

bool is_pure_kind(StateKind k) {
  return k == StateKind::HaarPure || k == StateKind::ProductPure ||
         k == StateKind::CompBasisPurification || k == StateKind::Quasirigid;
}

namespace {

void require_grouped(const RegisterLayout& l) {
  for (int i = 1; i < l.size(); ++i)
    require(static_cast<int>(l.roles[i - 1]) <= static_cast<int>(l.roles[i]),
            ErrorKind::InvalidInput, "sampler needs roles grouped in order A, B, C");
}

CVec product_vector(const RegisterLayout& l, Rng& rng) {
  CVec v = haar_vector(l.dims[0], rng);
  for (int i = 1; i < l.size(); ++i) v = kron(v, haar_vector(l.dims[i], rng));
  return v;
}

CVec quasirigid_vector(const RegisterLayout& l, Rng& rng) {
  require(l.size() == 4 && l.dims[0] == l.dims[2] && l.dims[1] == l.dims[3] &&
              l.roles[0] == Role::A && l.roles[1] == Role::B && l.roles[2] == Role::B &&
              l.roles[3] == Role::C,
          ErrorKind::InvalidInput, "quasirigid needs the (R, kappa, R, kappa) A,B,B,C layout");
  const int R = l.dims[0], K = l.dims[1];
  CVec alpha = haar_vector(R, rng);
  std::uniform_int_distribution<int> col(0, K - 1);
  CVec v = CVec::Zero(l.total_dim());
  for (int a = 0; a < R; ++a) {
    const int c = col(rng);
    v(((a * K + c) * R + a) * K + c) = alpha(a);
  }
  return v;
}

}  // namespace

CVec comp_basis_purification(int dA, int dB, int dC, Rng& rng) {
  CVec alpha = haar_vector(dA, rng);
  CVec out = CVec::Zero(static_cast<Eigen::Index>(dA) * dB * dC);
  for (int i = 0; i < dA; ++i) {
    CVec bc = kron(haar_vector(dB, rng), haar_vector(dC, rng));
    out.segment(static_cast<Eigen::Index>(i) * dB * dC, dB * dC) = alpha(i) * bc;
  }
  return out;
}

PureState sample_pure(const SampleSpec& spec, Rng& rng) {
  const auto& l = spec.layout;
  switch (spec.kind) {
    case StateKind::HaarPure:
      return PureState::make(haar_vector(l.total_dim(), rng), l);
    case StateKind::ProductPure:
      return PureState::make(product_vector(l, rng), l);
    case StateKind::CompBasisPurification: {
      require_grouped(l);
      require(l.has(Role::A) && l.has(Role::B) && l.has(Role::C), ErrorKind::InvalidInput,
              "comp_basis_purification needs A, B and C registers");
      require(l.dim_of(Role::A) * l.dim_of(Role::B) * l.dim_of(Role::C) == l.total_dim(),
              ErrorKind::InvalidInput, "comp_basis_purification admits no scratch register");
      return PureState::make(
          comp_basis_purification(l.dim_of(Role::A), l.dim_of(Role::B), l.dim_of(Role::C), rng), l);
    }
    case StateKind::Quasirigid:
      return PureState::make(quasirigid_vector(l, rng), l);
    default:
      fail(ErrorKind::InvalidInput, "state kind " + to_string(spec.kind) + " is not pure");
  }
}

DensityMatrix sample_state(const SampleSpec& spec, Rng& rng) {
  const auto& l = spec.layout;
  if (is_pure_kind(spec.kind)) return sample_pure(spec, rng).density();
  if (spec.kind == StateKind::GinibreMixed)
    return DensityMatrix::make(ginibre_state(l.total_dim(), rng), l);
  require(spec.mixture_terms >= 1, ErrorKind::InvalidInput, "mixture needs at least one term");
  RVec w = simplex_weights(spec.mixture_terms, rng);
  CMat m = CMat::Zero(l.total_dim(), l.total_dim());
  for (int t = 0; t < spec.mixture_terms; ++t) {
    CVec v = product_vector(l, rng);
    m += w(t) * v * v.adjoint();
  }
  return DensityMatrix::make(hermitize(m), l);
}

std::vector<DensityMatrix> sample_states(const SampleSpec& spec, int count, std::uint64_t seed) {
  require(count >= 0, ErrorKind::InvalidInput, "negative sample count");
  std::vector<DensityMatrix> out;
  out.reserve(count);
  for (int t = 0; t < count; ++t) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(t));
    out.push_back(sample_state(spec, rng));
  }
  return out;
}

}  // namespace qsep

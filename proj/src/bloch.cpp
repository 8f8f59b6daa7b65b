#include "qsep/bloch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace qsep {

namespace {

// P_w |i> = phase * |i ^ flip>
struct PauliAction {
  int flip = 0;
  int zmask = 0;  // qubits carrying Z or Y
  int ycount = 0;
};

PauliAction pauli_action(int word, int p) {
  PauliAction a;
  for (int q = 0; q < p; ++q) {
    const int letter = (word >> (2 * (p - 1 - q))) & 3;
    const int bit = 1 << (p - 1 - q);
    if (letter == 1 || letter == 2) a.flip |= bit;
    if (letter == 2 || letter == 3) a.zmask |= bit;
    if (letter == 2) ++a.ycount;
  }
  return a;
}

// <i ^ flip| P |i>
cplx pauli_phase(const PauliAction& a, int i) {
  // Y = iXZ
  static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  const int sign = std::popcount(static_cast<unsigned>(i & a.zmask)) & 1;
  cplx ph = ipow[a.ycount & 3];
  return sign ? -ph : ph;
}

}  // namespace

BlochVector BlochVector::make(int M, RVec coords) {
  qubit_count(M);
  require(coords.size() == static_cast<Eigen::Index>(M) * M - 1, ErrorKind::InvalidInput,
          "Bloch vector for M=" + std::to_string(M) + " needs " + std::to_string(M * M - 1) +
              " coordinates");
  return BlochVector{M, std::move(coords)};
}

int qubit_count(int M) {
  require(M >= 2 && M <= 4096 && (M & (M - 1)) == 0, ErrorKind::InvalidInput,
          "Bloch basis needs a power-of-two dimension, got " + std::to_string(M));
  return std::countr_zero(static_cast<unsigned>(M));
}

double generator_scale(int M) {
  const int p = qubit_count(M);
  return std::pow(2.0, 0.5 * (1.0 - p));
}

std::string pauli_word(int index, int M) {
  const int p = qubit_count(M);
  require(index >= 0 && index < M * M - 1, ErrorKind::InvalidInput, "generator index out of range");
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  const int w = index + 1;
  for (int q = 0; q < p; ++q) s.push_back(letters[(w >> (2 * (p - 1 - q))) & 3]);
  return s;
}

CMat generator(int index, int M) {
  const int p = qubit_count(M);
  require(index >= 0 && index < M * M - 1, ErrorKind::InvalidInput, "generator index out of range");
  const auto a = pauli_action(index + 1, p);
  const double s = generator_scale(M);
  CMat g = CMat::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    const cplx ph = pauli_phase(a, i);
    g(i ^ a.flip, i) = s * ph;
  }
  return g;
}

BlochVector encode(const CMat& rho) {
  require(rho.rows() == rho.cols(), ErrorKind::InvalidInput, "encode needs a square matrix");
  const int M = static_cast<int>(rho.rows());
  const int p = qubit_count(M);
  const double s = generator_scale(M);
  RVec r(static_cast<Eigen::Index>(M) * M - 1);
  for (int w = 1; w < M * M; ++w) {
    const auto a = pauli_action(w, p);
    cplx acc = 0;
    for (int i = 0; i < M; ++i) acc += rho(i, i ^ a.flip) * pauli_phase(a, i);
    r(w - 1) = s * acc.real();
  }
  return BlochVector{M, r};
}

BlochVector encode(const DensityMatrix& rho) { return encode(rho.matrix()); }

CMat decode(const BlochVector& r) {
  const int M = r.M;
  const int p = qubit_count(M);
  require(r.coords.size() == static_cast<Eigen::Index>(M) * M - 1, ErrorKind::InvalidInput,
          "Bloch vector has the wrong length");
  const double s = generator_scale(M);
  CMat rho = CMat::Identity(M, M) / static_cast<double>(M);
  const int n = static_cast<int>(r.coords.size());
  for (int w = 1; w <= n; ++w) {
    const double c = r.coords(w - 1);
    if (c == 0.0) continue;
    const auto a = pauli_action(w, p);
    for (int i = 0; i < M; ++i) rho(i ^ a.flip, i) += 0.5 * s * c * pauli_phase(a, i);
  }
  return rho;
}

std::vector<int> subsystem_indices(const RegisterLayout& layout, const std::vector<Role>& traced) {
  const int M = layout.total_dim();
  const int p = qubit_count(M);
  int traced_mask = 0;  // over qubit positions, first qubit is most significant
  int q = 0;
  for (int reg = 0; reg < layout.size(); ++reg) {
    const int nq = qubit_count(layout.dims[reg] < 2 ? 2 : layout.dims[reg]);
    require(layout.dims[reg] >= 2, ErrorKind::InvalidInput, "Bloch layouts need qubit registers");
    const bool t = std::find(traced.begin(), traced.end(), layout.roles[reg]) != traced.end();
    for (int k = 0; k < nq; ++k, ++q)
      if (t) traced_mask |= 1 << (p - 1 - q);
  }
  const int kept_q = p - std::popcount(static_cast<unsigned>(traced_mask));
  require(kept_q >= 1, ErrorKind::InvalidInput, "subsystem_project would trace everything");
  std::vector<int> idx((1u << (2 * kept_q)) - 1);
  for (int w = 0; w < (1 << (2 * p)); ++w) {
    int kw = 0;
    bool identity_on_traced = true;
    for (int qq = 0; qq < p; ++qq) {
      const int letter = (w >> (2 * (p - 1 - qq))) & 3;
      if (traced_mask & (1 << (p - 1 - qq))) {
        if (letter != 0) identity_on_traced = false;
      } else {
        kw = kw * 4 + letter;
      }
    }
    if (identity_on_traced && kw != 0) idx[kw - 1] = w - 1;
  }
  return idx;
}

BlochVector subsystem_project(const BlochVector& r, const RegisterLayout& layout,
                              const std::vector<Role>& traced) {
  require(layout.total_dim() == r.M, ErrorKind::InvalidInput,
          "subsystem_project: layout does not match the Bloch dimension");
  const auto idx = subsystem_indices(layout, traced);
  int dT = 1;
  for (Role t : traced) dT *= layout.dim_of(t);
  const double scale = std::sqrt(static_cast<double>(dT));
  RVec out(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = scale * r.coords(idx[i]);
  return BlochVector{r.M / dT, out};
}

PsdRecursion psd_check_recursion(const CMat& P, double tol) {
  require(P.rows() == P.cols() && P.rows() >= 1, ErrorKind::InvalidInput,
          "psd_check_recursion needs a square matrix");
  require(hermiticity_defect(P) <= kEigHermitianTol, ErrorKind::NotHermitian,
          "psd_check_recursion needs a Hermitian matrix");
  require(tol >= 0, ErrorKind::InvalidInput, "tolerance must be non-negative");
  const int M = static_cast<int>(P.rows());
  const CMat Q = hermitize(P) + tol * CMat::Identity(M, M);

  std::vector<double> ps(M + 1, 0.0);
  CMat power = Q;
  for (int q = 1; q <= M; ++q) {
    ps[q] = power.trace().real();
    if (q < M) power = power * Q;
  }
  PsdRecursion out;
  out.coeffs.assign(M + 1, 0.0);
  std::vector<double> bound(M + 1, 0.0);
  out.coeffs[0] = 1.0;
  bound[0] = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  out.psd = true;
  for (int k = 1; k <= M; ++k) {
    double acc = 0.0, mag = 0.0;
    for (int q = 1; q <= k; ++q) {
      const double term = ps[q] * out.coeffs[k - q];
      acc += (q % 2 == 1) ? term : -term;
      mag += std::abs(ps[q]) * bound[k - q];
    }
    out.coeffs[k] = acc / k;
    bound[k] = mag / k;
    const double noise = 64.0 * M * M * eps * bound[k];
    if (out.coeffs[k] < -noise && out.psd) {
      out.psd = false;
      out.first_negative = k;
    }
  }
  return out;
}

PsdRecursion psd_check_recursion(const BlochVector& r, double tol) {
  return psd_check_recursion(decode(r), tol);
}

double gurvits_ball_radius(const RegisterLayout& layout) {
  const double M = layout.total_dim();
  return 1.0 / (M * M);
}

json bloch_to_json(const BlochVector& r) {
  json coords = json::array();
  for (Eigen::Index i = 0; i < r.coords.size(); ++i) coords.push_back(r.coords(i));
  return {{"M", r.M}, {"coords", coords}};
}

BlochVector bloch_from_json(const JsonDoc& doc) {
  const json& j = doc.value;
  if (!j.contains("M") || !j["M"].is_number_integer()) doc.error_at("M", "missing integer \"M\"");
  if (!j.contains("coords") || !j["coords"].is_array()) doc.error_at("coords", "missing \"coords\" array");
  const int M = j["M"].get<int>();
  RVec c(static_cast<Eigen::Index>(j["coords"].size()));
  for (size_t i = 0; i < j["coords"].size(); ++i) {
    if (!j["coords"][i].is_number()) doc.error_at("coords", "coordinates must be numbers");
    c(static_cast<Eigen::Index>(i)) = j["coords"][i].get<double>();
  }
  try {
    return BlochVector::make(M, c);
  } catch (const Error& e) {
    doc.error_at("coords", e.what());
  }
}

}  // namespace qsep

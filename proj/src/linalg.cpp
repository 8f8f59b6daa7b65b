#include "qsep/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qsep {

char role_letter(Role r) {
  switch (r) {
    case Role::A: return 'A';
    case Role::B: return 'B';
    case Role::C: return 'C';
    case Role::Scratch: return 'S';
  }
  return '?';
}

Role role_from_string(const std::string& s) {
  if (s == "A") return Role::A;
  if (s == "B") return Role::B;
  if (s == "C") return Role::C;
  if (s == "S" || s == "scratch") return Role::Scratch;
  fail(ErrorKind::InvalidInput, "unknown register role '" + s + "'");
}

RegisterLayout RegisterLayout::make(std::vector<int> dims, std::vector<Role> roles) {
  require(!dims.empty(), ErrorKind::InvalidInput, "layout has no registers");
  require(dims.size() == roles.size(), ErrorKind::InvalidInput,
          "layout dims and roles differ in length");
  long long total = 1;
  for (int d : dims) {
    require(d >= 1, ErrorKind::InvalidInput, "register dimension must be positive");
    total *= d;
    require(total <= kMaxDim, ErrorKind::DimensionCap,
            "total dimension exceeds " + std::to_string(kMaxDim));
  }
  RegisterLayout l{std::move(dims), std::move(roles)};
  require(l.dim_of(Role::C) <= kMaxCDim, ErrorKind::DimensionCap,
          "dim(C) exceeds " + std::to_string(kMaxCDim));
  return l;
}

RegisterLayout RegisterLayout::bipartite(int dB, int dC) {
  return make({dB, dC}, {Role::B, Role::C});
}

RegisterLayout RegisterLayout::tripartite(int dA, int dB, int dC) {
  return make({dA, dB, dC}, {Role::A, Role::B, Role::C});
}

int RegisterLayout::total_dim() const {
  int t = 1;
  for (int d : dims) t *= d;
  return t;
}

int RegisterLayout::dim_of(Role r) const {
  int t = 1;
  for (size_t i = 0; i < dims.size(); ++i)
    if (roles[i] == r) t *= dims[i];
  return t;
}

bool RegisterLayout::has(Role r) const {
  return std::find(roles.begin(), roles.end(), r) != roles.end();
}

std::vector<int> RegisterLayout::registers_with(Role r) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (roles[i] == r) out.push_back(i);
  return out;
}

RegisterLayout RegisterLayout::restrict_to(const std::vector<int>& regs) const {
  std::vector<int> d;
  std::vector<Role> r;
  for (int i : regs) {
    d.push_back(dims.at(i));
    r.push_back(roles.at(i));
  }
  return make(d, r);
}

double hermiticity_defect(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

DensityMatrix DensityMatrix::make(const CMat& m, const RegisterLayout& layout) {
  require(m.rows() == m.cols(), ErrorKind::InvalidInput, "density matrix is not square");
  require(m.rows() == layout.total_dim(), ErrorKind::InvalidInput,
          "density matrix size does not match layout");
  require(hermiticity_defect(m) <= kHermitianTol, ErrorKind::InvalidInput,
          "density matrix is not Hermitian");
  CMat h = hermitize(m);
  require(std::abs(h.trace().real() - 1.0) <= kTraceTol, ErrorKind::InvalidInput,
          "density matrix trace is not 1");
  require(min_eigenvalue(h) >= -kMinEigTol, ErrorKind::InvalidInput,
          "density matrix is not positive semidefinite");
  return DensityMatrix(std::move(h), layout);
}

DensityMatrix DensityMatrix::from_pure(const CVec& psi, const RegisterLayout& layout) {
  return PureState::make(psi, layout).density();
}

PureState PureState::make(const CVec& psi, const RegisterLayout& layout) {
  require(psi.size() == layout.total_dim(), ErrorKind::InvalidInput,
          "state vector size does not match layout");
  require(std::abs(psi.squaredNorm() - 1.0) <= kTraceTol, ErrorKind::InvalidInput,
          "state vector is not normalized");
  return PureState(psi, layout);
}

DensityMatrix PureState::density() const {
  CMat m = v_ * v_.adjoint();
  return DensityMatrix::make(hermitize(m), layout_);
}

CMat kron(const CMat& a, const CMat& b) {
  const long long r = a.rows() * b.rows(), c = a.cols() * b.cols();
  require(r <= kMaxDim && c <= kMaxDim, ErrorKind::DimensionCap,
          "kron result exceeds dimension cap");
  CMat out(r, c);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec kron(const CVec& a, const CVec& b) {
  require(a.size() * b.size() <= kMaxDim, ErrorKind::DimensionCap,
          "kron result exceeds dimension cap");
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

int product(const std::vector<int>& dims) {
  int t = 1;
  for (int d : dims) t *= d;
  return t;
}

}  // namespace

CMat partial_trace(const CMat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int n = product(dims);
  require(m.rows() == n && m.cols() == n, ErrorKind::InvalidInput,
          "partial_trace: matrix does not match dims");
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    require(k >= 0 && k < static_cast<int>(dims.size()), ErrorKind::InvalidInput,
            "partial_trace: bad register index");
    kept[k] = true;
  }
  std::vector<int> kdims, tdims;
  for (size_t i = 0; i < dims.size(); ++i) (kept[i] ? kdims : tdims).push_back(dims[i]);
  const auto st = strides_of(dims);
  const auto kst = strides_of(kdims);
  const auto tst = strides_of(tdims);
  std::vector<int> kidx(n), tidx(n);
  for (int i = 0; i < n; ++i) {
    int ki = 0, ti = 0, kp = 0, tp = 0;
    for (size_t r = 0; r < dims.size(); ++r) {
      const int digit = (i / st[r]) % dims[r];
      if (kept[r]) ki += digit * kst[kp++];
      else ti += digit * tst[tp++];
    }
    kidx[i] = ki;
    tidx[i] = ti;
  }
  const int nk = product(kdims);
  CMat out = CMat::Zero(nk, nk);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += m(i, j);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Role>& keep_roles) {
  std::vector<int> keep;
  const auto& l = rho.layout();
  for (int i = 0; i < l.size(); ++i)
    if (std::find(keep_roles.begin(), keep_roles.end(), l.roles[i]) != keep_roles.end())
      keep.push_back(i);
  require(!keep.empty(), ErrorKind::InvalidInput, "partial_trace: nothing kept");
  CMat red = hermitize(partial_trace(rho.matrix(), l.dims, keep));
  return DensityMatrix::make(red, l.restrict_to(keep));
}

CMat partial_transpose(const CMat& m, const std::vector<int>& dims, const std::vector<int>& regs) {
  const int n = product(dims);
  require(m.rows() == n && m.cols() == n, ErrorKind::InvalidInput,
          "partial_transpose: matrix does not match dims");
  const auto st = strides_of(dims);
  std::vector<int> mask_digits(n, 0);
  for (int i = 0; i < n; ++i) {
    int part = 0;
    for (int r : regs) part += ((i / st[r]) % dims[r]) * st[r];
    mask_digits[i] = part;
  }
  CMat out(n, n);
  for (int i = 0; i < n; ++i) {
    const int ir = i - mask_digits[i];
    for (int j = 0; j < n; ++j) {
      const int jr = j - mask_digits[j];
      out(ir + mask_digits[j], jr + mask_digits[i]) = m(i, j);
    }
  }
  return out;
}

Eigs hermitian_eigs(const CMat& m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidInput, "eigensolver needs a square matrix");
  require(hermiticity_defect(m) <= kEigHermitianTol, ErrorKind::NotHermitian,
          "eigensolver input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  require(es.info() == Eigen::Success, ErrorKind::Precondition, "eigensolver failed");
  const Eigen::Index n = m.rows();
  Eigs out{RVec(n), CMat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double min_eigenvalue(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMat psd_sqrt(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  RVec s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMat psd_part(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  RVec s = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_distance(const CMat& rho, const CMat& tau) {
  require(rho.rows() == tau.rows(), ErrorKind::InvalidInput, "trace_distance: size mismatch");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(rho - tau), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const CMat& rho, const CMat& tau) {
  require(rho.rows() == tau.rows(), ErrorKind::InvalidInput, "fidelity: size mismatch");
  const CMat s = psd_sqrt(rho);
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(s * tau * s), Eigen::EigenvaluesOnly);
  const double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, t * t);
}

}  // namespace qsep

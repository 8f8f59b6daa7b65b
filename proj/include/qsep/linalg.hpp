#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsep/error.hpp"

namespace qsep {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kMinEigTol = 1e-10;
inline constexpr double kEigHermitianTol = 1e-10;
inline constexpr int kMaxDim = 4096;
inline constexpr int kMaxCDim = 16;

enum class Role { A, B, C, Scratch };

char role_letter(Role r);
Role role_from_string(const std::string& s);

struct RegisterLayout {
  std::vector<int> dims;
  std::vector<Role> roles;

  static RegisterLayout make(std::vector<int> dims, std::vector<Role> roles);
  static RegisterLayout bipartite(int dB, int dC);
  static RegisterLayout tripartite(int dA, int dB, int dC);

  int size() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  int dim_of(Role r) const;
  bool has(Role r) const;
  std::vector<int> registers_with(Role r) const;
  RegisterLayout restrict_to(const std::vector<int>& regs) const;
  bool operator==(const RegisterLayout&) const = default;
};

class DensityMatrix {
 public:
  static DensityMatrix make(const CMat& m, const RegisterLayout& layout);
  static DensityMatrix from_pure(const CVec& psi, const RegisterLayout& layout);

  const CMat& matrix() const { return m_; }
  const RegisterLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  DensityMatrix(CMat m, RegisterLayout layout)
      : m_(std::move(m)), layout_(std::move(layout)) {}
  CMat m_;
  RegisterLayout layout_;
};

class PureState {
 public:
  static PureState make(const CVec& psi, const RegisterLayout& layout);

  const CVec& vector() const { return v_; }
  const RegisterLayout& layout() const { return layout_; }
  DensityMatrix density() const;
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  PureState(CVec v, RegisterLayout layout)
      : v_(std::move(v)), layout_(std::move(layout)) {}
  CVec v_;
  RegisterLayout layout_;
};

struct Eigs {
  RVec values;   // descending
  CMat vectors;  // column i belongs to values[i]
};

double hermiticity_defect(const CMat& m);
CMat hermitize(const CMat& m);

CMat kron(const CMat& a, const CMat& b);
CVec kron(const CVec& a, const CVec& b);

CMat partial_trace(const CMat& m, const std::vector<int>& dims,
                   const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<Role>& keep_roles);

CMat partial_transpose(const CMat& m, const std::vector<int>& dims,
                       const std::vector<int>& regs);

Eigs hermitian_eigs(const CMat& m);
double min_eigenvalue(const CMat& m);
CMat psd_sqrt(const CMat& m);
CMat psd_part(const CMat& m);

double trace_distance(const CMat& rho, const CMat& tau);
double fidelity(const CMat& rho, const CMat& tau);

}  // namespace qsep

#pragma once

#include <string>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/state_io.hpp"

namespace qsep {

// Coordinates against the scaled non-identity Pauli words, Tr[s_i s_j] = 2 delta_ij.
struct BlochVector {
  int M = 2;
  RVec coords;

  static BlochVector make(int M, RVec coords);
  int size() const { return static_cast<int>(coords.size()); }
};

int qubit_count(int M);
double generator_scale(int M);
std::string pauli_word(int index, int M);
CMat generator(int index, int M);

BlochVector encode(const CMat& rho);
BlochVector encode(const DensityMatrix& rho);
CMat decode(const BlochVector& r);

// Keeps the coordinates acting trivially on the traced roles, times sqrt(dim traced).
BlochVector subsystem_project(const BlochVector& r, const RegisterLayout& layout,
                              const std::vector<Role>& traced = {Role::A});
std::vector<int> subsystem_indices(const RegisterLayout& layout,
                                   const std::vector<Role>& traced = {Role::A});

struct PsdRecursion {
  bool psd = false;
  std::vector<double> coeffs;  // a_0 .. a_M of P + tol I
  int first_negative = -1;
};

inline constexpr double kRecursionTol = 1e-9;

PsdRecursion psd_check_recursion(const CMat& P, double tol = kRecursionTol);
PsdRecursion psd_check_recursion(const BlochVector& r, double tol = kRecursionTol);

double gurvits_ball_radius(const RegisterLayout& layout);

json bloch_to_json(const BlochVector& r);
BlochVector bloch_from_json(const JsonDoc& doc);

}  // namespace qsep

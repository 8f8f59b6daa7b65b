#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/state_io.hpp"

namespace qsep {

enum class Verdict { Entangled, SeparableWithin, Inconclusive };

std::string to_string(Verdict v);

struct SepResult {
  Verdict verdict = Verdict::Inconclusive;
  double slack = 0.0;   // delta of SEPARABLE_WITHIN
  double margin = 0.0;  // -Tr[W rho] for ENTANGLED
  std::optional<CMat> witness;
  int level = 1;        // 1 = PPT only, k >= 2 = k-extension
  int iterations = 0;
  double residual = 0.0;
  std::string method;
};

// Left and right register groups of a bipartition; the rest is traced out.
struct Cut {
  std::vector<Role> left{Role::B};
  std::vector<Role> right{Role::C};
};

Cut parse_cut(const std::string& text);

struct Bipartite {
  CMat rho;
  int dB = 1;
  int dC = 1;
};

Bipartite bipartite_view(const DensityMatrix& rho, const Cut& cut);
bool exact_ppt_regime(int dB, int dC);

inline constexpr double kPptTol = 1e-10;
inline constexpr int kExtensionCap = 20000;

struct ExtensionOptions {
  double delta = 1e-6;
  bool ppt = true;
  int max_iterations = kExtensionCap;
  int certificate_every = 10;
};

SepResult ppt_check(const CMat& rho, int dB, int dC);
SepResult ppt_check(const DensityMatrix& rho, const Cut& cut = {});

SepResult k_extension_feasible(const CMat& rho, int dB, int dC, int k,
                               const ExtensionOptions& opt = {});
SepResult k_extension_feasible(const DensityMatrix& rho, const Cut& cut, int k,
                               const ExtensionOptions& opt = {});

SepResult separability_test(const CMat& rho, int dB, int dC, int max_level,
                            const ExtensionOptions& opt = {});
SepResult separability_test(const DensityMatrix& rho, const Cut& cut, int max_level,
                            const ExtensionOptions& opt = {});

json sep_result_to_json(const SepResult& r);

}  // namespace qsep

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qsep/lemmas.hpp"

namespace qsep {

struct SuiteOptions {
  int trials = 500;
  std::uint64_t seed = 7;
  int jobs = 1;
};

struct SuiteStats {
  std::string name;
  int checked = 0;
  int applicable = 0;
  int violations = 0;
  int near_boundary = 0;  // applicable checks with margin < 0.05
  double min_margin = 0.0;
  bool has_margin = false;
  json extra = json::object();

  void add(const LemmaReport& r);
};

json stats_to_json(const SuiteStats& s);

std::vector<std::string> suite_names();
SuiteStats run_suite(const std::string& name, const SuiteOptions& opt);
// "all" expands to every suite.
json run_suites(const std::vector<std::string>& names, const SuiteOptions& opt);

// Runs fn(i) for i in [0, n) on up to jobs threads; results keep index order.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

CspInstance toy_no_csp();
CspInstance toy_yes_csp();

}  // namespace qsep

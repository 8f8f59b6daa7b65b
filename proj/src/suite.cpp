#include "qsep/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace qsep {

void SuiteStats::add(const LemmaReport& r) {
  ++checked;
  if (!r.applicable) return;
  ++applicable;
  if (!r.pass) ++violations;
  if (r.margin < 0.05) ++near_boundary;
  min_margin = has_margin ? std::min(min_margin, r.margin) : r.margin;
  has_margin = true;
}

json stats_to_json(const SuiteStats& s) {
  json j = {{"checked", s.checked},
            {"applicable", s.applicable},
            {"violations", s.violations},
            {"near_boundary", s.near_boundary},
            {"min_margin", s.has_margin ? json(s.min_margin) : json(nullptr)}};
  for (auto it = s.extra.begin(); it != s.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

CspInstance toy_no_csp() { return CspInstance::make(4, 2, {{0}, {1}, {0, 1}, {}}); }
CspInstance toy_yes_csp() { return CspInstance::make(4, 2, {{0}, {1}, {0, 1}, {1}}); }

namespace {

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {
      "offdiag",          "quasirigid",        "rigidity",        "quadratic",
      "soundness",        "mixed_swap",        "swap_overlap",    "continuity_is_star",
      "continuity_nonneg", "continuity_proper", "pigeonhole",      "qma_constants",
      "mixer",            "comp_basis"};
  return n;
}

std::uint64_t salt(const std::string& name) {
  const auto& n = names();
  return static_cast<std::uint64_t>(std::find(n.begin(), n.end(), name) - n.begin()) + 1;
}

// Fills reports[i] for each trial, then folds them in index order.
SuiteStats collect(const std::string& name, int n, int jobs,
                   const std::function<std::vector<LemmaReport>(int)>& trial) {
  std::vector<std::vector<LemmaReport>> out(static_cast<size_t>(n));
  parallel_for(n, jobs, [&](int i) { out[static_cast<size_t>(i)] = trial(i); });
  SuiteStats s;
  s.name = name;
  for (const auto& v : out)
    for (const auto& r : v) s.add(r);
  return s;
}

ProtocolState rigidity_proof(std::uint64_t seed, int i) {
  static const int kappas[] = {2, 3, 4};
  static const int Rs[] = {2, 4, 8};
  Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
  const int kappa = kappas[i % 3];
  const int R = Rs[(i / 3) % 3];
  const ProofFamily f = kAllFamilies[static_cast<size_t>(i / 9) % kAllFamilies.size()];
  return adversarial_proof(f, R, kappa, rng);
}

CMat noisy_state(int dim, double t, Rng& rng) {
  const CVec v = haar_vector(dim, rng);
  return (1.0 - t) * v * v.adjoint() + t * ginibre_state(dim, rng);
}

}  // namespace

std::vector<std::string> suite_names() { return names(); }

SuiteStats run_suite(const std::string& name, const SuiteOptions& opt) {
  const auto& n = names();
  require(std::find(n.begin(), n.end(), name) != n.end(), ErrorKind::InvalidInput,
          "unknown suite '" + name + "'");
  require(opt.trials >= 1, ErrorKind::InvalidInput, "trials must be positive");
  const std::uint64_t seed = mix_seed(opt.seed, salt(name));
  const int T = opt.trials;

  if (name == "offdiag") {
    return collect(name, T, opt.jobs, [&](int i) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      const int m = 2 + i % 3, k = 2 + (i / 3) % 3;
      SampleSpec spec{StateKind::SeparableMixture, RegisterLayout::bipartite(m, k), 1 + i % 6};
      const CMat rho = sample_state(spec, rng).matrix();
      std::vector<LemmaReport> rs;
      std::uniform_int_distribution<int> dm(0, m - 1), dn(0, k - 1);
      for (int q = 0; q < 20; ++q) rs.push_back(offdiagonal_check(rho, m, k, dm(rng), dn(rng), dm(rng), dn(rng)));
      return rs;
    });
  }
  if (name == "quasirigid" || name == "rigidity" || name == "quadratic") {
    SuiteStats s = collect(name, T, opt.jobs, [&](int i) {
      // same proofs for all three lemmas
      const ProtocolState psi = rigidity_proof(mix_seed(opt.seed, 101), i);
      if (name == "quasirigid") return std::vector<LemmaReport>{quasirigid_overlap_check(psi)};
      if (name == "rigidity") return std::vector<LemmaReport>{rigidity_bound_check(psi)};
      return std::vector<LemmaReport>{quadratic_tradeoff_check(psi)};
    });
    return s;
  }
  if (name == "soundness") {
    const ProtocolSchedule sch = schedule_compute(2, 0.9, 0.1);
    const CspInstance no = toy_no_csp();
    std::vector<ProtocolState> proofs = adversarial_family(no.R, no.kappa, T, seed);
    const AuditReport a = soundness_case_audit(sch, no, proofs, toy_yes_csp());
    SuiteStats s;
    s.name = name;
    s.checked = s.applicable = a.proofs;
    s.violations = a.violations;
    s.min_margin = a.min_margin;
    s.has_margin = a.proofs > 0;
    s.extra = {{"case_counts", a.case_counts},
               {"max_accept", a.max_accept},
               {"P_YES", sch.p_yes},
               {"gap", sch.gap},
               {"honest_accept", a.honest_accept},
               {"honest_error", a.honest_error},
               {"schedule_violations", schedule_violations(sch)}};
    return s;
  }
  if (name == "mixed_swap" || name == "swap_overlap") {
    return collect(name, T, opt.jobs, [&](int i) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      const int dim = 2 + i % 7;
      for (int attempt = 0;; ++attempt) {
        const double t1 = std::uniform_real_distribution<double>(0.0, 0.45)(rng);
        const double t2 = std::uniform_real_distribution<double>(0.0, 0.45)(rng);
        CMat a = noisy_state(dim, t1, rng);
        // half the pairs share the dominant direction
        CMat b = (i % 2 == 0) ? CMat((1.0 - t2) * a + t2 * ginibre_state(dim, rng)) : noisy_state(dim, t2, rng);
        LemmaReport r = name == "mixed_swap" ? mixed_swap_check(a, b) : swap_overlap_check(a, b);
        if (r.applicable || attempt >= 50) return std::vector<LemmaReport>{r};
      }
    });
  }
  if (name.rfind("continuity_", 0) == 0) {
    const ContinuitySet set = name == "continuity_is_star" ? ContinuitySet::IsStar
                              : name == "continuity_nonneg" ? ContinuitySet::Nonneg
                                                            : ContinuitySet::Proper;
    return collect(name, T, opt.jobs, [&](int i) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      const RegisterLayout l = (i % 2 == 0) ? RegisterLayout::tripartite(4, 2, 2) : RegisterLayout::tripartite(8, 2, 2);
      const CMat rho = sample_continuity_state(set, rng, l);
      return std::vector<LemmaReport>{continuity_check(set, rho, l)};
    });
  }
  if (name == "pigeonhole") {
    return collect(name, T, opt.jobs, [&](int i) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      const RegisterLayout l = RegisterLayout::tripartite(1 + i % 3, 2 + (i / 3) % 3, 2 + (i / 9) % 3);
      CVec psi = haar_vector(l.total_dim(), rng);
      if (i % 10 == 0) {
        // maximally entangled across AB|C
        psi.setZero();
        const int dC = l.dims[2];
        const int rank = std::min(l.dims[0] * l.dims[1], dC);
        for (int c = 0; c < rank; ++c) psi(c * dC + c) = 1.0 / std::sqrt(static_cast<double>(rank));
      }
      return std::vector<LemmaReport>{pigeonhole_overlap(psi, l)};
    });
  }
  if (name == "qma_constants") {
    return collect(name, T, opt.jobs, [&](int i) {
      const QmaConstants q = qma_in_qma_constants(static_cast<double>(i + 1) / T);
      LemmaReport r;
      r.value = q.lhs;
      r.bound = q.c;
      r.margin = q.margin;
      r.pass = q.holds;
      r.eps = q.ell;
      return std::vector<LemmaReport>{r};
    });
  }
  if (name == "mixer") {
    return collect(name, T, opt.jobs, [&](int i) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      const double delta_gap = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
      const double s = std::uniform_real_distribution<double>(0.0, 1.0 - delta_gap)(rng);
      const MixerSchedule m = mixer_schedule(s, delta_gap);
      LemmaReport r;
      r.value = std::min({m.gap_far - m.delta, m.gap_mixed - m.delta, m.gap_close});
      r.margin = r.value;
      r.pass = m.ok;
      r.eps = m.p;
      return std::vector<LemmaReport>{r};
    });
  }
  // comp_basis
  SuiteStats s = collect(name, T, opt.jobs, [&](int i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    const int k = 1 + i % 3;
    const int dim = 1 << k;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto concentrated = [&](double w) {
      CVec v = haar_vector(dim, rng) * std::sqrt(1.0 - w);
      v(0) += std::sqrt(w);
      return CVec(v / v.norm());
    };
    const double w = u(rng);
    const CVec mu = concentrated(w);
    const CVec nu = i % 3 == 0 ? mu : concentrated(u(rng));
    return std::vector<LemmaReport>{comp_basis_check(mu, nu, k)};
  });
  // The literally stated gap fails on two identical near-basis states.
  CVec mu(2);
  mu << std::sqrt(0.99), std::sqrt(0.01);
  const LemmaReport ce = comp_basis_check(mu, mu, 1);
  s.extra = {{"literal_counterexample_accept", ce.value},
             {"literal_counterexample_bound", 1.0 - comp_basis_literal_gap(ce.eps, 1)},
             {"literal_bound_violated", !ce.note.empty()}};
  return s;
}

json run_suites(const std::vector<std::string>& req, const SuiteOptions& opt) {
  std::vector<std::string> list;
  for (const auto& r : req) {
    if (r == "all") {
      for (const auto& n : names())
        if (std::find(list.begin(), list.end(), n) == list.end()) list.push_back(n);
    } else if (std::find(list.begin(), list.end(), r) == list.end()) {
      list.push_back(r);
    }
  }
  json suites = json::object();
  int total = 0;
  for (const auto& n : list) {
    const SuiteStats s = run_suite(n, opt);
    total += s.violations;
    suites[n] = stats_to_json(s);
  }
  return {{"seed", opt.seed}, {"trials", opt.trials}, {"suites", suites}, {"violations_total", total}};
}

}  // namespace qsep

#include "qsep/septest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qsep {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Entangled: return "ENTANGLED";
    case Verdict::SeparableWithin: return "SEPARABLE_WITHIN";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Cut parse_cut(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos && colon > 0 && colon + 1 < text.size(),
          ErrorKind::InvalidInput, "cut must look like 'B:C', got '" + text + "'");
  Cut cut{{}, {}};
  for (char ch : text.substr(0, colon)) cut.left.push_back(role_from_string(std::string(1, ch)));
  for (char ch : text.substr(colon + 1)) cut.right.push_back(role_from_string(std::string(1, ch)));
  for (Role r : cut.left)
    require(std::find(cut.right.begin(), cut.right.end(), r) == cut.right.end(),
            ErrorKind::InvalidInput, "cut sides overlap");
  return cut;
}

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

// Index map sending a basis index to its position after reordering registers.
std::vector<int> register_permutation(const std::vector<int>& dims, const std::vector<int>& order) {
  const int n = product(dims);
  const auto st = strides_of(dims);
  std::vector<int> nd;
  for (int o : order) nd.push_back(dims[o]);
  const auto nst = strides_of(nd);
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) {
    int j = 0;
    for (size_t pos = 0; pos < order.size(); ++pos) j += ((i / st[order[pos]]) % dims[order[pos]]) * nst[pos];
    map[i] = j;
  }
  return map;
}

CMat apply_index_map(const CMat& m, const std::vector<int>& map) {
  const int n = static_cast<int>(map.size());
  CMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

bool contains(const std::vector<Role>& v, Role r) { return std::find(v.begin(), v.end(), r) != v.end(); }

}  // namespace

Bipartite bipartite_view(const DensityMatrix& rho, const Cut& cut) {
  const auto& l = rho.layout();
  std::vector<int> keep, left, right;
  for (int i = 0; i < l.size(); ++i) {
    if (contains(cut.left, l.roles[i])) left.push_back(i);
    else if (contains(cut.right, l.roles[i])) right.push_back(i);
  }
  require(!left.empty() && !right.empty(), ErrorKind::InvalidInput,
          "cut sides must each name at least one register present in the layout");
  for (int i = 0; i < l.size(); ++i)
    if (contains(cut.left, l.roles[i]) || contains(cut.right, l.roles[i])) keep.push_back(i);
  CMat m = keep.size() == static_cast<size_t>(l.size()) ? rho.matrix()
                                                         : partial_trace(rho.matrix(), l.dims, keep);
  std::vector<int> kdims, order;
  for (int i : keep) kdims.push_back(l.dims[i]);
  for (size_t pos = 0; pos < keep.size(); ++pos)
    if (contains(cut.left, l.roles[keep[pos]])) order.push_back(static_cast<int>(pos));
  for (size_t pos = 0; pos < keep.size(); ++pos)
    if (contains(cut.right, l.roles[keep[pos]])) order.push_back(static_cast<int>(pos));
  Bipartite out;
  out.rho = hermitize(apply_index_map(m, register_permutation(kdims, order)));
  for (int i : left) out.dB *= l.dims[i];
  for (int i : right) out.dC *= l.dims[i];
  require(out.dC <= kMaxCDim, ErrorKind::DimensionCap, "dim(C) exceeds cap");
  return out;
}

bool exact_ppt_regime(int dB, int dC) {
  if (dB == 1 || dC == 1) return true;
  return (dB == 2 && dC == 2) || (dB == 2 && dC == 3) || (dB == 3 && dC == 2);
}

SepResult ppt_check(const CMat& rho, int dB, int dC) {
  require(rho.rows() == dB * dC && rho.cols() == dB * dC, ErrorKind::InvalidInput,
          "ppt_check: matrix does not match the cut");
  SepResult out;
  out.method = "ppt";
  out.level = 1;
  const CMat pt = partial_transpose(rho, {dB, dC}, {1});
  const Eigs e = hermitian_eigs(hermitize(pt));
  const Eigen::Index last = e.values.size() - 1;
  const double lmin = e.values(last);
  if (lmin < -kPptTol) {
    const CVec v = e.vectors.col(last);
    out.verdict = Verdict::Entangled;
    out.margin = -lmin;
    out.witness = hermitize(partial_transpose(v * v.adjoint(), {dB, dC}, {1}));
    return out;
  }
  out.margin = lmin;
  out.verdict = exact_ppt_regime(dB, dC) ? Verdict::SeparableWithin : Verdict::Inconclusive;
  return out;
}

SepResult ppt_check(const DensityMatrix& rho, const Cut& cut) {
  const auto b = bipartite_view(rho, cut);
  return ppt_check(b.rho, b.dB, b.dC);
}

namespace {

class Extension {
 public:
  Extension(const CMat& rho, int dB, int dC, int k, bool ppt)
      : rho_(rho), dB_(dB), dC_(dC), k_(k) {
    n_ = dB * dC;
    r_ = 1;
    for (int i = 1; i < k; ++i) r_ *= dC;
    N_ = n_ * r_;
    require(static_cast<long long>(n_) * r_ <= 1024, ErrorKind::DimensionCap,
            "extension space exceeds 1024 dimensions");
    dims_.push_back(dB);
    for (int i = 0; i < k; ++i) dims_.push_back(dC);
    std::vector<int> copies(k);
    std::iota(copies.begin(), copies.end(), 0);
    do {
      std::vector<int> order{0};
      for (int c : copies) order.push_back(1 + c);
      perms_.push_back(register_permutation(dims_, order));
    } while (std::next_permutation(copies.begin(), copies.end()));
    if (ppt)
      for (int j = 1; j <= k; ++j) {
        std::vector<int> regs;
        for (int c = 1; c <= j; ++c) regs.push_back(c);
        pt_cuts_.push_back(regs);
      }
  }

  int N() const { return N_; }
  int cones() const { return 1 + static_cast<int>(pt_cuts_.size()); }

  CMat symmetrize(const CMat& x) const {
    CMat acc = CMat::Zero(N_, N_);
    for (const auto& p : perms_)
      for (int i = 0; i < N_; ++i)
        for (int j = 0; j < N_; ++j) acc(p[i], p[j]) += x(i, j);
    return acc / static_cast<double>(perms_.size());
  }

  CMat reduce(const CMat& x) const { return partial_trace(x, {n_, r_}, {0}); }
  CMat lift(const CMat& y) const { return kron(y, CMat::Identity(r_, r_)); }

  // Inverse of Y -> reduce(symmetrize(lift(Y))).
  CMat solve(const CMat& x) const {
    const CMat trc = partial_trace(x, {dB_, dC_}, {0});
    return (static_cast<double>(k_) / r_) * x -
           ((k_ - 1.0) / (static_cast<double>(dC_) * r_)) * kron(trc, CMat::Identity(dC_, dC_));
  }

  CMat project_affine(const CMat& x) const {
    const CMat xs = symmetrize(x);
    return xs - symmetrize(lift(solve(reduce(xs) - rho_)));
  }

  CMat project_cone(const CMat& x, int c) const {
    if (c == 0) return psd_part(x);
    const auto& regs = pt_cuts_[c - 1];
    return partial_transpose(psd_part(partial_transpose(x, dims_, regs)), dims_, regs);
  }

  // W with Tr[W s] >= 0 on every feasible reduced state.
  CMat certificate(const CMat& y) const {
    const CMat gy = symmetrize(y);
    CMat w = solve(reduce(gy));
    const CMat rem = hermitize(gy - symmetrize(lift(w)));
    Eigen::SelfAdjointEigenSolver<CMat> es(rem, Eigen::EigenvaluesOnly);
    const double mu = std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1));
    w += mu * CMat::Identity(n_, n_);
    return hermitize(w);
  }

  CMat start() const { return project_affine(lift(rho_) / static_cast<double>(r_)); }

 private:
  CMat rho_;
  int dB_, dC_, k_, n_, r_, N_;
  std::vector<int> dims_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<int>> pt_cuts_;
};

double spectral_norm(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

SepResult k_extension_feasible(const CMat& rho_in, int dB, int dC, int k, const ExtensionOptions& opt) {
  require(k >= 2 && k <= 4, ErrorKind::InvalidInput, "extension level must be in 2..4");
  require(opt.delta > 0, ErrorKind::InvalidInput, "delta must be positive");
  require(rho_in.rows() == dB * dC, ErrorKind::InvalidInput, "extension: matrix does not match the cut");
  require(dC <= kMaxCDim, ErrorKind::DimensionCap, "dim(C) exceeds cap");
  const CMat rho = hermitize(rho_in);

  if (opt.ppt) {
    SepResult p = ppt_check(rho, dB, dC);
    if (p.verdict == Verdict::Entangled) {
      p.level = k;
      return p;
    }
  }

  // Work on the shifted state (1-t) rho + t I/n, whose extensions are full rank when
  // rho is extendible. An affine-feasible x whose cone images have eigenvalues >= -r
  // gives, after adding r I, an exact extension of a state within 2rN of the shifted one.
  const int n = dB * dC;
  const double t = 0.45 * opt.delta;
  const CMat shifted = (1.0 - t) * rho + (t / n) * CMat::Identity(n, n);
  Extension ext(shifted, dB, dC, k, opt.ppt);
  SepResult out;
  out.method = opt.ppt ? "extension+ppt" : "extension";
  out.level = k;
  const double target = 0.05 * opt.delta / ext.N();
  const int nc = ext.cones();
  CMat x = ext.start();
  std::vector<CMat> z(static_cast<size_t>(nc), x);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (it % opt.certificate_every == 0) {
      CMat y = CMat::Zero(ext.N(), ext.N());
      double res = 0.0;
      for (int c = 0; c < nc; ++c) {
        const CMat d = ext.project_cone(x, c) - x;
        res = std::max(res, spectral_norm(d));
        y += d;
      }
      out.iterations = it;
      out.residual = res;
      if (res <= target) {
        out.verdict = Verdict::SeparableWithin;
        out.slack = 2.0 * t + 2.0 * res * ext.N();
        return out;
      }
      CMat w = ext.certificate(y);
      const double nrm = spectral_norm(w);
      if (nrm > 0) {
        w /= nrm;
        const double val = (w * rho).trace().real();
        if (val < -1e-9) {
          out.verdict = Verdict::Entangled;
          out.margin = -val;
          out.witness = w;
          return out;
        }
      }
    }
    // Douglas-Rachford on the diagonal of the product of the cones
    CMat mean = CMat::Zero(ext.N(), ext.N());
    for (const CMat& zc : z) mean += zc;
    x = ext.project_affine(mean / static_cast<double>(nc));
    for (int c = 0; c < nc; ++c) z[static_cast<size_t>(c)] += ext.project_cone(2.0 * x - z[static_cast<size_t>(c)], c) - x;
  }
  out.iterations = opt.max_iterations;
  out.verdict = Verdict::Inconclusive;
  return out;
}

SepResult k_extension_feasible(const DensityMatrix& rho, const Cut& cut, int k, const ExtensionOptions& opt) {
  const auto b = bipartite_view(rho, cut);
  return k_extension_feasible(b.rho, b.dB, b.dC, k, opt);
}

SepResult separability_test(const CMat& rho, int dB, int dC, int max_level, const ExtensionOptions& opt) {
  SepResult p = ppt_check(rho, dB, dC);
  if (p.verdict == Verdict::Entangled) return p;
  if (exact_ppt_regime(dB, dC)) {
    p.verdict = Verdict::SeparableWithin;
    p.slack = 0.0;
    return p;
  }
  if (max_level < 2) return p;
  int total = 0;
  for (int k = 2; k <= max_level; ++k) {
    SepResult r = k_extension_feasible(rho, dB, dC, k, opt);
    total += r.iterations;
    r.iterations = total;
    if (r.verdict != Verdict::SeparableWithin || k == max_level) return r;
  }
  return p;
}

SepResult separability_test(const DensityMatrix& rho, const Cut& cut, int max_level, const ExtensionOptions& opt) {
  const auto b = bipartite_view(rho, cut);
  return separability_test(b.rho, b.dB, b.dC, max_level, opt);
}

json sep_result_to_json(const SepResult& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["level"] = r.level;
  j["method"] = r.method;
  j["iterations"] = r.iterations;
  if (r.verdict == Verdict::SeparableWithin) j["slack"] = r.slack;
  if (r.verdict == Verdict::Entangled) j["margin"] = r.margin;
  else j["margin"] = nullptr;
  if (r.witness) {
    j["witness"] = {{"dim", r.witness->rows()}, {"data", matrix_to_json(*r.witness)}};
  } else {
    j["witness"] = nullptr;
  }
  if (r.method != "ppt") j["residual"] = r.residual;
  return j;
}

}  // namespace qsep

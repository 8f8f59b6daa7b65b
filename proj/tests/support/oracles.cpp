#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsep::testing {

CMat loop_partial_trace(const CMat& m, const std::vector<int>& dims, int traced) {
  const int n = static_cast<int>(dims.size());
  int total = 1;
  for (int d : dims) total *= d;
  const int dt = dims[traced];
  const int keep = total / dt;
  CMat out = CMat::Zero(keep, keep);
  auto digits = [&](int idx) {
    std::vector<int> dg(n);
    for (int r = n - 1; r >= 0; --r) {
      dg[r] = idx % dims[r];
      idx /= dims[r];
    }
    return dg;
  };
  auto reduced = [&](const std::vector<int>& dg) {
    int idx = 0;
    for (int r = 0; r < n; ++r)
      if (r != traced) idx = idx * dims[r] + dg[r];
    return idx;
  };
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) {
      const auto di = digits(i), dj = digits(j);
      if (di[traced] != dj[traced]) continue;
      out(reduced(di), reduced(dj)) += m(i, j);
    }
  return out;
}

CMat loop_partial_transpose_2(const CMat& m, int dB, int dC) {
  CMat out(dB * dC, dB * dC);
  for (int b1 = 0; b1 < dB; ++b1)
    for (int c1 = 0; c1 < dC; ++c1)
      for (int b2 = 0; b2 < dB; ++b2)
        for (int c2 = 0; c2 < dC; ++c2) out(b1 * dC + c1, b2 * dC + c2) = m(b1 * dC + c2, b2 * dC + c1);
  return out;
}

double eig_min(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

constexpr int kDykstraIterations = 20000;

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

CMat proj_density(const CMat& x) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (x + x.adjoint()));
  const Eigen::VectorXd w = project_simplex(es.eigenvalues());
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

CMat proj_psd(const CMat& x) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (x + x.adjoint()));
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

// {X : Tr_A X has PSD partial transpose}. Tr_A composed with its adjoint is 2 Id.
CMat proj_reduced_ppt(const CMat& x) {
  const CMat s = loop_partial_trace(x, {2, 2, 2}, 0);
  const CMat st = loop_partial_transpose_2(s, 2, 2);
  const CMat fixed = loop_partial_transpose_2(proj_psd(st), 2, 2);
  const CMat d = 0.5 * (fixed - s);
  CMat out = x;
  for (int a = 0; a < 2; ++a) out.block(4 * a, 4 * a, 4, 4) += d;
  return out;
}

bool feasible(const CMat& V, double t, double tol) {
  const double vn2 = V.squaredNorm();
  auto proj_half = [&](const CMat& x) -> CMat {
    const double g = (V.adjoint() * x).trace().real();
    return g >= t ? x : CMat(x + ((t - g) / vn2) * V);
  };
  CMat x = CMat::Identity(8, 8) / 8.0;
  CMat p1 = CMat::Zero(8, 8), p2 = p1, p3 = p1;
  for (int it = 0; it < kDykstraIterations; ++it) {
    const CMat y1 = proj_density(x + p1);
    p1 = x + p1 - y1;
    const CMat y2 = proj_half(y1 + p2);
    p2 = y1 + p2 - y2;
    const CMat y3 = proj_reduced_ppt(y2 + p3);
    p3 = y2 + p3 - y3;
    x = y3;
    if (it % 20 == 19) {
      const CMat r = proj_density(x);
      const double half_gap = std::max(0.0, t - (V.adjoint() * r).trace().real());
      const double ppt_gap = (proj_reduced_ppt(r) - r).norm();
      if (half_gap < tol && ppt_gap < tol) return true;
    }
  }
  return false;
}

}  // namespace

BruteResult brute_wis_max(const CMat& V, double tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(V, Eigen::EigenvaluesOnly);
  // I/8 lies in the body
  double lo = V.trace().real() / 8.0, hi = es.eigenvalues().maxCoeff();
  BruteResult r;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(V, mid, 1e-6)) lo = mid;
    else hi = mid;
    ++r.bisection_steps;
  }
  r.value = lo;
  return r;
}

}  // namespace qsep::testing

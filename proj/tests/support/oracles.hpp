#pragma once

// Independent reference computations used by the tests. None of these call the
// library routine they are used to check.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qvdp/equilibria.hpp"
#include "qvdp/model.hpp"

namespace oracle {

using qvdp::Params;
using qvdp::State;
using cplx = std::complex<double>;

inline State rhs(State s, const Params& p) {
  const double x2 = s.x * s.x;
  return {s.y, (p.mu() + x2 - x2 * x2) * s.y + p.beta() * s.x - p.eps() * x2 * s.x};
}

inline State rhs_forced(State s, double t, const Params& p) {
  State f = rhs(s, p);
  f.y -= p.alpha() * s.x * std::cos(p.omega() * t);
  return f;
}

/// Classical fourth-order Runge-Kutta step.
template <class F>
State rk4_step(const F& f, double t, State s, double h) {
  const State k1 = f(t, s);
  const State k2 = f(t + h / 2, s + (h / 2) * k1);
  const State k3 = f(t + h / 2, s + (h / 2) * k2);
  const State k4 = f(t + h, s + h * k3);
  return s + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class F>
State rk4(const F& f, State s, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) s = rk4_step(f, t0 + i * h, s, h);
  return s;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

/// Central finite-difference Jacobian of the unforced field.
inline Eigen::Matrix2d fd_jacobian(State s, const Params& p, double h = 1e-6) {
  Eigen::Matrix2d J;
  const State fxp = rhs({s.x + h, s.y}, p), fxm = rhs({s.x - h, s.y}, p);
  const State fyp = rhs({s.x, s.y + h}, p), fym = rhs({s.x, s.y - h}, p);
  J << (fxp.x - fxm.x) / (2 * h), (fyp.x - fym.x) / (2 * h), (fxp.y - fxm.y) / (2 * h), (fyp.y - fym.y) / (2 * h);
  return J;
}

inline std::array<cplx, 2> eigenvalues(const Eigen::Matrix2d& J) {
  Eigen::EigenSolver<Eigen::Matrix2d> es(J, false);
  std::array<cplx, 2> ev{es.eigenvalues()[0], es.eigenvalues()[1]};
  if (ev[0].real() > ev[1].real()) std::swap(ev[0], ev[1]);
  return ev;
}

/// Equilibrium kind from the linearization; zero eigenvalues are resolved by the
/// centre-manifold reduction x' = (eps/mu) x^3 (one zero eigenvalue) or by the
/// nilpotent normal form y' = -eps x^3 + x^2 y (double zero).
inline qvdp::EqKind sign_pattern(State eq, const Params& p) {
  using qvdp::EqKind;
  const Eigen::Matrix2d J = fd_jacobian(eq, p);
  const auto ev = eigenvalues(J);
  constexpr double tiny = 1e-7;
  const double tr = J.trace(), det = J.determinant();
  if (std::abs(det) < tiny && std::abs(tr) < tiny) return p.eps() > 0 ? EqKind::DegenerateUnstableFocus : EqKind::Saddle;
  if (std::abs(det) < tiny) {
    const double centre = p.eps() / tr;
    if (tr < 0 && centre < 0) return EqKind::StableNode;
    if (tr > 0 && centre > 0) return EqKind::UnstableNode;
    return EqKind::Saddle;
  }
  const double r0 = ev[0].real(), r1 = ev[1].real();
  const bool complex_pair = std::abs(ev[0].imag()) > tiny;
  if (r0 * r1 < 0) return EqKind::Saddle;
  if (r1 < 0) return complex_pair ? EqKind::StableFocus : EqKind::StableNode;
  return complex_pair ? EqKind::UnstableFocus : EqKind::UnstableNode;
}

struct ProbeRun {
  bool converged = false;
  bool left = false;
  double winding = 0.0;  ///< total signed angle swept about the equilibrium
};

/// Distance from the equilibrium. The weighted form (dx^4 + dy^2)^(1/4) follows
/// the quasi-homogeneous scaling of the nilpotent and centre-manifold cases.
inline double radius(State d, bool weighted) {
  return weighted ? std::pow(std::pow(d.x, 4) + d.y * d.y, 0.25) : norm(d);
}

/// Adaptive-in-h RK4 probe: h follows the local rate |f| / d. A run has left once
/// its radius exceeds four times the start; it has converged when it ends inside
/// half the start or, for weighted runs, is still shrinking over the second half.
inline ProbeRun probe(State eq, State s, const Params& p, double dir, double t_max, double h_cap,
                      bool weighted = false) {
  ProbeRun out;
  const double r0 = radius(s - eq, weighted);
  double angle_prev = std::atan2(s.y - eq.y, s.x - eq.x);
  const auto f = [&](double, State q) { return dir * rhs(q, p); };
  double t = 0.0;
  double r_half = -1.0;
  while (t < t_max) {
    const double d = norm(s - eq);
    const double rate = norm(f(t, s)) / std::max(d, 1e-300);
    const double h = std::clamp(0.02 / std::max(rate, 1e-12), 1e-4, h_cap);
    s = rk4_step(f, t, s, h);
    t += h;
    const double a = std::atan2(s.y - eq.y, s.x - eq.x);
    double da = a - angle_prev;
    if (da > std::numbers::pi) da -= 2 * std::numbers::pi;
    if (da < -std::numbers::pi) da += 2 * std::numbers::pi;
    out.winding += da;
    angle_prev = a;
    const double r = radius(s - eq, weighted);
    if (r > 4.0 * r0) {
      out.left = true;
      return out;
    }
    if (r < 1e-6 * r0) break;
    if (r_half < 0 && t >= t_max / 2) r_half = r;
  }
  const double r_end = radius(s - eq, weighted);
  out.converged = r_end < 0.5 * r0 || (weighted && r_half > 0 && r_end < 0.9 * r_half);
  return out;
}

/// Local-simulation verdict: forward and backward probes from a small ring.
/// Weighted runs start on the quasi-homogeneous circle x = r0 cos, y = r0^2 sin.
/// Returns nullopt when the runs are inconclusive.
inline std::optional<qvdp::EqKind> simulate_kind(State eq, const Params& p, double r0, double t_max,
                                                 double h_cap, int probes = 8, bool weighted = false) {
  using qvdp::EqKind;
  std::vector<ProbeRun> fwd, bwd;
  for (int k = 0; k < probes; ++k) {
    const double th = 2 * std::numbers::pi * (k + 0.37) / probes;
    const State s = eq + State{r0 * std::cos(th), (weighted ? r0 * r0 : r0) * std::sin(th)};
    fwd.push_back(probe(eq, s, p, 1.0, t_max, h_cap, weighted));
    bwd.push_back(probe(eq, s, p, -1.0, t_max, h_cap, weighted));
  }
  const auto all = [](const std::vector<ProbeRun>& v, auto pred) { return std::all_of(v.begin(), v.end(), pred); };
  const auto any = [](const std::vector<ProbeRun>& v, auto pred) { return std::any_of(v.begin(), v.end(), pred); };
  const auto conv = [](const ProbeRun& r) { return r.converged; };
  const auto left = [](const ProbeRun& r) { return r.left; };

  const auto node_or_focus = [&](const std::vector<ProbeRun>& runs, EqKind node, EqKind focus) -> std::optional<EqKind> {
    double wmax = 0.0;
    for (const auto& r : runs) wmax = std::max(wmax, std::abs(r.winding));
    if (wmax > 2 * std::numbers::pi) return focus;
    if (wmax < std::numbers::pi) return node;
    return std::nullopt;
  };
  if (all(fwd, conv) && all(bwd, left)) return node_or_focus(fwd, EqKind::StableNode, EqKind::StableFocus);
  if (all(bwd, conv) && all(fwd, left)) return node_or_focus(bwd, EqKind::UnstableNode, EqKind::UnstableFocus);
  if (any(fwd, left) && any(bwd, left) && !all(fwd, conv) && !all(bwd, conv)) return EqKind::Saddle;
  return std::nullopt;
}

/// Nonlinear part of z' in the Hopf coordinates x - x2 = z/lam + conj(z/lam), y = z + conj(z),
/// recovered from the real field by solving Re w = y'/2, Re(w/lam) = x'/2.
inline cplx hopf_nonlinear(cplx z, cplx lam, const Params& p) {
  const double x0 = std::sqrt(p.beta() / p.eps());
  const cplx u = z / lam;
  const State s{x0 + 2 * u.real(), 2 * z.real()};
  const State f = rhs(s, p);
  // w = a + i b:  a = y'/2,  Re(w / lam) = (a lr + b li) / |lam|^2 = x'/2
  const double a = f.y / 2;
  const double n2 = std::norm(lam);
  const double b = (f.x / 2 * n2 - a * lam.real()) / lam.imag();
  return cplx(a, b) - lam * z;
}

/// Taylor coefficients h_kl of the nonlinear part for 2 <= k + l <= 3, by a discrete
/// Fourier transform on circles of several radii and a Vandermonde solve in r.
inline std::map<std::pair<int, int>, cplx> hopf_taylor(cplx lam, const Params& p) {
  constexpr int kAngles = 64;
  constexpr int kDeg = 5;
  const std::array<double, kDeg> radii{0.1, 0.2, 0.3, 0.4, 0.5};
  std::map<std::pair<int, int>, cplx> out;
  for (int m = -kDeg; m <= kDeg; ++m) {
    Eigen::Matrix<double, kDeg, kDeg> V;
    Eigen::Matrix<cplx, kDeg, 1> rhs_c;
    for (int j = 0; j < kDeg; ++j) {
      cplx c = 0.0;
      for (int a = 0; a < kAngles; ++a) {
        const double phi = 2 * std::numbers::pi * a / kAngles;
        c += hopf_nonlinear(std::polar(radii[j], phi), lam, p) * std::polar(1.0, -m * phi);
      }
      rhs_c(j) = c / double(kAngles);
      for (int d = 1; d <= kDeg; ++d) V(j, d - 1) = std::pow(radii[j], d);
    }
    const Eigen::Matrix<cplx, kDeg, 1> coeff = V.cast<cplx>().partialPivLu().solve(rhs_c);
    for (int d = 2; d <= 3; ++d) {
      if ((d + m) % 2 != 0 || std::abs(m) > d) continue;
      const int k = (d + m) / 2, l = (d - m) / 2;
      out[{k, l}] = coeff(d - 1);
    }
  }
  return out;
}

/// Chart fields by the chain rule from the planar field, multiplied by z^4.
/// Chart U: x = 1/z, y = u/z.  Chart V: x = v/z, y = 1/z.
inline std::pair<double, double> chart_u(double u, double z, const Params& p) {
  const State s{1 / z, u / z};
  const State f = rhs(s, p);
  const double dz = -z * z * f.x;
  const double du = z * f.y - u * z * f.x;
  const double z4 = std::pow(z, 4);
  return {z4 * du, z4 * dz};
}

inline std::pair<double, double> chart_v(double v, double z, const Params& p) {
  const State s{v / z, 1 / z};
  const State f = rhs(s, p);
  const double dz = -z * z * f.y;
  const double dv = z * f.x - v * z * f.y;
  const double z4 = std::pow(z, 4);
  return {z4 * dv, z4 * dz};
}

}  // namespace oracle

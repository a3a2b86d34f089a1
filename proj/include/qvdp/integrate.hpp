#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;
};

enum class Status { Success, StepUnderflow, NonFinite, Stopped };

[[nodiscard]] const char* to_string(Status s) noexcept;

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

struct IntegratorOptions {
  Tolerance tol{};
  /// Initial step; 0 picks one automatically.
  double h0 = 0.0;
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
  /// A state whose max-norm exceeds this is reported as NonFinite.
  double escape_radius = std::numeric_limits<double>::infinity();
};

/// One accepted step with its continuous extension.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vec<N>, 5> r{};

  [[nodiscard]] double t1() const noexcept { return t0 + h; }
  [[nodiscard]] const Vec<N>& y0() const noexcept { return r[0]; }
  [[nodiscard]] Vec<N> y1() const noexcept {
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = r[0][i] + r[1][i];
    return out;
  }
  [[nodiscard]] Vec<N> eval(double t) const noexcept {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    }
    return out;
  }
};

struct RunResult {
  Status status = Status::Success;
  double t = 0.0;
  StepStats stats{};
};

namespace detail {

template <std::size_t N>
double error_norm(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1, const Tolerance& tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = tol.abs + tol.rel * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sk;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
bool finite_within(const Vec<N>& y, double radius) {
  for (double v : y) {
    if (!std::isfinite(v) || std::abs(v) > radius) return false;
  }
  return true;
}

}  // namespace detail

/// Dormand-Prince 5(4) with PI step control and the pair's quartic dense output.
///
/// `f(t, y)` returns the derivative. `on_step(const DenseStep<N>&)` is called after
/// every accepted step; returning false stops the run with Status::Stopped.
/// Integration runs backward when t1 < t0.
template <std::size_t N, class F, class OnStep>
RunResult dopri5(F&& f, double t0, Vec<N> y, double t1, const IntegratorOptions& opt,
                 OnStep&& on_step) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
  constexpr double safe = 0.9, beta = 0.04, facmin = 0.2, facmax = 10.0;
  constexpr double expo1 = 0.2 - beta * 0.75;

  RunResult res;
  res.t = t0;
  const double span = t1 - t0;
  if (span == 0.0) return res;
  const double dir = span > 0 ? 1.0 : -1.0;
  if (!detail::finite_within(y, opt.escape_radius)) {
    res.status = Status::NonFinite;
    return res;
  }

  auto eval = [&](double t, const Vec<N>& s) {
    ++res.stats.evaluations;
    return f(t, s);
  };
  auto axpy = [](const Vec<N>& base, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
    Vec<N> out = base;
    for (const auto& [c, k] : terms) {
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
  };

  double t = t0;
  Vec<N> k1 = eval(t, y);
  const double h_max = std::min(opt.h_max, std::abs(span));

  double h = opt.h0;
  if (h <= 0.0) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt.tol.abs + opt.tol.rel * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, h_max);
    Vec<N> y1 = axpy(y, dir * h, {{1.0, &k1}});
    Vec<N> k2 = eval(t + dir * h, y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt.tol.abs + opt.tol.rel * std::abs(y[i]);
      der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * std::abs(h), h1, h_max});
  }
  h = std::min(h, h_max) * dir;

  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;
  DenseStep<N> dense;

  while (true) {
    if (steps++ >= opt.max_steps) {
      res.status = Status::StepUnderflow;
      break;
    }
    bool last = false;
    if ((t + 1.01 * h - t1) * dir >= 0.0) {
      h = t1 - t;
      last = true;
    }
    if (std::abs(h) <= 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      res.status = Status::StepUnderflow;
      break;
    }
    const Vec<N> k2 = eval(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const Vec<N> k3 = eval(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec<N> k4 = eval(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec<N> k5 = eval(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec<N> k6 =
        eval(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec<N> ynew = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const Vec<N> k7 = eval(t + h, ynew);

    Vec<N> err;
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    double en = detail::error_norm(err, y, ynew, opt.tol);
    bool ok_values = true;
    for (std::size_t i = 0; i < N; ++i) ok_values = ok_values && std::isfinite(ynew[i]) && std::isfinite(k7[i]);
    if (!ok_values || !std::isfinite(en)) en = 1e10;

    const double fac11 = std::pow(en, expo1);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(facold, beta);
      fac = std::clamp(fac / safe, 1.0 / facmax, 1.0 / facmin);
      double hnew = h / fac;
      facold = std::max(en, 1e-4);
      ++res.stats.accepted;

      dense.t0 = t;
      dense.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        dense.r[0][i] = y[i];
        dense.r[1][i] = ydiff;
        dense.r[2][i] = bspl;
        dense.r[3][i] = ydiff - h * k7[i] - bspl;
        dense.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t = last ? t1 : t + h;
      y = ynew;
      k1 = k7;
      res.t = t;

      const bool inside = detail::finite_within(y, opt.escape_radius);
      if (!on_step(static_cast<const DenseStep<N>&>(dense))) {
        res.status = Status::Stopped;
        break;
      }
      if (!inside) {
        res.status = Status::NonFinite;
        break;
      }
      if (last) break;
      if (std::abs(hnew) > h_max) hnew = dir * h_max;
      if (last_rejected) hnew = dir * std::min(std::abs(hnew), std::abs(h));
      last_rejected = false;
      h = hnew;
    } else {
      ++res.stats.rejected;
      h = h / std::min(1.0 / facmin, fac11 / safe);
      last_rejected = true;
      if (!ok_values && std::abs(h) < 1e-12) {
        res.status = Status::NonFinite;
        break;
      }
    }
  }
  return res;
}

/// Vector field of a planar system, f(t, s).
using PlanarField = std::function<State(double, State)>;
/// Scalar section function; crossings are its sign changes.
using Section = std::function<double(State)>;

enum class Direction { Up, Down, Both };

struct TrajectorySample {
  double t;
  State s;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<DenseStep<2>> steps;
  Tolerance tol{};
  StepStats stats{};
  Status status = Status::Success;

  [[nodiscard]] bool ok() const noexcept { return status == Status::Success; }
  [[nodiscard]] const State& final_state() const { return samples.back().s; }
  /// Dense-output value at t within the integrated span.
  [[nodiscard]] State at(double t) const;
};

struct SectionEvent {
  double t;
  State state;
  Direction direction;
};

[[nodiscard]] inline Vec<2> to_vec(State s) noexcept { return {s.x, s.y}; }
[[nodiscard]] inline State to_state(const Vec<2>& v) noexcept { return {v[0], v[1]}; }

/// Integrates `field` from s0 over t_span, recording every accepted step.
/// Tolerances must lie in [1e-13, 1e-3] (Error{InvalidParams} otherwise).
[[nodiscard]] Trajectory integrate(const PlanarField& field, State s0, std::pair<double, double> t_span,
                                   Tolerance tol, const IntegratorOptions& extra = {});

/// All crossings of the requested direction, refined on the dense output.
[[nodiscard]] std::vector<SectionEvent> detect_crossings(const Trajectory& traj, const Section& section,
                                                         Direction direction);

/// Integrates until the first crossing in the requested direction (or t_max).
/// Crossings rejected by `accept` are skipped. `status` receives the run outcome.
[[nodiscard]] std::optional<SectionEvent> first_crossing(const PlanarField& field, State s0, double t0,
                                                         double t_max, const Section& section,
                                                         Direction direction, const IntegratorOptions& opt,
                                                         Status* status = nullptr,
                                                         const std::function<bool(State)>& accept = {});

/// Refines a sign change of `section` inside one dense step. Throws NoConvergence.
[[nodiscard]] SectionEvent refine_crossing(const DenseStep<2>& step, const Section& section);

struct StroboscopicRun {
  std::vector<State> samples;              ///< states at t = k * 2 pi / omega, k = 0..n
  std::vector<TrajectorySample> series;    ///< every accepted step, when requested
  StepStats stats{};
};

/// Samples the forced flow once per forcing period, integrating the autonomous
/// (x, y, theta) extension with theta reset to 0 at every sample.
/// Throws Error{StepUnderflow|NonFinite} on integrator failure.
[[nodiscard]] StroboscopicRun stroboscopic(const Params& p, State s0, std::size_t n,
                                           Tolerance tol = {1e-11, 1e-11}, bool keep_series = false);

/// The time-(periods * 2 pi / omega) map of the forced flow.
[[nodiscard]] State strobe_map(const Params& p, State s, std::size_t periods = 1, Tolerance tol = {1e-11, 1e-11});

}  // namespace qvdp

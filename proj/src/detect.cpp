#include "qvdp/detect.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qvdp/error.hpp"

namespace qvdp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCollapse = 1e-6;
constexpr int kOrbitSamples = 2000;
constexpr double kManifoldOffset = 1e-8;
constexpr double kManifoldBox = 5.0;
constexpr double kManifoldTime = 200.0;
constexpr int kFourierOrder = 32;

double section_origin(const Params& p, const CycleOptions& opt) {
  if (opt.x_min) return *opt.x_min;
  return p.three_equilibria() ? std::sqrt(p.beta() / p.eps()) : 0.0;
}

IntegratorOptions cycle_integrator(const CycleOptions& opt) {
  IntegratorOptions io;
  io.tol = opt.tol;
  io.escape_radius = opt.escape_radius;
  io.max_steps = opt.max_steps;
  return io;
}

PlanarField unforced(const Params& p) {
  return [p](double, State s) { return field_unforced(s, p); };
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Birkhoff average with the smooth bump weight exp(-1/(t(1-t))).
double weighted_mean(const std::vector<double>& d, std::size_t count) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    const double w = std::exp(-1.0 / (t * (1.0 - t)));
    num += w * d[k];
    den += w;
  }
  return num / den;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Chords between angularly adjacent samples, cyclically.
std::vector<double> neighbour_chords(const std::vector<State>& pts, State c) {
  std::vector<std::pair<double, State>> byangle;
  byangle.reserve(pts.size());
  for (const State& s : pts) byangle.emplace_back(std::atan2(s.y - c.y, s.x - c.x), s);
  std::sort(byangle.begin(), byangle.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> chords;
  chords.reserve(byangle.size());
  for (std::size_t i = 0; i < byangle.size(); ++i) {
    chords.push_back(norm(byangle[(i + 1) % byangle.size()].second - byangle[i].second));
  }
  return chords;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<ReturnHit> return_map(const Params& p, double x, const CycleOptions& opt) {
  const double x_min = section_origin(p, opt);
  Status st{};
  const auto ev = first_crossing(
      unforced(p), {x, 0.0}, 0.0, opt.max_return_time, [](State s) { return s.y; }, Direction::Down,
      cycle_integrator(opt), &st, [x_min](State s) { return s.x > x_min; });
  if (!ev) return std::nullopt;
  return ReturnHit{ev->state.x, ev->t};
}

int winding_number(const std::vector<State>& closed, State point) {
  if (closed.size() < 3) return 0;
  double total = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    const State a = closed[i] - point;
    const State b = closed[(i + 1) % closed.size()] - point;
    total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::optional<LimitCycle> find_limit_cycle(const Params& p, State seed, const CycleOptions& opt) {
  const double x_min = section_origin(p, opt);
  Status st{};
  const auto first = first_crossing(
      unforced(p), seed, 0.0, opt.max_return_time, [](State s) { return s.y; }, Direction::Down,
      cycle_integrator(opt), &st, [x_min](State s) { return s.x > x_min; });
  if (!first) return std::nullopt;

  double x = first->state.x;
  std::optional<double> fixed;
  std::vector<double> history;

  // damped secant on F(x) = P(x) - x, started from two consecutive iterates
  auto secant = [&](double xa, double fa, double xb, double fb) -> std::optional<double> {
    for (int it = 0; it < opt.max_secant; ++it) {
      if (fb == fa) return std::nullopt;
      double step = -fb * (xb - xa) / (fb - fa);
      const double room = 0.5 * (xb - x_min);
      if (std::abs(step) > room) step = std::copysign(room, step);
      const double xc = xb + step;
      if (!(xc - x_min > kCollapse)) return std::nullopt;
      const auto r = return_map(p, xc, opt);
      if (!r) return std::nullopt;
      const double fc = r->x - xc;
      if (std::abs(fc) < opt.residual_tol) return xc;
      xa = xb;
      fa = fb;
      xb = xc;
      fb = fc;
    }
    return std::nullopt;
  };

  double x_prev = 0.0;
  double f_prev = 0.0;
  int last_secant = -100;
  for (int k = 0; k < opt.max_iterations && !fixed; ++k) {
    const auto r = return_map(p, x, opt);
    if (!r) return std::nullopt;
    if (r->x - x_min < kCollapse) return std::nullopt;
    const double f = r->x - x;
    history.push_back(f);
    if (std::abs(f) < opt.residual_tol) {
      fixed = x;
      break;
    }
    if (k >= 2 && std::abs(f) < 1e-3 * (x - x_min) && k - last_secant >= 10) {
      last_secant = k;
      fixed = secant(x_prev, f_prev, x, f);
      if (fixed) break;
    }
    x_prev = x;
    f_prev = f;
    x = r->x;
  }
  if (!fixed) {
    const std::size_t tail = std::min<std::size_t>(history.size(), 20);
    const bool shrinking = std::all_of(history.end() - static_cast<std::ptrdiff_t>(tail), history.end(),
                                       [](double f) { return f < 0.0; });
    const bool growing = std::all_of(history.end() - static_cast<std::ptrdiff_t>(tail), history.end(),
                                     [](double f) { return f > 0.0; });
    if (shrinking || growing) return std::nullopt;
    throw Error(ErrorCode::NoConvergence, "return-map fixed point iteration did not converge");
  }

  const double xs = *fixed;
  const auto hit = return_map(p, xs, opt);
  if (!hit) throw Error(ErrorCode::NoConvergence, "cycle representative does not return");

  const double h = std::min(1e-5, 0.25 * (xs - x_min));
  const auto rp = return_map(p, xs + h, opt);
  const auto rm = return_map(p, xs - h, opt);
  if (!rp || !rm) throw Error(ErrorCode::NoConvergence, "return map undefined next to the cycle");
  const double floquet = (rp->x - rm->x) / (2.0 * h);

  LimitCycle lc{};
  lc.representative = {xs, 0.0};
  lc.period = hit->time;
  lc.floquet = floquet;
  lc.stable = std::abs(floquet) < 1.0;
  lc.residual = std::abs(hit->x - xs);

  const Trajectory traj = integrate(unforced(p), lc.representative, {0.0, lc.period}, opt.tol);
  lc.orbit.reserve(kOrbitSamples);
  for (int i = 0; i < kOrbitSamples; ++i) {
    lc.orbit.push_back(traj.at(lc.period * i / kOrbitSamples));
  }
  double amp = 0.0;
  for (const State& s : lc.orbit) amp = std::max(amp, std::abs(s.x));
  for (const auto& smp : traj.samples) amp = std::max(amp, std::abs(smp.s.x));
  lc.amplitude = amp;
  for (const Equilibrium& e : find_equilibria(p)) {
    if (winding_number(lc.orbit, e.location) != 0) lc.encloses.push_back(e.label);
  }
  return lc;
}

// ---------------------------------------------------------------------------

SeparatrixSplit separatrix_split(const Params& p, Branch branch) {
  if (!p.three_equilibria()) throw Error(ErrorCode::Domain, "separatrix_split requires beta > 0 and eps > 0");
  const double mu = p.mu();
  const double root = std::sqrt(mu * mu + 4.0 * p.beta());
  const double lu = 0.5 * (mu + root);
  const double ls = 0.5 * (mu - root);
  const double side = branch == Branch::Right ? 1.0 : -1.0;
  auto launch = [&](double lam) {
    const double n = std::hypot(1.0, lam);
    return State{side * kManifoldOffset / n, side * kManifoldOffset * lam / n};
  };

  IntegratorOptions io;
  io.tol = {1e-13, 1e-13};
  io.escape_radius = kManifoldBox;
  const Section sec = [](State s) { return s.y; };
  auto on_side = [side](State s) { return side * s.x > 0.0; };

  auto shoot = [&](State s0, double t_end, Direction dir) {
    Status st{};
    const auto ev = first_crossing(unforced(p), s0, 0.0, t_end, sec, dir, io, &st, on_side);
    if (!ev) {
      if (st == Status::NonFinite) {
        throw Error(ErrorCode::ManifoldEscape, "separatrix left the box |x|, |y| <= 5");
      }
      throw Error(ErrorCode::NoConvergence, "separatrix did not reach the section");
    }
    return ev->state.x;
  };
  const Direction down = branch == Branch::Right ? Direction::Down : Direction::Up;
  const Direction up = branch == Branch::Right ? Direction::Up : Direction::Down;
  const double xu = shoot(launch(lu), kManifoldTime, down);
  const double xs = shoot(launch(ls), -kManifoldTime, up);
  return {mu, side * (xu - xs), xu, xs};
}

double separatrix_root(double beta, double eps, double lo, double hi, double tol) {
  const Params base(lo, beta, eps);
  double dlo = separatrix_split(base.with_mu(lo)).distance;
  const double dhi = separatrix_split(base.with_mu(hi)).distance;
  if ((dlo > 0) == (dhi > 0)) throw Error(ErrorCode::NoConvergence, "separatrix distance does not change sign");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double dm = separatrix_split(base.with_mu(mid)).distance;
    if ((dm > 0) == (dlo > 0)) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Equilibrium: return "equilibrium";
    case Verdict::PeriodicLocked: return "periodic_locked";
    case Verdict::QuasiPeriodic: return "quasi_periodic";
    case Verdict::Irregular: return "irregular";
  }
  return "unknown";
}

std::optional<RotationEstimate> rotation_number(const std::vector<State>& samples, State center,
                                                Orientation orientation) {
  if (samples.size() < 200) return std::nullopt;
  const double sign = orientation == Orientation::Clockwise ? -1.0 : 1.0;
  std::vector<double> d;
  d.reserve(samples.size() - 1);
  double prev = std::atan2(samples[0].y - center.y, samples[0].x - center.x);
  bool any_pos = false;
  bool any_neg = false;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = std::atan2(samples[i].y - center.y, samples[i].x - center.x);
    const double inc = sign * wrap_angle(a - prev);
    prev = a;
    if (inc > 0.0) any_pos = true;
    if (inc <= 0.0) any_neg = true;
    d.push_back(inc);
  }
  if (any_pos && any_neg) return std::nullopt;
  const double full = weighted_mean(d, d.size()) / (2.0 * kPi);
  const double half = weighted_mean(d, d.size() / 2) / (2.0 * kPi);
  RotationEstimate est{full - std::floor(full), std::abs(full - half), std::nullopt};
  if (est.value >= 1.0) est.value = 0.0;
  for (int q = 1; q <= kMaxLockPeriod && !est.locked; ++q) {
    const double pq = std::round(est.value * q);
    if (std::abs(est.value - pq / q) < kRevisitTolerance) {
      est.locked = std::pair<int, int>{static_cast<int>(pq) % q, q};
    }
  }
  return est;
}

AttractorReport classify_samples(const Params& p, const std::vector<State>& samples) {
  AttractorReport rep{Verdict::Irregular, std::nullopt, {}};
  AttractorEvidence& ev = rep.evidence;
  ev.samples = samples.size();
  ev.transient = samples.size() / 10;
  const std::vector<State> tail(samples.begin() + static_cast<std::ptrdiff_t>(ev.transient), samples.end());
  if (tail.size() < 2 * kMaxLockPeriod + 2) {
    throw Error(ErrorCode::InvalidParams, "classify_forced needs more stroboscopic samples");
  }

  const std::size_t last = std::max<std::size_t>(tail.size() / 10, 2);
  for (std::size_t k = tail.size() - last; k + 1 < tail.size(); ++k) {
    ev.tail_step = std::max(ev.tail_step, norm(tail[k + 1] - tail[k]));
  }
  if (ev.tail_step < kRevisitTolerance) {
    rep.verdict = Verdict::Equilibrium;
    return rep;
  }

  ev.revisit_distance = std::numeric_limits<double>::infinity();
  const std::size_t from = tail.size() / 2;
  for (int q = 1; q <= kMaxLockPeriod; ++q) {
    double worst = 0.0;
    for (std::size_t k = from; k + static_cast<std::size_t>(q) < tail.size(); ++k) {
      worst = std::max(worst, norm(tail[k + static_cast<std::size_t>(q)] - tail[k]));
    }
    if (worst < ev.revisit_distance) ev.revisit_distance = worst;
    if (worst < kRevisitTolerance && ev.revisit_period == 0) ev.revisit_period = q;
  }
  if (ev.revisit_period > 0) {
    rep.verdict = Verdict::PeriodicLocked;
    // polish the locked orbit with Newton on the q-fold stroboscopic map
    State s = tail.back();
    const auto q = static_cast<std::size_t>(ev.revisit_period);
    for (int it = 0; it < 20; ++it) {
      const State g = strobe_map(p, s, q) - s;
      ev.periodic_residual = norm(g);
      if (ev.periodic_residual < 1e-11) break;
      const double h = 1e-7;
      const State gx = strobe_map(p, s + State{h, 0.0}, q) - (s + State{h, 0.0});
      const State gy = strobe_map(p, s + State{0.0, h}, q) - (s + State{0.0, h});
      const double a = (gx.x - g.x) / h, b = (gy.x - g.x) / h;
      const double c = (gx.y - g.y) / h, d = (gy.y - g.y) / h;
      const double det = a * d - b * c;
      if (det == 0.0) break;
      s = s - State{(d * g.x - b * g.y) / det, (-c * g.x + a * g.y) / det};
    }
    return rep;
  }

  State c{};
  for (const State& s : tail) c = c + s;
  c = (1.0 / static_cast<double>(tail.size())) * c;
  ev.centroid = c;

  const auto rot = rotation_number(tail, c, Orientation::Clockwise);
  ev.monotone_winding = rot.has_value();
  if (rot) {
    rep.rotation_number = rot->value;
    ev.rotation_error = rot->error;
  }

  // closure: how well a smooth closed curve r(theta) explains the samples
  const auto m = static_cast<Eigen::Index>(tail.size());
  Eigen::MatrixXd A(m, 2 * kFourierOrder + 1);
  Eigen::VectorXd r(m);
  std::vector<double> angles;
  angles.reserve(tail.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const State d = tail[static_cast<std::size_t>(i)] - c;
    const double th = std::atan2(d.y, d.x);
    angles.push_back(th);
    r(i) = norm(d);
    A(i, 0) = 1.0;
    for (int j = 1; j <= kFourierOrder; ++j) {
      A(i, 2 * j - 1) = std::cos(j * th);
      A(i, 2 * j) = std::sin(j * th);
    }
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(r);
  const Eigen::VectorXd misfit = A * coef - r;
  ev.closure_residual = std::sqrt(misfit.squaredNorm() / static_cast<double>(m)) / r.mean();

  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * kPi - angles.back();
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) gap = std::max(gap, angles[i + 1] - angles[i]);
  ev.max_angle_gap = gap;

  const std::vector<double> chords = neighbour_chords(tail, c);
  const double med = median(chords);
  ev.gap_ratio = med > 0.0 ? *std::max_element(chords.begin(), chords.end()) / med : 0.0;
  const std::vector<State> first_half(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2));
  const double med_half = median(neighbour_chords(first_half, c));
  ev.chord_ratio = med > 0.0 ? med_half / med : 0.0;

  const bool closed = ev.closure_residual < kClosureThreshold && ev.max_angle_gap < kMaxAngleGap;
  const bool converged = rot && rot->error < kRotationConvergence;
  const bool irrational = rot && !rot->locked;
  if (ev.monotone_winding && closed && converged && irrational) rep.verdict = Verdict::QuasiPeriodic;
  return rep;
}

AttractorReport classify_forced(const Params& p, State s0, std::size_t n) {
  const StroboscopicRun run = stroboscopic(p, s0, n);
  return classify_samples(p, run.samples);
}

}  // namespace qvdp

#include "qvdp/integrate.hpp"

#include <numbers>
#include <string>

#include "qvdp/error.hpp"

namespace qvdp {

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Success: return "success";
    case Status::StepUnderflow: return "step_underflow";
    case Status::NonFinite: return "non_finite";
    case Status::Stopped: return "stopped";
  }
  return "unknown";
}

namespace {

constexpr int kMaxRefineIterations = 100;
constexpr double kSectionTol = 1e-10;

void check_tolerance(Tolerance tol) {
  auto in_range = [](double v) { return v >= 1e-13 && v <= 1e-3; };
  if (!in_range(tol.abs) || !in_range(tol.rel)) {
    throw Error(ErrorCode::InvalidParams, "tolerances must lie in [1e-13, 1e-3]");
  }
}

bool direction_matches(double before, double after, Direction want) {
  const bool up = before < 0.0 && after >= 0.0;
  const bool down = before > 0.0 && after <= 0.0;
  switch (want) {
    case Direction::Up: return up;
    case Direction::Down: return down;
    case Direction::Both: return up || down;
  }
  return false;
}

}  // namespace

State Trajectory::at(double t) const {
  if (steps.empty()) return samples.front().s;
  const bool forward = steps.front().h > 0;
  auto before = [&](const DenseStep<2>& st, double v) { return forward ? st.t1() < v : st.t1() > v; };
  auto it = std::partition_point(steps.begin(), steps.end(), [&](const DenseStep<2>& st) { return before(st, t); });
  if (it == steps.end()) --it;
  return to_state(it->eval(t));
}

Trajectory integrate(const PlanarField& field, State s0, std::pair<double, double> t_span, Tolerance tol,
                     const IntegratorOptions& extra) {
  check_tolerance(tol);
  IntegratorOptions opt = extra;
  opt.tol = tol;
  Trajectory traj;
  traj.tol = tol;
  traj.samples.push_back({t_span.first, s0});
  auto f = [&](double t, const Vec<2>& v) { return to_vec(field(t, to_state(v))); };
  const RunResult r = dopri5<2>(f, t_span.first, to_vec(s0), t_span.second, opt, [&](const DenseStep<2>& st) {
    traj.steps.push_back(st);
    traj.samples.push_back({st.t1(), to_state(st.y1())});
    return true;
  });
  if (!is_finite(s0)) traj.status = Status::NonFinite;
  else traj.status = r.status;
  traj.stats = r.stats;
  if (!traj.samples.empty() && !is_finite(traj.samples.back().s)) {
    traj.samples.pop_back();
    traj.steps.pop_back();
  }
  return traj;
}

SectionEvent refine_crossing(const DenseStep<2>& step, const Section& section) {
  double ta = step.t0;
  double tb = step.t1();
  double fa = section(to_state(step.eval(ta)));
  double fb = section(to_state(step.eval(tb)));
  const Direction dir = fa < fb ? Direction::Up : Direction::Down;
  if (fa == 0.0) return {ta, to_state(step.eval(ta)), dir};
  if (fb == 0.0) return {tb, to_state(step.eval(tb)), dir};
  int side = 0;
  for (int it = 0; it < kMaxRefineIterations; ++it) {
    // Illinois variant of regula falsi
    const double tc = (ta * fb - tb * fa) / (fb - fa);
    const State sc = to_state(step.eval(tc));
    const double fc = section(sc);
    if (std::abs(fc) < kSectionTol || tb == ta) return {tc, sc, dir};
    if ((fc > 0) == (fb > 0)) {
      tb = tc;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      ta = tc;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
    if (std::abs(tb - ta) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(tc))) {
      const State s = to_state(step.eval(tc));
      if (std::abs(section(s)) < kSectionTol) return {tc, s, dir};
      break;
    }
  }
  throw Error(ErrorCode::NoConvergence, "section crossing refinement did not converge");
}

std::vector<SectionEvent> detect_crossings(const Trajectory& traj, const Section& section, Direction direction) {
  std::vector<SectionEvent> events;
  if (traj.steps.empty()) return events;
  double prev = section(to_state(traj.steps.front().y0()));
  for (const auto& st : traj.steps) {
    const double next = section(to_state(st.y1()));
    if (direction_matches(prev, next, direction)) events.push_back(refine_crossing(st, section));
    prev = next;
  }
  return events;
}

std::optional<SectionEvent> first_crossing(const PlanarField& field, State s0, double t0, double t_max,
                                           const Section& section, Direction direction,
                                           const IntegratorOptions& opt, Status* status,
                                           const std::function<bool(State)>& accept) {
  check_tolerance(opt.tol);
  std::optional<SectionEvent> hit;
  double prev = section(s0);
  auto f = [&](double t, const Vec<2>& v) { return to_vec(field(t, to_state(v))); };
  const RunResult r = dopri5<2>(f, t0, to_vec(s0), t_max, opt, [&](const DenseStep<2>& st) {
    const double next = section(to_state(st.y1()));
    if (std::isfinite(next) && direction_matches(prev, next, direction)) {
      SectionEvent ev = refine_crossing(st, section);
      if (!accept || accept(ev.state)) {
        hit = ev;
        return false;
      }
    }
    prev = next;
    return true;
  });
  if (status != nullptr) *status = hit ? Status::Success : r.status;
  return hit;
}

StroboscopicRun stroboscopic(const Params& p, State s0, std::size_t n, Tolerance tol, bool keep_series) {
  check_tolerance(tol);
  if (tol.abs > 1e-10 || tol.rel > 1e-10) {
    throw Error(ErrorCode::InvalidParams, "stroboscopic sampling requires tolerances <= 1e-10");
  }
  const double period = p.period();
  const double omega = p.omega();
  auto f = [&](double, const Vec<3>& v) {
    const double x = v[0];
    const double y = v[1];
    const double x2 = x * x;
    return Vec<3>{y,
                  (p.mu() + x2 - x2 * x2) * y + x * (p.beta() - p.eps() * x2) - p.alpha() * x * std::cos(v[2]),
                  omega};
  };
  IntegratorOptions opt;
  opt.tol = tol;
  StroboscopicRun run;
  run.samples.reserve(n + 1);
  run.samples.push_back(s0);
  if (keep_series) run.series.push_back({0.0, s0});
  Vec<3> y{s0.x, s0.y, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = static_cast<double>(k) * period;
    Vec<3> end = y;
    const RunResult r = dopri5<3>(f, 0.0, y, period, opt, [&](const DenseStep<3>& st) {
      end = st.y1();
      if (keep_series) run.series.push_back({tk + st.t1(), {end[0], end[1]}});
      return true;
    });
    run.stats.accepted += r.stats.accepted;
    run.stats.rejected += r.stats.rejected;
    run.stats.evaluations += r.stats.evaluations;
    if (r.status != Status::Success) {
      throw Error(r.status == Status::NonFinite ? ErrorCode::NonFinite : ErrorCode::StepUnderflow,
                  "stroboscopic integration failed in period " + std::to_string(k) + ": " + to_string(r.status));
    }
    y = {end[0], end[1], 0.0};
    run.samples.push_back({end[0], end[1]});
  }
  return run;
}

State strobe_map(const Params& p, State s, std::size_t periods, Tolerance tol) {
  const StroboscopicRun run = stroboscopic(p, s, periods, tol, false);
  return run.samples.back();
}

}  // namespace qvdp

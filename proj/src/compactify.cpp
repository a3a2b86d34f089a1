#include "qvdp/compactify.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qvdp/error.hpp"
#include "qvdp/integrate.hpp"

namespace qvdp {

namespace {

constexpr int kProbes = 16;
constexpr double kProbeRadius = 1e-3;
constexpr double kProbeTime = 10.0;
constexpr double kExitRadius = 10.0 * kProbeRadius;

}  // namespace

ChartPoint to_chart(State s, Chart chart) {
  switch (chart) {
    case Chart::U:
      if (s.x == 0.0) throw Error(ErrorCode::Domain, "chart U needs x != 0");
      return {Chart::U, s.y / s.x, 1.0 / s.x};
    case Chart::V:
      if (s.y == 0.0) throw Error(ErrorCode::Domain, "chart V needs y != 0");
      return {Chart::V, s.x / s.y, 1.0 / s.y};
    case Chart::Finite: return {Chart::Finite, s.x, s.y};
  }
  return {};
}

State from_chart(const ChartPoint& c) {
  switch (c.chart) {
    case Chart::U:
      if (c.b == 0.0) throw Error(ErrorCode::Domain, "z = 0 lies at infinity");
      return {1.0 / c.b, c.a / c.b};
    case Chart::V:
      if (c.b == 0.0) throw Error(ErrorCode::Domain, "z = 0 lies at infinity");
      return {c.a / c.b, 1.0 / c.b};
    case Chart::Finite: return {c.a, c.b};
  }
  return {};
}

std::pair<double, double> field_chart_u(double u, double z, const Params& p) noexcept {
  const double z2 = z * z;
  const double z4 = z2 * z2;
  const double du = -u - p.eps() * z2 + z2 * u + p.beta() * z4 + p.mu() * z4 * u - u * u * z4;
  const double dz = -z4 * z * u;
  return {du, dz};
}

std::pair<double, double> field_chart_v(double v, double z, const Params& p) noexcept {
  const double z2 = z * z;
  const double z3 = z2 * z;
  const double z4 = z2 * z2;
  const double v2 = v * v;
  const double v3 = v2 * v;
  const double v4 = v2 * v2;
  const double dv = z4 + v4 * v - p.mu() * z4 * v - p.beta() * v2 * z4 - v3 * z2 + p.eps() * v4 * z2;
  const double dz = -p.mu() * z4 * z - v2 * z3 + v4 * z - p.beta() * v * z4 * z + p.eps() * v3 * z3;
  return {dv, dz};
}

std::string_view to_string(InfKind k) noexcept {
  switch (k) {
    case InfKind::Saddle: return "saddle";
    case InfKind::StableNode: return "stable_node";
    case InfKind::UnstableNode: return "unstable_node";
  }
  return "unknown";
}

std::string_view to_string(InfLabel l) noexcept {
  switch (l) {
    case InfLabel::B: return "B";
    case InfLabel::BB: return "BB";
    case InfLabel::C: return "C";
    case InfLabel::CC: return "CC";
  }
  return "?";
}

std::vector<InfinityEquilibrium> infinity_equilibria(const Params& p) {
  const InfKind b = p.eps() <= 0.0 ? InfKind::StableNode : InfKind::Saddle;
  return {{InfLabel::B, {1.0, 0.0}, b},
          {InfLabel::BB, {-1.0, 0.0}, b},
          {InfLabel::C, {0.0, 1.0}, InfKind::UnstableNode},
          {InfLabel::CC, {0.0, -1.0}, InfKind::UnstableNode}};
}

SectorReport verify_infinity_kind(const InfinityEquilibrium& e, const Params& p) {
  const bool chart_u = e.label == InfLabel::B || e.label == InfLabel::BB;
  // the antipodal copy sits at the same chart origin with z of opposite sign
  const double side = (e.label == InfLabel::BB || e.label == InfLabel::CC) ? -1.0 : 1.0;
  // v^10 + z^8 is homogeneous of weight 40 when v has weight 4 and z weight 5
  auto gauge = [](const Vec<2>& w) {
    const double v2 = w[0] * w[0];
    const double v5 = v2 * v2 * w[0];
    const double z4 = w[1] * w[1] * w[1] * w[1];
    return v5 * v5 + z4 * z4;
  };
  auto f = [&](double, const Vec<2>& w) {
    if (chart_u) {
      const auto [du, dz] = field_chart_u(w[0], w[1], p);
      return Vec<2>{du, dz};
    }
    // the leading part of chart V has weight 16; dividing by gauge^(2/5) keeps orbits
    // and lifts the degenerate rates to order one
    const auto [dv, dz] = field_chart_v(w[0], w[1], p);
    const double scale = std::pow(gauge(w), 0.4);
    return Vec<2>{dv / scale, dz / scale};
  };
  IntegratorOptions opt;
  opt.tol = {1e-13, 1e-13};

  SectorReport rep{};
  for (int k = 0; k < kProbes; ++k) {
    const double th = 2.0 * std::numbers::pi * k / kProbes;
    double a0 = kProbeRadius * std::cos(th);
    double z0 = side * kProbeRadius * std::sin(th);
    if (std::abs(z0) < 1e-15) z0 = 0.0;
    const Vec<2> w0{a0, z0};
    Vec<2> w = w0;
    const RunResult r = dopri5<2>(f, 0.0, w0, kProbeTime, opt, [&](const DenseStep<2>& st) {
      w = st.y1();
      return std::max(std::abs(w[0]), std::abs(w[1])) < kExitRadius;
    });
    if (r.status != Status::Success && r.status != Status::Stopped) {
      throw Error(ErrorCode::NoConvergence, std::string("infinity probe integration failed: ") + to_string(r.status));
    }
    ProbeOutcome out;
    if (r.status == Status::Stopped) {
      out = ProbeOutcome::Leave;
    } else if (z0 == 0.0) {
      out = std::abs(w[0]) < std::abs(a0) ? ProbeOutcome::Approach : ProbeOutcome::Leave;
    } else if (chart_u) {
      const auto [du, dz] = field_chart_u(w[0], w[1], p);
      (void)du;
      out = w[1] * dz > 0.0 ? ProbeOutcome::Leave : ProbeOutcome::Approach;
    } else {
      out = gauge(w) > gauge(w0) ? ProbeOutcome::Leave : ProbeOutcome::Approach;
    }
    rep.angles.push_back(th);
    rep.outcomes.push_back(out);
  }
  int changes = 0;
  for (std::size_t i = 0; i < rep.outcomes.size(); ++i) {
    if (rep.outcomes[i] != rep.outcomes[(i + 1) % rep.outcomes.size()]) ++changes;
  }
  rep.runs = changes == 0 ? 1 : changes;
  if (changes == 0) {
    rep.inferred = rep.outcomes.front() == ProbeOutcome::Approach ? InfKind::StableNode : InfKind::UnstableNode;
  } else {
    rep.inferred = InfKind::Saddle;
  }
  rep.consistent = rep.inferred == e.kind && (changes == 0 || changes == 4);
  return rep;
}

State disk_project(State s) noexcept {
  const double d = 1.0 + std::sqrt(1.0 + s.x * s.x + s.y * s.y);
  return {s.x / d, s.y / d};
}

}  // namespace qvdp

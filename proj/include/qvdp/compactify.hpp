#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp {

enum class Chart { U, V, Finite };

/// A point in one of the Poincare charts: U has x = 1/z, y = u/z; V has x = v/z, y = 1/z.
struct ChartPoint {
  Chart chart = Chart::Finite;
  double a = 0.0;  ///< u (chart U), v (chart V) or x (finite)
  double b = 0.0;  ///< z, or y for finite points
};

[[nodiscard]] ChartPoint to_chart(State s, Chart chart);
[[nodiscard]] State from_chart(const ChartPoint& c);

/// Chart U field after the time rescale dt = z^4 dtau. Returns (du/dtau, dz/dtau).
[[nodiscard]] std::pair<double, double> field_chart_u(double u, double z, const Params& p) noexcept;
/// Chart V field after the time rescale dt = z^4 dtau. Returns (dv/dtau, dz/dtau).
[[nodiscard]] std::pair<double, double> field_chart_v(double v, double z, const Params& p) noexcept;

enum class InfKind { Saddle, StableNode, UnstableNode };
enum class InfLabel { B, BB, C, CC };  ///< (1,0), (-1,0), (0,1), (0,-1) on the equator

[[nodiscard]] std::string_view to_string(InfKind k) noexcept;
[[nodiscard]] std::string_view to_string(InfLabel l) noexcept;

struct InfinityEquilibrium {
  InfLabel label;
  State disk_location;
  InfKind kind;
};

/// The four equilibria on the equator; B, BB are stable nodes for eps <= 0 and saddles
/// for eps > 0; C, CC are always unstable nodes.
[[nodiscard]] std::vector<InfinityEquilibrium> infinity_equilibria(const Params& p);

enum class ProbeOutcome { Approach, Leave };

struct SectorReport {
  std::vector<double> angles;
  std::vector<ProbeOutcome> outcomes;
  int runs;          ///< cyclic runs of equal outcomes around the point
  InfKind inferred;  ///< saddle for 4 runs, node when all outcomes agree
  bool consistent;   ///< inferred == catalogued kind
};

/// Integrates 16 probes at radius 1e-3 around the chart origin for rescaled time 10
/// and reads off approach or departure. Equator probes (z = 0) are judged by the
/// contraction along the equator. Off the equator, chart U probes are judged by the
/// sign of z dz/dtau once the fast direction has relaxed, and chart V probes by the
/// change of the quasi-homogeneous gauge v^10 + z^8 under an orbit-preserving time
/// rescale that removes the degenerate slow-down.
[[nodiscard]] SectorReport verify_infinity_kind(const InfinityEquilibrium& e, const Params& p);

/// Radial compression onto the open unit disk, s / (1 + sqrt(1 + |s|^2)).
[[nodiscard]] State disk_project(State s) noexcept;

}  // namespace qvdp

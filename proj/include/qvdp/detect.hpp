#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qvdp/equilibria.hpp"
#include "qvdp/integrate.hpp"
#include "qvdp/model.hpp"

namespace qvdp {

// ---------------------------------------------------------------------------
// Limit cycles

struct CycleOptions {
  /// Section is the ray y = 0, x > x_min, crossed downward. Defaults to x2 when
  /// E1, E2 exist and to 0 otherwise.
  std::optional<double> x_min;
  Tolerance tol{1e-12, 1e-12};
  double max_return_time = 500.0;
  double escape_radius = 50.0;
  /// Per return; stiff drift toward infinity counts as no return.
  std::size_t max_steps = 200'000;
  int max_iterations = 400;
  int max_secant = 60;
  double residual_tol = 1e-10;
};

struct LimitCycle {
  State representative;
  double period;
  double amplitude;  ///< max |x| on the cycle
  double floquet;    ///< derivative of the return map at the fixed point
  bool stable;
  std::vector<EqLabel> encloses;
  double residual;            ///< |P(x*) - x*|
  std::vector<State> orbit;   ///< one period, uniformly sampled in time
};

/// Result of one return-map evaluation from a point (x, 0) on the section.
struct ReturnHit {
  double x;
  double time;
};

/// Poincare return map on the cycle section; nullopt when the orbit escapes or
/// does not come back within max_return_time.
[[nodiscard]] std::optional<ReturnHit> return_map(const Params& p, double x, const CycleOptions& opt = {});

/// Locates a limit cycle reached from `seed`. Returns nullopt when the orbit
/// escapes, stops returning, or collapses onto the equilibrium at the section
/// origin. Throws Error{NoConvergence} when the fixed-point solve stalls.
[[nodiscard]] std::optional<LimitCycle> find_limit_cycle(const Params& p, State seed, const CycleOptions& opt = {});

/// Winding number of a closed polyline around a point.
[[nodiscard]] int winding_number(const std::vector<State>& closed, State point);

// ---------------------------------------------------------------------------
// Separatrices

enum class Branch { Right, Left };

struct SeparatrixSplit {
  double mu;
  double distance;     ///< x_unstable - x_stable on the section (mirrored for Branch::Left)
  double x_unstable;
  double x_stable;
};

/// Shoots the unstable and stable manifolds of the saddle O to their first
/// crossing of y = 0 on the chosen side. Throws Error{ManifoldEscape} when a branch
/// leaves the box |x|, |y| <= 5 and Error{Domain} unless beta > 0, eps > 0.
[[nodiscard]] SeparatrixSplit separatrix_split(const Params& p, Branch branch = Branch::Right);

/// Bisection root in mu of separatrix_split over [lo, hi].
[[nodiscard]] double separatrix_root(double beta, double eps, double lo, double hi, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Rotation numbers and forced attractors

enum class Orientation { Counterclockwise, Clockwise };

struct RotationEstimate {
  double value;  ///< in [0, 1)
  double error;  ///< |rho(N) - rho(N/2)|
  std::optional<std::pair<int, int>> locked;  ///< p/q with q <= 32 within 1e-6
};

/// Weighted Birkhoff average of angular increments about `center`, in turns.
/// Needs at least 200 samples; nullopt when the winding is not monotone.
[[nodiscard]] std::optional<RotationEstimate> rotation_number(const std::vector<State>& samples, State center,
                                                              Orientation orientation = Orientation::Counterclockwise);

enum class Verdict { Equilibrium, PeriodicLocked, QuasiPeriodic, Irregular };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct AttractorEvidence {
  std::size_t samples = 0;
  std::size_t transient = 0;
  double tail_step = 0.0;          ///< largest step among the final samples
  int revisit_period = 0;          ///< q of the best revisit test, 0 if none passed
  double revisit_distance = 0.0;   ///< best max |s_{k+q} - s_k| over q <= 32
  State centroid{};
  bool monotone_winding = false;
  double closure_residual = 0.0;   ///< relative RMS misfit of a Fourier fit r(theta)
  double max_angle_gap = 0.0;      ///< radians
  double gap_ratio = 0.0;          ///< max / median chord between angular neighbours
  double chord_ratio = 0.0;        ///< median chord at half the samples over median chord at all
  double rotation_error = 0.0;
  double periodic_residual = 0.0;  ///< Newton residual of the locked orbit, when polished
};

struct AttractorReport {
  Verdict verdict;
  std::optional<double> rotation_number;
  AttractorEvidence evidence;
};

inline constexpr double kClosureThreshold = 1e-3;
inline constexpr double kMaxAngleGap = 0.7853981633974483;  // pi/4
inline constexpr double kRotationConvergence = 1e-8;
inline constexpr double kRevisitTolerance = 1e-6;
inline constexpr int kMaxLockPeriod = 32;

/// Classifies the forced attractor reached from s0 using n stroboscopic samples.
[[nodiscard]] AttractorReport classify_forced(const Params& p, State s0, std::size_t n);
/// Same, on precomputed stroboscopic samples.
[[nodiscard]] AttractorReport classify_samples(const Params& p, const std::vector<State>& samples);

}  // namespace qvdp

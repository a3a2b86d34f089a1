#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Pitchfork

enum class PitchforkKind { Supercritical, Subcritical };

struct PitchforkReduction {
  double linear_coeff;  ///< -beta/mu
  double cubic_coeff;   ///< eps/mu
  PitchforkKind kind;

  /// Nonzero fixed points +-sqrt(-linear/cubic) of the reduced flow, if real.
  [[nodiscard]] std::optional<double> branch() const;
};

[[nodiscard]] std::string_view to_string(PitchforkKind k) noexcept;

/// Center-manifold flow x' = (-beta/mu) x + (eps/mu) x^3 near beta = 0.
/// Throws Error{Domain} when mu == 0 or eps <= 0.
[[nodiscard]] PitchforkReduction pitchfork_reduction(const Params& p);

// ---------------------------------------------------------------------------
// Hopf

/// Hopf curve mu_c(beta, eps). Throws Error{Domain} unless beta > 0 and eps > 0.
[[nodiscard]] double hopf_curve(double beta, double eps);

struct HopfData {
  cplx lambda;                          ///< delta + i omega at the given mu
  std::map<std::pair<int, int>, cplx> g;  ///< g_kl, 2 <= k + l <= 3, derivative convention
  cplx c1;                              ///< at the given mu
  cplx c1_critical;                     ///< at mu = mu_c
  double l1;                            ///< Re c1(mu_c) / omega(mu_c)
  double ddelta_dmu;
  double alpha;                         ///< delta / omega
  double e1;                            ///< Im c1 / omega
  double l1_alpha;                      ///< Re(c1 / omega) - alpha e1

  [[nodiscard]] double delta() const noexcept { return lambda.real(); }
  [[nodiscard]] double omega() const noexcept { return lambda.imag(); }
};

/// Nonlinear coefficients of z' = lambda z + sum g_kl z^k zbar^l / (k! l!) at E2,
/// in coordinates x - x2 = z/lambda + zbar/lambdabar, y = z + zbar.
/// Throws Error{Domain} when E2 is not a focus.
[[nodiscard]] std::map<std::pair<int, int>, cplx> hopf_coefficients(const Params& p);

/// Throws Error{Domain} unless beta > 0, eps > 0 and mu1 < mu < mu2.
[[nodiscard]] HopfData hopf_normal_form(const Params& p);

struct HopfCyclePrediction {
  bool exists;
  double radius;       ///< sqrt(alpha) in normalized coordinates
  double z_modulus;    ///< |z| = sqrt(delta / |Re c1(mu_c)|)
  double x_amplitude;  ///< half-width in x around E2
  double y_amplitude;  ///< half-width in y
};

/// Leading-order cycle size from the cubic normal form; only meaningful near mu_c.
[[nodiscard]] HopfCyclePrediction hopf_cycle_prediction(const Params& p);

/// Quantities of the forced-system reduction at mu = mu_c + xi.
struct ForcedReduction {
  double xi;
  double re_lambda;
  double im_lambda;
  cplx c1;
  double rho0;  ///< -Re lambda / Re c1
  double h1;    ///< -xi
  double w1;    ///< Im lambda - Re lambda Im c1 / Re c1
};

[[nodiscard]] ForcedReduction forced_reduction(double beta, double eps, double xi);

// ---------------------------------------------------------------------------
// Melnikov / homoclinic

enum class MelnikovMethod { ClosedForm, Quadrature };

struct MelnikovResult {
  double value;
  MelnikovMethod method;
  double mu3;
  double error_estimate = 0.0;
};

/// Throws Error{Domain} unless beta > 0 and eps > 0.
[[nodiscard]] MelnikovResult melnikov(double mu, double beta, double eps, double eps1, MelnikovMethod method);

/// Homoclinic curve mu3 = 32 beta^2/(35 eps^2) - 4 beta/(5 eps).
[[nodiscard]] double homoclinic_curve(double beta, double eps);

/// Unperturbed homoclinic orbit through (sqrt(2 beta/eps), 0) at t = 0.
[[nodiscard]] State homoclinic_orbit(double t, double beta, double eps);

struct MelnikovComparison {
  double closed_form;
  double quadrature;
  double mu3;
  double relative_diff;
};

[[nodiscard]] MelnikovComparison melnikov_compare(double mu, double beta, double eps, double eps1 = 1.0);

// ---------------------------------------------------------------------------
// Non-existence and regions

enum class CertificateKind { Dulac, Index, Energy };

struct Certificate {
  CertificateKind kind;
  std::string reason;
};

[[nodiscard]] std::string_view to_string(CertificateKind k) noexcept;

/// All applicable certificates ruling out cycles and homoclinic loops, in the
/// order Dulac, Index, Energy.
[[nodiscard]] std::vector<Certificate> nonexistence_certificates(const Params& p);
/// First applicable certificate, if any.
[[nodiscard]] std::optional<Certificate> nonexistence_certificate(const Params& p);

enum class Region {
  NoCycleSaddleOnly,
  NoCycleEnergy,
  NoCycleDulac,
  SingleSmallCycle,
  TwoSmallCycles,
  HomoclinicPair,
  LargeCycle,
  ThreeEqNoCycle,
  Unresolved,
};

[[nodiscard]] std::string_view to_string(Region r) noexcept;

struct RegionLabel {
  Region label;
  char regime;  ///< portrait regime 'a'..'f', or '-' when none applies
  std::vector<std::string> certificates;
  bool homoclinic_proximal = false;  ///< |mu - mu3| <= kHomoclinicProximity
};

inline constexpr double kCurveTolerance = 1e-9;
inline constexpr double kHomoclinicProximity = 1e-3;

[[nodiscard]] RegionLabel classify_region(const Params& p);

}  // namespace qvdp

#pragma once

#include <array>
#include <cmath>

namespace qvdp {

/// Parameters of  x' = y,  y' = (mu + x^2 - x^4) y + beta x - eps x^3 - alpha x cos(omega t).
///
/// Validation happens once, at construction; field evaluation never re-checks.
class Params {
 public:
  /// Throws Error{InvalidParams} when beta < 0, beta == eps == 0 (a whole line
  /// of equilibria), omega <= 0, or any value is non-finite.
  Params(double mu, double beta, double eps, double alpha = 0.0, double omega = 1.0);

  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double eps() const noexcept { return eps_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double omega() const noexcept { return omega_; }

  [[nodiscard]] bool forced() const noexcept { return alpha_ != 0.0; }
  [[nodiscard]] bool three_equilibria() const noexcept { return beta_ > 0.0 && eps_ > 0.0; }
  /// Forcing period 2 pi / omega.
  [[nodiscard]] double period() const noexcept;

  [[nodiscard]] Params with_mu(double mu) const { return {mu, beta_, eps_, alpha_, omega_}; }
  [[nodiscard]] Params with_alpha(double alpha) const { return {mu_, beta_, eps_, alpha, omega_}; }

 private:
  double mu_;
  double beta_;
  double eps_;
  double alpha_;
  double omega_;
};

struct State {
  double x = 0.0;
  double y = 0.0;

  friend constexpr State operator+(State a, State b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr State operator-(State a, State b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr State operator-(State a) noexcept { return {-a.x, -a.y}; }
  friend constexpr State operator*(double s, State a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(State, State) = default;
};

[[nodiscard]] inline double norm(State s) noexcept { return std::hypot(s.x, s.y); }
[[nodiscard]] inline bool is_finite(State s) noexcept {
  return std::isfinite(s.x) && std::isfinite(s.y);
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Odd polynomial data of the equivalent Lienard system
/// x' = y - F(x), y' = -g(x) with F(x) = -mu x - x^3/3 + x^5/5, g(x) = -beta x + eps x^3.
struct LienardForms {
  std::array<double, 3> f_coeffs;  ///< coefficients of x, x^3, x^5
  std::array<double, 2> g_coeffs;  ///< coefficients of x, x^3

  [[nodiscard]] double F(double x) const noexcept;
  [[nodiscard]] double g(double x) const noexcept;
};

[[nodiscard]] LienardForms lienard_forms(const Params& p) noexcept;

[[nodiscard]] State field_unforced(State s, const Params& p) noexcept;
[[nodiscard]] State field_forced(State s, double t, const Params& p) noexcept;
[[nodiscard]] State field_lienard(State s, const Params& p) noexcept;

/// Maps a state of the original system onto the Lienard plane, (x, y) -> (x, y + F(x)).
[[nodiscard]] State to_lienard(State s, const Params& p) noexcept;

[[nodiscard]] Matrix2 jacobian(State s, const Params& p) noexcept;

/// Divergence of the unforced field; independent of y, beta and eps.
[[nodiscard]] double divergence(double x, const Params& p) noexcept;
/// Supremum of divergence over the real line, mu + 1/4 (attained at x^2 = 1/2).
[[nodiscard]] double max_divergence(const Params& p) noexcept;

/// First integral y^2/2 - beta x^2/2 + eps x^4/4 of the conservative limit.
[[nodiscard]] double hamiltonian(State s, const Params& p) noexcept;

/// Vector field of the conservative limit x' = y, y' = beta x - eps x^3.
[[nodiscard]] State field_hamiltonian(State s, const Params& p) noexcept;

}  // namespace qvdp

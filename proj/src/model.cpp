#include "qvdp/model.hpp"

#include <numbers>
#include <sstream>

#include "qvdp/error.hpp"

namespace qvdp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "invalid_params";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::StepUnderflow: return "step_underflow";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::NoCycle: return "no_cycle";
    case ErrorCode::ManifoldEscape: return "manifold_escape";
  }
  return "unknown";
}

Params::Params(double mu, double beta, double eps, double alpha, double omega)
    : mu_(mu), beta_(beta), eps_(eps), alpha_(alpha), omega_(omega) {
  auto fail = [&](const char* why) {
    std::ostringstream os;
    os << "invalid parameters (mu=" << mu << ", beta=" << beta << ", eps=" << eps
       << ", alpha=" << alpha << ", omega=" << omega << "): " << why;
    throw Error(ErrorCode::InvalidParams, os.str());
  };
  if (!std::isfinite(mu) || !std::isfinite(beta) || !std::isfinite(eps) || !std::isfinite(alpha) ||
      !std::isfinite(omega)) {
    fail("all parameters must be finite");
  }
  if (beta < 0.0) fail("beta must be >= 0");
  if (beta == 0.0 && eps == 0.0) fail("beta = eps = 0 gives a line of equilibria");
  if (omega <= 0.0) fail("omega must be > 0");
}

double Params::period() const noexcept { return 2.0 * std::numbers::pi / omega_; }

double LienardForms::F(double x) const noexcept {
  const double x2 = x * x;
  return x * (f_coeffs[0] + x2 * (f_coeffs[1] + x2 * f_coeffs[2]));
}

double LienardForms::g(double x) const noexcept { return x * (g_coeffs[0] + x * x * g_coeffs[1]); }

LienardForms lienard_forms(const Params& p) noexcept {
  return {{-p.mu(), -1.0 / 3.0, 1.0 / 5.0}, {-p.beta(), p.eps()}};
}

State field_unforced(State s, const Params& p) noexcept {
  const double x2 = s.x * s.x;
  return {s.y, (p.mu() + x2 - x2 * x2) * s.y + s.x * (p.beta() - p.eps() * x2)};
}

State field_forced(State s, double t, const Params& p) noexcept {
  State d = field_unforced(s, p);
  if (p.alpha() != 0.0) d.y -= p.alpha() * s.x * std::cos(p.omega() * t);
  return d;
}

State field_lienard(State s, const Params& p) noexcept {
  const LienardForms lf = lienard_forms(p);
  return {s.y - lf.F(s.x), -lf.g(s.x)};
}

State to_lienard(State s, const Params& p) noexcept {
  return {s.x, s.y + lienard_forms(p).F(s.x)};
}

Matrix2 jacobian(State s, const Params& p) noexcept {
  const double x = s.x;
  const double x2 = x * x;
  return {{{0.0, 1.0},
           {p.beta() - 3.0 * p.eps() * x2 + (2.0 * x - 4.0 * x2 * x) * s.y, p.mu() + x2 - x2 * x2}}};
}

double divergence(double x, const Params& p) noexcept {
  const double x2 = x * x;
  return p.mu() + x2 - x2 * x2;
}

double max_divergence(const Params& p) noexcept { return p.mu() + 0.25; }

double hamiltonian(State s, const Params& p) noexcept {
  const double x2 = s.x * s.x;
  return 0.5 * s.y * s.y - 0.5 * p.beta() * x2 + 0.25 * p.eps() * x2 * x2;
}

State field_hamiltonian(State s, const Params& p) noexcept {
  return {s.y, s.x * (p.beta() - p.eps() * s.x * s.x)};
}

}  // namespace qvdp

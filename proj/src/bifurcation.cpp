#include "qvdp/bifurcation.hpp"

#include <array>
#include <cmath>

#include "qvdp/equilibria.hpp"
#include "qvdp/error.hpp"
#include "qvdp/quadrature.hpp"

namespace qvdp {

namespace {

void require_three_equilibria(double beta, double eps, const char* what) {
  if (!(beta > 0.0) || !(eps > 0.0) || !std::isfinite(beta) || !std::isfinite(eps)) {
    throw Error(ErrorCode::Domain, std::string(what) + " requires beta > 0 and eps > 0");
  }
}

constexpr int kDeg = 5;

// Dense polynomial in (z, zbar), truncated at total degree kDeg.
class ZPoly {
 public:
  ZPoly() = default;
  static ZPoly constant(cplx v) {
    ZPoly p;
    p.c_[0][0] = v;
    return p;
  }
  static ZPoly linear(cplx a, cplx b) {
    ZPoly p;
    p.c_[1][0] = a;
    p.c_[0][1] = b;
    return p;
  }
  [[nodiscard]] cplx coeff(int k, int l) const { return c_[k][l]; }

  friend ZPoly operator+(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    for (int k = 0; k <= kDeg; ++k)
      for (int l = 0; k + l <= kDeg; ++l) r.c_[k][l] = a.c_[k][l] + b.c_[k][l];
    return r;
  }
  friend ZPoly operator*(cplx s, const ZPoly& a) {
    ZPoly r;
    for (int k = 0; k <= kDeg; ++k)
      for (int l = 0; k + l <= kDeg; ++l) r.c_[k][l] = s * a.c_[k][l];
    return r;
  }
  friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    for (int k1 = 0; k1 <= kDeg; ++k1)
      for (int l1 = 0; k1 + l1 <= kDeg; ++l1) {
        if (a.c_[k1][l1] == cplx{}) continue;
        for (int k2 = 0; k1 + l1 + k2 <= kDeg; ++k2)
          for (int l2 = 0; k1 + l1 + k2 + l2 <= kDeg; ++l2) r.c_[k1 + k2][l1 + l2] += a.c_[k1][l1] * b.c_[k2][l2];
      }
    return r;
  }

 private:
  std::array<std::array<cplx, kDeg + 1>, kDeg + 1> c_{};
};

cplx focus_eigenvalue(const Params& p) {
  const EigenPair eig = eigenvalues_at(EqLabel::E2, p);
  if (eig[1].imag() <= 0.0) {
    throw Error(ErrorCode::Domain, "Hopf normal form requires complex eigenvalues at E2 (mu1 < mu < mu2)");
  }
  return eig[1];
}

cplx first_cubic_coefficient(const std::map<std::pair<int, int>, cplx>& g, cplx lam) {
  const cplx lb = std::conj(lam);
  const cplx g20 = g.at({2, 0});
  const cplx g11 = g.at({1, 1});
  const cplx g02 = g.at({0, 2});
  const cplx g21 = g.at({2, 1});
  return g21 / 2.0 + g02 * std::conj(g02) / (2.0 * (2.0 * lam - lb)) + g11 * std::conj(g11) / lam +
         g11 * g20 * (2.0 * lam + lb) / (2.0 * lam * lb);
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(PitchforkKind k) noexcept {
  return k == PitchforkKind::Supercritical ? "supercritical" : "subcritical";
}

std::optional<double> PitchforkReduction::branch() const {
  const double r = -linear_coeff / cubic_coeff;
  if (!(r > 0.0)) return std::nullopt;
  return std::sqrt(r);
}

PitchforkReduction pitchfork_reduction(const Params& p) {
  if (p.mu() == 0.0) throw Error(ErrorCode::Domain, "pitchfork reduction is invalid at mu = 0 (double zero)");
  if (!(p.eps() > 0.0)) throw Error(ErrorCode::Domain, "pitchfork reduction requires eps > 0");
  return {-p.beta() / p.mu(), p.eps() / p.mu(), p.mu() > 0.0 ? PitchforkKind::Subcritical : PitchforkKind::Supercritical};
}

double hopf_curve(double beta, double eps) {
  require_three_equilibria(beta, eps, "hopf_curve");
  return (beta * beta - eps * beta) / (eps * eps);
}

std::map<std::pair<int, int>, cplx> hopf_coefficients(const Params& p) {
  const cplx lam = focus_eigenvalue(p);
  const cplx lb = std::conj(lam);
  const double x0 = std::sqrt(p.beta() / p.eps());

  const ZPoly X = ZPoly::linear(1.0 / lam, 1.0 / lb);
  const ZPoly Y = ZPoly::linear(1.0, 1.0);
  const ZPoly x = ZPoly::constant(x0) + X;
  const ZPoly x2 = x * x;
  const ZPoly x3 = x2 * x;
  const ZPoly x4 = x2 * x2;
  const ZPoly damping = ZPoly::constant(p.mu()) + x2 + cplx(-1.0) * x4;
  const ZPoly ydot = damping * Y + cplx(p.beta()) * x + cplx(-p.eps()) * x3;
  const ZPoly xdot = Y;

  const cplx det = 1.0 / lam - 1.0 / lb;
  const ZPoly zdot = (1.0 / det) * (xdot + (-1.0 / lb) * ydot);

  std::map<std::pair<int, int>, cplx> g;
  for (int n = 2; n <= 3; ++n)
    for (int k = n; k >= 0; --k) {
      const int l = n - k;
      g[{k, l}] = factorial(k) * factorial(l) * zdot.coeff(k, l);
    }
  return g;
}

HopfData hopf_normal_form(const Params& p) {
  require_three_equilibria(p.beta(), p.eps(), "hopf_normal_form");
  HopfData h;
  h.lambda = focus_eigenvalue(p);
  h.g = hopf_coefficients(p);
  h.c1 = first_cubic_coefficient(h.g, h.lambda);

  const double muc = hopf_curve(p.beta(), p.eps());
  const Params pc = p.with_mu(muc);
  const cplx lc = focus_eigenvalue(pc);
  h.c1_critical = first_cubic_coefficient(hopf_coefficients(pc), lc);
  h.l1 = h.c1_critical.real() / lc.imag();

  const double dm = 1e-4;
  const double dp = eigenvalues_at(EqLabel::E2, p.with_mu(muc + dm))[1].real();
  const double dn = eigenvalues_at(EqLabel::E2, p.with_mu(muc - dm))[1].real();
  h.ddelta_dmu = (dp - dn) / (2.0 * dm);

  h.alpha = h.delta() / h.omega();
  h.e1 = h.c1.imag() / h.omega();
  h.l1_alpha = h.c1.real() / h.omega() - h.alpha * h.e1;
  return h;
}

HopfCyclePrediction hopf_cycle_prediction(const Params& p) {
  require_three_equilibria(p.beta(), p.eps(), "hopf_cycle_prediction");
  const double muc = hopf_curve(p.beta(), p.eps());
  HopfCyclePrediction out{p.mu() > muc, 0.0, 0.0, 0.0, 0.0};
  if (!out.exists) return out;
  const HopfData h = hopf_normal_form(p);
  out.radius = std::sqrt(h.alpha);
  out.z_modulus = std::sqrt(h.delta() / std::abs(h.c1_critical.real()));
  out.x_amplitude = 2.0 * out.z_modulus / std::abs(h.lambda);
  out.y_amplitude = 2.0 * out.z_modulus;
  return out;
}

ForcedReduction forced_reduction(double beta, double eps, double xi) {
  const double muc = hopf_curve(beta, eps);
  const Params p(muc + xi, beta, eps);
  const HopfData h = hopf_normal_form(p);
  ForcedReduction r{};
  r.xi = xi;
  r.re_lambda = h.lambda.real();
  r.im_lambda = h.lambda.imag();
  r.c1 = h.c1;
  r.rho0 = -r.re_lambda / h.c1.real();
  r.h1 = -2.0 * r.re_lambda;
  r.w1 = r.im_lambda - r.re_lambda * h.c1.imag() / h.c1.real();
  return r;
}

// ---------------------------------------------------------------------------

double homoclinic_curve(double beta, double eps) {
  require_three_equilibria(beta, eps, "homoclinic_curve");
  return 32.0 * beta * beta / (35.0 * eps * eps) - 4.0 * beta / (5.0 * eps);
}

State homoclinic_orbit(double t, double beta, double eps) {
  const double sech = 1.0 / std::cosh(t);
  return {std::sqrt(2.0 * beta / eps) * sech, -std::sqrt(2.0) * beta / std::sqrt(eps) * sech * std::tanh(t)};
}

MelnikovResult melnikov(double mu, double beta, double eps, double eps1, MelnikovMethod method) {
  require_three_equilibria(beta, eps, "melnikov");
  const double mu3 = homoclinic_curve(beta, eps);
  if (method == MelnikovMethod::ClosedForm) {
    const double b2 = beta * beta;
    const double value = 4.0 * b2 * mu / (3.0 * eps) + 16.0 * b2 * beta / (15.0 * eps * eps) -
                         128.0 * b2 * b2 * eps1 * eps1 / (105.0 * eps * eps * eps);
    return {value, method, mu3, 0.0};
  }
  const double e12 = eps1 * eps1;
  auto integrand = [&](double t) {
    const State s = homoclinic_orbit(t, beta, eps);
    const double x2 = s.x * s.x;
    return s.y * s.y * (mu + x2 - e12 * x2 * x2);
  };
  constexpr double kT = 40.0;
  const QuadResult left = integrate_gk15(integrand, -kT, 0.0, 1e-15, 1e-13);
  const QuadResult right = integrate_gk15(integrand, 0.0, kT, 1e-15, 1e-13);
  if (!left.converged || !right.converged) {
    throw Error(ErrorCode::NoConvergence, "Melnikov quadrature did not reach tolerance");
  }
  return {left.value + right.value, method, mu3, left.error + right.error};
}

MelnikovComparison melnikov_compare(double mu, double beta, double eps, double eps1) {
  const MelnikovResult cf = melnikov(mu, beta, eps, eps1, MelnikovMethod::ClosedForm);
  const MelnikovResult q = melnikov(mu, beta, eps, eps1, MelnikovMethod::Quadrature);
  const double b2 = beta * beta;
  const double scale = std::abs(4.0 * b2 * mu / (3.0 * eps)) + std::abs(16.0 * b2 * beta / (15.0 * eps * eps)) +
                       std::abs(128.0 * b2 * b2 * eps1 * eps1 / (105.0 * eps * eps * eps));
  const double denom = std::max(std::abs(cf.value), scale);
  return {cf.value, q.value, cf.mu3, denom > 0.0 ? std::abs(cf.value - q.value) / denom : 0.0};
}

// ---------------------------------------------------------------------------

std::string_view to_string(CertificateKind k) noexcept {
  switch (k) {
    case CertificateKind::Dulac: return "dulac";
    case CertificateKind::Index: return "index";
    case CertificateKind::Energy: return "energy";
  }
  return "unknown";
}

std::vector<Certificate> nonexistence_certificates(const Params& p) {
  std::vector<Certificate> out;
  const double mu = p.mu();
  const double b = p.beta();
  const double e = p.eps();
  if (mu <= -0.25) {
    out.push_back({CertificateKind::Dulac, "divergence mu + x^2 - x^4 <= mu + 1/4 <= 0 on the whole plane"});
  }
  if ((e <= 0.0 && b > 0.0) || (e < 0.0 && b == 0.0)) {
    out.push_back({CertificateKind::Index, "the only equilibrium is a saddle (index -1), so no closed orbit can exist"});
  }
  if (e > 0.0 && b == 0.0 && mu <= -5.0 / 36.0) {
    out.push_back({CertificateKind::Energy,
                   "energy derivative eps x^4 (mu + x^2/3 - x^4/5) <= eps x^4 (mu + 5/36) <= 0"});
  }
  return out;
}

std::optional<Certificate> nonexistence_certificate(const Params& p) {
  auto all = nonexistence_certificates(p);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::NoCycleSaddleOnly: return "no_cycle_saddle_only";
    case Region::NoCycleEnergy: return "no_cycle_energy";
    case Region::NoCycleDulac: return "no_cycle_dulac";
    case Region::SingleSmallCycle: return "single_small_cycle";
    case Region::TwoSmallCycles: return "two_small_cycles";
    case Region::HomoclinicPair: return "homoclinic_pair";
    case Region::LargeCycle: return "large_cycle";
    case Region::ThreeEqNoCycle: return "three_eq_no_cycle";
    case Region::Unresolved: return "unresolved";
  }
  return "unknown";
}

RegionLabel classify_region(const Params& p) {
  const double mu = p.mu();
  const double b = p.beta();
  const double e = p.eps();
  RegionLabel out{Region::Unresolved, '-', {}, false};
  for (const Certificate& c : nonexistence_certificates(p)) out.certificates.emplace_back(to_string(c.kind));

  if (e <= 0.0) {
    out.label = Region::NoCycleSaddleOnly;
    out.regime = 'a';
    return out;
  }
  if (b == 0.0) {
    if (mu >= 0.0) {
      out.label = Region::SingleSmallCycle;
      out.regime = 'b';
    } else if (mu <= -0.25) {
      out.label = Region::NoCycleDulac;
    } else if (mu <= -5.0 / 36.0) {
      out.label = Region::NoCycleEnergy;
    }
    return out;
  }
  const double muc = hopf_curve(b, e);
  const double mu3 = homoclinic_curve(b, e);
  out.homoclinic_proximal = std::abs(mu - mu3) <= kHomoclinicProximity;
  if (mu3 > muc && std::abs(mu - mu3) <= kCurveTolerance) {
    out.label = Region::HomoclinicPair;
    out.regime = 'e';
  } else if (mu <= muc) {
    out.label = Region::ThreeEqNoCycle;
    out.regime = 'c';
  } else if (mu < mu3) {
    out.label = Region::TwoSmallCycles;
    out.regime = 'd';
  } else {
    out.label = Region::LargeCycle;
    out.regime = 'f';
  }
  return out;
}

}  // namespace qvdp

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qvdp/bifurcation.hpp"
#include "qvdp/compactify.hpp"
#include "qvdp/detect.hpp"
#include "qvdp/equilibria.hpp"
#include "qvdp/error.hpp"
#include "qvdp/integrate.hpp"
#include "support/oracles.hpp"

using namespace qvdp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    out.pass = false;
    out.detail += " (over time budget)";
  }
  if (!out.pass) ++failures;
  std::printf("criterion %2d %-28s %s  [%.2fs] %s\n", id, title, out.pass ? "PASS" : "FAIL", secs, out.detail.c_str());
  std::fflush(stdout);
}

char buf[512];

// ---------------------------------------------------------------------------

struct Row {
  const char* name;
  std::function<Params(std::mt19937_64&)> sample;
  EqLabel label;
  EqKind kind;
  bool degenerate;
};

Outcome table_classification() {
  using U = std::uniform_real_distribution<double>;
  const auto e_params = [](std::mt19937_64& g, double lo, double hi, bool above) {
    const double beta = U(0.2, 2.0)(g), eps = U(0.3, 3.0)(g);
    const double muc = (beta * beta - eps * beta) / (eps * eps), s = 2.0 * std::sqrt(2.0 * beta);
    const double u = U(lo, hi)(g);
    return Params(above ? muc + s * u : muc - s * u, beta, eps);
  };
  const std::vector<Row> rows = {
      {"eps<=0,beta>0", [](auto& g) { return Params(U(-3, 3)(g), U(0.05, 3)(g), U(-3, 0)(g)); }, EqLabel::O,
       EqKind::Saddle, false},
      {"eps<0,beta=0", [](auto& g) { return Params(U(-3, 3)(g), 0.0, U(-3, -0.1)(g)); }, EqLabel::O, EqKind::Saddle,
       true},
      {"eps>0,beta=0,mu<0", [](auto& g) { return Params(U(-3, -0.1)(g), 0.0, U(0.3, 3)(g)); }, EqLabel::O,
       EqKind::StableNode, true},
      {"eps>0,beta=0,mu=0", [](auto& g) { return Params(0.0, 0.0, U(0.3, 3)(g)); }, EqLabel::O,
       EqKind::DegenerateUnstableFocus, true},
      {"eps>0,beta=0,mu>0", [](auto& g) { return Params(U(0.1, 3)(g), 0.0, U(0.3, 3)(g)); }, EqLabel::O,
       EqKind::UnstableNode, true},
      {"mu<=mu1", [&](auto& g) { return e_params(g, 1.05, 2.0, false); }, EqLabel::E2, EqKind::StableNode, false},
      {"mu1<mu<=muc", [&](auto& g) { return e_params(g, 0.1, 0.8, false); }, EqLabel::E2, EqKind::StableFocus, false},
      {"muc<mu<mu2", [&](auto& g) { return e_params(g, 0.1, 0.8, true); }, EqLabel::E2, EqKind::UnstableFocus, false},
      {"mu>=mu2", [&](auto& g) { return e_params(g, 1.05, 2.0, true); }, EqLabel::E2, EqKind::UnstableNode, false},
  };
  std::mt19937_64 rng(20240611);
  int checked = 0;
  for (const auto& row : rows) {
    for (int i = 0; i < 20; ++i) {
      const Params p = row.sample(rng);
      for (const auto& eq : find_equilibria(p)) {
        const EqKind want = eq.label == row.label ? row.kind : EqKind::Saddle;
        if (eq.label == EqLabel::E1 && row.label == EqLabel::E2) {
          if (classify(eq, p) != row.kind) return {false, std::string(row.name) + ": E1 differs from E2"};
          continue;
        }
        const EqKind got = classify(eq, p);
        const EqKind pattern = oracle::sign_pattern(eq.location, p);
        double rate = 1.0;
        if (!row.degenerate) {
          const auto ev = oracle::eigenvalues(oracle::fd_jacobian(eq.location, p));
          rate = std::min(std::abs(ev[0].real()), std::abs(ev[1].real()));
        }
        const double r0 = row.degenerate ? 0.1 : 1e-3;
        const double t_max = row.degenerate ? 20000.0 : 40.0 / rate;
        const auto sim = oracle::simulate_kind(eq.location, p, r0, t_max, row.degenerate ? 1.0 : 0.05, 8, row.degenerate);
        EqKind sim_kind = sim.value_or(EqKind::Saddle);
        if (sim && *sim == EqKind::UnstableFocus && pattern == EqKind::DegenerateUnstableFocus) {
          sim_kind = EqKind::DegenerateUnstableFocus;
        }
        if (got != want || pattern != want || !sim || sim_kind != want) {
          std::snprintf(buf, sizeof buf, "%s (mu=%.6g beta=%.6g eps=%.6g, %s): table %s, pattern %s, simulation %s",
                        row.name, p.mu(), p.beta(), p.eps(), std::string(to_string(eq.label)).c_str(),
                        std::string(to_string(got)).c_str(), std::string(to_string(pattern)).c_str(),
                        sim ? std::string(to_string(sim_kind)).c_str() : "inconclusive");
          return {false, buf};
        }
        ++checked;
      }
    }
  }
  std::snprintf(buf, sizeof buf, "9 rows x 20 samples, %d equilibria agree with sign pattern and simulation", checked);
  return {true, buf};
}

// ---------------------------------------------------------------------------

Outcome hopf_identity() {
  double worst = 0.0;
  for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0})
    for (double eps : {0.5, 1.0, 2.0}) {
      const HopfData h = hopf_normal_form(Params(hopf_curve(beta, eps), beta, eps));
      worst = std::max(worst, std::abs(h.c1_critical.real() + 1.0 / (2.0 * beta)));
    }
  std::snprintf(buf, sizeof buf, "max |Re c1(muc) + 1/(2 beta)| = %.3g over 15 pairs", worst);
  return {worst < 1e-8, buf};
}

Outcome transversality() {
  double worst = 0.0;
  for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0})
    for (double eps : {0.5, 1.0, 2.0}) {
      const HopfData h = hopf_normal_form(Params(hopf_curve(beta, eps), beta, eps));
      worst = std::max(worst, std::abs(h.ddelta_dmu - 0.5));
    }
  std::snprintf(buf, sizeof buf, "max |d delta/d mu - 1/2| = %.3g", worst);
  return {worst < 1e-10, buf};
}

Outcome melnikov_equivalence() {
  double worst = 0.0;
  int n = 0;
  for (int i = 0; i < 20; ++i) {
    const double mu = -2.0 + 4.0 * i / 19.0;
    for (double beta : {0.2, 0.5, 1.0, 2.0, 3.0})
      for (double eps : {0.3, 0.8, 1.5, 2.0, 3.0}) {
        worst = std::max(worst, melnikov_compare(mu, beta, eps).relative_diff);
        ++n;
      }
  }
  const double m3 = homoclinic_curve(1.0, 2.0);
  const bool root_ok = std::abs(m3 + 0.17142857142857143) < 1e-9;
  const bool rounded_ok = std::round(m3 * 1000.0) / 1000.0 == -0.171;
  const double lo = melnikov(m3 - 1e-6, 1.0, 2.0, 1.0, MelnikovMethod::Quadrature).value;
  const double hi = melnikov(m3 + 1e-6, 1.0, 2.0, 1.0, MelnikovMethod::Quadrature).value;
  std::snprintf(buf, sizeof buf, "%d points, max relative diff %.3g; mu3(1,2) = %.12f; sign change %s", n, worst, m3,
                lo * hi < 0 ? "yes" : "no");
  return {worst < 1e-6 && root_ok && rounded_ok && lo * hi < 0 && n == 500, buf};
}

Outcome homoclinic_shooting() {
  const double m3 = homoclinic_curve(1.0, 2.0);
  const double below = separatrix_split(Params(m3 - 0.02, 1.0, 2.0)).distance;
  const double above = separatrix_split(Params(m3 + 0.02, 1.0, 2.0)).distance;
  const double root = separatrix_root(1.0, 2.0, m3 - 0.02, m3 + 0.02);
  std::snprintf(buf, sizeof buf, "split %.4g / %.4g, root %.10f, |root - mu3| = %.3g", below, above, root,
                std::abs(root - m3));
  return {below * above < 0 && std::abs(root - m3) < 5e-3, buf};
}

Outcome limit_cycles() {
  struct Case {
    Params p;
    State seed;
    std::vector<EqLabel> encloses;
  };
  const Case cases[] = {
      {Params(1.0, 0.0, 2.0), {1.0, 0.0}, {EqLabel::O}},
      {Params(-0.2, 1.0, 2.0), {0.9, 0.0}, {EqLabel::E2}},
      {Params(-0.1, 1.0, 2.0), {1.2, 0.0}, {EqLabel::O, EqLabel::E1, EqLabel::E2}},
  };
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    const auto lc = find_limit_cycle(c.p, c.seed);
    if (!lc) return {false, "no cycle found"};
    std::vector<EqLabel> enc = lc->encloses;
    std::sort(enc.begin(), enc.end());
    std::vector<EqLabel> want = c.encloses;
    std::sort(want.begin(), want.end());
    for (const auto& e : find_equilibria(c.p)) {
      const bool inside = std::find(want.begin(), want.end(), e.label) != want.end();
      if ((winding_number(lc->orbit, e.location) != 0) != inside) ok = false;
    }
    ok = ok && enc == want && lc->stable && std::abs(lc->floquet) < 1.0;
    std::snprintf(buf, sizeof buf, "%s(mu=%g,beta=%g) floquet %.4f encloses %zu", detail.empty() ? "" : "; ",
                  c.p.mu(), c.p.beta(), lc->floquet, enc.size());
    detail += buf;
  }
  return {ok, detail};
}

Outcome nonexistence() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu(-3.0, -0.25), beta(0.0, 3.0), eps(-3.0, 3.0);
  struct Case {
    Params p;
    CertificateKind want;
  };
  std::vector<Case> cases;
  while (cases.size() < 100) {
    const double b = beta(rng), e = eps(rng);
    if (b == 0.0 && e == 0.0) continue;
    cases.push_back({Params(mu(rng), b, e), CertificateKind::Dulac});
  }
  cases.push_back({Params(-5.0 / 36, 0.0, 2.0), CertificateKind::Energy});
  for (double m : {-2.0, -0.5, 0.0, 0.3, 1.0, 3.0}) cases.push_back({Params(m, 1.0, -1.0), CertificateKind::Index});

  int found = 0, uncertified = 0, nonconverged = 0;
  for (const auto& c : cases) {
    const auto certs = nonexistence_certificates(c.p);
    const bool has = std::any_of(certs.begin(), certs.end(), [&](const Certificate& x) { return x.kind == c.want; });
    if (!has) ++uncertified;
    for (int k = 0; k < 8; ++k) {
      const State seed{0.25 * (k + 1), 0.0};
      try {
        if (find_limit_cycle(c.p, seed)) ++found;
      } catch (const Error&) {
        ++nonconverged;
      }
    }
  }
  std::snprintf(buf, sizeof buf, "%zu parameter points x 8 seeds: %d cycles found, %d missing certificates, %d stalled solves",
                cases.size(), found, uncertified, nonconverged);
  return {found == 0 && uncertified == 0, buf};
}

Outcome infinity() {
  int checked = 0;
  for (double eps : {-1.0, 2.0})
    for (double mu : {-1.0, 0.1, 1.0})
      for (double beta : {0.0, 1.0}) {
        const Params p(mu, beta, eps);
        for (const auto& e : infinity_equilibria(p)) {
          const SectorReport rep = verify_infinity_kind(e, p);
          InfKind want = InfKind::UnstableNode;
          if (e.label == InfLabel::B || e.label == InfLabel::BB) want = eps < 0 ? InfKind::StableNode : InfKind::Saddle;
          if (e.kind != want || rep.inferred != want || !rep.consistent) {
            std::snprintf(buf, sizeof buf, "eps=%g mu=%g beta=%g %s: inferred %s (%d runs)", eps, mu, beta,
                          std::string(to_string(e.label)).c_str(), std::string(to_string(rep.inferred)).c_str(),
                          rep.runs);
            return {false, buf};
          }
          ++checked;
        }
      }
  std::snprintf(buf, sizeof buf, "%d points at infinity verified by 16-probe sector counts", checked);
  return {true, buf};
}

Outcome forced() {
  const Params p(-0.1, 1.0, 3.0, -0.3, 1.0);
  const AttractorReport a = classify_forced(p, {0.0, 1.2}, 2000);
  const AttractorReport b = classify_forced(p.with_mu(-0.3), {0.0, 1.2}, 2000);
  const auto& e = a.evidence;
  const bool ok = a.verdict == Verdict::QuasiPeriodic && e.closure_residual < kClosureThreshold &&
                  e.rotation_error < kRotationConvergence && b.verdict != Verdict::QuasiPeriodic;
  std::snprintf(buf, sizeof buf, "mu=-0.1: %s rho=%.9f closure %.2g rho err %.2g; mu=-0.3: %s",
                std::string(to_string(a.verdict)).c_str(), a.rotation_number.value_or(-1.0), e.closure_residual,
                e.rotation_error, std::string(to_string(b.verdict)).c_str());
  return {ok, buf};
}

Outcome hamiltonian_conservation() {
  const Params p(0.0, 1.0, 2.0);
  const PlanarField f = [p](double, State s) { return field_hamiltonian(s, p); };
  double drift = 0.0;
  for (State s0 : {State{0.5, 0.0}, State{1.2, 0.3}, State{0.0, 1.5}, State{1.0, 1e-3}}) {
    const Trajectory tr = integrate(f, s0, {0.0, 50.0}, {1e-10, 1e-10});
    if (!tr.ok()) return {false, "integration failed"};
    for (const auto& smp : tr.samples) drift = std::max(drift, std::abs(hamiltonian(smp.s, p) - hamiltonian(s0, p)));
  }
  double orbit = 0.0;
  for (double beta : {0.5, 1.0, 2.0})
    for (double eps : {0.5, 2.0}) {
      const Params q(0.0, beta, eps);
      for (double t = -30.0; t <= 30.0; t += 0.01) orbit = std::max(orbit, std::abs(hamiltonian(homoclinic_orbit(t, beta, eps), q)));
    }
  std::snprintf(buf, sizeof buf, "max |dH| over [0,50] = %.3g; max |H| on homoclinic orbit = %.3g", drift, orbit);
  return {drift < 1e-8 && orbit < 1e-14, buf};
}

}  // namespace

int main() {
  report(1, "equilibrium classification", 10, table_classification);
  report(2, "hopf coefficient identity", 5, hopf_identity);
  report(3, "transversality", 0, transversality);
  report(4, "melnikov equivalence", 0, melnikov_equivalence);
  report(5, "homoclinic shooting", 30, homoclinic_shooting);
  report(6, "limit-cycle regimes", 60, limit_cycles);
  report(7, "non-existence certificates", 60, nonexistence);
  report(8, "infinity catalogue", 0, infinity);
  report(9, "forced dichotomy", 120, forced);
  report(10, "hamiltonian conservation", 0, hamiltonian_conservation);
  return failures == 0 ? 0 : 1;
}

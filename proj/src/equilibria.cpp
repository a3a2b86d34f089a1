#include "qvdp/equilibria.hpp"

#include <cmath>

#include "qvdp/error.hpp"

namespace qvdp {

std::string_view to_string(EqKind kind) noexcept {
  switch (kind) {
    case EqKind::Saddle: return "saddle";
    case EqKind::StableNode: return "stable_node";
    case EqKind::UnstableNode: return "unstable_node";
    case EqKind::StableFocus: return "stable_focus";
    case EqKind::UnstableFocus: return "unstable_focus";
    case EqKind::DegenerateUnstableFocus: return "degenerate_unstable_focus";
  }
  return "unknown";
}

std::string_view to_string(EqLabel label) noexcept {
  switch (label) {
    case EqLabel::O: return "O";
    case EqLabel::E1: return "E1";
    case EqLabel::E2: return "E2";
  }
  return "?";
}

bool is_unstable(EqKind kind) noexcept {
  return kind != EqKind::StableNode && kind != EqKind::StableFocus;
}

int index_of(EqKind kind) noexcept { return kind == EqKind::Saddle ? -1 : 1; }

namespace {

// roots of l^2 - tr l + det = 0
EigenPair quadratic_roots(double tr, double det) {
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // avoid cancellation in the smaller root
    const double q = -0.5 * (-tr + (tr >= 0 ? -s : s));
    double r1 = q;
    double r2 = q != 0.0 ? det / q : 0.0;
    if (q == 0.0) r1 = r2 = 0.0;
    if (r1 > r2) std::swap(r1, r2);
    return {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

}  // namespace

std::vector<Equilibrium> find_equilibria(const Params& p) {
  std::vector<Equilibrium> out;
  auto make = [&](EqLabel label, State s) {
    out.push_back({label, s, eigenvalues_at(label, p), classify(label, p)});
  };
  make(EqLabel::O, {0.0, 0.0});
  if (p.three_equilibria()) {
    const double x2 = std::sqrt(p.beta() / p.eps());
    make(EqLabel::E1, {-x2, 0.0});
    make(EqLabel::E2, {x2, 0.0});
  }
  return out;
}

CriticalMus critical_mus(const Params& p) {
  if (!p.three_equilibria()) {
    throw Error(ErrorCode::Domain, "critical mu values need beta > 0 and eps > 0");
  }
  const double b = p.beta();
  const double e = p.eps();
  const double muc = (b * b - e * b) / (e * e);
  const double w = 2.0 * std::sqrt(2.0 * b);
  return {muc - w, muc, muc + w};
}

EigenPair eigenvalues_at(EqLabel label, const Params& p) {
  if (label == EqLabel::O) return quadratic_roots(p.mu(), -p.beta());
  if (!p.three_equilibria()) throw Error(ErrorCode::Domain, "E1 and E2 exist only for beta > 0 and eps > 0");
  const double r = p.beta() / p.eps();
  return quadratic_roots(p.mu() + r - r * r, 2.0 * p.beta());
}

EqKind classify(EqLabel label, const Params& p) {
  const double mu = p.mu();
  const double b = p.beta();
  const double e = p.eps();
  if (label == EqLabel::O) {
    if (b > 0.0 || e < 0.0) return EqKind::Saddle;
    if (mu < 0.0) return EqKind::StableNode;
    if (mu == 0.0) return EqKind::DegenerateUnstableFocus;
    return EqKind::UnstableNode;
  }
  const CriticalMus c = critical_mus(p);
  if (mu <= c.mu1) return EqKind::StableNode;
  if (mu <= c.muc) return EqKind::StableFocus;
  if (mu < c.mu2) return EqKind::UnstableFocus;
  return EqKind::UnstableNode;
}

}  // namespace qvdp

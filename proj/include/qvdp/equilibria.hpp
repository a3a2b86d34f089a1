#pragma once

#include <array>
#include <complex>
#include <string_view>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp {

enum class EqKind { Saddle, StableNode, UnstableNode, StableFocus, UnstableFocus, DegenerateUnstableFocus };
enum class EqLabel { O, E1, E2 };

using EigenPair = std::array<std::complex<double>, 2>;

[[nodiscard]] std::string_view to_string(EqKind kind) noexcept;
[[nodiscard]] std::string_view to_string(EqLabel label) noexcept;

/// True for kinds whose nearby orbits move away in forward time.
[[nodiscard]] bool is_unstable(EqKind kind) noexcept;
/// Topological index: -1 for a saddle, +1 otherwise.
[[nodiscard]] int index_of(EqKind kind) noexcept;

struct Equilibrium {
  EqLabel label = EqLabel::O;
  State location{};
  EigenPair eigs{};
  EqKind kind = EqKind::Saddle;
};

struct CriticalMus {
  double mu1;
  double muc;
  double mu2;
};

/// Closed-form equilibria: O always, E1 = (-sqrt(beta/eps), 0) and E2 = (sqrt(beta/eps), 0)
/// when beta > 0 and eps > 0.
[[nodiscard]] std::vector<Equilibrium> find_equilibria(const Params& p);

/// mu_c = (beta^2 - eps beta)/eps^2 and mu_{1,2} = mu_c -/+ 2 sqrt(2 beta).
/// Throws Error{Domain} unless beta > 0 and eps > 0.
[[nodiscard]] CriticalMus critical_mus(const Params& p);

/// Roots of the characteristic polynomial, ordered by ascending real part.
[[nodiscard]] EigenPair eigenvalues_at(EqLabel label, const Params& p);

/// Type and stability from the closed-form table, including the degenerate beta = 0 rows.
[[nodiscard]] EqKind classify(EqLabel label, const Params& p);
[[nodiscard]] inline EqKind classify(const Equilibrium& e, const Params& p) { return classify(e.label, p); }

}  // namespace qvdp

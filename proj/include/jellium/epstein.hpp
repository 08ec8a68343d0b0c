#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jellium/lattice.hpp"

namespace jellium {

struct EwaldParams {
  double split = 1.0;         // Mellin split point eta
  double shell_cutoff = 0.0;  // direct/dual radius; 0 picks it from tol
  double tol = 1e-14;

  void validate() const;
};

struct EpsteinResult {
  double value = 0.0;
  double tol_achieved = 0.0;  // magnitude of the first truncated band of terms
  std::string backend = "ewald";
};

/// V_s(x): |x|^{-s} for s > 0, -log|x| for s = 0, -|x|^{-s} for s < 0.
double riesz_potential(double s, const Eigen::VectorXd& x);

/// Analytic continuation of (1/2) sum_{x in L, x != 0} |x|^{-s} for a
/// unit-covolume lattice, s != d.
EpsteinResult epstein_zeta_report(const Lattice& L, double s, const EwaldParams& p = {});
double epstein_zeta(const Lattice& L, double s, const EwaldParams& p = {});

/// d/ds of the above at s = 0.
EpsteinResult epstein_zeta_deriv0_report(const Lattice& L, const EwaldParams& p = {});
double epstein_zeta_deriv0(const Lattice& L, const EwaldParams& p = {});

/// 3 c^{-s} zeta(s/2) L_3(s/2), c^2 = 2/sqrt(3).
double closed_form_triangular(double s);
double closed_form_triangular_deriv0();

/// Energy per point of the lattice in a neutralizing background for the
/// Riesz kernel V_s, d - 4 < s < d: zeta_L(s), zeta_L'(0) or -zeta_L(s).
EpsteinResult lattice_jellium_energy_report(const Lattice& L, double s, const EwaldParams& p = {});
double lattice_jellium_energy(const Lattice& L, double s, const EwaldParams& p = {});

struct ShellDecay {
  double radius = 0.0;
  double scaled = 0.0;  // max over the shell of |W(x)| |x|^{s+4}
};

struct DirectSumResult {
  double value = 0.0;
  double tail_bound = 0.0;
  double radius = 0.0;      // last shell radius included
  std::size_t terms = 0;    // lattice points summed
  std::vector<ShellDecay> outer;  // the outermost shells, innermost first
};

/// Same quantity as epstein_zeta(L, s) for d = 2, 0 <= s < 2, from the
/// absolutely convergent representation
///   (1/2) sum_{x != 0} W(x) - int_Q V + (1/2) int_Q int_Q V,
/// W = V * (delta - 1_Q) * (delta - 1_Q), Q the Wigner-Seitz cell. Shells are
/// added until the |x|^{-s-4} tail bound drops below quad_tol.
DirectSumResult direct_w_sum(const Lattice& L, double s, double quad_tol = 1e-6);
/// The same representation with V = -log, which yields zeta_L'(0).
DirectSumResult direct_w_sum_deriv0(const Lattice& L, double quad_tol = 1e-6);

}  // namespace jellium

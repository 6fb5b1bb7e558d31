#pragma once

#include "pb/functional.hpp"

namespace pb {

/// Internal energy density with analytic partials; pressure follows as
/// p = -eps + rho*eps_rho + s*eps_s.
struct Eos {
  std::function<double(double rho, double s)> eps;
  std::function<double(double rho, double s)> eps_rho;
  std::function<double(double rho, double s)> eps_s;
  double pressure(double rho, double s) const {
    return -eps(rho, s) + rho * eps_rho(rho, s) + s * eps_s(rho, s);
  }
};

/// eps(rho, s) = K rho^gamma exp(s/(c_v rho)); requires rho > 0 at
/// evaluation. For this form p = (gamma - 1) eps.
Eos eos_ideal(double K = 1.0, double gamma = 5.0 / 3.0, double c_v = 1.0);

/// Periodized single-particle kinetic energy on a momentum box: per active
/// axis (1/m)(pmax/pi)^2 (1 - cos(pi p / pmax)). Agrees with p^2/2m to
/// O(p^4/pmax^2) near p = 0 and is exactly periodic on [-pmax, pmax), so
/// its spectral momentum derivatives are clean.
double periodized_kinetic(const PhaseGrid& g, int mom_axis, double p,
                          double mass);

/// Default Hamiltonian for a catalog bracket name, on the given prototype
/// state's grids. Optional interaction energy alpha * int rho1 rho2 for the
/// binary fluid brackets.
Functional make_hamiltonian(const std::string& bracket_name,
                            const Constants& c, const State& prototype,
                            const Eos& eos = eos_ideal(),
                            double interaction_alpha = 0.0);

}  // namespace pb

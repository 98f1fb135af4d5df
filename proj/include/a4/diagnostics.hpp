#pragma once

#include <array>
#include <string>

#include "a4/field.hpp"

namespace a4 {

// Residual fields for the averaged-field relations. Every diagnostic consumes a
// (prev, now, next) triplet spaced by dt and uses centred time differences.
//
// The two Maxwell pairs behave differently on potential-derived fields:
// gauss_h (div H) and faraday (curl E + dH/dt / c) vanish for ANY potentials,
// because they are identities of E = -(1/c) dA/dt - grad phi, H = curl A.
// gauss_e and ampere hold only where the Lorentz residual vanishes, which is why
// they are the ones checked on ensemble averages.

struct Norms {
  double l2 = 0.0;
  double linf = 0.0;
  friend bool operator==(const Norms&, const Norms&) = default;
};

/// L2 = sqrt(sum f^2 h^3) with a fixed pairwise summation order, Linf = max |f|.
/// With interior_only, nodes within two layers of an absorbing face are skipped
/// (periodic grids have no faces, so every node counts).
Norms norms(const ScalarField& f, bool interior_only = true);
Norms norms(const VectorField& v, bool interior_only = true);

/// (1/c)(phi_next - phi_prev)/(2 dt) + div A_now
ScalarField lorentz_residual(const FourPotentialField& prev, const FourPotentialField& now,
                             const FourPotentialField& next, double dt, double c);

/// E = -(A_next - A_prev)/(2 c dt) - grad phi_now, H = curl A_now.
EMField derive_fields(const FourPotentialField& prev, const FourPotentialField& now,
                      const FourPotentialField& next, double dt, double c);

struct MaxwellResiduals {
  ScalarField gauss_e;  // div E - 4 pi rho
  VectorField ampere;   // curl H - (1/c) dE/dt - 4 pi j / c
  ScalarField gauss_h;  // div H
  VectorField faraday;  // curl E + (1/c) dH/dt
};

/// Field-form residuals from a series of three EM fields spaced dt.
MaxwellResiduals maxwell_residuals(const EMField& prev, const EMField& now, const EMField& next,
                                   const FourCurrentField& source, double dt, double c);

/// Field-form residuals from one potential triplet. Time derivatives of E and H
/// come from the triplet itself: dE/dt = -(1/c) A_tt - grad phi_t, dH/dt = curl A_t.
MaxwellResiduals maxwell_residuals(const FourPotentialField& prev, const FourPotentialField& now,
                                   const FourPotentialField& next, const FourCurrentField& source, double dt,
                                   double c);

/// Four lattice fields, one per component mu = 0..3.
struct FourResidual {
  std::array<ScalarField, 4> c;
  ScalarField& operator[](int mu) { return c[static_cast<std::size_t>(mu)]; }
  const ScalarField& operator[](int mu) const { return c[static_cast<std::size_t>(mu)]; }
};

/// D A^mu - 4 pi j^mu per component, with j^mu = (rho, j / c).
FourResidual dalembert_residual(const FourPotentialField& prev, const FourPotentialField& now,
                                const FourPotentialField& next, const FourCurrentField& source, double dt,
                                double c);

/// d^mu L with L the Lorentz residual: d^0 = (1/c) d/dt, d^i = -d/dx_i. The time
/// derivative of L is expanded on the triplet: (1/c) phi_tt / c + div A_t.
FourResidual lorentz_gradient(const FourPotentialField& prev, const FourPotentialField& now,
                              const FourPotentialField& next, double dt, double c);

/// D A^mu - d^mu (d_alpha A^alpha) - 4 pi j^mu, evaluated in one fused pass.
FourResidual potential_maxwell_residual(const FourPotentialField& prev, const FourPotentialField& now,
                                        const FourPotentialField& next, const FourCurrentField& source, double dt,
                                        double c);

/// Sum over components of [(f_t / c)^2 + |grad f|^2] h^3 with f_t centred.
double energy_surrogate(const FourPotentialField& prev, const FourPotentialField& now,
                        const FourPotentialField& next, double dt, double c);

struct DiagnosticRecord {
  long step = 0;
  double time = 0.0;
  Norms lorentz;
  Norms gauss_e;
  Norms ampere;
  Norms gauss_h;
  Norms faraday;
  std::array<Norms, 4> dalembert;
  double energy = 0.0;
  friend bool operator==(const DiagnosticRecord&, const DiagnosticRecord&) = default;
};

inline constexpr std::array<const char*, 4> kMaxwellNames = {"gauss_e", "ampere", "gauss_h", "faraday"};

DiagnosticRecord compute_record(const FourPotentialField& prev, const FourPotentialField& now,
                                const FourPotentialField& next, const FourCurrentField& source, double dt,
                                double c, long step, bool interior_only = true);

}  // namespace a4

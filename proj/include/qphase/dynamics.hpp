#pragma once

#include "qphase/linalg.hpp"
#include "qphase/phase_space.hpp"
#include "qphase/wigner.hpp"

#include <optional>
#include <vector>

namespace qphase {

/// Expansion of a Hermitian operator H in the phase-point basis,
/// H = sum_a coeff(a) A_a, with the coefficients real. The displacement-basis
/// coefficients kappa (H = sum_mu kappa_mu D_mu) are kept when known.
struct HamiltonianCoefficients {
    HamiltonianCoefficients(int n, std::vector<double> a_coeffs);

    int n;
    std::vector<double> a_coeffs;                       // indexed by point index
    std::optional<std::vector<Complex>> d_coeffs;       // kappa, indexed by point index
};

/// coeff(a) = (1/N) Tr(H A_a); rejects non-Hermitian input.
HamiltonianCoefficients hamiltonian_from_matrix(const ComplexMatrix& h,
                                                double tol = kDefaultTol);
ComplexMatrix matrix_from_hamiltonian(const HamiltonianCoefficients& h);

/// A-basis coefficients from displacement-basis kappa; requires the Hermiticity
/// pairing kappa(-mu) = conj(kappa(mu)).
HamiltonianCoefficients hamiltonian_from_dcoeffs(int n, const std::vector<Complex>& kappa,
                                                 double tol = kDefaultTol);

/// Candidate generator of continuous Wigner flow dW/dt = r W.
struct RateMatrix {
    RateMatrix(int n, RealMatrix r, double hbar = 1.0);

    int n;
    RealMatrix r;
    double hbar;
};

/// r(a,c) = (2/hbar) sum_b Im(Gamma_{abc}) coeff(b); antisymmetric with zero
/// column sums for every Hermitian H.
RateMatrix rates_from_hamiltonian(const HamiltonianCoefficients& h, double hbar = 1.0);

/// Mean-zero A-basis coefficients recovered from the rates,
/// coeff(b) = (hbar/N^2) sum_{ac} r(a,c) Im(Gamma_{abc}). For rates that do
/// come from a Hamiltonian this inverts rates_from_hamiltonian exactly; for
/// anything else the round trip projects.
HamiltonianCoefficients hamiltonian_from_rates(const RateMatrix& r);

/// Symmetric projector onto the legitimate rate vectors,
/// R_{ac,a'c'} = (2/N^2) sum_b Im(Gamma_{abc}) Im(Gamma_{a'bc'}),
/// acting on flattened N^4 rate vectors. Tr R = N^2 - 1.
struct RProjector {
    int n;
    RealMatrix r;  // N^4 x N^4, index pair (a,c) flattened as a*N^2 + c

    std::vector<double> apply(const std::vector<double>& rate_vector) const;
};

/// Dense R projector; guarded to N <= 7 (side N^4).
RProjector build_r_projector(int n);

struct RateVerdict {
    double tol = kDefaultTol;
    double fixed_point_residual = 0.0;  // max |(R r - r)|
    double antisymmetry_residual = 0.0;
    double column_sum_residual = 0.0;
    bool legal = false;
};

/// Legal iff r is a fixed point of R; antisymmetry and column sums are
/// reported alongside as diagnostics.
RateVerdict validate_rates(const RateMatrix& r, double tol = kDefaultTol);

/// R applied to an arbitrary real N^4 vector; the result is always a
/// legitimate rate matrix.
RateMatrix project_rates(const std::vector<double>& v, int n);

/// max violation of the odd-prime fixed-point form
/// r(a,c) = (2/N^2) sum_z r(a+z, c+z) cos[(4 pi/N) <a-c, z>].
/// Assumes antisymmetry; together they are equivalent to the R fixed point.
double odd_prime_condition_residual(const RateMatrix& r);

/// Complex "rates" generated by the non-Hermitian displacement operator D_mu:
/// r(a,c) = (1/(i hbar)) [delta_{a,c+mu/2} omega^{2<a,c>}
///                        - delta_{a,c-mu/2} omega^{-2<a,c>}], odd N only.
/// Hermitian combinations sum to the real rates of the corresponding H.
ComplexMatrix displacement_rates(const PhasePoint& mu, double hbar = 1.0);

/// sum_mu kappa(mu) r^(mu); real for Hermitian-paired kappa.
RateMatrix rates_from_dcoeffs(int n, const std::vector<Complex>& kappa, double hbar = 1.0,
                              double tol = kDefaultTol);

/// Kinetic energy of a particle on an N-site ring: H = 2 - (X + X^dag), i.e.
/// kappa = {2 at mu=0, -1 at mu=(1,0) and mu=(-1,0)}. Eigenvalues are
/// 4 sin^2(k pi / N) on the momentum states.
HamiltonianCoefficients ring_hamiltonian(int n);

/// exp(m) by Taylor series with scaling and squaring; the scaling depth is
/// raised until two successive refinements agree to 1e-10.
RealMatrix matrix_exponential(const RealMatrix& m);

/// Integrates dW/dt = r W over [0, t] and returns steps+1 frames including
/// the initial one. Refuses illegal rate matrices unless allow_illegal.
std::vector<WignerFunction> evolve(const WignerFunction& w0, const RateMatrix& r, double t,
                                   int steps, bool allow_illegal = false,
                                   double tol = kDefaultTol);

}  // namespace qphase

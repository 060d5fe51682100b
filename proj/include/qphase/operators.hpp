#pragma once

#include "qphase/linalg.hpp"
#include "qphase/phase_space.hpp"

#include <vector>

namespace qphase {

/// e^{2*pi*i*k/N} with the exponent reduced mod N exactly before the single
/// trig evaluation, so chains of omega powers carry no accumulated phase error.
Complex omega_power(int n, long k);

/// Generalized Pauli pair: X|q> = |q+1 mod N>, Z|q> = omega^q |q>.
std::pair<ComplexMatrix, ComplexMatrix> pauli_generators(int n);

/// The displacement operators D, phase-point operators A and the derived
/// striation projectors for one prime dimension. Built once per N and shared
/// read-only; immutable after construction.
class OperatorBasis {
public:
    explicit OperatorBasis(int n);

    /// Shared cache, one immutable basis per dimension.
    static const OperatorBasis& get(int n);

    int n() const { return n_; }
    const ComplexMatrix& X() const { return x_; }
    const ComplexMatrix& Z() const { return z_; }

    /// D_b = omega^{b1*b2/2} X^{b1} Z^{b2} for odd N; for N = 2 the Pauli set
    /// {I, Z, X, Y} takes the displacement roles: D_(0,0)=I, D_(1,0)=X,
    /// D_(0,1)=Z, D_(1,1)=Y.
    const ComplexMatrix& displacement(const PhasePoint& beta) const;
    const ComplexMatrix& displacement(int point_index) const;

    /// Phase-point operator A_a: the Pauli combination for N = 2, the
    /// component form (A_a)_{kl} = delta_{2a1,k+l} omega^{a2(k-l)} for odd N.
    const ComplexMatrix& phase_point(const PhasePoint& alpha) const;
    const ComplexMatrix& phase_point(int point_index) const;

    /// Q = (1/N) sum of A over the line's points; a rank-1 projector onto a
    /// basis vector of the striation's measurement basis.
    ComplexMatrix striation_projector(const Line& line) const;

private:
    int n_;
    ComplexMatrix x_, z_;
    std::vector<ComplexMatrix> d_;
    std::vector<ComplexMatrix> a_;
};

}  // namespace qphase

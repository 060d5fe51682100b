#pragma once

#include "qphase/linalg.hpp"
#include "qphase/wigner.hpp"

#include <functional>
#include <vector>

namespace qphase {

/// Kraus representation of a channel. The trace-preserving condition
/// sum_j B_j^dag B_j = I is checked at construction; pass enforce_tp = false
/// for deliberately non-trace-preserving experiments.
struct KrausSet {
    KrausSet(int n, std::vector<ComplexMatrix> operators, double tol = kDefaultTol,
             bool enforce_tp = true);

    int n;
    std::vector<ComplexMatrix> operators;
};

/// Real N^2 x N^2 matrix of phase-space transition probabilities:
/// P(a, c) is the (possibly negative) probability of the transition c -> a,
/// acting on flattened Wigner functions.
struct TransitionMatrix {
    TransitionMatrix(int n, RealMatrix p);

    int n;
    RealMatrix p;
};

/// Hermitian N^2 x N^2 matrix uniquely determined by P; positive semidefinite
/// exactly for completely positive maps, and equal to the Choi operator in the
/// |Psi_b> basis.
struct BMatrix {
    BMatrix(int n, ComplexMatrix b);

    int n;
    ComplexMatrix b;
};

/// B(b,d) = sum_j coeff_j(b) conj(coeff_j(d)) with coeff_j(b) = (1/N) Tr(A_b B_j).
BMatrix bmatrix_from_kraus(const KrausSet& kraus);

/// P(a,c) = sum_{b,d} Xi_{abcd} B(b,d); real for Hermitian B.
TransitionMatrix p_from_bmatrix(const BMatrix& b, double tol = kDefaultTol);

/// B(b,d) = (1/N^2) sum_{a,c} Xi_{badc} P(a,c) -- the unique inversion of the
/// line above; accepts arbitrary real P.
BMatrix bmatrix_from_p(const TransitionMatrix& p);

/// P(a,r) = (1/N) Tr(A_a U A_r U^dag); orthogonal as a real matrix.
TransitionMatrix p_from_unitary(const ComplexMatrix& u, double tol = kDefaultTol);

/// P(a,c) = (1/N) Tr[A_a E(A_c)] for a linear map given by its action on
/// operators.
TransitionMatrix p_from_map(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                            int n, double tol = kDefaultTol);

struct ChannelVerdict {
    double tol = kDefaultTol;
    double normalization_residual = 0.0;  // max_c |sum_a P(a,c) - 1|
    double min_eigenvalue = 0.0;          // of the B matrix
    double hermiticity_residual = 0.0;    // of the B matrix
    double trace_b = 0.0;
    int rank = 0;
    bool legal = false;
    bool unitary = false;
};

/// Normalization + positive semidefiniteness of B, with margins.
ChannelVerdict validate_channel(const TransitionMatrix& p, double tol = kDefaultTol);

/// Normalization holds and B has rank 1.
bool is_unitary_channel(const TransitionMatrix& p, double tol = kDefaultTol);

/// max |sum_{rst} P(a,r) P(b,s) P(c,t) Gamma_{rst} - Gamma_{abc}|; vanishes
/// exactly for unitary-induced P.
double gamma_preservation_residual(const TransitionMatrix& p);

/// Builds the Choi operator on the doubled space and returns it in the basis
/// |Psi_b> = (I x A_b)|Phi>; equals bmatrix_from_kraus for the same channel.
ComplexMatrix choi_in_psi_basis(const KrausSet& kraus);
ComplexMatrix choi_in_psi_basis(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                int n);

/// W'(a) = sum_c P(a,c) W(c)
WignerFunction apply_channel(const TransitionMatrix& p, const WignerFunction& w);

/// Kraus operators recovered from a PSD B matrix via its eigendecomposition.
/// The output is one valid choice; Kraus sets are only unique up to unitary
/// mixing.
KrausSet kraus_from_bmatrix(const BMatrix& b, double tol = kDefaultTol);

}  // namespace qphase

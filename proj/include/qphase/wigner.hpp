#pragma once

#include "qphase/linalg.hpp"
#include "qphase/operators.hpp"
#include "qphase/phase_space.hpp"

#include <vector>

namespace qphase {

/// Real quasi-probability array over the N^2 phase points. Values may be
/// negative; a state's values sum to 1.
class WignerFunction {
public:
    explicit WignerFunction(int n) : n_(n), w_(static_cast<size_t>(n) * n) {}
    WignerFunction(int n, std::vector<double> values);

    int n() const { return n_; }
    double& operator[](int point_index) { return w_[point_index]; }
    const double& operator[](int point_index) const { return w_[point_index]; }
    double value(const PhasePoint& p) const { return w_[p.index()]; }
    const std::vector<double>& values() const { return w_; }

    double sum() const;

private:
    int n_;
    std::vector<double> w_;
};

/// Three- and four-point structure functions.
///
///   Gamma_{abc} = (1/N) Tr(A_a A_b A_c)
///   Xi_{abcd}   = (1/N) Tr(A_a A_b A_c A_d)
///
/// For odd N both have closed forms in the symplectic product: Gamma is a
/// pure phase over N and Xi is supported on parallelograms (a - d = b - c)
/// with phase twice the parallelogram area. The closed forms are the primary
/// evaluation path for odd N; N = 2 uses cached operator traces. Gamma is
/// precomputed as a dense N^6 table, Xi is evaluated on demand.
class StructureTables {
public:
    explicit StructureTables(int n);

    static const StructureTables& get(int n);

    int n() const { return n_; }

    Complex gamma(int ai, int bi, int ci) const {
        return gamma_[(static_cast<size_t>(ai) * nn_ + bi) * nn_ + ci];
    }
    Complex gamma(const PhasePoint& a, const PhasePoint& b, const PhasePoint& c) const {
        return gamma(a.index(), b.index(), c.index());
    }
    double im_gamma(int ai, int bi, int ci) const { return gamma(ai, bi, ci).imag(); }

    Complex xi(const PhasePoint& a, const PhasePoint& b, const PhasePoint& c,
               const PhasePoint& d) const;
    Complex xi(int ai, int bi, int ci, int di) const;

private:
    int n_;
    int nn_;  // N^2
    std::vector<Complex> gamma_;
    std::vector<Complex> xi2_;  // dense table, N = 2 only
};

/// Operator-trace evaluation of Gamma; the independent route used as the
/// N = 2 path and as the cross-check for the closed form.
Complex gamma_trace_form(int n, const PhasePoint& a, const PhasePoint& b,
                         const PhasePoint& c);
Complex xi_trace_form(int n, const PhasePoint& a, const PhasePoint& b,
                      const PhasePoint& c, const PhasePoint& d);

/// W_a = (1/N) Tr(A_a rho). `require_trace_one` may be disabled to transform
/// raw operators rather than states.
WignerFunction wigner_from_density(const ComplexMatrix& rho, double tol = kDefaultTol,
                                   bool require_trace_one = true);

/// rho = sum_a W_a A_a; Hermitian for any real W.
ComplexMatrix density_from_wigner(const WignerFunction& w);

/// Line sums per striation, in enumerate_striations order. For a state these
/// are the outcome probabilities of the striation's measurement basis.
std::vector<std::vector<double>> striation_marginals(const WignerFunction& w);

/// max_a |W_a - sum_{bc} Gamma_{abc} W_b W_c|; zero exactly for pure states.
double purity_residual(const WignerFunction& w);
bool purity_check(const WignerFunction& w, double tol = kDefaultTol);

}  // namespace qphase

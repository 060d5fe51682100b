#include "qphase/selftest.hpp"

#include "qphase/channels.hpp"
#include "qphase/dynamics.hpp"
#include "qphase/operators.hpp"
#include "qphase/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <string>
#include <vector>

namespace qphase {

namespace {

class Reporter {
public:
    explicit Reporter(std::ostream& out) : out_(out) {}

    void check(const std::string& name, double residual, double tol) {
        const bool ok = residual <= tol;
        all_ok_ &= ok;
        out_ << (ok ? "ok   " : "FAIL ") << name << "  (residual " << std::scientific
             << std::setprecision(2) << residual << ", tol " << tol << ")\n";
    }

    void check_true(const std::string& name, bool ok) {
        all_ok_ &= ok;
        out_ << (ok ? "ok   " : "FAIL ") << name << "\n";
    }

    bool all_ok() const { return all_ok_; }

private:
    std::ostream& out_;
    bool all_ok_ = true;
};

double phase_point_axiom_residual(int n) {
    const auto& basis = OperatorBasis::get(n);
    const int nn = n * n;
    double residual = 0.0;

    // (i) unit trace, (ii) orthogonality
    for (int i = 0; i < nn; ++i) {
        residual = std::max(residual, std::abs(basis.phase_point(i).trace() - Complex(1.0, 0.0)));
        for (int j = 0; j < nn; ++j) {
            Complex t{};
            const auto& a = basis.phase_point(i);
            const auto& b = basis.phase_point(j);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) t += a(k, l) * b(l, k);
            residual = std::max(residual, std::abs(t - Complex(i == j ? n : 0.0, 0.0)));
        }
    }

    // (iii) striation projectors and mutual unbiasedness
    const auto striations = enumerate_striations(n);
    std::vector<std::vector<ComplexMatrix>> projectors;
    for (const auto& striation : striations) {
        std::vector<ComplexMatrix> qs;
        ComplexMatrix sum(n);
        for (const auto& line : striation.lines) {
            ComplexMatrix q = basis.striation_projector(line);
            residual = std::max(residual, (q * q - q).max_abs());
            residual = std::max(residual, q.hermiticity_residual());
            sum += q;
            qs.push_back(std::move(q));
        }
        residual = std::max(residual, (sum - ComplexMatrix::identity(n)).max_abs());
        projectors.push_back(std::move(qs));
    }
    for (size_t s1 = 0; s1 < projectors.size(); ++s1)
        for (size_t s2 = s1 + 1; s2 < projectors.size(); ++s2)
            for (const auto& q1 : projectors[s1])
                for (const auto& q2 : projectors[s2]) {
                    Complex t{};
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l) t += q1(k, l) * q2(l, k);
                    residual = std::max(residual, std::abs(t - Complex(1.0 / n, 0.0)));
                }

    // (iv) resolution of the identity
    ComplexMatrix sum(n);
    for (int i = 0; i < nn; ++i) sum += basis.phase_point(i);
    residual = std::max(residual, (sum * Complex(1.0 / n, 0.0) - ComplexMatrix::identity(n)).max_abs());
    return residual;
}

TransitionMatrix transpose_p() {
    // P(a,c) = 1/2, except -1/2 when a + c = (1,1)
    RealMatrix p(4);
    for (int ai = 0; ai < 4; ++ai)
        for (int ci = 0; ci < 4; ++ci) {
            const int sum1 = (ai / 2 + ci / 2) % 2;
            const int sum2 = (ai % 2 + ci % 2) % 2;
            p(ai, ci) = (sum1 == 1 && sum2 == 1) ? -0.5 : 0.5;
        }
    return {2, std::move(p)};
}

}  // namespace

bool run_selftest(std::ostream& out) {
    Reporter report(out);

    for (int n : {2, 3, 5, 7}) {
        report.check("phase-point operator axioms (i)-(iv), N=" + std::to_string(n),
                     phase_point_axiom_residual(n), 1e-10);
    }

    {
        // N=2 phase-point operator at the origin: (I + Z + X + Y)/2
        const auto& basis = OperatorBasis::get(2);
        ComplexMatrix expected(2);
        expected(0, 0) = 1.0;
        expected(0, 1) = Complex(0.5, -0.5);
        expected(1, 0) = Complex(0.5, 0.5);
        report.check("qubit phase-point operator at the origin",
                     (basis.phase_point(PhasePoint(0, 0, 2)) - expected).max_abs(), 1e-15);
    }

    {
        report.check_true("striation counts, N=2: 3 striations of 2 lines",
                          enumerate_striations(2).size() == 3);
    }

    {
        // qubit transpose: B matrix entries, eigenvalues, illegality
        const auto p = transpose_p();
        const auto from_map = p_from_map(
            [](const ComplexMatrix& m) { return m.transpose(); }, 2);
        report.check("transpose transition probabilities from the map path",
                     (from_map.p - p.p).max_abs(), 1e-12);

        const auto bm = bmatrix_from_p(p);
        ComplexMatrix expected(4);
        const double e[4][4] = {{1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) expected(r, c) = 0.25 * e[r][c];
        report.check("transpose B matrix (+-1/4 pattern)", (bm.b - expected).max_abs(), 1e-12);

        const auto es = hermitian_eig(bm.b);
        const double expected_eigs[4] = {-0.5, 0.5, 0.5, 0.5};
        double eig_residual = 0.0;
        for (int k = 0; k < 4; ++k)
            eig_residual = std::max(eig_residual, std::abs(es.values[k] - expected_eigs[k]));
        report.check("transpose B eigenvalues (-1/2, 1/2, 1/2, 1/2)", eig_residual, 1e-10);

        const auto verdict = validate_channel(p);
        report.check_true("transpose verdict: normalized but illegal",
                          !verdict.legal && verdict.normalization_residual <= 1e-12 &&
                              verdict.min_eigenvalue < -0.49);
    }

    {
        // identity channel: flat B of entries 1/N^2, rank 1, identity P
        for (int n : {2, 3}) {
            const KrausSet identity(n, {ComplexMatrix::identity(n)});
            const auto bm = bmatrix_from_kraus(identity);
            double residual = 0.0;
            for (int r = 0; r < n * n; ++r)
                for (int c = 0; c < n * n; ++c)
                    residual = std::max(residual,
                                        std::abs(bm.b(r, c) - Complex(1.0 / (n * n), 0.0)));
            report.check("identity-channel B entries 1/N^2, N=" + std::to_string(n), residual,
                         1e-12);
            report.check_true("identity-channel B rank 1, N=" + std::to_string(n),
                              numerical_rank(bm.b) == 1);
            const auto p = p_from_bmatrix(bm);
            report.check("identity-channel P is the identity, N=" + std::to_string(n),
                         (p.p - RealMatrix::identity(n * n)).max_abs(), 1e-12);
        }
    }

    {
        // single unitary: rank-1 B with unit weight (N=3, U = X)
        const auto [x, z] = pauli_generators(3);
        (void)z;
        const auto p = p_from_unitary(x);
        const auto bm = bmatrix_from_p(p);
        report.check_true("unitary-channel B rank 1 (Kraus weight 1)",
                          numerical_rank(bm.b) == 1 &&
                              std::abs(bm.b.trace() - Complex(1.0, 0.0)) <= 1e-10);
        report.check("unitary P is orthogonal",
                     (p.p * p.p.transpose() - RealMatrix::identity(9)).max_abs(), 1e-10);
    }

    {
        // Fig. 1 state: position eigenstate |2> at N=5
        ComplexMatrix rho(5);
        rho(2, 2) = 1.0;
        const auto w = wigner_from_density(rho);
        double residual = 0.0;
        for (int a1 = 0; a1 < 5; ++a1)
            for (int a2 = 0; a2 < 5; ++a2)
                residual = std::max(residual,
                                    std::abs(w[a1 * 5 + a2] - (a1 == 2 ? 0.2 : 0.0)));
        report.check("position eigenstate |2>: W = 1/5 on the a1=2 line", residual, 1e-12);

        const auto marginals = striation_marginals(w);
        double marg_residual = 0.0;
        for (int c = 0; c < 5; ++c)
            marg_residual =
                std::max(marg_residual, std::abs(marginals[0][c] - (c == 2 ? 1.0 : 0.0)));
        report.check("position marginal of |2> is (0,0,1,0,0)", marg_residual, 1e-12);
    }

    {
        // a point-mass Wigner function corresponds to the operator A itself
        const int n = 3;
        const PhasePoint target(1, 2, n);
        WignerFunction w(n);
        w[target.index()] = 1.0;
        const auto rho = density_from_wigner(w);
        report.check("point-mass Wigner function maps back to its phase-point operator",
                     (rho - OperatorBasis::get(n).phase_point(target)).max_abs(), 1e-15);
    }

    {
        // Gamma translation covariance and Xi parallelogram support at N=5
        const int n = 5;
        const auto& tables = StructureTables::get(n);
        const PhasePoint a(1, 3, n), b(4, 0, n), c(2, 2, n), shift(3, 1, n);
        report.check("Gamma translation covariance",
                     std::abs(tables.gamma(a + shift, b + shift, c + shift) -
                              tables.gamma(a, b, c)),
                     1e-12);
        const PhasePoint d(0, 1, n);  // a - d != b - c
        report.check("Xi vanishes off parallelograms", std::abs(tables.xi(a, b, c, d)), 1e-15);
        report.check("Xi trace form agrees", std::abs(xi_trace_form(n, a, b, c, d)), 1e-10);
    }

    {
        // R projector: trace N^2 - 1; eigenvalues {0,1} at N=3
        for (int n : {2, 3, 5}) {
            const auto projector = build_r_projector(n);
            double trace = 0.0;
            for (int i = 0; i < projector.r.dim(); ++i) trace += projector.r(i, i);
            report.check("Tr R = N^2 - 1, N=" + std::to_string(n),
                         std::abs(trace - (n * n - 1)), 1e-9);
        }
        const auto projector = build_r_projector(3);
        const auto es = hermitian_eig(projector.r.to_complex(), 1e-9);
        double residual = 0.0;
        for (double v : es.values)
            residual = std::max(residual, std::min(std::abs(v), std::abs(v - 1.0)));
        report.check("R eigenvalues are 0 or 1 (N=3)", residual, 1e-9);
    }

    {
        // N=5 ring: rates match the closed form, eigenvalues 4 sin^2(k pi/5)
        const int n = 5;
        const auto ring = ring_hamiltonian(n);
        const auto rates = rates_from_hamiltonian(ring);

        RealMatrix expected(n * n);
        const int eta = (n + 1) / 2;
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 < n; ++c2) {
                const double rate = 2.0 * std::sin(2.0 * std::numbers::pi * c2 / n);
                expected(((c1 + eta) % n) * n + c2, c1 * n + c2) += rate;
                expected(((c1 - eta + n) % n) * n + c2, c1 * n + c2) -= rate;
            }
        report.check("ring rates match the half-displacement closed form",
                     (rates.r - expected).max_abs(), 1e-12);

        const auto h = matrix_from_hamiltonian(ring);
        const auto es = hermitian_eig(h);
        std::vector<double> expected_eigs;
        for (int k = 0; k < n; ++k) {
            const double s = std::sin(std::numbers::pi * k / n);
            expected_eigs.push_back(4.0 * s * s);
        }
        std::sort(expected_eigs.begin(), expected_eigs.end());
        double residual = 0.0;
        for (int k = 0; k < n; ++k)
            residual = std::max(residual, std::abs(es.values[k] - expected_eigs[k]));
        report.check("ring eigenvalues 4 sin^2(k pi/5)", residual, 1e-10);

        // displacement rates for mu=(1,0) connect points exactly eta apart
        const auto dr = displacement_rates(PhasePoint(1, 0, n));
        bool support_ok = true;
        for (int ai = 0; ai < n * n && support_ok; ++ai)
            for (int ci = 0; ci < n * n; ++ci) {
                if (std::abs(dr(ai, ci)) < 1e-15) continue;
                const int d1 = ((ai / n) - (ci / n) + n) % n;
                if ((ai % n) != (ci % n) || (d1 != eta && d1 != n - eta)) {
                    support_ok = false;
                    break;
                }
            }
        report.check_true("displacement rates move by half the displacement", support_ok);

        // uniform W is a fixed point of any Hamiltonian flow
        WignerFunction uniform(n);
        for (int i = 0; i < n * n; ++i) uniform[i] = 1.0 / (n * n);
        const auto frames = evolve(uniform, rates, 1.0, 10);
        double drift = 0.0;
        for (int i = 0; i < n * n; ++i)
            drift = std::max(drift, std::abs(frames.back()[i] - uniform[i]));
        report.check("completely mixed state is stationary", drift, 1e-12);

        // position marginal of |2> has zero first-order change
        ComplexMatrix rho(n);
        rho(2, 2) = 1.0;
        const auto w0 = wigner_from_density(rho);
        const auto dw = rates.r.apply(w0.values());
        double marginal_rate = 0.0;
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int a2 = 0; a2 < n; ++a2) s += dw[c * n + a2];
            marginal_rate = std::max(marginal_rate, std::abs(s));
        }
        report.check("position marginal is first-order invariant", marginal_rate, 1e-12);
    }

    return report.all_ok();
}

}  // namespace qphase

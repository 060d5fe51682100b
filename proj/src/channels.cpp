#include "qphase/channels.hpp"

#include "qphase/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qphase {

namespace {

void require_prime(int n) {
    if (!is_prime(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not prime");
    }
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t{};
    const int n = a.dim();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t += a(k, l) * b(l, k);
    return t;
}

/// coeff(b) = (1/N) Tr(A_b M), the expansion of M in the phase-point basis
std::vector<Complex> phase_space_coefficients(const ComplexMatrix& m) {
    const int n = m.dim();
    const auto& basis = OperatorBasis::get(n);
    std::vector<Complex> coeffs(n * n);
    for (int i = 0; i < n * n; ++i) {
        coeffs[i] = trace_product(basis.phase_point(i), m) * (1.0 / n);
    }
    return coeffs;
}

int point_add(int i, int j, int n) {
    const int a1 = i / n + j / n;
    const int a2 = i % n + j % n;
    return (a1 % n) * n + a2 % n;
}

int point_sub(int i, int j, int n) {
    const int a1 = i / n - j / n + n;
    const int a2 = i % n - j % n + n;
    return (a1 % n) * n + a2 % n;
}

// 2<u, v> mod N for points given as flat indices
long double_symplectic(int ui, int vi, int n) {
    const long u1 = ui / n, u2 = ui % n;
    const long v1 = vi / n, v2 = vi % n;
    return 2 * (u2 * v1 - u1 * v2);
}

}  // namespace

KrausSet::KrausSet(int n_, std::vector<ComplexMatrix> operators_, double tol, bool enforce_tp)
    : n(n_), operators(std::move(operators_)) {
    require_prime(n);
    if (operators.empty()) {
        throw std::invalid_argument("Kraus set needs at least one operator");
    }
    ComplexMatrix sum(n);
    for (const auto& op : operators) {
        if (op.dim() != n) {
            throw std::invalid_argument("Kraus operator dimension " +
                                        std::to_string(op.dim()) + " does not match " +
                                        std::to_string(n));
        }
        sum += op.adjoint() * op;
    }
    if (enforce_tp) {
        const double residual = (sum - ComplexMatrix::identity(n)).max_abs();
        if (residual > tol) {
            throw std::invalid_argument(
                "Kraus operators are not trace preserving; residual " +
                std::to_string(residual));
        }
    }
}

TransitionMatrix::TransitionMatrix(int n_, RealMatrix p_) : n(n_), p(std::move(p_)) {
    require_prime(n);
    if (p.dim() != n * n) {
        throw std::invalid_argument("transition matrix must be N^2 x N^2");
    }
}

BMatrix::BMatrix(int n_, ComplexMatrix b_) : n(n_), b(std::move(b_)) {
    require_prime(n);
    if (b.dim() != n * n) {
        throw std::invalid_argument("B matrix must be N^2 x N^2");
    }
}

BMatrix bmatrix_from_kraus(const KrausSet& kraus) {
    const int n = kraus.n;
    const int nn = n * n;
    ComplexMatrix b(nn);
    for (const auto& op : kraus.operators) {
        const auto coeffs = phase_space_coefficients(op);
        for (int bi = 0; bi < nn; ++bi)
            for (int di = 0; di < nn; ++di) b(bi, di) += coeffs[bi] * std::conj(coeffs[di]);
    }
    return {n, std::move(b)};
}

TransitionMatrix p_from_bmatrix(const BMatrix& bm, double tol) {
    const int n = bm.n;
    const int nn = n * n;
    const auto& tables = StructureTables::get(n);
    RealMatrix p(nn);

    if (n == 2) {
        for (int ai = 0; ai < nn; ++ai)
            for (int ci = 0; ci < nn; ++ci) {
                Complex s{};
                for (int bi = 0; bi < nn; ++bi)
                    for (int di = 0; di < nn; ++di)
                        s += tables.xi(ai, bi, ci, di) * bm.b(bi, di);
                p(ai, ci) = real_checked(s, tol, "transition probability");
            }
        return {n, std::move(p)};
    }

    // Odd N: Xi is supported on d = a - b + c, with phase 2<c - b, b - a>.
    for (int ai = 0; ai < nn; ++ai) {
        for (int ci = 0; ci < nn; ++ci) {
            Complex s{};
            for (int bi = 0; bi < nn; ++bi) {
                const int di = point_sub(point_add(ai, ci, n), bi, n);
                const Complex xi =
                    omega_power(n, double_symplectic(point_sub(ci, bi, n), point_sub(bi, ai, n), n));
                s += xi * bm.b(bi, di);
            }
            p(ai, ci) = real_checked(s, tol, "transition probability");
        }
    }
    return {n, std::move(p)};
}

BMatrix bmatrix_from_p(const TransitionMatrix& pm) {
    const int n = pm.n;
    const int nn = n * n;
    const auto& tables = StructureTables::get(n);
    ComplexMatrix b(nn);
    const double scale = 1.0 / (nn);

    if (n == 2) {
        for (int bi = 0; bi < nn; ++bi)
            for (int di = 0; di < nn; ++di) {
                Complex s{};
                for (int ai = 0; ai < nn; ++ai)
                    for (int ci = 0; ci < nn; ++ci)
                        s += tables.xi(bi, ai, di, ci) * pm.p(ai, ci);
                b(bi, di) = s * scale;
            }
        return {n, std::move(b)};
    }

    // Odd N: Xi_{badc} is supported on c = b - a + d, phase 2<c - b, a - b>.
    for (int bi = 0; bi < nn; ++bi) {
        for (int di = 0; di < nn; ++di) {
            Complex s{};
            for (int ai = 0; ai < nn; ++ai) {
                const int ci = point_sub(point_add(bi, di, n), ai, n);
                const Complex xi =
                    omega_power(n, double_symplectic(point_sub(ci, bi, n), point_sub(ai, bi, n), n));
                s += xi * pm.p(ai, ci);
            }
            b(bi, di) = s * scale;
        }
    }
    return {n, std::move(b)};
}

TransitionMatrix p_from_unitary(const ComplexMatrix& u, double tol) {
    const int n = u.dim();
    require_prime(n);
    const double residual = (u.adjoint() * u - ComplexMatrix::identity(n)).max_abs();
    if (residual > tol) {
        throw std::invalid_argument("p_from_unitary: input is not unitary; residual " +
                                    std::to_string(residual));
    }
    const ComplexMatrix udag = u.adjoint();
    return p_from_map([&](const ComplexMatrix& m) { return u * m * udag; }, n, tol);
}

TransitionMatrix p_from_map(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                            int n, double tol) {
    require_prime(n);
    const int nn = n * n;
    const auto& basis = OperatorBasis::get(n);
    RealMatrix p(nn);
    for (int ci = 0; ci < nn; ++ci) {
        const ComplexMatrix image = map(basis.phase_point(ci));
        if (image.dim() != n) {
            throw std::invalid_argument("map changed the operator dimension");
        }
        for (int ai = 0; ai < nn; ++ai) {
            p(ai, ci) = real_checked(trace_product(basis.phase_point(ai), image) * (1.0 / n),
                                     tol, "transition probability");
        }
    }
    return {n, std::move(p)};
}

ChannelVerdict validate_channel(const TransitionMatrix& p, double tol) {
    const int nn = p.n * p.n;
    ChannelVerdict verdict;
    verdict.tol = tol;

    for (int ci = 0; ci < nn; ++ci) {
        double colsum = 0.0;
        for (int ai = 0; ai < nn; ++ai) colsum += p.p(ai, ci);
        verdict.normalization_residual =
            std::max(verdict.normalization_residual, std::abs(colsum - 1.0));
    }

    const BMatrix bm = bmatrix_from_p(p);
    verdict.hermiticity_residual = bm.b.hermiticity_residual();
    verdict.trace_b = bm.b.trace().real();

    const auto es = hermitian_eig(bm.b, std::max(tol, verdict.hermiticity_residual));
    verdict.min_eigenvalue = es.values.front();
    for (double v : es.values)
        if (std::abs(v) > tol) ++verdict.rank;

    verdict.legal =
        verdict.normalization_residual <= tol && verdict.min_eigenvalue >= -tol;
    verdict.unitary = verdict.normalization_residual <= tol && verdict.rank == 1;
    return verdict;
}

bool is_unitary_channel(const TransitionMatrix& p, double tol) {
    return validate_channel(p, tol).unitary;
}

double gamma_preservation_residual(const TransitionMatrix& pm) {
    const int n = pm.n;
    const int nn = n * n;
    const auto& tables = StructureTables::get(n);

    // contract one index at a time: t1(a,s,t), t2(a,b,t), t3(a,b,c)
    std::vector<Complex> t1(static_cast<size_t>(nn) * nn * nn);
    for (int ai = 0; ai < nn; ++ai)
        for (int si = 0; si < nn; ++si)
            for (int ti = 0; ti < nn; ++ti) {
                Complex s{};
                for (int ri = 0; ri < nn; ++ri) s += pm.p(ai, ri) * tables.gamma(ri, si, ti);
                t1[(static_cast<size_t>(ai) * nn + si) * nn + ti] = s;
            }
    std::vector<Complex> t2(t1.size());
    for (int ai = 0; ai < nn; ++ai)
        for (int bi = 0; bi < nn; ++bi)
            for (int ti = 0; ti < nn; ++ti) {
                Complex s{};
                for (int si = 0; si < nn; ++si)
                    s += pm.p(bi, si) * t1[(static_cast<size_t>(ai) * nn + si) * nn + ti];
                t2[(static_cast<size_t>(ai) * nn + bi) * nn + ti] = s;
            }
    double residual = 0.0;
    for (int ai = 0; ai < nn; ++ai)
        for (int bi = 0; bi < nn; ++bi)
            for (int ci = 0; ci < nn; ++ci) {
                Complex s{};
                for (int ti = 0; ti < nn; ++ti)
                    s += pm.p(ci, ti) * t2[(static_cast<size_t>(ai) * nn + bi) * nn + ti];
                residual = std::max(residual, std::abs(s - tables.gamma(ai, bi, ci)));
            }
    return residual;
}

namespace {

ComplexMatrix choi_in_psi_basis_impl(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                     int n) {
    require_prime(n);
    const int nn = n * n;
    const auto& basis = OperatorBasis::get(n);

    // Choi operator C[(j,l),(k,m)] = (1/N) E(|j><k|)_{lm} on the doubled space
    ComplexMatrix choi(nn);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            ComplexMatrix unit(n);
            unit(j, k) = 1.0;
            const ComplexMatrix image = map(unit);
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m)
                    choi(j * n + l, k * n + m) = image(l, m) * (1.0 / n);
        }
    }

    // |Psi_b>[(j,l)] = (A_b)_{lj} / sqrt(N)
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<std::vector<Complex>> psi(nn, std::vector<Complex>(nn));
    for (int bi = 0; bi < nn; ++bi) {
        const auto& a = basis.phase_point(bi);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) psi[bi][j * n + l] = a(l, j) * inv_sqrt_n;
    }

    ComplexMatrix result(nn);
    for (int di = 0; di < nn; ++di) {
        const auto cpsi = choi.apply(psi[di]);
        for (int bi = 0; bi < nn; ++bi) {
            Complex s{};
            for (int i = 0; i < nn; ++i) s += std::conj(psi[bi][i]) * cpsi[i];
            result(bi, di) = s;
        }
    }
    return result;
}

}  // namespace

ComplexMatrix choi_in_psi_basis(const KrausSet& kraus) {
    return choi_in_psi_basis_impl(
        [&](const ComplexMatrix& m) {
            ComplexMatrix out(kraus.n);
            for (const auto& op : kraus.operators) out += op * m * op.adjoint();
            return out;
        },
        kraus.n);
}

ComplexMatrix choi_in_psi_basis(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                int n) {
    return choi_in_psi_basis_impl(map, n);
}

WignerFunction apply_channel(const TransitionMatrix& p, const WignerFunction& w) {
    if (p.n != w.n()) {
        throw std::invalid_argument("transition matrix and Wigner function dimensions differ");
    }
    return {p.n, p.p.apply(w.values())};
}

KrausSet kraus_from_bmatrix(const BMatrix& bm, double tol) {
    const int n = bm.n;
    const int nn = n * n;
    const auto& basis = OperatorBasis::get(n);
    const auto es = hermitian_eig(bm.b, std::max(tol, bm.b.hermiticity_residual()));
    if (es.values.front() < -tol) {
        throw std::invalid_argument("kraus_from_bmatrix: B matrix is not PSD; min eigenvalue " +
                                    std::to_string(es.values.front()));
    }
    std::vector<ComplexMatrix> ops;
    for (int k = nn - 1; k >= 0; --k) {
        if (es.values[k] <= tol) continue;
        const double scale = std::sqrt(es.values[k]);
        ComplexMatrix op(n);
        for (int bi = 0; bi < nn; ++bi) {
            const Complex coeff = scale * es.vectors(bi, k);
            if (coeff == Complex{}) continue;
            const auto& a = basis.phase_point(bi);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) op(r, c) += coeff * a(r, c);
        }
        ops.push_back(std::move(op));
    }
    return {n, std::move(ops), tol};
}

}  // namespace qphase

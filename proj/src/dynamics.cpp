#include "qphase/dynamics.hpp"

#include "qphase/operators.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qphase {

namespace {

void require_prime(int n) {
    if (!is_prime(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not prime");
    }
}

void require_odd_prime(int n) {
    require_prime(n);
    if (n == 2) {
        throw std::invalid_argument("operation requires an odd prime dimension");
    }
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t{};
    const int n = a.dim();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t += a(k, l) * b(l, k);
    return t;
}

int point_add(int i, int j, int n) {
    return ((i / n + j / n) % n) * n + (i % n + j % n) % n;
}

int point_sub(int i, int j, int n) {
    return ((i / n - j / n + n) % n) * n + (i % n - j % n + n) % n;
}

long symplectic_flat(int ui, int vi, int n) {
    const long u1 = ui / n, u2 = ui % n;
    const long v1 = vi / n, v2 = vi % n;
    return u2 * v1 - u1 * v2;
}

}  // namespace

HamiltonianCoefficients::HamiltonianCoefficients(int n_, std::vector<double> a_coeffs_)
    : n(n_), a_coeffs(std::move(a_coeffs_)) {
    require_prime(n);
    if (a_coeffs.size() != static_cast<size_t>(n) * n) {
        throw std::invalid_argument("Hamiltonian needs N^2 phase-point coefficients");
    }
}

HamiltonianCoefficients hamiltonian_from_matrix(const ComplexMatrix& h, double tol) {
    const int n = h.dim();
    require_prime(n);
    const double asym = h.hermiticity_residual();
    if (asym > tol) {
        throw std::invalid_argument("Hamiltonian is not Hermitian; max asymmetry " +
                                    std::to_string(asym));
    }
    const auto& basis = OperatorBasis::get(n);
    std::vector<double> coeffs(static_cast<size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) {
        coeffs[i] = real_checked(trace_product(basis.phase_point(i), h) * (1.0 / n), tol,
                                 "Hamiltonian coefficient");
    }
    return {n, std::move(coeffs)};
}

ComplexMatrix matrix_from_hamiltonian(const HamiltonianCoefficients& h) {
    const auto& basis = OperatorBasis::get(h.n);
    ComplexMatrix m(h.n);
    for (int i = 0; i < h.n * h.n; ++i) {
        const double c = h.a_coeffs[i];
        if (c == 0.0) continue;
        const auto& a = basis.phase_point(i);
        for (int r = 0; r < h.n; ++r)
            for (int col = 0; col < h.n; ++col) m(r, col) += c * a(r, col);
    }
    return m;
}

HamiltonianCoefficients hamiltonian_from_dcoeffs(int n, const std::vector<Complex>& kappa,
                                                 double tol) {
    require_prime(n);
    const int nn = n * n;
    if (kappa.size() != static_cast<size_t>(nn)) {
        throw std::invalid_argument("kappa needs N^2 entries");
    }
    for (int mu = 0; mu < nn; ++mu) {
        const int neg = point_sub(0, mu, n);
        if (std::abs(kappa[neg] - std::conj(kappa[mu])) > tol) {
            throw std::invalid_argument(
                "kappa(-mu) = conj(kappa(mu)) violated; the operator is not Hermitian");
        }
    }
    // coeff(b) = sum_mu kappa_mu D^(mu)_b with D^(mu)_b = (1/N) omega^{<mu,b>}
    std::vector<double> coeffs(nn);
    for (int bi = 0; bi < nn; ++bi) {
        Complex s{};
        for (int mu = 0; mu < nn; ++mu) {
            if (kappa[mu] == Complex{}) continue;
            s += kappa[mu] * omega_power(n, symplectic_flat(mu, bi, n));
        }
        coeffs[bi] = real_checked(s * (1.0 / n), tol, "Hamiltonian coefficient");
    }
    HamiltonianCoefficients h(n, std::move(coeffs));
    h.d_coeffs = kappa;
    return h;
}

RateMatrix::RateMatrix(int n_, RealMatrix r_, double hbar_) : n(n_), r(std::move(r_)), hbar(hbar_) {
    require_prime(n);
    if (r.dim() != n * n) {
        throw std::invalid_argument("rate matrix must be N^2 x N^2");
    }
    if (hbar <= 0.0) {
        throw std::invalid_argument("hbar must be positive");
    }
}

RateMatrix rates_from_hamiltonian(const HamiltonianCoefficients& h, double hbar) {
    const int nn = h.n * h.n;
    const auto& tables = StructureTables::get(h.n);
    RealMatrix r(nn);
    for (int ai = 0; ai < nn; ++ai) {
        for (int ci = 0; ci < nn; ++ci) {
            double s = 0.0;
            for (int bi = 0; bi < nn; ++bi) s += tables.im_gamma(ai, bi, ci) * h.a_coeffs[bi];
            r(ai, ci) = 2.0 / hbar * s;
        }
    }
    return {h.n, std::move(r), hbar};
}

HamiltonianCoefficients hamiltonian_from_rates(const RateMatrix& rm) {
    const int nn = rm.n * rm.n;
    const auto& tables = StructureTables::get(rm.n);
    std::vector<double> coeffs(nn);
    for (int bi = 0; bi < nn; ++bi) {
        double s = 0.0;
        for (int ai = 0; ai < nn; ++ai)
            for (int ci = 0; ci < nn; ++ci) s += rm.r(ai, ci) * tables.im_gamma(ai, bi, ci);
        coeffs[bi] = rm.hbar / nn * s;
    }
    return {rm.n, std::move(coeffs)};
}

std::vector<double> RProjector::apply(const std::vector<double>& rate_vector) const {
    return r.apply(rate_vector);
}

namespace {

RProjector build_r_projector_uncached(int n) {
    require_prime(n);
    if (n > 7) {
        throw std::invalid_argument("R projector is kept dense; N > 7 is out of range");
    }
    const int nn = n * n;
    const auto& tables = StructureTables::get(n);

    // Translation covariance of Gamma collapses the N^10 construction to the
    // N^6-entry kernel F(a,b,c) = (2/N^2) sum_z g(a+z, b+z) g(c+z, z)
    // with g(u,v) = Im Gamma_{u,0,v}; then R_{ac,a'c'} = F(a-c', c-c', a'-c').
    std::vector<double> g(static_cast<size_t>(nn) * nn);
    for (int ui = 0; ui < nn; ++ui)
        for (int vi = 0; vi < nn; ++vi)
            g[static_cast<size_t>(ui) * nn + vi] = tables.im_gamma(ui, 0, vi);

    std::vector<double> f(static_cast<size_t>(nn) * nn * nn);
    for (int ai = 0; ai < nn; ++ai)
        for (int bi = 0; bi < nn; ++bi)
            for (int ci = 0; ci < nn; ++ci) {
                double s = 0.0;
                for (int zi = 0; zi < nn; ++zi)
                    s += g[static_cast<size_t>(point_add(ai, zi, n)) * nn + point_add(bi, zi, n)] *
                         g[static_cast<size_t>(point_add(ci, zi, n)) * nn + zi];
                f[(static_cast<size_t>(ai) * nn + bi) * nn + ci] = 2.0 / nn * s;
            }

    RealMatrix r(nn * nn);
    for (int ai = 0; ai < nn; ++ai)
        for (int ci = 0; ci < nn; ++ci)
            for (int api = 0; api < nn; ++api)
                for (int cpi = 0; cpi < nn; ++cpi) {
                    r(ai * nn + ci, api * nn + cpi) =
                        f[(static_cast<size_t>(point_sub(ai, cpi, n)) * nn +
                           point_sub(ci, cpi, n)) *
                              nn +
                          point_sub(api, cpi, n)];
                }
    return {n, std::move(r)};
}

const RProjector& cached_r_projector(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<RProjector>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<RProjector>(build_r_projector_uncached(n))).first;
    }
    return *it->second;
}

}  // namespace

RProjector build_r_projector(int n) { return cached_r_projector(n); }

RateVerdict validate_rates(const RateMatrix& rm, double tol) {
    const int nn = rm.n * rm.n;
    RateVerdict verdict;
    verdict.tol = tol;

    for (int ai = 0; ai < nn; ++ai)
        for (int ci = 0; ci < nn; ++ci)
            verdict.antisymmetry_residual =
                std::max(verdict.antisymmetry_residual, std::abs(rm.r(ai, ci) + rm.r(ci, ai)));

    for (int ci = 0; ci < nn; ++ci) {
        double colsum = 0.0;
        for (int ai = 0; ai < nn; ++ai) colsum += rm.r(ai, ci);
        verdict.column_sum_residual = std::max(verdict.column_sum_residual, std::abs(colsum));
    }

    const auto& projector = cached_r_projector(rm.n);
    const auto projected = projector.apply(rm.r.data());
    for (size_t i = 0; i < projected.size(); ++i) {
        verdict.fixed_point_residual =
            std::max(verdict.fixed_point_residual, std::abs(projected[i] - rm.r.data()[i]));
    }

    verdict.legal = verdict.fixed_point_residual <= tol;
    return verdict;
}

RateMatrix project_rates(const std::vector<double>& v, int n) {
    require_prime(n);
    const int nn = n * n;
    if (v.size() != static_cast<size_t>(nn) * nn) {
        throw std::invalid_argument("rate vector needs N^4 entries");
    }
    const auto& projector = cached_r_projector(n);
    RealMatrix r(nn);
    r.data() = projector.apply(v);
    return {n, std::move(r)};
}

double odd_prime_condition_residual(const RateMatrix& rm) {
    require_odd_prime(rm.n);
    const int n = rm.n;
    const int nn = n * n;
    double residual = 0.0;
    for (int ai = 0; ai < nn; ++ai) {
        for (int ci = 0; ci < nn; ++ci) {
            const int diff = point_sub(ai, ci, n);
            double s = 0.0;
            for (int zi = 0; zi < nn; ++zi) {
                const double angle =
                    4.0 * std::numbers::pi / n * mod_n(symplectic_flat(diff, zi, n), n);
                s += rm.r(point_add(ai, zi, n), point_add(ci, zi, n)) * std::cos(angle);
            }
            residual = std::max(residual, std::abs(2.0 / nn * s - rm.r(ai, ci)));
        }
    }
    return residual;
}

ComplexMatrix displacement_rates(const PhasePoint& mu, double hbar) {
    const int n = mu.modulus();
    require_odd_prime(n);
    const int nn = n * n;
    const PhasePoint half_mu(half(mu.a1()), half(mu.a2()));
    const Complex minus_i_over_hbar(0.0, -1.0 / hbar);

    ComplexMatrix r(nn);
    for (int ci = 0; ci < nn; ++ci) {
        const PhasePoint c = PhasePoint::from_index(ci, n);
        const PhasePoint up = c + half_mu;
        const PhasePoint down = c - half_mu;
        const long sym_up = 2L * symplectic(up, c).value();
        const long sym_down = 2L * symplectic(down, c).value();
        r(up.index(), ci) += minus_i_over_hbar * omega_power(n, sym_up);
        r(down.index(), ci) -= minus_i_over_hbar * omega_power(n, -sym_down);
    }
    return r;
}

RateMatrix rates_from_dcoeffs(int n, const std::vector<Complex>& kappa, double hbar,
                              double tol) {
    require_odd_prime(n);
    const int nn = n * n;
    if (kappa.size() != static_cast<size_t>(nn)) {
        throw std::invalid_argument("kappa needs N^2 entries");
    }
    ComplexMatrix sum(nn);
    for (int mu = 0; mu < nn; ++mu) {
        if (kappa[mu] == Complex{}) continue;
        sum += displacement_rates(PhasePoint::from_index(mu, n), hbar) * kappa[mu];
    }
    RealMatrix r(nn);
    for (int ai = 0; ai < nn; ++ai)
        for (int ci = 0; ci < nn; ++ci)
            r(ai, ci) = real_checked(sum(ai, ci), tol, "transition rate");
    return {n, std::move(r), hbar};
}

HamiltonianCoefficients ring_hamiltonian(int n) {
    require_odd_prime(n);
    const int nn = n * n;
    std::vector<Complex> kappa(nn);
    kappa[0] = 2.0;                                   // mu = (0,0)
    kappa[PhasePoint(1, 0, n).index()] = -1.0;        // mu = (1,0), i.e. X
    kappa[PhasePoint(-1, 0, n).index()] = -1.0;       // mu = (-1,0), i.e. X^dag
    return hamiltonian_from_dcoeffs(n, kappa);
}

RealMatrix matrix_exponential(const RealMatrix& m) {
    const int dim = m.dim();

    const auto taylor = [&](const RealMatrix& x) {
        RealMatrix sum = RealMatrix::identity(dim);
        RealMatrix term = RealMatrix::identity(dim);
        for (int k = 1; k <= 60; ++k) {
            term = term * x * (1.0 / k);
            sum = sum + term;
            if (term.max_abs() <= 1e-18 * std::max(1.0, sum.max_abs())) break;
        }
        return sum;
    };

    const auto evaluate = [&](int scaling) {
        RealMatrix result = taylor(m * std::ldexp(1.0, -scaling));
        for (int i = 0; i < scaling; ++i) result = result * result;
        return result;
    };

    // start with enough halvings that the scaled norm is below 1/2
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) {
        double row = 0.0;
        for (int j = 0; j < dim; ++j) row += std::abs(m(i, j));
        norm = std::max(norm, row);
    }
    int scaling = 0;
    while (std::ldexp(norm, -scaling) > 0.5 && scaling < 60) ++scaling;

    RealMatrix current = evaluate(scaling);
    for (int depth = scaling + 1; depth <= scaling + 40; ++depth) {
        RealMatrix refined = evaluate(depth);
        if ((refined - current).max_abs() <= 1e-10) return refined;
        current = std::move(refined);
    }
    throw std::runtime_error("matrix_exponential: refinement did not converge");
}

std::vector<WignerFunction> evolve(const WignerFunction& w0, const RateMatrix& rm, double t,
                                   int steps, bool allow_illegal, double tol) {
    if (w0.n() != rm.n) {
        throw std::invalid_argument("Wigner function and rate matrix dimensions differ");
    }
    if (steps <= 0) {
        throw std::invalid_argument("evolve needs a positive number of steps");
    }
    if (!allow_illegal) {
        const auto verdict = validate_rates(rm, tol);
        if (!verdict.legal) {
            throw std::invalid_argument(
                "rate matrix is not a legitimate Hamiltonian generator (fixed-point residual " +
                std::to_string(verdict.fixed_point_residual) + "); pass allow_illegal to force");
        }
    }

    const RealMatrix propagator = matrix_exponential(rm.r * (t / steps));
    std::vector<WignerFunction> frames;
    frames.reserve(steps + 1);
    frames.push_back(w0);
    std::vector<double> current = w0.values();
    for (int k = 0; k < steps; ++k) {
        current = propagator.apply(current);
        frames.emplace_back(rm.n, current);
    }
    return frames;
}

}  // namespace qphase

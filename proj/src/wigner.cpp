#include "qphase/wigner.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace qphase {

WignerFunction::WignerFunction(int n, std::vector<double> values) : n_(n), w_(std::move(values)) {
    if (w_.size() != static_cast<size_t>(n) * n) {
        throw std::invalid_argument("Wigner function needs N^2 values");
    }
}

double WignerFunction::sum() const {
    double s = 0.0;
    for (double v : w_) s += v;
    return s;
}

namespace {

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t{};
    const int n = a.dim();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t += a(k, l) * b(l, k);
    return t;
}

}  // namespace

Complex gamma_trace_form(int n, const PhasePoint& a, const PhasePoint& b,
                         const PhasePoint& c) {
    const auto& basis = OperatorBasis::get(n);
    const ComplexMatrix ab = basis.phase_point(a) * basis.phase_point(b);
    return trace_product(ab, basis.phase_point(c)) * (1.0 / n);
}

Complex xi_trace_form(int n, const PhasePoint& a, const PhasePoint& b,
                      const PhasePoint& c, const PhasePoint& d) {
    const auto& basis = OperatorBasis::get(n);
    const ComplexMatrix ab = basis.phase_point(a) * basis.phase_point(b);
    const ComplexMatrix cd = basis.phase_point(c) * basis.phase_point(d);
    return trace_product(ab, cd) * (1.0 / n);
}

StructureTables::StructureTables(int n) : n_(n), nn_(n * n) {
    if (!is_prime(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not prime");
    }
    if (n > 7) {
        throw std::invalid_argument("structure tables are built for N <= 7 only");
    }

    gamma_.resize(static_cast<size_t>(nn_) * nn_ * nn_);
    if (n == 2) {
        for (int ai = 0; ai < nn_; ++ai)
            for (int bi = 0; bi < nn_; ++bi)
                for (int ci = 0; ci < nn_; ++ci)
                    gamma_[(static_cast<size_t>(ai) * nn_ + bi) * nn_ + ci] =
                        gamma_trace_form(n, PhasePoint::from_index(ai, n),
                                         PhasePoint::from_index(bi, n),
                                         PhasePoint::from_index(ci, n));
        xi2_.resize(static_cast<size_t>(nn_) * nn_ * nn_ * nn_);
        for (int ai = 0; ai < nn_; ++ai)
            for (int bi = 0; bi < nn_; ++bi)
                for (int ci = 0; ci < nn_; ++ci)
                    for (int di = 0; di < nn_; ++di)
                        xi2_[((static_cast<size_t>(ai) * nn_ + bi) * nn_ + ci) * nn_ + di] =
                            xi_trace_form(n, PhasePoint::from_index(ai, n),
                                          PhasePoint::from_index(bi, n),
                                          PhasePoint::from_index(ci, n),
                                          PhasePoint::from_index(di, n));
    } else {
        // Gamma_{abc} = (1/N) omega^{-2(<a,b> + <b,c> + <c,a>)}
        const double inv_n = 1.0 / n;
        for (int a1 = 0; a1 < n; ++a1)
            for (int a2 = 0; a2 < n; ++a2)
                for (int b1 = 0; b1 < n; ++b1)
                    for (int b2 = 0; b2 < n; ++b2)
                        for (int c1 = 0; c1 < n; ++c1)
                            for (int c2 = 0; c2 < n; ++c2) {
                                const long s = static_cast<long>(a2) * b1 - static_cast<long>(a1) * b2 +
                                               static_cast<long>(b2) * c1 - static_cast<long>(b1) * c2 +
                                               static_cast<long>(c2) * a1 - static_cast<long>(c1) * a2;
                                const int ai = a1 * n + a2;
                                const int bi = b1 * n + b2;
                                const int ci = c1 * n + c2;
                                gamma_[(static_cast<size_t>(ai) * nn_ + bi) * nn_ + ci] =
                                    omega_power(n, -2 * s) * inv_n;
                            }
    }
}

const StructureTables& StructureTables::get(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<StructureTables>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<StructureTables>(n)).first;
    }
    return *it->second;
}

Complex StructureTables::xi(const PhasePoint& a, const PhasePoint& b, const PhasePoint& c,
                            const PhasePoint& d) const {
    if (n_ == 2) return xi(a.index(), b.index(), c.index(), d.index());
    // supported on parallelograms a - d = b - c, phase = twice the signed area
    if (!(a - d == b - c)) return {};
    const PhasePoint u = d - a;
    const PhasePoint v = b - a;
    const long area = static_cast<long>(u.a2().value()) * v.a1().value() -
                      static_cast<long>(u.a1().value()) * v.a2().value();
    return omega_power(n_, 2 * area);
}

Complex StructureTables::xi(int ai, int bi, int ci, int di) const {
    if (n_ == 2) {
        return xi2_[((static_cast<size_t>(ai) * nn_ + bi) * nn_ + ci) * nn_ + di];
    }
    return xi(PhasePoint::from_index(ai, n_), PhasePoint::from_index(bi, n_),
              PhasePoint::from_index(ci, n_), PhasePoint::from_index(di, n_));
}

WignerFunction wigner_from_density(const ComplexMatrix& rho, double tol,
                                   bool require_trace_one) {
    const double asym = rho.hermiticity_residual();
    if (asym > tol) {
        throw std::invalid_argument("wigner_from_density: input not Hermitian, max asymmetry " +
                                    std::to_string(asym));
    }
    const int n = rho.dim();
    if (!is_prime(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not prime");
    }
    if (require_trace_one && std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) {
        throw std::invalid_argument("wigner_from_density: trace differs from 1; pass "
                                    "require_trace_one=false for raw operators");
    }

    const auto& basis = OperatorBasis::get(n);
    WignerFunction w(n);
    for (int i = 0; i < n * n; ++i) {
        Complex t{};
        const auto& a = basis.phase_point(i);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) t += a(k, l) * rho(l, k);
        w[i] = real_checked(t * (1.0 / n), tol, "Wigner value");
    }
    return w;
}

ComplexMatrix density_from_wigner(const WignerFunction& w) {
    const int n = w.n();
    const auto& basis = OperatorBasis::get(n);
    ComplexMatrix rho(n);
    for (int i = 0; i < n * n; ++i) {
        const auto& a = basis.phase_point(i);
        const double wi = w[i];
        if (wi == 0.0) continue;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) rho(k, l) += wi * a(k, l);
    }
    return rho;
}

std::vector<std::vector<double>> striation_marginals(const WignerFunction& w) {
    const auto striations = enumerate_striations(w.n());
    std::vector<std::vector<double>> marginals;
    marginals.reserve(striations.size());
    for (const auto& striation : striations) {
        std::vector<double> sums;
        sums.reserve(striation.lines.size());
        for (const auto& line : striation.lines) {
            double s = 0.0;
            for (const auto& p : line.points) s += w.value(p);
            sums.push_back(s);
        }
        marginals.push_back(std::move(sums));
    }
    return marginals;
}

double purity_residual(const WignerFunction& w) {
    const int n = w.n();
    const int nn = n * n;
    const auto& tables = StructureTables::get(n);
    double residual = 0.0;
    for (int ai = 0; ai < nn; ++ai) {
        Complex s{};
        for (int bi = 0; bi < nn; ++bi) {
            const double wb = w[bi];
            if (wb == 0.0) continue;
            for (int ci = 0; ci < nn; ++ci) s += tables.gamma(ai, bi, ci) * (wb * w[ci]);
        }
        residual = std::max(residual, std::abs(s - Complex(w[ai], 0.0)));
    }
    return residual;
}

bool purity_check(const WignerFunction& w, double tol) {
    return purity_residual(w) <= tol;
}

}  // namespace qphase

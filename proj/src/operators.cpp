#include "qphase/operators.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qphase {

Complex omega_power(int n, long k) {
    const int r = mod_n(k, n);
    if (r == 0) return {1.0, 0.0};
    if (2 * r == n) return {-1.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * r / n;
    return {std::cos(angle), std::sin(angle)};
}

std::pair<ComplexMatrix, ComplexMatrix> pauli_generators(int n) {
    if (!is_prime(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not prime");
    }
    ComplexMatrix x(n), z(n);
    for (int q = 0; q < n; ++q) {
        x((q + 1) % n, q) = 1.0;
        z(q, q) = omega_power(n, q);
    }
    return {x, z};
}

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& m, int e) {
    ComplexMatrix r = ComplexMatrix::identity(m.dim());
    for (int i = 0; i < e; ++i) r = r * m;
    return r;
}

}  // namespace

OperatorBasis::OperatorBasis(int n) : n_(n) {
    if (!is_prime(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not prime");
    }
    std::tie(x_, z_) = pauli_generators(n);

    d_.reserve(n * n);
    if (n == 2) {
        ComplexMatrix y(2);  // Y = i X Z
        y(0, 1) = Complex(0.0, -1.0);
        y(1, 0) = Complex(0.0, 1.0);
        // index = 2*b1 + b2
        d_.push_back(ComplexMatrix::identity(2));  // (0,0)
        d_.push_back(z_);                          // (0,1)
        d_.push_back(x_);                          // (1,0)
        d_.push_back(y);                           // (1,1)
    } else {
        const int inv2 = (n + 1) / 2;
        for (int b1 = 0; b1 < n; ++b1) {
            const ComplexMatrix xb = matrix_power(x_, b1);
            for (int b2 = 0; b2 < n; ++b2) {
                ComplexMatrix d = xb * matrix_power(z_, b2);
                d_.push_back(d * omega_power(n, static_cast<long>(b1) * b2 * inv2));
            }
        }
    }

    a_.reserve(n * n);
    if (n == 2) {
        for (int a1 = 0; a1 < 2; ++a1) {
            for (int a2 = 0; a2 < 2; ++a2) {
                const double sz = (a1 == 0) ? 1.0 : -1.0;
                const double sx = (a2 == 0) ? 1.0 : -1.0;
                ComplexMatrix a(2);
                a(0, 0) = 0.5 * (1.0 + sz);
                a(1, 1) = 0.5 * (1.0 - sz);
                a(0, 1) = 0.5 * (sx - Complex(0.0, 1.0) * (sz * sx));
                a(1, 0) = 0.5 * (sx + Complex(0.0, 1.0) * (sz * sx));
                a_.push_back(std::move(a));
            }
        }
    } else {
        for (int a1 = 0; a1 < n; ++a1) {
            for (int a2 = 0; a2 < n; ++a2) {
                ComplexMatrix a(n);
                for (int k = 0; k < n; ++k) {
                    for (int l = 0; l < n; ++l) {
                        if (mod_n(2L * a1 - k - l, n) == 0) {
                            a(k, l) = omega_power(n, static_cast<long>(a2) * (k - l));
                        }
                    }
                }
                a_.push_back(std::move(a));
            }
        }
    }
}

const OperatorBasis& OperatorBasis::get(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<OperatorBasis>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<OperatorBasis>(n)).first;
    }
    return *it->second;
}

const ComplexMatrix& OperatorBasis::displacement(const PhasePoint& beta) const {
    if (beta.modulus() != n_) {
        throw std::invalid_argument("phase point modulus does not match basis dimension");
    }
    return d_[beta.index()];
}

const ComplexMatrix& OperatorBasis::displacement(int point_index) const {
    return d_.at(point_index);
}

const ComplexMatrix& OperatorBasis::phase_point(const PhasePoint& alpha) const {
    if (alpha.modulus() != n_) {
        throw std::invalid_argument("phase point modulus does not match basis dimension");
    }
    return a_[alpha.index()];
}

const ComplexMatrix& OperatorBasis::phase_point(int point_index) const {
    return a_.at(point_index);
}

ComplexMatrix OperatorBasis::striation_projector(const Line& line) const {
    if (static_cast<int>(line.points.size()) != n_) {
        throw std::invalid_argument("line must contain exactly " + std::to_string(n_) +
                                    " points");
    }
    // N distinct collinear points are a full line when N is prime.
    const PhasePoint& p0 = line.points[0];
    const PhasePoint dir = line.points[1] - p0;
    for (size_t i = 1; i < line.points.size(); ++i) {
        const PhasePoint diff = line.points[i] - p0;
        if (symplectic(diff, dir).value() != 0) {
            throw std::invalid_argument("line points are not collinear");
        }
        for (size_t j = 0; j < i; ++j) {
            if (line.points[j] == line.points[i]) {
                throw std::invalid_argument("line contains a repeated point");
            }
        }
    }

    ComplexMatrix q(n_);
    for (const auto& p : line.points) q += a_[p.index()];
    return q * Complex(1.0 / n_, 0.0);
}

}  // namespace qphase

#include "qphase/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qphase {

namespace {
void require_same_dim(int a, int b) {
    if (a != b) {
        throw std::invalid_argument("matrix dimension mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b));
    }
}
}  // namespace

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    require_same_dim(dim_, o.dim_);
    ComplexMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    require_same_dim(dim_, o.dim_);
    ComplexMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    require_same_dim(dim_, o.dim_);
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int k = 0; k < dim_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex{}) continue;
            for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
    ComplexMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_dim(dim_, o.dim_);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = (*this)(j, i);
    return r;
}

Complex ComplexMatrix::trace() const {
    Complex t{};
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticity_residual() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

std::vector<Complex> ComplexMatrix::apply(const std::vector<Complex>& v) const {
    if (static_cast<int>(v.size()) != dim_) {
        throw std::invalid_argument("vector length does not match matrix dimension");
    }
    std::vector<Complex> r(dim_);
    for (int i = 0; i < dim_; ++i) {
        Complex s{};
        for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

RealMatrix RealMatrix::identity(int dim) {
    RealMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::operator+(const RealMatrix& o) const {
    require_same_dim(dim_, o.dim_);
    RealMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

RealMatrix RealMatrix::operator-(const RealMatrix& o) const {
    require_same_dim(dim_, o.dim_);
    RealMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

RealMatrix RealMatrix::operator*(const RealMatrix& o) const {
    require_same_dim(dim_, o.dim_);
    RealMatrix r(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int k = 0; k < dim_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

RealMatrix RealMatrix::operator*(double s) const {
    RealMatrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

RealMatrix RealMatrix::transpose() const {
    RealMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = (*this)(j, i);
    return r;
}

double RealMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> RealMatrix::apply(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != dim_) {
        throw std::invalid_argument("vector length does not match matrix dimension");
    }
    std::vector<double> r(dim_);
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

ComplexMatrix RealMatrix::to_complex() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = (*this)(i, j);
    return r;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& m) {
    double s = 0.0;
    const int n = m.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& m, double tol) {
    const double asym = m.hermiticity_residual();
    if (asym > tol) {
        throw std::invalid_argument("hermitian_eig: input not Hermitian, max asymmetry " +
                                    std::to_string(asym));
    }

    const int n = m.dim();
    // work on the symmetrized copy so the iteration sees an exactly Hermitian matrix
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    ComplexMatrix vecs = ComplexMatrix::identity(n);

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale += std::norm(a(i, j));
    scale = std::sqrt(scale);
    const double target = 1e-14 * std::max(1.0, scale);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > target; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= target / n) continue;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const Complex phase = apq / mag;

                // tangent of the rotation angle: root of t^2 - 2*tau*t - 1
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0)
                                     ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A <- V^dag A V with V = [[c, -s*phase], [s*conj(phase), c]]
                for (int i = 0; i < n; ++i) {
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = c * aip + s * std::conj(phase) * aiq;
                    a(i, q) = -s * phase * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const Complex apj = a(p, j);
                    const Complex aqj = a(q, j);
                    a(p, j) = c * apj + s * phase * aqj;
                    a(q, j) = -s * std::conj(phase) * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (int i = 0; i < n; ++i) {
                    const Complex vip = vecs(i, p);
                    const Complex viq = vecs(i, q);
                    vecs(i, p) = c * vip + s * std::conj(phase) * viq;
                    vecs(i, q) = -s * phase * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) es.vectors(i, k) = vecs(i, order[k]);
    }
    return es;
}

bool is_psd(const ComplexMatrix& m, double tol) {
    const auto es = hermitian_eig(m, tol);
    return es.values.empty() || es.values.front() >= -tol;
}

int numerical_rank(const ComplexMatrix& m, double tol) {
    const auto es = hermitian_eig(m, tol);
    int rank = 0;
    for (double v : es.values)
        if (std::abs(v) > tol) ++rank;
    return rank;
}

double real_checked(Complex z, double tol, const char* context) {
    if (std::abs(z.imag()) > tol) {
        throw std::runtime_error(std::string(context) + ": imaginary residue " +
                                 std::to_string(z.imag()) + " exceeds tolerance");
    }
    return z.real();
}

}  // namespace qphase

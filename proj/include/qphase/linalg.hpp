#pragma once

#include <complex>
#include <vector>

namespace qphase {

using Complex = std::complex<double>;

/// Default numerical slack wherever a tolerance is not given explicitly.
inline constexpr double kDefaultTol = 1e-9;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }
    Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const Complex& operator()(int r, int c) const {
        return a_[static_cast<size_t>(r) * dim_ + c];
    }
    const std::vector<Complex>& data() const { return a_; }
    std::vector<Complex>& data() { return a_; }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(Complex s) const;
    ComplexMatrix& operator+=(const ComplexMatrix& o);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;

    double max_abs() const;
    /// max |M - M^dag| entrywise
    double hermiticity_residual() const;

    std::vector<Complex> apply(const std::vector<Complex>& v) const;

private:
    int dim_;
    std::vector<Complex> a_;
};

/// Dense square real matrix, row-major; carrier for P, r and R.
class RealMatrix {
public:
    RealMatrix() : dim_(0) {}
    explicit RealMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static RealMatrix identity(int dim);

    int dim() const { return dim_; }
    double& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const double& operator()(int r, int c) const {
        return a_[static_cast<size_t>(r) * dim_ + c];
    }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    RealMatrix operator+(const RealMatrix& o) const;
    RealMatrix operator-(const RealMatrix& o) const;
    RealMatrix operator*(const RealMatrix& o) const;
    RealMatrix operator*(double s) const;
    RealMatrix transpose() const;

    double max_abs() const;
    std::vector<double> apply(const std::vector<double>& v) const;

    ComplexMatrix to_complex() const;

private:
    int dim_;
    std::vector<double> a_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Rejects inputs whose hermiticity residual exceeds tol.
EigenSystem hermitian_eig(const ComplexMatrix& m, double tol = kDefaultTol);

/// min eigenvalue >= -tol
bool is_psd(const ComplexMatrix& m, double tol = kDefaultTol);

/// number of eigenvalues with |lambda| > tol
int numerical_rank(const ComplexMatrix& m, double tol = kDefaultTol);

/// Asserts |Im z| <= tol and returns Re z. `context` names the quantity in
/// the error message when the check fails.
double real_checked(Complex z, double tol, const char* context);

}  // namespace qphase

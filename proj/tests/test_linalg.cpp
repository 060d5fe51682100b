#include "qphase/linalg.hpp"

#include "qphase/channels.hpp"
#include "support/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace qphase;

namespace {

// determinant of the leading k x k block by Gaussian elimination with
// partial pivoting; the independent route behind the Sylvester cross-check
Complex leading_minor(const ComplexMatrix& m, int k) {
    std::vector<std::vector<Complex>> a(k, std::vector<Complex>(k));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) a[r][c] = m(r, c);
    Complex det{1.0, 0.0};
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) == 0.0) return {};
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < k; ++r) {
            const Complex factor = a[r][col] / a[col][col];
            for (int c = col; c < k; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return det;
}

double eig_residual(const ComplexMatrix& m, const EigenSystem& es) {
    const int n = m.dim();
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int r = 0; r < n; ++r) {
            Complex mv{};
            for (int c = 0; c < n; ++c) mv += m(r, c) * es.vectors(c, k);
            worst = std::max(worst, std::abs(mv - es.values[k] * es.vectors(r, k)));
        }
    }
    return worst;
}

double orthonormality_residual(const EigenSystem& es) {
    const int n = es.vectors.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex dot{};
            for (int r = 0; r < n; ++r) dot += std::conj(es.vectors(r, i)) * es.vectors(r, j);
            worst = std::max(worst, std::abs(dot - Complex(i == j ? 1.0 : 0.0, 0.0)));
        }
    return worst;
}

}  // namespace

TEST_CASE("identity eigendecomposition") {
    const auto es = hermitian_eig(ComplexMatrix::identity(4));
    for (double v : es.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("qubit transpose B matrix spectrum") {
    ComplexMatrix m(4);
    const double e[4][4] = {{1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = 0.25 * e[r][c];
    const auto es = hermitian_eig(m);
    CHECK(std::abs(es.values[0] + 0.5) <= 1e-12);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(es.values[k] - 0.5) <= 1e-12);
    CHECK_FALSE(is_psd(m));
}

TEST_CASE("reconstruction from the spectral decomposition") {
    testsupport::Rng rng(11);
    const auto m = rng.hermitian(9);
    const auto es = hermitian_eig(m, 1e-6);
    ComplexMatrix rebuilt(9);
    for (int k = 0; k < 9; ++k)
        for (int r = 0; r < 9; ++r)
            for (int c = 0; c < 9; ++c)
                rebuilt(r, c) += es.values[k] * es.vectors(r, k) * std::conj(es.vectors(c, k));
    CHECK((rebuilt - m).max_abs() <= 1e-10);
}

TEST_CASE("eigensolver residuals stay below 10*tol*dim across dimensions") {
    testsupport::Rng rng(12);
    const int dims[] = {2, 3, 4, 9, 16, 25, 36, 49};
    int count = 0;
    while (count < 100) {
        const int dim = dims[count % 8];
        const auto m = rng.hermitian(dim);
        const auto es = hermitian_eig(m, 1e-6);
        const double bound = 10.0 * kDefaultTol * dim;
        CHECK(eig_residual(m, es) <= bound);
        CHECK(orthonormality_residual(es) <= bound);
        bool ascending = true;
        for (size_t k = 1; k < es.values.size(); ++k)
            ascending &= es.values[k - 1] <= es.values[k];
        CHECK(ascending);
        ++count;
    }
}

TEST_CASE("non-Hermitian input is rejected with the asymmetry attached") {
    ComplexMatrix m(2);
    m(0, 1) = Complex(1.0, 0.0);
    m(1, 0) = Complex(0.0, 0.5);
    try {
        hermitian_eig(m);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("asymmetry") != std::string::npos);
    }
}

TEST_CASE("is_psd agrees with the leading-principal-minor route on 4x4 instances") {
    testsupport::Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        // Gram construction: positive definite almost surely
        const auto g = rng.matrix(4);
        auto psd = g * g.adjoint();
        CHECK(is_psd(psd));
        bool minors_ok = true;
        for (int k = 1; k <= 4; ++k)
            minors_ok &= real_checked(leading_minor(psd, k), 1e-8, "minor") >= -kDefaultTol;
        CHECK(minors_ok);

        // generic Hermitian: indefinite whenever some leading minor dips below 0
        const auto h = rng.hermitian(4);
        bool any_negative_minor = false;
        for (int k = 1; k <= 4; ++k)
            any_negative_minor |=
                real_checked(leading_minor(h, k), 1e-8, "minor") < -kDefaultTol;
        if (any_negative_minor) CHECK_FALSE(is_psd(h));
    }
}

TEST_CASE("numerical rank") {
    CHECK(numerical_rank(ComplexMatrix::identity(9)) == 9);

    // unitary-channel B has rank 1, identity-channel B likewise
    testsupport::Rng rng(14);
    const KrausSet unitary_channel(3, {rng.unitary(3)});
    CHECK(numerical_rank(bmatrix_from_kraus(unitary_channel).b) == 1);

    const KrausSet identity_channel(3, {ComplexMatrix::identity(3)});
    CHECK(numerical_rank(bmatrix_from_kraus(identity_channel).b) == 1);

    // B built from a several-operator Kraus set is PSD with full-ish rank
    const KrausSet noisy(2, rng.kraus_set(2, 4));
    const auto b = bmatrix_from_kraus(noisy);
    CHECK(is_psd(b.b));
    CHECK(numerical_rank(b.b) == 4);
}

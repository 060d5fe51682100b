#include "qphase/channels.hpp"

#include "qphase/operators.hpp"
#include "support/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace qphase;

namespace {

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t{};
    for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l) t += a(k, l) * b(l, k);
    return t;
}

TransitionMatrix transpose_p() {
    RealMatrix p(4);
    for (int ai = 0; ai < 4; ++ai)
        for (int ci = 0; ci < 4; ++ci) {
            const bool opposite = ((ai / 2 + ci / 2) % 2 == 1) && ((ai % 2 + ci % 2) % 2 == 1);
            p(ai, ci) = opposite ? -0.5 : 0.5;
        }
    return {2, std::move(p)};
}

std::function<ComplexMatrix(const ComplexMatrix&)> kraus_map(const KrausSet& kraus) {
    return [&kraus](const ComplexMatrix& m) {
        ComplexMatrix out(kraus.n);
        for (const auto& op : kraus.operators) out += op * m * op.adjoint();
        return out;
    };
}

}  // namespace

TEST_CASE("KrausSet validation") {
    CHECK_NOTHROW(KrausSet(3, {ComplexMatrix::identity(3)}));
    // a non-trace-preserving set is rejected unless explicitly allowed
    CHECK_THROWS_AS(KrausSet(3, {ComplexMatrix::identity(3) * Complex(0.5, 0)}),
                    std::invalid_argument);
    CHECK_NOTHROW(KrausSet(3, {ComplexMatrix::identity(3) * Complex(0.5, 0)}, kDefaultTol,
                           false));
    CHECK_THROWS_AS(KrausSet(3, {ComplexMatrix::identity(2)}), std::invalid_argument);
    CHECK_THROWS_AS(KrausSet(3, {}), std::invalid_argument);
}

TEST_CASE("bmatrix_from_kraus") {
    SUBCASE("identity channel: flat rank-1 B") {
        const auto b = bmatrix_from_kraus(KrausSet(3, {ComplexMatrix::identity(3)}));
        for (int r = 0; r < 9; ++r)
            for (int c = 0; c < 9; ++c)
                CHECK(std::abs(b.b(r, c) - Complex(1.0 / 9, 0)) <= 1e-14);
        CHECK(numerical_rank(b.b) == 1);
    }

    SUBCASE("single unitary: outer product with unit weight") {
        testsupport::Rng rng(41);
        const int n = 3;
        const auto u = rng.unitary(n);
        const auto b = bmatrix_from_kraus(KrausSet(n, {u}));
        const auto& basis = OperatorBasis::get(n);
        double weight = 0.0;
        for (int bi = 0; bi < n * n; ++bi) {
            const Complex coeff = trace_product(u, basis.phase_point(bi)) * (1.0 / n);
            weight += std::norm(coeff);
            for (int di = 0; di < n * n; ++di) {
                const Complex coeff_d = trace_product(u, basis.phase_point(di)) * (1.0 / n);
                CHECK(std::abs(b.b(bi, di) - coeff * std::conj(coeff_d)) <= 1e-12);
            }
        }
        CHECK(std::abs(weight - 1.0) <= 1e-12);
        CHECK(numerical_rank(b.b) == 1);
    }

    SUBCASE("qubit depolarizing at p = 3/4 gives B = I/4") {
        const auto [x, z] = pauli_generators(2);
        ComplexMatrix y(2);
        y(0, 1) = Complex(0, -1);
        y(1, 0) = Complex(0, 1);
        const Complex half(0.5, 0);
        const KrausSet depolarizing(
            2, {ComplexMatrix::identity(2) * half, x * half, y * half, z * half});
        const auto b = bmatrix_from_kraus(depolarizing);
        CHECK((b.b - ComplexMatrix::identity(4) * Complex(0.25, 0)).max_abs() <= 1e-14);
    }
}

TEST_CASE("p_from_bmatrix and bmatrix_from_p invert each other") {
    SUBCASE("identity channel maps to the identity P and back") {
        for (int n : {2, 3}) {
            const int nn = n * n;
            ComplexMatrix flat(nn);
            for (int r = 0; r < nn; ++r)
                for (int c = 0; c < nn; ++c) flat(r, c) = 1.0 / nn;
            const auto p = p_from_bmatrix(BMatrix(n, flat));
            CHECK((p.p - RealMatrix::identity(nn)).max_abs() <= 1e-12);

            const auto b = bmatrix_from_p(TransitionMatrix(n, RealMatrix::identity(nn)));
            CHECK((b.b - flat).max_abs() <= 1e-12);
        }
    }

    SUBCASE("round trip on arbitrary real P") {
        testsupport::Rng rng(42);
        for (int n : {2, 3, 5}) {
            for (int trial = 0; trial < 10; ++trial) {
                const TransitionMatrix p(n, rng.real_matrix(n * n));
                const auto back = p_from_bmatrix(bmatrix_from_p(p), 1e-8);
                CHECK((back.p - p.p).max_abs() <= 1e-10);
            }
        }
    }

    SUBCASE("B is Hermitian for any real P") {
        testsupport::Rng rng(43);
        for (int n : {2, 3}) {
            const auto b = bmatrix_from_p(TransitionMatrix(n, rng.real_matrix(n * n)));
            CHECK(b.b.hermiticity_residual() <= 1e-12);
        }
    }

    SUBCASE("the unitary X advances a1 by one") {
        const int n = 3;
        const auto [x, z] = pauli_generators(n);
        (void)z;
        const auto p = p_from_unitary(x);
        for (int ai = 0; ai < n * n; ++ai)
            for (int ci = 0; ci < n * n; ++ci) {
                const bool hit = (ai / n == (ci / n + 1) % n) && (ai % n == ci % n);
                CHECK(std::abs(p.p(ai, ci) - (hit ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("qubit transpose counterexample") {
    const auto p = transpose_p();

    SUBCASE("the map path reproduces the printed P") {
        const auto from_map =
            p_from_map([](const ComplexMatrix& m) { return m.transpose(); }, 2);
        CHECK((from_map.p - p.p).max_abs() <= 1e-14);
    }

    SUBCASE("B matrix and verdict") {
        const auto b = bmatrix_from_p(p);
        ComplexMatrix expected(4);
        const double e[4][4] = {{1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) expected(r, c) = 0.25 * e[r][c];
        CHECK((b.b - expected).max_abs() <= 1e-12);

        const auto verdict = validate_channel(p);
        CHECK(verdict.normalization_residual <= 1e-14);
        CHECK(verdict.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-10));
        CHECK_FALSE(verdict.legal);
        CHECK_FALSE(verdict.unitary);
    }

    SUBCASE("transpose composed with a legal channel stays illegal") {
        // Compositions with near-unitary channels: heavily noisy qubit
        // channels can be entanglement breaking, in which case composing
        // with the transpose becomes legal again, so the sampled channels
        // keep a dominant unitary part.
        testsupport::Rng rng(44);
        for (int trial = 0; trial < 20; ++trial) {
            const double noise = 0.15;
            std::vector<ComplexMatrix> ops;
            ops.push_back(rng.unitary(2) * Complex(std::sqrt(1.0 - noise), 0));
            for (auto& k : rng.kraus_set(2, 1 + trial % 3))
                ops.push_back(k * Complex(std::sqrt(noise), 0));
            const KrausSet kraus(2, std::move(ops));
            const auto legal = p_from_bmatrix(bmatrix_from_kraus(kraus));
            CHECK(validate_channel(legal).legal);
            const TransitionMatrix composed(2, legal.p * p.p);
            CHECK_FALSE(validate_channel(composed).legal);
        }
    }
}

TEST_CASE("p_from_unitary") {
    SUBCASE("identity") {
        const auto p = p_from_unitary(ComplexMatrix::identity(5));
        CHECK((p.p - RealMatrix::identity(25)).max_abs() <= 1e-13);
    }

    SUBCASE("displacements translate phase space") {
        const int n = 5;
        const auto& basis = OperatorBasis::get(n);
        const PhasePoint mu(2, 3, n);
        const auto p = p_from_unitary(basis.displacement(mu));
        for (int ci = 0; ci < n * n; ++ci) {
            const auto target = PhasePoint::from_index(ci, n) + mu;
            for (int ai = 0; ai < n * n; ++ai)
                CHECK(std::abs(p.p(ai, ci) - (ai == target.index() ? 1.0 : 0.0)) <= 1e-12);
        }
    }

    SUBCASE("orthogonality and normalization for random unitaries") {
        testsupport::Rng rng(45);
        const int n = 3;
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = p_from_unitary(rng.unitary(n));
            CHECK((p.p * p.p.transpose() - RealMatrix::identity(n * n)).max_abs() <= 1e-10);
            for (int ci = 0; ci < n * n; ++ci) {
                double colsum = 0.0;
                for (int ai = 0; ai < n * n; ++ai) colsum += p.p(ai, ci);
                CHECK(std::abs(colsum - 1.0) <= 1e-11);
            }
        }
    }

    SUBCASE("non-unitary input is rejected") {
        CHECK_THROWS_AS(p_from_unitary(ComplexMatrix::identity(3) * Complex(2, 0)),
                        std::invalid_argument);
    }
}

TEST_CASE("p_from_map") {
    SUBCASE("identity map") {
        const auto p = p_from_map([](const ComplexMatrix& m) { return m; }, 3);
        CHECK((p.p - RealMatrix::identity(9)).max_abs() <= 1e-13);
    }

    SUBCASE("agrees with the Kraus path") {
        testsupport::Rng rng(46);
        for (int n : {2, 3}) {
            const KrausSet kraus(n, rng.kraus_set(n, 3));
            const auto via_map = p_from_map(kraus_map(kraus), n);
            const auto via_b = p_from_bmatrix(bmatrix_from_kraus(kraus));
            CHECK((via_map.p - via_b.p).max_abs() <= 1e-10);
        }
    }
}

TEST_CASE("validate_channel") {
    SUBCASE("true channels are legal") {
        testsupport::Rng rng(47);
        for (int n : {2, 3, 5}) {
            const KrausSet kraus(n, rng.kraus_set(n, 2));
            const auto p = p_from_bmatrix(bmatrix_from_kraus(kraus));
            const auto verdict = validate_channel(p);
            CHECK(verdict.legal);
            CHECK(verdict.normalization_residual <= 1e-10);
            CHECK(verdict.min_eigenvalue >= -1e-10);
            CHECK(std::abs(verdict.trace_b - 1.0) <= 1e-10);
        }
    }

    SUBCASE("all mass onto one point is normalized yet illegal") {
        // regression values: -(sqrt(3)-1)/4 at N=2, -1/3 at N=3
        const double expected_min[2] = {-0.18301270189221932, -1.0 / 3.0};
        int idx = 0;
        for (int n : {2, 3}) {
            const int nn = n * n;
            RealMatrix all_to_origin(nn);
            for (int ci = 0; ci < nn; ++ci) all_to_origin(0, ci) = 1.0;
            const auto verdict = validate_channel(TransitionMatrix(n, all_to_origin));
            CHECK(verdict.normalization_residual <= 1e-14);
            CHECK_FALSE(verdict.legal);
            CHECK(verdict.min_eigenvalue ==
                  doctest::Approx(expected_min[idx++]).epsilon(1e-9));
        }
    }
}

TEST_CASE("unitary characterization from P alone") {
    testsupport::Rng rng(48);

    SUBCASE("unitary-induced P passes, with the full signature") {
        for (int n : {2, 3}) {
            const auto p = p_from_unitary(rng.unitary(n));
            CHECK(is_unitary_channel(p));
            const auto verdict = validate_channel(p);
            CHECK(verdict.rank == 1);
            CHECK(std::abs(verdict.trace_b - 1.0) <= 1e-10);
            CHECK(gamma_preservation_residual(p) <= 1e-9);
        }
    }

    SUBCASE("depolarizing channel fails the rank test") {
        const auto [x, z] = pauli_generators(2);
        ComplexMatrix y(2);
        y(0, 1) = Complex(0, -1);
        y(1, 0) = Complex(0, 1);
        const Complex half(0.5, 0);
        const KrausSet depolarizing(
            2, {ComplexMatrix::identity(2) * half, x * half, y * half, z * half});
        const auto p = p_from_bmatrix(bmatrix_from_kraus(depolarizing));
        CHECK_FALSE(is_unitary_channel(p));
        CHECK(validate_channel(p).rank == 4);

        // Gamma is genuinely distorted; the residual is exactly 9/8
        const double residual = gamma_preservation_residual(p);
        CHECK(residual == doctest::Approx(1.125).epsilon(1e-10));
    }

    SUBCASE("the transpose fails") { CHECK_FALSE(is_unitary_channel(transpose_p())); }

    SUBCASE("identity P preserves Gamma exactly") {
        const TransitionMatrix identity(3, RealMatrix::identity(9));
        CHECK(gamma_preservation_residual(identity) <= 1e-15);
    }
}

TEST_CASE("Choi equivalence") {
    SUBCASE("identity channel") {
        const auto c = choi_in_psi_basis(KrausSet(3, {ComplexMatrix::identity(3)}));
        for (int r = 0; r < 9; ++r)
            for (int col = 0; col < 9; ++col)
                CHECK(std::abs(c(r, col) - Complex(1.0 / 9, 0)) <= 1e-13);
    }

    SUBCASE("random Kraus channels at N=3") {
        testsupport::Rng rng(49);
        for (int trial = 0; trial < 5; ++trial) {
            const KrausSet kraus(3, rng.kraus_set(3, 2));
            const auto direct = bmatrix_from_kraus(kraus);
            const auto via_choi = choi_in_psi_basis(kraus);
            CHECK((via_choi - direct.b).max_abs() <= 1e-10);
        }
    }

    SUBCASE("transpose map matches the P-inversion route at N=2") {
        const auto via_choi =
            choi_in_psi_basis([](const ComplexMatrix& m) { return m.transpose(); }, 2);
        const auto via_p = bmatrix_from_p(transpose_p());
        CHECK((via_choi - via_p.b).max_abs() <= 1e-10);
    }
}

TEST_CASE("apply_channel and the commuting diagram") {
    SUBCASE("identity leaves W alone") {
        testsupport::Rng rng(50);
        WignerFunction w(3, rng.real_vector(9));
        const auto out = apply_channel(TransitionMatrix(3, RealMatrix::identity(9)), w);
        for (int i = 0; i < 9; ++i) CHECK(out[i] == doctest::Approx(w[i]).epsilon(1e-14));
    }

    SUBCASE("translation moves a point mass") {
        const int n = 5;
        const auto& basis = OperatorBasis::get(n);
        const PhasePoint mu(1, 2, n);
        const auto p = p_from_unitary(basis.displacement(mu));
        WignerFunction w(n);
        const PhasePoint start(3, 3, n);
        w[start.index()] = 1.0;
        const auto moved = apply_channel(p, w);
        for (int i = 0; i < n * n; ++i)
            CHECK(std::abs(moved[i] - (i == (start + mu).index() ? 1.0 : 0.0)) <= 1e-12);
    }

    SUBCASE("density-path and Wigner-path evolution commute") {
        testsupport::Rng rng(51);
        for (int n : {2, 3, 5}) {
            for (int trial = 0; trial < 50; ++trial) {
                const KrausSet kraus(n, rng.kraus_set(n, 1 + trial % 3));
                const auto p = p_from_bmatrix(bmatrix_from_kraus(kraus));
                const auto rho = rng.density(n);

                const auto via_wigner = apply_channel(p, wigner_from_density(rho));
                const auto via_density = wigner_from_density(kraus_map(kraus)(rho));
                double diff = 0.0;
                for (int i = 0; i < n * n; ++i)
                    diff = std::max(diff, std::abs(via_wigner[i] - via_density[i]));
                CHECK(diff <= 1e-10);
            }
        }
    }

    SUBCASE("size mismatch") {
        CHECK_THROWS_AS(apply_channel(TransitionMatrix(3, RealMatrix::identity(9)),
                                      WignerFunction(2)),
                        std::invalid_argument);
    }
}

TEST_CASE("normalization constraints leave N^2(N^2-1) free parameters (N=2)") {
    // column-sum functionals as a 4 x 16 constraint matrix; its rank is the
    // number of independent constraints
    const int nn = 4;
    std::vector<std::vector<double>> constraints(nn, std::vector<double>(nn * nn, 0.0));
    for (int g = 0; g < nn; ++g)
        for (int a = 0; a < nn; ++a) constraints[g][a * nn + g] = 1.0;

    ComplexMatrix gram(nn);
    for (int g1 = 0; g1 < nn; ++g1)
        for (int g2 = 0; g2 < nn; ++g2) {
            double dot = 0.0;
            for (int k = 0; k < nn * nn; ++k) dot += constraints[g1][k] * constraints[g2][k];
            gram(g1, g2) = dot;
        }
    CHECK(numerical_rank(gram) == nn);
    CHECK(nn * nn - numerical_rank(gram) == 12);  // = N^2 (N^2 - 1)
}

TEST_CASE("kraus_from_bmatrix recovers an equivalent channel") {
    testsupport::Rng rng(52);
    for (int n : {2, 3}) {
        const KrausSet kraus(n, rng.kraus_set(n, 2));
        const auto b = bmatrix_from_kraus(kraus);
        const auto recovered = kraus_from_bmatrix(b);
        CHECK((bmatrix_from_kraus(recovered).b - b.b).max_abs() <= 1e-10);

        const auto p_original = p_from_bmatrix(b);
        const auto p_recovered = p_from_bmatrix(bmatrix_from_kraus(recovered));
        CHECK((p_original.p - p_recovered.p).max_abs() <= 1e-10);
    }

    // not PSD: rejected
    const auto bad = bmatrix_from_p(transpose_p());
    CHECK_THROWS_AS(kraus_from_bmatrix(bad), std::invalid_argument);
}

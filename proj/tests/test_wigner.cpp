#include "qphase/wigner.hpp"

#include "qphase/operators.hpp"
#include "support/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

using namespace qphase;

namespace {

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t{};
    for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l) t += a(k, l) * b(l, k);
    return t;
}

PhasePoint pt(int a1, int a2, int n) { return {a1, a2, n}; }

}  // namespace

TEST_CASE("wigner_from_density") {
    SUBCASE("maximally mixed state is flat") {
        for (int n : {2, 3, 5}) {
            const auto w =
                wigner_from_density(ComplexMatrix::identity(n) * Complex(1.0 / n, 0));
            for (int i = 0; i < n * n; ++i)
                CHECK(std::abs(w[i] - 1.0 / (n * n)) <= 1e-14);
        }
    }

    SUBCASE("position eigenstate concentrates on a vertical line") {
        ComplexMatrix rho(5);
        rho(2, 2) = 1.0;
        const auto w = wigner_from_density(rho);
        for (int a1 = 0; a1 < 5; ++a1)
            for (int a2 = 0; a2 < 5; ++a2)
                CHECK(std::abs(w[a1 * 5 + a2] - (a1 == 2 ? 0.2 : 0.0)) <= 1e-14);
    }

    SUBCASE("input validation") {
        ComplexMatrix bad(3);
        bad(0, 1) = Complex(0, 1);  // not Hermitian
        CHECK_THROWS_AS(wigner_from_density(bad), std::invalid_argument);

        const auto not_normalized = ComplexMatrix::identity(3);
        CHECK_THROWS_AS(wigner_from_density(not_normalized), std::invalid_argument);
        CHECK_NOTHROW(wigner_from_density(not_normalized, kDefaultTol, false));
    }

    SUBCASE("round trip with density_from_wigner") {
        testsupport::Rng rng(21);
        for (int n : {2, 3, 5}) {
            for (int trial = 0; trial < 5; ++trial) {
                const auto rho = rng.density(n);
                const auto back = density_from_wigner(wigner_from_density(rho));
                CHECK((back - rho).max_abs() <= 1e-10);
            }
        }
    }
}

TEST_CASE("density_from_wigner") {
    SUBCASE("point mass gives the phase-point operator itself") {
        const int n = 3;
        const PhasePoint target = pt(2, 1, n);
        WignerFunction w(n);
        w[target.index()] = 1.0;
        CHECK((density_from_wigner(w) - OperatorBasis::get(n).phase_point(target)).max_abs() <=
              1e-15);
    }

    SUBCASE("uniform gives the maximally mixed state") {
        const int n = 5;
        WignerFunction w(n);
        for (int i = 0; i < n * n; ++i) w[i] = 1.0 / (n * n);
        CHECK((density_from_wigner(w) - ComplexMatrix::identity(n) * Complex(1.0 / n, 0))
                  .max_abs() <= 1e-14);
    }

    SUBCASE("trace equals the Wigner sum") {
        testsupport::Rng rng(22);
        const int n = 3;
        WignerFunction w(n, rng.real_vector(9));
        CHECK(std::abs(density_from_wigner(w).trace().real() - w.sum()) <= 1e-12);
        CHECK(density_from_wigner(w).hermiticity_residual() <= 1e-14);
    }
}

TEST_CASE("striation marginals") {
    SUBCASE("maximally mixed is uniform in every basis") {
        for (int n : {2, 3, 5}) {
            WignerFunction w(n);
            for (int i = 0; i < n * n; ++i) w[i] = 1.0 / (n * n);
            for (const auto& marginal : striation_marginals(w))
                for (double p : marginal) CHECK(std::abs(p - 1.0 / n) <= 1e-14);
        }
    }

    SUBCASE("position eigenstate |2> at N=5") {
        ComplexMatrix rho(5);
        rho(2, 2) = 1.0;
        const auto marginals = striation_marginals(wigner_from_density(rho));
        for (int c = 0; c < 5; ++c)
            CHECK(std::abs(marginals[0][c] - (c == 2 ? 1.0 : 0.0)) <= 1e-13);
    }

    SUBCASE("marginals are the Born probabilities of the striation bases") {
        testsupport::Rng rng(23);
        for (int n : {2, 3, 5}) {
            const auto& basis = OperatorBasis::get(n);
            const auto rho = rng.density(n);
            const auto w = wigner_from_density(rho);
            const auto marginals = striation_marginals(w);
            const auto striations = enumerate_striations(n);
            for (size_t s = 0; s < striations.size(); ++s) {
                for (size_t l = 0; l < striations[s].lines.size(); ++l) {
                    const double born =
                        real_checked(trace_product(
                                         basis.striation_projector(striations[s].lines[l]), rho),
                                     1e-10, "Born probability");
                    CHECK(std::abs(marginals[s][l] - born) <= 1e-10);
                    CHECK(marginals[s][l] >= -1e-12);
                }
            }
        }
    }
}

TEST_CASE("purity through the three-point structure function") {
    SUBCASE("pure states pass") {
        ComplexMatrix rho(5);
        rho(2, 2) = 1.0;
        CHECK(purity_check(wigner_from_density(rho)));

        testsupport::Rng rng(24);
        for (int n : {2, 3}) {
            const auto u = rng.unitary(n);
            ComplexMatrix psi(n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) psi(r, c) = u(r, 0) * std::conj(u(c, 0));
            CHECK(purity_check(wigner_from_density(psi), 1e-10));
        }
    }

    SUBCASE("mixtures fail") {
        for (int n : {2, 3, 5}) {
            WignerFunction w(n);
            for (int i = 0; i < n * n; ++i) w[i] = 1.0 / (n * n);
            CHECK_FALSE(purity_check(w));
        }

        // 50/50 mixture of |0> and |1> at N=3: Tr rho^2 = 1/2
        ComplexMatrix rho(3);
        rho(0, 0) = 0.5;
        rho(1, 1) = 0.5;
        CHECK(std::abs((rho * rho).trace().real() - 0.5) <= 1e-15);
        CHECK_FALSE(purity_check(wigner_from_density(rho)));
    }
}

TEST_CASE("three-point structure function") {
    SUBCASE("diagonal value 1/N for odd N") {
        for (int n : {3, 5, 7}) {
            const auto& tables = StructureTables::get(n);
            for (int i = 0; i < n * n; ++i)
                CHECK(std::abs(tables.gamma(i, i, i) - Complex(1.0 / n, 0)) <= 1e-13);
        }
    }

    SUBCASE("worked value at N=3") {
        const auto& tables = StructureTables::get(3);
        const Complex expected =
            Complex(1.0 / 3, 0) * std::polar(1.0, 4.0 * std::numbers::pi / 3.0);
        CHECK(std::abs(tables.gamma(pt(0, 0, 3), pt(1, 0, 3), pt(0, 1, 3)) - expected) <=
              1e-14);
        // brute-force trace agrees
        CHECK(std::abs(gamma_trace_form(3, pt(0, 0, 3), pt(1, 0, 3), pt(0, 1, 3)) - expected) <=
              1e-14);
    }

    SUBCASE("closed form equals the trace form on every triple at N=3") {
        const int n = 3;
        const auto& tables = StructureTables::get(n);
        for (int ai = 0; ai < n * n; ++ai)
            for (int bi = 0; bi < n * n; ++bi)
                for (int ci = 0; ci < n * n; ++ci) {
                    const Complex oracle =
                        gamma_trace_form(n, PhasePoint::from_index(ai, n),
                                         PhasePoint::from_index(bi, n),
                                         PhasePoint::from_index(ci, n));
                    CHECK(std::abs(tables.gamma(ai, bi, ci) - oracle) <= 1e-10);
                }
    }

    SUBCASE("closed form equals the trace form on random triples at N=5 and N=7") {
        testsupport::Rng rng(25);
        for (int n : {5, 7}) {
            const auto& tables = StructureTables::get(n);
            for (int trial = 0; trial < 500; ++trial) {
                const int ai = static_cast<int>(rng.uniform() * n * n);
                const int bi = static_cast<int>(rng.uniform() * n * n);
                const int ci = static_cast<int>(rng.uniform() * n * n);
                const Complex oracle = gamma_trace_form(n, PhasePoint::from_index(ai, n),
                                                        PhasePoint::from_index(bi, n),
                                                        PhasePoint::from_index(ci, n));
                CHECK(std::abs(tables.gamma(ai, bi, ci) - oracle) <= 1e-10);
            }
        }
    }

    SUBCASE("symmetries: translation covariance, cyclic shift, conjugate swap") {
        testsupport::Rng rng(26);
        for (int n : {2, 3, 5}) {
            const auto& tables = StructureTables::get(n);
            for (int trial = 0; trial < 50; ++trial) {
                const auto a = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
                const auto b = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
                const auto c = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
                const auto d = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
                const Complex base = tables.gamma(a, b, c);
                CHECK(std::abs(tables.gamma(a + d, b + d, c + d) - base) <= 1e-12);
                CHECK(std::abs(tables.gamma(c, a, b) - base) <= 1e-12);
                CHECK(std::abs(tables.gamma(a, c, b) - std::conj(base)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("four-point structure function") {
    SUBCASE("degenerate parallelogram has value 1 for odd N") {
        for (int n : {3, 5}) {
            const auto& tables = StructureTables::get(n);
            for (int i = 0; i < n * n; ++i)
                CHECK(std::abs(tables.xi(i, i, i, i) - Complex(1, 0)) <= 1e-14);
        }
    }

    SUBCASE("worked value at N=3") {
        const auto& tables = StructureTables::get(3);
        const Complex expected = omega_power(3, 2);
        CHECK(std::abs(tables.xi(pt(0, 0, 3), pt(1, 0, 3), pt(1, 1, 3), pt(0, 1, 3)) -
                       expected) <= 1e-14);
        CHECK(std::abs(xi_trace_form(3, pt(0, 0, 3), pt(1, 0, 3), pt(1, 1, 3), pt(0, 1, 3)) -
                       expected) <= 1e-13);
    }

    SUBCASE("closed form equals the trace form on every tuple at N=3") {
        const int n = 3;
        const auto& tables = StructureTables::get(n);
        for (int ai = 0; ai < n * n; ++ai)
            for (int bi = 0; bi < n * n; ++bi)
                for (int ci = 0; ci < n * n; ++ci)
                    for (int di = 0; di < n * n; ++di) {
                        const Complex oracle = xi_trace_form(
                            n, PhasePoint::from_index(ai, n), PhasePoint::from_index(bi, n),
                            PhasePoint::from_index(ci, n), PhasePoint::from_index(di, n));
                        CHECK(std::abs(tables.xi(ai, bi, ci, di) - oracle) <= 1e-10);
                    }
    }

    SUBCASE("closed form equals the trace form on random tuples at N=5") {
        testsupport::Rng rng(27);
        const int n = 5;
        const auto& tables = StructureTables::get(n);
        for (int trial = 0; trial < 1000; ++trial) {
            const int ai = static_cast<int>(rng.uniform() * n * n);
            const int bi = static_cast<int>(rng.uniform() * n * n);
            const int ci = static_cast<int>(rng.uniform() * n * n);
            const int di = static_cast<int>(rng.uniform() * n * n);
            const Complex oracle = xi_trace_form(
                n, PhasePoint::from_index(ai, n), PhasePoint::from_index(bi, n),
                PhasePoint::from_index(ci, n), PhasePoint::from_index(di, n));
            CHECK(std::abs(tables.xi(ai, bi, ci, di) - oracle) <= 1e-10);
        }
    }

    SUBCASE("support requires a parallelogram") {
        const int n = 5;
        const auto& tables = StructureTables::get(n);
        int off_support = 0;
        for (int trial = 0; trial < 200; ++trial) {
            testsupport::Rng rng(28 + trial);
            const auto a = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
            const auto b = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
            const auto c = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
            const auto d = PhasePoint::from_index(static_cast<int>(rng.uniform() * n * n), n);
            if (a - d == b - c) continue;
            ++off_support;
            CHECK(std::abs(tables.xi(a, b, c, d)) == 0.0);
            CHECK(std::abs(xi_trace_form(n, a, b, c, d)) <= 1e-12);
        }
        CHECK(off_support > 100);
    }

    SUBCASE("conjugation symmetry Xi_{cbad} = conj(Xi_{abcd})") {
        testsupport::Rng rng(29);
        for (int n : {2, 3, 5}) {
            const auto& tables = StructureTables::get(n);
            for (int trial = 0; trial < 50; ++trial) {
                const int ai = static_cast<int>(rng.uniform() * n * n);
                const int bi = static_cast<int>(rng.uniform() * n * n);
                const int ci = static_cast<int>(rng.uniform() * n * n);
                const int di = static_cast<int>(rng.uniform() * n * n);
                CHECK(std::abs(tables.xi(ci, bi, ai, di) -
                               std::conj(tables.xi(ai, bi, ci, di))) <= 1e-12);
            }
        }
    }

    SUBCASE("orthogonality contraction behind the P <-> B inversion at N=3") {
        testsupport::Rng rng(30);
        const int n = 3;
        const int nn = n * n;
        const auto& tables = StructureTables::get(n);
        for (int trial = 0; trial < 20; ++trial) {
            const int ai = static_cast<int>(rng.uniform() * nn);
            const int ci = static_cast<int>(rng.uniform() * nn);
            const int si = static_cast<int>(rng.uniform() * nn);
            const int ti = static_cast<int>(rng.uniform() * nn);
            Complex sum{};
            for (int bi = 0; bi < nn; ++bi)
                for (int di = 0; di < nn; ++di)
                    sum += tables.xi(ai, bi, ci, di) * tables.xi(bi, si, di, ti);
            const Complex expected((ai == si && ci == ti) ? nn : 0.0, 0.0);
            CHECK(std::abs(sum * Complex(1.0 / nn, 0) - expected * Complex(1.0 / nn, 0)) <=
                  1e-11);
        }
    }
}

TEST_CASE("phase-point operator sum rules for arbitrary matrices") {
    testsupport::Rng rng(31);
    for (int n : {2, 3, 5}) {
        const auto& basis = OperatorBasis::get(n);
        const auto m = rng.matrix(n);

        ComplexMatrix lhs_a(n);
        for (int i = 0; i < n * n; ++i)
            lhs_a += basis.phase_point(i) * trace_product(m, basis.phase_point(i));
        CHECK((lhs_a - m * Complex(n, 0)).max_abs() <= 1e-12);

        ComplexMatrix lhs_b(n);
        for (int i = 0; i < n * n; ++i)
            lhs_b += basis.phase_point(i) * m * basis.phase_point(i);
        CHECK((lhs_b - ComplexMatrix::identity(n) * (m.trace() * Complex(n, 0))).max_abs() <=
              1e-12);
    }
}

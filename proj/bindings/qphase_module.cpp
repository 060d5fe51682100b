#include "qphase/channels.hpp"
#include "qphase/dynamics.hpp"
#include "qphase/operators.hpp"
#include "qphase/phase_space.hpp"
#include "qphase/selftest.hpp"
#include "qphase/svg.hpp"
#include "qphase/wigner.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

using qphase::Complex;
using qphase::ComplexMatrix;
using qphase::RealMatrix;
using qphase::WignerFunction;

ComplexMatrix to_complex_matrix(const py::array_t<Complex>& a) {
    const auto buf = a.unchecked<2>();
    if (buf.shape(0) != buf.shape(1)) throw py::value_error("matrix must be square");
    ComplexMatrix m(static_cast<int>(buf.shape(0)));
    for (py::ssize_t r = 0; r < buf.shape(0); ++r)
        for (py::ssize_t c = 0; c < buf.shape(1); ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = buf(r, c);
    return m;
}

py::array_t<Complex> from_complex_matrix(const ComplexMatrix& m) {
    py::array_t<Complex> a({m.dim(), m.dim()});
    auto buf = a.mutable_unchecked<2>();
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) buf(r, c) = m(r, c);
    return a;
}

RealMatrix to_real_matrix(const py::array_t<double>& a) {
    const auto buf = a.unchecked<2>();
    if (buf.shape(0) != buf.shape(1)) throw py::value_error("matrix must be square");
    RealMatrix m(static_cast<int>(buf.shape(0)));
    for (py::ssize_t r = 0; r < buf.shape(0); ++r)
        for (py::ssize_t c = 0; c < buf.shape(1); ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = buf(r, c);
    return m;
}

py::array_t<double> from_real_matrix(const RealMatrix& m) {
    py::array_t<double> a({m.dim(), m.dim()});
    auto buf = a.mutable_unchecked<2>();
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) buf(r, c) = m(r, c);
    return a;
}

int side_from_squared(int dim, const char* what) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (n * n != dim || !qphase::is_prime(n)) {
        throw py::value_error(std::string(what) +
                              " must be N^2 x N^2 for a prime N; got side " +
                              std::to_string(dim));
    }
    return n;
}

qphase::TransitionMatrix to_transition(const py::array_t<double>& a) {
    RealMatrix m = to_real_matrix(a);
    const int n = side_from_squared(m.dim(), "transition matrix");
    return {n, std::move(m)};
}

qphase::RateMatrix to_rates(const py::array_t<double>& a, double hbar = 1.0) {
    RealMatrix m = to_real_matrix(a);
    const int n = side_from_squared(m.dim(), "rate matrix");
    return {n, std::move(m), hbar};
}

// Wigner functions and coefficient grids travel as (N, N) arrays indexed
// [a1][a2]; C order matches the flat index a1*N + a2.
WignerFunction to_wigner(const py::array_t<double>& a) {
    const auto buf = a.unchecked<2>();
    if (buf.shape(0) != buf.shape(1)) throw py::value_error("Wigner array must be N x N");
    const int n = static_cast<int>(buf.shape(0));
    std::vector<double> values(static_cast<size_t>(n) * n);
    for (int a1 = 0; a1 < n; ++a1)
        for (int a2 = 0; a2 < n; ++a2) values[a1 * n + a2] = buf(a1, a2);
    return {n, std::move(values)};
}

py::array_t<double> from_point_grid(const std::vector<double>& values, int n) {
    py::array_t<double> a({n, n});
    auto buf = a.mutable_unchecked<2>();
    for (int a1 = 0; a1 < n; ++a1)
        for (int a2 = 0; a2 < n; ++a2) buf(a1, a2) = values[a1 * n + a2];
    return a;
}

std::vector<Complex> to_complex_grid(const py::array_t<Complex>& a) {
    const auto buf = a.unchecked<2>();
    if (buf.shape(0) != buf.shape(1)) throw py::value_error("grid must be N x N");
    const int n = static_cast<int>(buf.shape(0));
    std::vector<Complex> values(static_cast<size_t>(n) * n);
    for (int a1 = 0; a1 < n; ++a1)
        for (int a2 = 0; a2 < n; ++a2) values[a1 * n + a2] = buf(a1, a2);
    return values;
}

qphase::PhasePoint to_point(int n, const std::pair<long, long>& p) {
    return {p.first, p.second, n};
}

py::dict channel_verdict_dict(const qphase::ChannelVerdict& v) {
    py::dict d;
    d["tol"] = v.tol;
    d["normalization_residual"] = v.normalization_residual;
    d["min_eigenvalue"] = v.min_eigenvalue;
    d["hermiticity_residual"] = v.hermiticity_residual;
    d["trace_b"] = v.trace_b;
    d["rank"] = v.rank;
    d["unitary"] = v.unitary;
    d["legal"] = v.legal;
    return d;
}

py::dict rate_verdict_dict(const qphase::RateVerdict& v) {
    py::dict d;
    d["tol"] = v.tol;
    d["fixed_point_residual"] = v.fixed_point_residual;
    d["antisymmetry_residual"] = v.antisymmetry_residual;
    d["column_sum_residual"] = v.column_sum_residual;
    d["legal"] = v.legal;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discrete Wigner functions, phase-space transition probabilities and "
              "transition rates for prime-dimension quantum systems";

    m.def("is_prime", &qphase::is_prime, py::arg("n"));

    m.def(
        "striations",
        [](int n) {
            py::list striations;
            for (const auto& striation : qphase::enumerate_striations(n)) {
                py::list lines;
                for (const auto& line : striation.lines) {
                    py::list points;
                    for (const auto& p : line.points)
                        points.append(py::make_tuple(p.a1().value(), p.a2().value()));
                    lines.append(points);
                }
                striations.append(lines);
            }
            return striations;
        },
        py::arg("n"), "The N+1 striations as lists of lines of (a1, a2) points.");

    m.def(
        "pauli_generators",
        [](int n) {
            auto [x, z] = qphase::pauli_generators(n);
            return py::make_tuple(from_complex_matrix(x), from_complex_matrix(z));
        },
        py::arg("n"));

    m.def(
        "displacement",
        [](int n, long b1, long b2) {
            return from_complex_matrix(
                qphase::OperatorBasis::get(n).displacement(qphase::PhasePoint(b1, b2, n)));
        },
        py::arg("n"), py::arg("b1"), py::arg("b2"));

    m.def(
        "phase_point_operator",
        [](int n, long a1, long a2) {
            return from_complex_matrix(
                qphase::OperatorBasis::get(n).phase_point(qphase::PhasePoint(a1, a2, n)));
        },
        py::arg("n"), py::arg("a1"), py::arg("a2"));

    m.def(
        "gamma",
        [](int n, std::pair<long, long> a, std::pair<long, long> b, std::pair<long, long> c) {
            return qphase::StructureTables::get(n).gamma(to_point(n, a), to_point(n, b),
                                                         to_point(n, c));
        },
        py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"));

    m.def(
        "xi",
        [](int n, std::pair<long, long> a, std::pair<long, long> b, std::pair<long, long> c,
           std::pair<long, long> d) {
            return qphase::StructureTables::get(n).xi(to_point(n, a), to_point(n, b),
                                                      to_point(n, c), to_point(n, d));
        },
        py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));

    m.def(
        "wigner_from_density",
        [](const py::array_t<Complex>& rho, double tol, bool require_trace_one) {
            const auto w =
                qphase::wigner_from_density(to_complex_matrix(rho), tol, require_trace_one);
            return from_point_grid(w.values(), w.n());
        },
        py::arg("rho"), py::arg("tol") = qphase::kDefaultTol,
        py::arg("require_trace_one") = true,
        "Wigner function of a density matrix as an (N, N) array indexed [a1][a2].");

    m.def(
        "density_from_wigner",
        [](const py::array_t<double>& w) {
            return from_complex_matrix(qphase::density_from_wigner(to_wigner(w)));
        },
        py::arg("w"));

    m.def(
        "striation_marginals",
        [](const py::array_t<double>& w) {
            return qphase::striation_marginals(to_wigner(w));
        },
        py::arg("w"));

    m.def(
        "purity_residual",
        [](const py::array_t<double>& w) { return qphase::purity_residual(to_wigner(w)); },
        py::arg("w"));

    m.def(
        "p_from_kraus",
        [](const std::vector<py::array_t<Complex>>& operators, double tol) {
            std::vector<ComplexMatrix> ops;
            ops.reserve(operators.size());
            for (const auto& op : operators) ops.push_back(to_complex_matrix(op));
            if (ops.empty()) throw py::value_error("need at least one Kraus operator");
            const qphase::KrausSet kraus(ops.front().dim(), std::move(ops), tol);
            return from_real_matrix(
                qphase::p_from_bmatrix(qphase::bmatrix_from_kraus(kraus), tol).p);
        },
        py::arg("operators"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "p_from_unitary",
        [](const py::array_t<Complex>& u, double tol) {
            return from_real_matrix(qphase::p_from_unitary(to_complex_matrix(u), tol).p);
        },
        py::arg("u"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "bmatrix_from_p",
        [](const py::array_t<double>& p) {
            return from_complex_matrix(qphase::bmatrix_from_p(to_transition(p)).b);
        },
        py::arg("p"));

    m.def(
        "p_from_bmatrix",
        [](const py::array_t<Complex>& b, double tol) {
            ComplexMatrix m = to_complex_matrix(b);
            const int n = side_from_squared(m.dim(), "B matrix");
            return from_real_matrix(qphase::p_from_bmatrix({n, std::move(m)}, tol).p);
        },
        py::arg("b"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "bmatrix_from_kraus",
        [](const std::vector<py::array_t<Complex>>& operators, double tol) {
            std::vector<ComplexMatrix> ops;
            ops.reserve(operators.size());
            for (const auto& op : operators) ops.push_back(to_complex_matrix(op));
            if (ops.empty()) throw py::value_error("need at least one Kraus operator");
            const qphase::KrausSet kraus(ops.front().dim(), std::move(ops), tol);
            return from_complex_matrix(qphase::bmatrix_from_kraus(kraus).b);
        },
        py::arg("operators"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "validate_channel",
        [](const py::array_t<double>& p, double tol) {
            return channel_verdict_dict(qphase::validate_channel(to_transition(p), tol));
        },
        py::arg("p"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "is_unitary_channel",
        [](const py::array_t<double>& p, double tol) {
            return qphase::is_unitary_channel(to_transition(p), tol);
        },
        py::arg("p"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "gamma_preservation_residual",
        [](const py::array_t<double>& p) {
            return qphase::gamma_preservation_residual(to_transition(p));
        },
        py::arg("p"));

    m.def(
        "choi_in_psi_basis",
        [](const std::vector<py::array_t<Complex>>& operators, double tol) {
            std::vector<ComplexMatrix> ops;
            ops.reserve(operators.size());
            for (const auto& op : operators) ops.push_back(to_complex_matrix(op));
            if (ops.empty()) throw py::value_error("need at least one Kraus operator");
            const qphase::KrausSet kraus(ops.front().dim(), std::move(ops), tol);
            return from_complex_matrix(qphase::choi_in_psi_basis(kraus));
        },
        py::arg("operators"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "apply_channel",
        [](const py::array_t<double>& p, const py::array_t<double>& w) {
            const auto result = qphase::apply_channel(to_transition(p), to_wigner(w));
            return from_point_grid(result.values(), result.n());
        },
        py::arg("p"), py::arg("w"));

    m.def(
        "kraus_from_bmatrix",
        [](const py::array_t<Complex>& b, double tol) {
            ComplexMatrix m = to_complex_matrix(b);
            const int n = side_from_squared(m.dim(), "B matrix");
            const auto kraus = qphase::kraus_from_bmatrix({n, std::move(m)}, tol);
            py::list ops;
            for (const auto& op : kraus.operators) ops.append(from_complex_matrix(op));
            return ops;
        },
        py::arg("b"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "hamiltonian_coefficients",
        [](const py::array_t<Complex>& h, double tol) {
            const auto coeffs = qphase::hamiltonian_from_matrix(to_complex_matrix(h), tol);
            return from_point_grid(coeffs.a_coeffs, coeffs.n);
        },
        py::arg("h"), py::arg("tol") = qphase::kDefaultTol,
        "Phase-point expansion coefficients of a Hermitian matrix, (N, N) [a1][a2].");

    m.def(
        "rates_from_hamiltonian",
        [](const py::array_t<Complex>& h, double hbar, double tol) {
            return from_real_matrix(
                qphase::rates_from_hamiltonian(
                    qphase::hamiltonian_from_matrix(to_complex_matrix(h), tol), hbar)
                    .r);
        },
        py::arg("h"), py::arg("hbar") = 1.0, py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "rates_from_coefficients",
        [](const py::array_t<double>& coeffs, double hbar) {
            const auto grid = to_wigner(coeffs);  // same (N, N) layout
            return from_real_matrix(
                qphase::rates_from_hamiltonian({grid.n(), grid.values()}, hbar).r);
        },
        py::arg("coefficients"), py::arg("hbar") = 1.0);

    m.def(
        "rates_from_dcoeffs",
        [](const py::array_t<Complex>& kappa, double hbar, double tol) {
            const auto grid = to_complex_grid(kappa);
            const int n = static_cast<int>(kappa.shape(0));
            return from_real_matrix(qphase::rates_from_dcoeffs(n, grid, hbar, tol).r);
        },
        py::arg("kappa"), py::arg("hbar") = 1.0, py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "hamiltonian_from_rates",
        [](const py::array_t<double>& r, double hbar) {
            const auto h = qphase::hamiltonian_from_rates(to_rates(r, hbar));
            return from_point_grid(h.a_coeffs, h.n);
        },
        py::arg("r"), py::arg("hbar") = 1.0,
        "Mean-zero phase-point coefficients of the generating Hamiltonian.");

    m.def(
        "build_r_projector",
        [](int n) { return from_real_matrix(qphase::build_r_projector(n).r); },
        py::arg("n"));

    m.def(
        "validate_rates",
        [](const py::array_t<double>& r, double tol) {
            return rate_verdict_dict(qphase::validate_rates(to_rates(r), tol));
        },
        py::arg("r"), py::arg("tol") = qphase::kDefaultTol);

    m.def(
        "project_rates",
        [](const py::array_t<double>& v) {
            RealMatrix m = to_real_matrix(v);
            const int n = side_from_squared(m.dim(), "rate vector");
            return from_real_matrix(qphase::project_rates(m.data(), n).r);
        },
        py::arg("v"));

    m.def(
        "odd_prime_condition_residual",
        [](const py::array_t<double>& r) {
            return qphase::odd_prime_condition_residual(to_rates(r));
        },
        py::arg("r"));

    m.def(
        "displacement_rates",
        [](int n, long mu1, long mu2, double hbar) {
            return from_complex_matrix(
                qphase::displacement_rates(qphase::PhasePoint(mu1, mu2, n), hbar));
        },
        py::arg("n"), py::arg("mu1"), py::arg("mu2"), py::arg("hbar") = 1.0);

    m.def(
        "ring_hamiltonian",
        [](int n) {
            const auto ring = qphase::ring_hamiltonian(n);
            py::dict d;
            d["matrix"] = from_complex_matrix(qphase::matrix_from_hamiltonian(ring));
            d["coefficients"] = from_point_grid(ring.a_coeffs, ring.n);
            py::array_t<Complex> kappa({n, n});
            auto buf = kappa.mutable_unchecked<2>();
            for (int a1 = 0; a1 < n; ++a1)
                for (int a2 = 0; a2 < n; ++a2) buf(a1, a2) = (*ring.d_coeffs)[a1 * n + a2];
            d["kappa"] = kappa;
            return d;
        },
        py::arg("n"));

    m.def(
        "evolve",
        [](const py::array_t<double>& w0, const py::array_t<double>& r, double t, int steps,
           bool allow_illegal, double tol) {
            const auto frames =
                qphase::evolve(to_wigner(w0), to_rates(r), t, steps, allow_illegal, tol);
            const int n = frames.front().n();
            py::array_t<double> out({static_cast<int>(frames.size()), n, n});
            auto buf = out.mutable_unchecked<3>();
            for (size_t k = 0; k < frames.size(); ++k)
                for (int a1 = 0; a1 < n; ++a1)
                    for (int a2 = 0; a2 < n; ++a2)
                        buf(static_cast<py::ssize_t>(k), a1, a2) = frames[k][a1 * n + a2];
            return out;
        },
        py::arg("w0"), py::arg("r"), py::arg("t"), py::arg("steps"),
        py::arg("allow_illegal") = false, py::arg("tol") = qphase::kDefaultTol,
        "Frames of dW/dt = rW at times k*t/steps, k = 0..steps; shape (steps+1, N, N).");

    m.def(
        "render_rate_quiver",
        [](const py::array_t<double>& r, const py::array_t<double>& w) {
            return qphase::render_rate_quiver(to_rates(r), to_wigner(w));
        },
        py::arg("r"), py::arg("w"), "SVG text of the rate quiver over a Wigner function.");

    m.def("selftest", []() {
        std::ostringstream out;
        const bool ok = qphase::run_selftest(out);
        py::print(out.str());
        return ok;
    });
}

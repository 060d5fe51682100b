#include "qphase/channels.hpp"
#include "qphase/dynamics.hpp"
#include "qphase/io.hpp"
#include "qphase/operators.hpp"
#include "qphase/selftest.hpp"
#include "qphase/svg.hpp"
#include "qphase/wigner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIllegal = 2;

double default_tolerance() {
    if (const char* env = std::getenv("QPHASE_TOL")) {
        try {
            const double tol = std::stod(env);
            if (tol > 0) return tol;
        } catch (...) {
        }
        std::cerr << "warning: ignoring unparsable QPHASE_TOL\n";
    }
    return qphase::kDefaultTol;
}

void emit(const qphase::io::Document& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << qphase::io::to_json_text(doc);
    } else {
        qphase::io::save_document(out_path, doc);
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
        out << text;
    }
}

int run_ops(int n, bool check) {
    const auto& basis = qphase::OperatorBasis::get(n);
    json result;
    result["n"] = n;
    result["points"] = n * n;
    result["striations"] = n + 1;
    if (check) {
        const int nn = n * n;
        double unit_trace = 0.0, orthogonality = 0.0;
        for (int i = 0; i < nn; ++i) {
            unit_trace = std::max(unit_trace, std::abs(basis.phase_point(i).trace() -
                                                       qphase::Complex(1.0, 0.0)));
            for (int j = 0; j < nn; ++j) {
                qphase::Complex t{};
                const auto& a = basis.phase_point(i);
                const auto& b = basis.phase_point(j);
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) t += a(k, l) * b(l, k);
                orthogonality = std::max(
                    orthogonality, std::abs(t - qphase::Complex(i == j ? n : 0.0, 0.0)));
            }
        }

        double projector = 0.0, unbiased = 0.0;
        const auto striations = qphase::enumerate_striations(n);
        std::vector<std::vector<qphase::ComplexMatrix>> qs;
        for (const auto& striation : striations) {
            std::vector<qphase::ComplexMatrix> row;
            qphase::ComplexMatrix sum(n);
            for (const auto& line : striation.lines) {
                auto q = basis.striation_projector(line);
                projector = std::max(projector, (q * q - q).max_abs());
                sum += q;
                row.push_back(std::move(q));
            }
            projector =
                std::max(projector, (sum - qphase::ComplexMatrix::identity(n)).max_abs());
            qs.push_back(std::move(row));
        }
        for (size_t s1 = 0; s1 < qs.size(); ++s1)
            for (size_t s2 = s1 + 1; s2 < qs.size(); ++s2)
                for (const auto& q1 : qs[s1])
                    for (const auto& q2 : qs[s2]) {
                        qphase::Complex t{};
                        for (int k = 0; k < n; ++k)
                            for (int l = 0; l < n; ++l) t += q1(k, l) * q2(l, k);
                        unbiased =
                            std::max(unbiased, std::abs(t - qphase::Complex(1.0 / n, 0.0)));
                    }

        qphase::ComplexMatrix total(n);
        for (int i = 0; i < nn; ++i) total += basis.phase_point(i);
        const double identity_residual =
            (total * qphase::Complex(1.0 / n, 0.0) - qphase::ComplexMatrix::identity(n))
                .max_abs();

        result["property_i_unit_trace"] = unit_trace;
        result["property_ii_orthogonality"] = orthogonality;
        result["property_iii_projectors"] = projector;
        result["property_iii_mutual_unbiasedness"] = unbiased;
        result["property_iv_identity"] = identity_residual;
    }
    std::cout << result.dump(2) << "\n";
    return kExitOk;
}

int run_wigner(const std::string& in_path, const std::string& out_path, bool inverse,
               double tol) {
    const auto doc = qphase::io::load_document(in_path);
    if (inverse) {
        const auto* wdoc = std::get_if<qphase::io::WignerDoc>(&doc);
        if (!wdoc) throw std::runtime_error(in_path + ": --inverse needs a wigner document");
        emit(qphase::io::DensityDoc{wdoc->n, qphase::density_from_wigner(wdoc->values)},
             out_path);
        return kExitOk;
    }
    const auto* rho = std::get_if<qphase::io::DensityDoc>(&doc);
    if (!rho) throw std::runtime_error(in_path + ": expected a density document");
    emit(qphase::io::WignerDoc{rho->n, qphase::wigner_from_density(rho->matrix, tol)},
         out_path);
    return kExitOk;
}

int run_channel_p(const std::string& kraus_path, const std::string& unitary_path,
                  const std::string& out_path, double tol) {
    if (kraus_path.empty() == unitary_path.empty()) {
        throw std::runtime_error("channel-p needs exactly one of --kraus / --unitary");
    }
    if (!kraus_path.empty()) {
        const auto doc = qphase::io::load_document(kraus_path);
        const auto* kraus = std::get_if<qphase::io::KrausSetDoc>(&doc);
        if (!kraus)
            throw std::runtime_error(kraus_path + ": expected a kraus_set document");
        const qphase::KrausSet set(kraus->n, kraus->operators, tol);
        const auto p = qphase::p_from_bmatrix(qphase::bmatrix_from_kraus(set), tol);
        emit(qphase::io::TransitionDoc{p}, out_path);
        return kExitOk;
    }
    const auto doc = qphase::io::load_document(unitary_path);
    const auto* unitary = std::get_if<qphase::io::UnitaryDoc>(&doc);
    if (!unitary) throw std::runtime_error(unitary_path + ": expected a unitary document");
    emit(qphase::io::TransitionDoc{qphase::p_from_unitary(unitary->matrix, tol)}, out_path);
    return kExitOk;
}

int run_validate_p(const std::string& in_path, double tol) {
    const auto doc = qphase::io::load_document(in_path);
    const auto* p = std::get_if<qphase::io::TransitionDoc>(&doc);
    if (!p) throw std::runtime_error(in_path + ": expected a transition document");
    const auto verdict = qphase::validate_channel(p->p, tol);
    json j;
    j["tol"] = verdict.tol;
    j["normalization_residual"] = verdict.normalization_residual;
    j["min_eigenvalue"] = verdict.min_eigenvalue;
    j["hermiticity_residual"] = verdict.hermiticity_residual;
    j["trace_b"] = verdict.trace_b;
    j["rank"] = verdict.rank;
    j["unitary"] = verdict.unitary;
    j["legal"] = verdict.legal;
    std::cout << j.dump(2) << "\n";
    return verdict.legal ? kExitOk : kExitIllegal;
}

int run_validate_r(const std::string& in_path, double tol) {
    const auto doc = qphase::io::load_document(in_path);
    const auto* r = std::get_if<qphase::io::RatesDoc>(&doc);
    if (!r) throw std::runtime_error(in_path + ": expected a rates document");
    const auto verdict = qphase::validate_rates(r->r, tol);
    json j;
    j["tol"] = verdict.tol;
    j["fixed_point_residual"] = verdict.fixed_point_residual;
    j["antisymmetry_residual"] = verdict.antisymmetry_residual;
    j["column_sum_residual"] = verdict.column_sum_residual;
    j["legal"] = verdict.legal;
    std::cout << j.dump(2) << "\n";
    return verdict.legal ? kExitOk : kExitIllegal;
}

int run_rates(const std::string& hamiltonian_path, bool ring, int ring_n,
              const std::string& out_path, double tol) {
    if (hamiltonian_path.empty() == !ring) {
        throw std::runtime_error("rates needs exactly one of --hamiltonian / --ring");
    }
    qphase::RateMatrix rates = [&] {
        if (ring) return qphase::rates_from_hamiltonian(qphase::ring_hamiltonian(ring_n));
        const auto doc = qphase::io::load_document(hamiltonian_path);
        if (const auto* ha = std::get_if<qphase::io::HamiltonianADoc>(&doc)) {
            return qphase::rates_from_hamiltonian(ha->h);
        }
        if (const auto* hd = std::get_if<qphase::io::HamiltonianDDoc>(&doc)) {
            return qphase::rates_from_hamiltonian(
                qphase::hamiltonian_from_dcoeffs(hd->n, hd->kappa, tol));
        }
        throw std::runtime_error(hamiltonian_path +
                                 ": expected a hamiltonian_a or hamiltonian_d document");
    }();
    emit(qphase::io::RatesDoc{rates}, out_path);
    return kExitOk;
}

int run_evolve(const std::string& w0_path, const std::string& rates_path, double t,
               int frames, bool allow_illegal, const std::string& out_path, double tol) {
    if (frames < 2) throw std::runtime_error("evolve needs at least 2 frames");
    const auto wdoc_any = qphase::io::load_document(w0_path);
    const auto* wdoc = std::get_if<qphase::io::WignerDoc>(&wdoc_any);
    if (!wdoc) throw std::runtime_error(w0_path + ": expected a wigner document");
    const auto rdoc_any = qphase::io::load_document(rates_path);
    const auto* rdoc = std::get_if<qphase::io::RatesDoc>(&rdoc_any);
    if (!rdoc) throw std::runtime_error(rates_path + ": expected a rates document");

    const int steps = frames - 1;
    const auto trajectory =
        qphase::evolve(wdoc->values, rdoc->r, t, steps, allow_illegal, tol);
    qphase::io::TrajectoryDoc doc{wdoc->n, {}, trajectory};
    for (int k = 0; k <= steps; ++k) doc.times.push_back(t * k / steps);
    emit(doc, out_path);
    return kExitOk;
}

int run_plot_rates(const std::string& rates_path, const std::string& wigner_path,
                   const std::string& out_path) {
    const auto rdoc_any = qphase::io::load_document(rates_path);
    const auto* rdoc = std::get_if<qphase::io::RatesDoc>(&rdoc_any);
    if (!rdoc) throw std::runtime_error(rates_path + ": expected a rates document");
    const auto wdoc_any = qphase::io::load_document(wigner_path);
    const auto* wdoc = std::get_if<qphase::io::WignerDoc>(&wdoc_any);
    if (!wdoc) throw std::runtime_error(wigner_path + ": expected a wigner document");
    emit_text(qphase::render_rate_quiver(rdoc->r, wdoc->values), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Discrete Wigner functions on a prime-dimension phase space: build the operator "
        "basis, transform states, and decide whether candidate transition probabilities "
        "or transition rates describe a legitimate quantum process.\n"
        "Exit codes: 0 = ok/legal, 1 = error, 2 = illegal object."};
    app.require_subcommand(1);

    double tol = default_tolerance();

    auto* ops = app.add_subcommand("ops", "Operator basis summary and axiom residuals");
    int ops_n = 3;
    bool ops_check = false;
    ops->add_option("--n", ops_n, "prime dimension")->required();
    ops->add_flag("--check", ops_check, "print residuals of the operator axioms");

    auto* wigner = app.add_subcommand("wigner", "Density matrix <-> Wigner function");
    std::string wigner_in, wigner_out;
    bool wigner_inverse = false;
    wigner->add_option("--in", wigner_in, "input document")->required();
    wigner->add_option("--out", wigner_out, "output file (stdout when omitted)");
    wigner->add_flag("--inverse", wigner_inverse, "wigner document -> density document");
    wigner->add_option("--tol", tol, "numerical tolerance");

    auto* channel = app.add_subcommand("channel-p",
                                       "Transition-probability matrix of a channel");
    std::string channel_kraus, channel_unitary, channel_out;
    channel->add_option("--kraus", channel_kraus, "kraus_set document");
    channel->add_option("--unitary", channel_unitary, "unitary document");
    channel->add_option("--out", channel_out, "output file (stdout when omitted)");
    channel->add_option("--tol", tol, "numerical tolerance");

    auto* validate_p = app.add_subcommand("validate-p",
                                          "Decide whether transition probabilities are "
                                          "a legitimate quantum channel");
    std::string validate_p_in;
    validate_p->add_option("--in", validate_p_in, "transition document")->required();
    validate_p->add_option("--tol", tol, "numerical tolerance");

    auto* validate_r = app.add_subcommand("validate-r",
                                          "Decide whether transition rates generate a "
                                          "Hamiltonian flow");
    std::string validate_r_in;
    validate_r->add_option("--in", validate_r_in, "rates document")->required();
    validate_r->add_option("--tol", tol, "numerical tolerance");

    auto* rates = app.add_subcommand("rates", "Transition rates of a Hamiltonian");
    std::string rates_hamiltonian, rates_out;
    bool rates_ring = false;
    int rates_n = 5;
    rates->add_option("--hamiltonian", rates_hamiltonian,
                      "hamiltonian_a or hamiltonian_d document");
    rates->add_flag("--ring", rates_ring, "use the N-site ring kinetic energy");
    rates->add_option("--n", rates_n, "dimension for --ring");
    rates->add_option("--out", rates_out, "output file (stdout when omitted)");
    rates->add_option("--tol", tol, "numerical tolerance");

    auto* evolve = app.add_subcommand("evolve", "Integrate dW/dt = r W");
    std::string evolve_w0, evolve_rates, evolve_out;
    double evolve_t = 1.0;
    int evolve_frames = 50;
    bool evolve_allow_illegal = false;
    evolve->add_option("--w0", evolve_w0, "initial wigner document")->required();
    evolve->add_option("--rates", evolve_rates, "rates document")->required();
    evolve->add_option("--t", evolve_t, "total time")->required();
    evolve->add_option("--frames", evolve_frames, "number of frames including t=0");
    evolve->add_option("--out", evolve_out, "output file (stdout when omitted)");
    evolve->add_flag("--allow-illegal", evolve_allow_illegal,
                     "integrate even if the rates fail validation");
    evolve->add_option("--tol", tol, "numerical tolerance");

    auto* plot = app.add_subcommand("plot-rates",
                                    "SVG quiver of rates out of the nonzero Wigner points");
    std::string plot_rates_path, plot_wigner_path, plot_out;
    plot->add_option("--rates", plot_rates_path, "rates document")->required();
    plot->add_option("--wigner", plot_wigner_path, "wigner document")->required();
    plot->add_option("--out", plot_out, "output SVG file (stdout when omitted)");

    auto* selftest = app.add_subcommand("selftest",
                                        "Run the embedded reference-value regression suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (ops->parsed()) return run_ops(ops_n, ops_check);
        if (wigner->parsed()) return run_wigner(wigner_in, wigner_out, wigner_inverse, tol);
        if (channel->parsed())
            return run_channel_p(channel_kraus, channel_unitary, channel_out, tol);
        if (validate_p->parsed()) return run_validate_p(validate_p_in, tol);
        if (validate_r->parsed()) return run_validate_r(validate_r_in, tol);
        if (rates->parsed())
            return run_rates(rates_hamiltonian, rates_ring, rates_n, rates_out, tol);
        if (evolve->parsed())
            return run_evolve(evolve_w0, evolve_rates, evolve_t, evolve_frames,
                              evolve_allow_illegal, evolve_out, tol);
        if (plot->parsed()) return run_plot_rates(plot_rates_path, plot_wigner_path, plot_out);
        if (selftest->parsed()) return qphase::run_selftest(std::cout) ? kExitOk : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

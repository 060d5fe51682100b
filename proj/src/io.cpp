#include "qphase/io.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace qphase::io {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json complex_matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.dim(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json real_matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.dim(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json point_grid_to_json(const std::vector<double>& values, int n) {
    json rows = json::array();
    for (int a1 = 0; a1 < n; ++a1) {
        json row = json::array();
        for (int a2 = 0; a2 < n; ++a2) row.push_back(values[a1 * n + a2]);
        rows.push_back(std::move(row));
    }
    return rows;
}

json complex_grid_to_json(const std::vector<Complex>& values, int n) {
    json rows = json::array();
    for (int a1 = 0; a1 < n; ++a1) {
        json row = json::array();
        for (int a2 = 0; a2 < n; ++a2) row.push_back(complex_to_json(values[a1 * n + a2]));
        rows.push_back(std::move(row));
    }
    return rows;
}

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw std::runtime_error(origin + ": " + message);
}

Complex json_to_complex(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(origin, where + ": complex numbers are two-element arrays [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

double json_to_real(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_number()) fail(origin, where + ": expected a real number");
    return j.get<double>();
}

const json& fetch_rows(const json& j, const char* key, size_t expected_rows,
                       const std::string& origin) {
    if (!j.contains(key)) fail(origin, std::string("missing \"") + key + "\"");
    const json& rows = j.at(key);
    if (!rows.is_array() || rows.size() != expected_rows) {
        fail(origin, std::string("\"") + key + "\" must have " + std::to_string(expected_rows) +
                         " rows, got " +
                         (rows.is_array() ? std::to_string(rows.size()) : "a non-array"));
    }
    return rows;
}

ComplexMatrix json_to_complex_matrix(const json& j, const char* key, int dim,
                                     const std::string& origin) {
    const json& rows = fetch_rows(j, key, dim, origin);
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            fail(origin, std::string(key) + " row " + std::to_string(r) + " must have " +
                             std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            m(r, c) = json_to_complex(row[c], origin,
                                      std::string(key) + "[" + std::to_string(r) + "][" +
                                          std::to_string(c) + "]");
        }
    }
    return m;
}

RealMatrix json_to_real_matrix(const json& j, const char* key, int dim,
                               const std::string& origin) {
    const json& rows = fetch_rows(j, key, dim, origin);
    RealMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            fail(origin, std::string(key) + " row " + std::to_string(r) + " must have " +
                             std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            m(r, c) = json_to_real(row[c], origin,
                                   std::string(key) + "[" + std::to_string(r) + "][" +
                                       std::to_string(c) + "]");
        }
    }
    return m;
}

std::vector<double> json_to_point_grid(const json& j, const char* key, int n,
                                       const std::string& origin) {
    const json& rows = fetch_rows(j, key, n, origin);
    std::vector<double> values(static_cast<size_t>(n) * n);
    for (int a1 = 0; a1 < n; ++a1) {
        const json& row = rows[a1];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            fail(origin, std::string(key) + " row " + std::to_string(a1) + " must have " +
                             std::to_string(n) + " entries");
        }
        for (int a2 = 0; a2 < n; ++a2) {
            values[a1 * n + a2] = json_to_real(row[a2], origin,
                                               std::string(key) + "[" + std::to_string(a1) +
                                                   "][" + std::to_string(a2) + "]");
        }
    }
    return values;
}

std::vector<Complex> json_to_complex_grid(const json& j, const char* key, int n,
                                          const std::string& origin) {
    const json& rows = fetch_rows(j, key, n, origin);
    std::vector<Complex> values(static_cast<size_t>(n) * n);
    for (int a1 = 0; a1 < n; ++a1) {
        const json& row = rows[a1];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            fail(origin, std::string(key) + " row " + std::to_string(a1) + " must have " +
                             std::to_string(n) + " entries");
        }
        for (int a2 = 0; a2 < n; ++a2) {
            values[a1 * n + a2] = json_to_complex(row[a2], origin,
                                                  std::string(key) + "[" + std::to_string(a1) +
                                                      "][" + std::to_string(a2) + "]");
        }
    }
    return values;
}

}  // namespace

std::string to_json_text(const Document& doc) {
    json j;
    j["format_version"] = 1;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, DensityDoc>) {
                j["kind"] = "density";
                j["n"] = d.n;
                j["matrix"] = complex_matrix_to_json(d.matrix);
            } else if constexpr (std::is_same_v<T, UnitaryDoc>) {
                j["kind"] = "unitary";
                j["n"] = d.n;
                j["matrix"] = complex_matrix_to_json(d.matrix);
            } else if constexpr (std::is_same_v<T, KrausSetDoc>) {
                j["kind"] = "kraus_set";
                j["n"] = d.n;
                json ops = json::array();
                for (const auto& op : d.operators) ops.push_back(complex_matrix_to_json(op));
                j["operators"] = std::move(ops);
            } else if constexpr (std::is_same_v<T, WignerDoc>) {
                j["kind"] = "wigner";
                j["n"] = d.n;
                j["values"] = point_grid_to_json(d.values.values(), d.n);
            } else if constexpr (std::is_same_v<T, TransitionDoc>) {
                j["kind"] = "transition";
                j["n"] = d.p.n;
                j["matrix"] = real_matrix_to_json(d.p.p);
            } else if constexpr (std::is_same_v<T, RatesDoc>) {
                j["kind"] = "rates";
                j["n"] = d.r.n;
                j["hbar"] = d.r.hbar;
                j["matrix"] = real_matrix_to_json(d.r.r);
            } else if constexpr (std::is_same_v<T, HamiltonianADoc>) {
                j["kind"] = "hamiltonian_a";
                j["n"] = d.h.n;
                j["values"] = point_grid_to_json(d.h.a_coeffs, d.h.n);
            } else if constexpr (std::is_same_v<T, HamiltonianDDoc>) {
                j["kind"] = "hamiltonian_d";
                j["n"] = d.n;
                j["values"] = complex_grid_to_json(d.kappa, d.n);
            } else if constexpr (std::is_same_v<T, TrajectoryDoc>) {
                j["kind"] = "trajectory";
                j["n"] = d.n;
                j["times"] = d.times;
                json frames = json::array();
                for (const auto& frame : d.frames)
                    frames.push_back(point_grid_to_json(frame.values(), d.n));
                j["frames"] = std::move(frames);
            }
        },
        doc);
    return j.dump(2) + "\n";
}

Document from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(origin, "top level must be an object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != 1) {
        fail(origin, "missing or unsupported format_version (expected 1)");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) fail(origin, "missing \"kind\"");
    if (!j.contains("n") || !j["n"].is_number_integer()) fail(origin, "missing \"n\"");
    const std::string kind = j["kind"].get<std::string>();
    const int n = j["n"].get<int>();
    if (!is_prime(n)) fail(origin, "\"n\" must be prime, got " + std::to_string(n));
    const int nn = n * n;

    if (kind == "density") {
        return DensityDoc{n, json_to_complex_matrix(j, "matrix", n, origin)};
    }
    if (kind == "unitary") {
        return UnitaryDoc{n, json_to_complex_matrix(j, "matrix", n, origin)};
    }
    if (kind == "kraus_set") {
        if (!j.contains("operators") || !j["operators"].is_array() || j["operators"].empty()) {
            fail(origin, "kraus_set needs a non-empty \"operators\" array");
        }
        KrausSetDoc doc{n, {}};
        json wrapper;
        for (size_t i = 0; i < j["operators"].size(); ++i) {
            wrapper["op"] = j["operators"][i];
            doc.operators.push_back(json_to_complex_matrix(
                wrapper, "op", n, origin + ": operators[" + std::to_string(i) + "]"));
        }
        return doc;
    }
    if (kind == "wigner") {
        return WignerDoc{n, WignerFunction(n, json_to_point_grid(j, "values", n, origin))};
    }
    if (kind == "transition") {
        return TransitionDoc{TransitionMatrix(n, json_to_real_matrix(j, "matrix", nn, origin))};
    }
    if (kind == "rates") {
        double hbar = 1.0;
        if (j.contains("hbar")) hbar = json_to_real(j["hbar"], origin, "hbar");
        return RatesDoc{RateMatrix(n, json_to_real_matrix(j, "matrix", nn, origin), hbar)};
    }
    if (kind == "hamiltonian_a") {
        return HamiltonianADoc{
            HamiltonianCoefficients(n, json_to_point_grid(j, "values", n, origin))};
    }
    if (kind == "hamiltonian_d") {
        return HamiltonianDDoc{n, json_to_complex_grid(j, "values", n, origin)};
    }
    if (kind == "trajectory") {
        if (!j.contains("frames") || !j["frames"].is_array() || j["frames"].empty()) {
            fail(origin, "trajectory needs a non-empty \"frames\" array");
        }
        TrajectoryDoc doc{n, {}, {}};
        if (j.contains("times")) {
            for (const auto& t : j["times"])
                doc.times.push_back(json_to_real(t, origin, "times"));
        }
        json wrapper;
        for (size_t i = 0; i < j["frames"].size(); ++i) {
            wrapper["frame"] = j["frames"][i];
            doc.frames.emplace_back(
                n, json_to_point_grid(wrapper, "frame", n,
                                      origin + ": frames[" + std::to_string(i) + "]"));
        }
        if (!doc.times.empty() && doc.times.size() != doc.frames.size()) {
            fail(origin, "times and frames lengths differ");
        }
        return doc;
    }
    fail(origin, "unknown kind \"" + kind + "\"");
}

Document load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text, path);
}

void save_document(const std::string& path, const Document& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << to_json_text(doc);
}

}  // namespace qphase::io

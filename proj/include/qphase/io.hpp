#pragma once

#include "qphase/channels.hpp"
#include "qphase/dynamics.hpp"
#include "qphase/linalg.hpp"
#include "qphase/wigner.hpp"

#include <string>
#include <variant>
#include <vector>

namespace qphase::io {

// Versioned JSON documents. Complex numbers are [re, im] pairs, matrices are
// row-major nested arrays, Wigner functions and phase-point coefficient sets
// are N x N arrays indexed [a1][a2].

struct DensityDoc {
    int n;
    ComplexMatrix matrix;
};
struct UnitaryDoc {
    int n;
    ComplexMatrix matrix;
};
struct KrausSetDoc {
    int n;
    std::vector<ComplexMatrix> operators;
};
struct WignerDoc {
    int n;
    WignerFunction values;
};
struct TransitionDoc {
    TransitionMatrix p;
};
struct RatesDoc {
    RateMatrix r;
};
struct HamiltonianADoc {
    HamiltonianCoefficients h;
};
struct HamiltonianDDoc {
    int n;
    std::vector<Complex> kappa;  // indexed by point index
};
struct TrajectoryDoc {
    int n;
    std::vector<double> times;
    std::vector<WignerFunction> frames;
};

using Document = std::variant<DensityDoc, UnitaryDoc, KrausSetDoc, WignerDoc, TransitionDoc,
                              RatesDoc, HamiltonianADoc, HamiltonianDDoc, TrajectoryDoc>;

/// Serialize with format_version 1. Deterministic output: same document,
/// same bytes.
std::string to_json_text(const Document& doc);

/// Parse and validate; unknown kinds and size mismatches are rejected with
/// positional messages.
Document from_json_text(const std::string& text, const std::string& origin = "document");

Document load_document(const std::string& path);
void save_document(const std::string& path, const Document& doc);

}  // namespace qphase::io

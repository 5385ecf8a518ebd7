#include "qlbeam/error.hpp"

#include <cstdio>

namespace qlbeam {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_n: return "invalid-n";
        case ErrorKind::non_positive_length: return "non-positive-length";
        case ErrorKind::grid_too_narrow: return "grid-too-narrow";
        case ErrorKind::non_positive_definite: return "non-positive-definite";
        case ErrorKind::invalid_count: return "invalid-count";
        case ErrorKind::refuse_negative: return "refuse-negative";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::even_order: return "even-order";
        case ErrorKind::kick_phase_overflow: return "kick-phase-overflow";
        case ErrorKind::imaginary_residue: return "imaginary-residue";
        case ErrorKind::kinetic_phase_aliasing: return "kinetic-phase-aliasing";
        case ErrorKind::non_finite: return "non-finite";
        case ErrorKind::non_focusing: return "non-focusing";
        case ErrorKind::p_axis_too_coarse: return "p-axis-too-coarse";
        case ErrorKind::degenerate_parameters: return "degenerate-parameters";
        case ErrorKind::non_normalized: return "non-normalized";
        case ErrorKind::grid_mismatch: return "grid-mismatch";
        case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

std::string value_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace qlbeam

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlbeam {

enum class ErrorKind {
    invalid_n,
    non_positive_length,
    grid_too_narrow,
    non_positive_definite,
    invalid_count,
    refuse_negative,
    invalid_argument,
    even_order,
    kick_phase_overflow,
    imaginary_residue,
    kinetic_phase_aliasing,
    non_finite,
    non_focusing,
    p_axis_too_coarse,
    degenerate_parameters,
    non_normalized,
    grid_mismatch,
    io_error,
};

std::string_view to_string(ErrorKind kind);

/// Short %g rendering of a value for error messages.
std::string value_text(double v);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace qlbeam

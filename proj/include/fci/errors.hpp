#pragma once

#include <stdexcept>
#include <string>

namespace fci {

enum class Errc {
    budget_exceeded,
    width_exceeded,
    gapless,
    non_integer_residue,
    out_of_derived_domain,
    singular_point,
    aspect_undefined,
    size_not_embeddable,
    dimension_exceeded,
    gap_closed_at_twist,
    no_convergence,
    invalid_parameter,
};

// Domain failure. CLI maps these to exit code 1; usage problems
// (std::invalid_argument) map to exit code 2.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace fci

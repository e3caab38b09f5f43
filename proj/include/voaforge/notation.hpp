#pragma once

#include <string>
#include <string_view>

#include "voaforge/voa.hpp"

namespace voaforge {

/// Reads a state such as "L(-2)L(-2)|0> - 3/10 L(-4)|0>" or "1/2 a(-1)^2|0>".
/// Modes in a product are applied right to left onto the ket, so any
/// ordering is accepted and straightened. The ket must match the module:
/// |0> for a VOA, |h> for a Verma module, |l> for a Fock module. A lone "0"
/// is the zero vector. Throws ParseError with the offending position.
State parse_state(std::string_view text, const Module& module);

/// Canonical form: terms by ascending weight, then by basis order; unit
/// coefficients dropped; repeated modes grouped as L(-2)^2.
std::string format_state(const State& s);

/// Printed form of one basis vector, e.g. "a(-2)a(-1)^2|l>".
std::string format_basis(const Module& module, Index id);

}  // namespace voaforge

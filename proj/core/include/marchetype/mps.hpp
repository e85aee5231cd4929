#pragma once

#include <string>

#include "marchetype/targeting.hpp"

namespace marchetype {

// Free-format MPS text for the minimization LP with one N objective row,
// L-type constraint rows and UP 1 / LO 0 bounds on every column. Values are
// printed with enough digits to round-trip exactly. RANGES is not used.
std::string write_mps(const StandardLP& lp, const std::string& name = "MARCHLP");

// Parses free-format MPS covering what write_mps emits plus G and E rows
// (folded into <= form). Column labels are not recoverable from MPS.
StandardLP read_mps(const std::string& text);

}  // namespace marchetype

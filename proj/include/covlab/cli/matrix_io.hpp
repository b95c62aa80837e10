#pragma once

#include <istream>
#include <string>

#include "covlab/matrix.hpp"

namespace covlab::cli {

/// Parses the plain-text matrix format: a line holding d, then d lines of d
/// whitespace-separated decimals. Blank lines are skipped. Throws ParseError
/// with a 1-based position, or NotSymmetric if entries differ from their
/// transpose by more than 1e-12.
SymMatrix parse_matrix(std::istream& in);
SymMatrix read_matrix_file(const std::string& path);

}  // namespace covlab::cli

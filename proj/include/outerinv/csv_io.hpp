#pragma once

#include <iosfwd>
#include <string>

#include "outerinv/linalg.hpp"

namespace outerinv {

// Matrix files are plain CSV: one matrix row per line, comma-separated
// decimal literals, no header. Subspace files use the same format with
// columns interpreted as spanning vectors.

Matrix parse_matrix_csv(std::istream& in, const std::string& origin);
Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

}  // namespace outerinv

#pragma once

#include <string>

#include "lrcs/dense.hpp"

namespace lrcs {

// Matrix file format shared by every module: plain CSV, one row per line,
// '.' decimal separator, no header; the shape is inferred from line/field
// counts. Writers emit 17 significant digits so a read-back is bit-exact.
Matrix read_csv(const std::string& path);
void write_csv(const std::string& path, const Matrix& m);

// CSV serialization to/from an in-memory string (used by the writers and by
// round-trip tests).
Matrix parse_csv(const std::string& text, const std::string& origin);
std::string format_csv(const Matrix& m);

}  // namespace lrcs

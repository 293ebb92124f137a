#pragma once

#include <filesystem>
#include <string>

#include "kreinfield/borchers.hpp"
#include "kreinfield/linalg.hpp"

namespace kreinfield::io {

/// {"dim": n, "re": [[...]], "im": [[...]]}, row-major. "im" may be omitted on input.
/// Throws ParseError on malformed text and ShapeMismatch on inconsistent sizes.
Matrix matrix_from_json(const std::string& text);
std::string matrix_to_json(const Matrix& m);

/// {"b": letters, "d_max": d, "W": {"1": [...], "2": [[...]], ...}, "star": [...]}.
/// W_n is an n-deep nested array indexed by the letters; a leaf is a number or [re, im].
/// Missing degrees are zero; W_0 is always 1.
gns::WightmanFunctional wightman_from_json(const std::string& text);
std::string wightman_to_json(const gns::WightmanFunctional& w);

std::string read_text(const std::filesystem::path& path);
/// Throws ReportWriteFailed.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kreinfield::io

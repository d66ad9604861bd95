#pragma once

#include "besselcall/curve.hpp"

#include <string>
#include <vector>

namespace besselcall::svg {

// Self-contained SVG 1.1 line chart of the curve rows: one panel per
// dimension when several k share a dimension (varying-k layout), one panel
// per k otherwise (varying-dimension layout). Log-scaled t axis. Rendering
// is presentation only; nothing downstream depends on it.
std::string render(const std::vector<curve::CsvRow>& rows);

void write(const std::vector<curve::CsvRow>& rows, const std::string& path);

} // namespace besselcall::svg

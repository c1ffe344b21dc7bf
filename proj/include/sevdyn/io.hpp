#pragma once

#include <string>

namespace sevdyn {

/// Decimal representation with 17 significant digits ("%.17g"): enough to
/// round-trip any double exactly.
std::string format_g17(double v);

/// Reads a whole file; throws ValidationError if unreadable.
std::string read_text_file(const std::string& path);

/// Writes text to a file, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sevdyn

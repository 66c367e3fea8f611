#pragma once

#include <string>

namespace bmhd {

// Write-temp-then-rename so partially written outputs never appear.
void atomic_write_text(const std::string& path, const std::string& content);
void atomic_write_bytes(const std::string& path, const std::string& bytes);

// Locale-independent float formatting with 17 significant digits.
std::string format_double(double x);

}  // namespace bmhd

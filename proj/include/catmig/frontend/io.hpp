#pragma once

#include <string>

namespace catmig::frontend {

/// Throws Error(IoError).
std::string read_file(const std::string& path);

/// Writes to a temporary file in the same directory, then renames it over
/// `path`. Throws Error(IoError).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace catmig::frontend

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "catmig/instance.hpp"

namespace catmig::frontend {

using CsvRow = std::vector<std::string>;

/// RFC 4180 records; accepts LF or CRLF line ends and a missing final line
/// end. Throws SyntaxError on an unterminated quoted field.
std::vector<CsvRow> parse_csv(std::string_view text, const std::string& path = {});

/// One file name (Node.csv) -> content per entity node, with header
/// `id,<out-edges in declaration order>`. String literals are always quoted.
std::map<std::string, std::string> render_csv(const Instance& instance);

/// Writes render_csv's files into `directory`, creating it if needed.
void export_csv(const Instance& instance, const std::string& directory);

/// Reads Node.csv for every entity node of `schema` and validates the
/// result. Throws HeaderMismatch for missing files, unexpected headers or
/// ragged rows; otherwise the errors of validate_instance.
Instance import_csv(const SchemaPtr& schema, const std::string& directory);

}  // namespace catmig::frontend

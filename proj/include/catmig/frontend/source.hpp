#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "catmig/instance.hpp"
#include "catmig/mapping.hpp"
#include "catmig/schema.hpp"

namespace catmig::frontend {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(const Position&) const = default;
};

/// "file:line:col" (or "line:col" without a file name).
std::string describe(const std::string& file, Position pos);

struct SchemaBlock {
  SchemaDecl decl;
  Position pos;
};

struct InstanceBlock {
  InstanceDecl decl;
  Position pos;
  Position schema_pos;
};

struct MappingBlock {
  MappingDecl decl;
  Position pos;
  Position source_pos;
  Position target_pos;
};

using Declaration = std::variant<SchemaBlock, InstanceBlock, MappingBlock>;

struct SourceFile {
  std::string path;  // for messages only; may be empty
  std::vector<Declaration> declarations;

  const SchemaBlock* find_schema(std::string_view name) const;
  const InstanceBlock* find_instance(std::string_view name) const;
  const MappingBlock* find_mapping(std::string_view name) const;
};

/// Throws Error(SyntaxError) with "path:line:col" in the message, or
/// DuplicateName when two declarations of one kind share a name.
SourceFile parse_source(std::string_view text, const std::string& path = {});

/// Canonical text: declarations in source order, sections in a fixed order,
/// empty sections and empty edge maps omitted.
std::string print_source(const SourceFile& file);

std::string print_declaration(const Declaration& decl);

/// A single `p = q` as given on the command line. Throws SyntaxError.
EquationDecl parse_equation(std::string_view text);

/// True if `id` can be written as a bare token.
bool is_bare_token(std::string_view id);

}  // namespace catmig::frontend

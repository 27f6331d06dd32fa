#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catmig/frontend/source.hpp"
#include "catmig/mapping.hpp"

namespace catmig::frontend {

/// Declarations from one main file plus its --include files, validated on
/// demand. Errors raised while validating a declaration are prefixed with
/// its position.
class Environment {
 public:
  explicit Environment(Budget budget = {}) : budget_(budget) {}

  /// Throws DuplicateName if a declaration clashes with one already added.
  void add(SourceFile file);
  /// Reads and parses `path`, then add()s it.
  void load(const std::string& path);

  const std::deque<SourceFile>& files() const noexcept { return files_; }
  const Budget& budget() const noexcept { return budget_; }

  const SchemaBlock* find_schema(const std::string& name) const;
  const InstanceBlock* find_instance(const std::string& name) const;
  const MappingBlock* find_mapping(const std::string& name) const;

  /// Throws UnresolvedReference for any instance or mapping naming a schema
  /// that is not declared.
  void check_references() const;

  /// Throw UnresolvedReference when the name is not declared.
  SchemaPtr schema(const std::string& name);
  InstancePtr instance(const std::string& name);
  const Mapping& mapping(const std::string& name);

 private:
  struct Located {
    const SourceFile* file = nullptr;
    const Declaration* decl = nullptr;
  };
  Located locate(std::size_t kind, const std::string& name) const;
  std::string where(const Located& at) const;
  SchemaPtr referenced_schema(const std::string& name, const SourceFile& file, Position pos);

  Budget budget_;
  std::deque<SourceFile> files_;
  std::map<std::string, SchemaPtr> schemas_;
  std::map<std::string, InstancePtr> instances_;
  std::map<std::string, std::unique_ptr<Mapping>> mappings_;
};

}  // namespace catmig::frontend

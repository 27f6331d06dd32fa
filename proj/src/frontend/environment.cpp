#include "catmig/frontend/environment.hpp"

#include "catmig/error.hpp"
#include "catmig/frontend/io.hpp"

namespace catmig::frontend {

namespace {

constexpr std::size_t kSchema = 0;
constexpr std::size_t kInstance = 1;
constexpr std::size_t kMapping = 2;

const char* kind_name(std::size_t kind) {
  switch (kind) {
    case kSchema: return "schema";
    case kInstance: return "instance";
    default: return "mapping";
  }
}

const std::string& name_of(const Declaration& d) {
  return std::visit([](const auto& b) -> const std::string& { return b.decl.name; }, d);
}

Position pos_of(const Declaration& d) {
  return std::visit([](const auto& b) { return b.pos; }, d);
}

// Re-raises `e` with every message prefixed by `prefix`.
[[noreturn]] void rethrow_at(const std::string& prefix) {
  try {
    throw;
  } catch (const ValidationError& e) {
    std::vector<Diagnostic> diags = e.diagnostics();
    for (auto& d : diags) d.message = prefix + d.message;
    throw ValidationError(std::move(diags));
  } catch (const Error& e) {
    throw Error(e.code(), prefix + e.detail());
  }
}

}  // namespace

void Environment::add(SourceFile file) {
  for (const auto& d : file.declarations) {
    Located prior = locate(d.index(), name_of(d));
    if (prior.decl) {
      throw Error(ErrorCode::DuplicateName, describe(file.path, pos_of(d)) + ": " + kind_name(d.index()) + " '" +
                                                name_of(d) + "' is already declared at " + where(prior));
    }
  }
  files_.push_back(std::move(file));
}

void Environment::load(const std::string& path) { add(parse_source(read_file(path), path)); }

Environment::Located Environment::locate(std::size_t kind, const std::string& name) const {
  for (const auto& f : files_) {
    for (const auto& d : f.declarations) {
      if (d.index() == kind && name_of(d) == name) return {&f, &d};
    }
  }
  return {};
}

std::string Environment::where(const Located& at) const { return describe(at.file->path, pos_of(*at.decl)); }

const SchemaBlock* Environment::find_schema(const std::string& name) const {
  auto at = locate(kSchema, name);
  return at.decl ? &std::get<SchemaBlock>(*at.decl) : nullptr;
}

const InstanceBlock* Environment::find_instance(const std::string& name) const {
  auto at = locate(kInstance, name);
  return at.decl ? &std::get<InstanceBlock>(*at.decl) : nullptr;
}

const MappingBlock* Environment::find_mapping(const std::string& name) const {
  auto at = locate(kMapping, name);
  return at.decl ? &std::get<MappingBlock>(*at.decl) : nullptr;
}

void Environment::check_references() const {
  auto require = [&](const std::string& name, const SourceFile& f, Position pos, const std::string& user) {
    if (!find_schema(name)) {
      throw Error(ErrorCode::UnresolvedReference,
                  describe(f.path, pos) + ": " + user + " refers to undeclared schema '" + name + "'");
    }
  };
  for (const auto& f : files_) {
    for (const auto& d : f.declarations) {
      if (const auto* i = std::get_if<InstanceBlock>(&d)) {
        require(i->decl.schema, f, i->schema_pos, "instance " + i->decl.name);
      } else if (const auto* m = std::get_if<MappingBlock>(&d)) {
        require(m->decl.source, f, m->source_pos, "mapping " + m->decl.name);
        require(m->decl.target, f, m->target_pos, "mapping " + m->decl.name);
      }
    }
  }
}

SchemaPtr Environment::schema(const std::string& name) {
  if (auto it = schemas_.find(name); it != schemas_.end()) return it->second;
  auto at = locate(kSchema, name);
  if (!at.decl) throw Error(ErrorCode::UnresolvedReference, "no schema named '" + name + "'");
  SchemaPtr s;
  try {
    s = validate_schema(std::get<SchemaBlock>(*at.decl).decl, budget_);
  } catch (const Error&) {
    rethrow_at(where(at) + ": in schema " + name + ": ");
  }
  schemas_.emplace(name, s);
  return s;
}

SchemaPtr Environment::referenced_schema(const std::string& name, const SourceFile& file, Position pos) {
  if (!find_schema(name)) {
    throw Error(ErrorCode::UnresolvedReference, describe(file.path, pos) + ": undeclared schema '" + name + "'");
  }
  return schema(name);
}

InstancePtr Environment::instance(const std::string& name) {
  if (auto it = instances_.find(name); it != instances_.end()) return it->second;
  auto at = locate(kInstance, name);
  if (!at.decl) throw Error(ErrorCode::UnresolvedReference, "no instance named '" + name + "'");
  const auto& b = std::get<InstanceBlock>(*at.decl);
  SchemaPtr s = referenced_schema(b.decl.schema, *at.file, b.schema_pos);
  InstancePtr i;
  try {
    i = std::make_shared<Instance>(validate_instance(s, b.decl));
  } catch (const Error&) {
    rethrow_at(where(at) + ": in instance " + name + ": ");
  }
  instances_.emplace(name, i);
  return i;
}

const Mapping& Environment::mapping(const std::string& name) {
  if (auto it = mappings_.find(name); it != mappings_.end()) return *it->second;
  auto at = locate(kMapping, name);
  if (!at.decl) throw Error(ErrorCode::UnresolvedReference, "no mapping named '" + name + "'");
  const auto& b = std::get<MappingBlock>(*at.decl);
  SchemaPtr c = referenced_schema(b.decl.source, *at.file, b.source_pos);
  SchemaPtr d = referenced_schema(b.decl.target, *at.file, b.target_pos);
  std::unique_ptr<Mapping> m;
  try {
    m = std::make_unique<Mapping>(validate_mapping(c, d, b.decl));
  } catch (const Error&) {
    rethrow_at(where(at) + ": in mapping " + name + ": ");
  }
  return *mappings_.emplace(name, std::move(m)).first->second;
}

}  // namespace catmig::frontend

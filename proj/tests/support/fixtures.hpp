#pragma once

#include <optional>
#include <random>
#include <string>

#include "catmig/instance.hpp"
#include "catmig/mapping.hpp"
#include "catmig/migrate.hpp"
#include "catmig/schema.hpp"

namespace catmig::testing {

/// Emp/Dept with mgr, works, admin, name (Emp) and dname (Dept), and the
/// constraint admin.works = id:Dept.
SchemaDecl emp_dept_decl();
SchemaPtr emp_dept();

/// The printed tables: admin = {q10 -> 102, x02 -> 101}.
InstanceDecl paper_verbatim_decl();
/// Same tables with admin = {q10 -> 101, x02 -> 102}.
InstanceDecl paper_corrected_decl();

/// One entity node with a loop edge, optionally with loop.loop = loop.
SchemaPtr loop_schema(const std::string& node, const std::string& edge, bool idempotent);

struct RandomSchemaOptions {
  std::string prefix = "S";
  std::size_t max_entities = 3;
  std::size_t max_edges = 3;
  bool attributes = true;
  bool loops = true;
  bool equations = true;
};

/// Small convergent schema: a DAG of edges plus optional idempotent or
/// involutive loops, attributes to String and commuting-path equations.
SchemaPtr random_schema(std::mt19937& rng, const RandomSchemaOptions& options);

/// A functorial mapping with edges sent to paths of length at most 2, or
/// nullopt if none was found in the allotted attempts.
std::optional<Mapping> random_mapping(const SchemaPtr& source, const SchemaPtr& target, std::mt19937& rng,
                                      int attempts = 20);

/// A constraint-satisfying instance with at most `max_per_node` elements per
/// node. String attributes draw from a two-letter pool.
std::optional<Instance> random_instance(const SchemaPtr& schema, std::mt19937& rng, std::size_t max_per_node,
                                        int attempts = 200);

/// Copy of `instance` with carriers reversed and ids prefixed.
Instance renamed_reversed(const Instance& instance, const std::string& prefix);

/// Hom count by exhaustive enumeration of all component functions, each
/// checked with check_hom. nullopt when there are more than
/// `max_candidates` candidate functions.
std::optional<std::size_t> brute_force_hom_count(const InstancePtr& from, const InstancePtr& to,
                                                 std::size_t max_candidates = 200000);

MigrationLimits small_limits();

inline InstancePtr share(Instance i) { return std::make_shared<Instance>(std::move(i)); }

}  // namespace catmig::testing

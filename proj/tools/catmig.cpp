// Command line front end: validate declarations, check constraints, prove
// path equations, check mappings and run migrations.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "catmig/error.hpp"
#include "catmig/frontend/csv.hpp"
#include "catmig/frontend/environment.hpp"
#include "catmig/frontend/io.hpp"
#include "catmig/frontend/triples.hpp"
#include "catmig/migrate.hpp"

namespace {

using namespace catmig;
using namespace catmig::frontend;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Global {
  std::size_t max_kb_steps = Budget{}.max_completion_iterations;
  std::size_t max_path_len = Budget{}.max_path_length;
  std::size_t max_chase_rounds = MigrationLimits{}.max_chase_rounds;
  std::size_t max_elements = MigrationLimits{}.max_elements;
  std::vector<std::string> includes;

  Budget budget() const {
    Budget b;
    b.max_completion_iterations = max_kb_steps;
    b.max_path_length = max_path_len;
    return b;
  }

  MigrationLimits limits() const {
    MigrationLimits l;
    l.max_chase_rounds = max_chase_rounds;
    l.max_elements = max_elements;
    l.comma_path_bound = max_path_len;
    l.prover = budget();
    return l;
  }
};

// Raised for bad command-line input; exits with kUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string homomorphisms(std::size_t n) {
  return std::to_string(n) + (n == 1 ? " homomorphism" : " homomorphisms");
}

void print_error(const std::exception& e) {
  std::istringstream lines(e.what());
  std::string line;
  while (std::getline(lines, line)) std::cerr << "error: " << line << "\n";
}

Environment load(const Global& g, const std::string& file) {
  Environment env(g.budget());
  env.load(file);
  for (const auto& inc : g.includes) env.load(inc);
  env.check_references();
  return env;
}

void require_instance(const Environment& env, const std::string& name) {
  if (!env.find_instance(name)) throw UsageError("no instance named '" + name + "'");
}

void require_mapping(const Environment& env, const std::string& name) {
  if (!env.find_mapping(name)) throw UsageError("no mapping named '" + name + "'");
}

void require_schema(const Environment& env, const std::string& name) {
  if (!env.find_schema(name)) throw UsageError("no schema named '" + name + "'");
}

int cmd_validate(const Global& g, const std::string& file) {
  Environment env = load(g, file);
  int status = kOk;
  for (const auto& d : env.files().front().declarations) {
    try {
      if (const auto* s = std::get_if<SchemaBlock>(&d)) {
        SchemaPtr schema = env.schema(s->decl.name);
        std::cout << "schema " << s->decl.name << ": ok, " << schema->entities().size() << " entities, "
                  << schema->types().size() << " types, " << schema->graph().edges().size() << " edges, "
                  << schema->equations().size() << " equations; theory "
                  << to_string(schema->theory().status()) << " with " << schema->theory().rule_count()
                  << " rules\n";
        for (const auto& w : schema->theory().warnings()) std::cout << "  warning: " << w << "\n";
      } else if (const auto* i = std::get_if<InstanceBlock>(&d)) {
        InstancePtr inst = env.instance(i->decl.name);
        std::cout << "instance " << i->decl.name << " on " << i->decl.schema << ": ok, " << inst->total_elements()
                  << " elements\n";
      } else if (const auto* m = std::get_if<MappingBlock>(&d)) {
        env.mapping(m->decl.name);
        std::cout << "mapping " << m->decl.name << " : " << m->decl.source << " -> " << m->decl.target << ": ok\n";
      }
    } catch (const Error& e) {
      print_error(e);
      status = kFailure;
    }
  }
  return status;
}

int cmd_check(const Global& g, const std::string& file, const std::string& name) {
  Environment env = load(g, file);
  require_instance(env, name);
  ViolationReport report = check_constraints(*env.instance(name));
  if (report.empty()) {
    std::cout << name << ": no violations\n";
    return kOk;
  }
  std::cout << name << ": " << report.size() << (report.size() == 1 ? " violation\n" : " violations\n")
            << report.to_string();
  return kFailure;
}

int cmd_prove(const Global& g, const std::string& file, const std::string& schema_name, const std::string& text) {
  Environment env = load(g, file);
  require_schema(env, schema_name);
  EquationDecl raw;
  try {
    raw = parse_equation(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  SchemaPtr s = env.schema(schema_name);
  PathEquation eq{resolve_path(s->graph(), raw.lhs), resolve_path(s->graph(), raw.rhs)};
  check_equation(s->graph(), eq);
  ProofOutcome outcome = prove_equal(s->theory(), eq.lhs, eq.rhs, g.budget());
  std::cout << to_string(outcome.verdict) << "\n";
  std::cout << "equation: " << eq.to_string() << "\n";
  std::cout << "theory: " << to_string(s->theory().status()) << ", " << s->theory().rule_count() << " rules\n";
  switch (outcome.verdict) {
    case Verdict::Proven:
      std::cout << "trace (" << outcome.trace.size() << " steps):\n";
      for (const auto& step : outcome.trace) std::cout << "  " << to_string(step) << "\n";
      return kOk;
    case Verdict::Refuted:
      std::cout << "normal forms: " << outcome.lhs_normal.to_string() << " vs " << outcome.rhs_normal.to_string()
                << "\n";
      return kFailure;
    case Verdict::Unknown:
      std::cout << "normal forms: " << outcome.lhs_normal.to_string() << " vs " << outcome.rhs_normal.to_string()
                << "\n";
      std::cout << "no proof found within the budget; the theory is not convergent, so this is not a refutation\n";
      return kUsage;
  }
  return kUsage;
}

int cmd_map_check(const Global& g, const std::string& file, const std::string& name) {
  Environment env = load(g, file);
  require_mapping(env, name);
  const Mapping& m = env.mapping(name);
  FunctorialityVerdict v = check_functoriality(m, g.budget());
  std::cout << name << ": " << v.to_string(m);
  switch (v.kind) {
    case FunctorialityKind::Functorial: return kOk;
    case FunctorialityKind::NotFunctorial: return kFailure;
    case FunctorialityKind::Undetermined: return kUsage;
  }
  return kUsage;
}

struct MigrateArgs {
  std::string kind;
  std::string mapping;
  std::string instance;
  std::string output;
  std::string csv;
  std::string provenance;
  std::string name;
  bool allow_undetermined = false;
};

int cmd_migrate(const Global& g, const std::string& file, const MigrateArgs& a) {
  if (!a.provenance.empty() && a.kind != "sigma") throw UsageError("--provenance applies to --kind sigma only");
  Environment env = load(g, file);
  require_mapping(env, a.mapping);
  require_instance(env, a.instance);
  const Mapping& m = env.mapping(a.mapping);
  InstancePtr input = env.instance(a.instance);
  CheckedMapping f = certify(m, g.budget(), a.allow_undetermined);
  if (f.verdict().kind == FunctorialityKind::Undetermined) {
    std::cerr << "warning: " << a.mapping << " is not known to be functorial; proceeding because of "
              << "--allow-undetermined\n";
  }

  const SchemaPtr& expected = a.kind == "delta" ? m.target() : m.source();
  if (input->schema() != expected) {
    throw UsageError("instance " + a.instance + " is not on schema " +
                     (a.kind == "delta" ? env.find_mapping(a.mapping)->decl.target
                                        : env.find_mapping(a.mapping)->decl.source));
  }
  const MigrationLimits limits = g.limits();
  std::optional<Instance> out;
  std::string provenance;
  std::string detail;
  if (a.kind == "delta") {
    out = delta(f, *input);
  } else if (a.kind == "sigma") {
    SigmaResult r = sigma(f, *input, limits);
    detail = ", " + std::to_string(r.rounds) + " chase rounds";
    for (const auto& p : r.provenance) provenance += p.node + "\t" + p.element + "\t" + p.output + "\n";
    out = std::move(r.instance);
  } else {
    out = pi(f, *input, limits);
  }

  const MappingBlock& mb = *env.find_mapping(a.mapping);
  const std::string& schema_name = a.kind == "delta" ? mb.decl.source : mb.decl.target;
  const std::string name = a.name.empty() ? a.kind + "_" + a.mapping + "_" + a.instance : a.name;
  SourceFile result;
  result.declarations.emplace_back(SchemaBlock{to_decl(*out->schema()), {}});
  std::get<SchemaBlock>(result.declarations.back()).decl.name = schema_name;
  result.declarations.emplace_back(InstanceBlock{to_decl(*out, name, schema_name), {}, {}});
  write_file_atomic(a.output, print_source(result));
  if (!a.csv.empty()) export_csv(*out, a.csv);
  if (!a.provenance.empty()) write_file_atomic(a.provenance, provenance);

  ViolationReport report = check_constraints(*out);
  std::cout << a.kind << " " << a.mapping << " " << a.instance << ": " << out->total_elements() << " elements"
            << detail << "; wrote instance " << name << " to " << a.output << "\n";
  if (!report.empty()) {
    // Should not happen for a functorial mapping; report rather than hide it.
    std::cout << report.to_string();
    return kFailure;
  }
  return kOk;
}

int cmd_homs(const Global& g, const std::string& file, const std::string& from, const std::string& to,
             std::size_t cap, bool list) {
  Environment env = load(g, file);
  require_instance(env, from);
  require_instance(env, to);
  InstancePtr i = env.instance(from);
  InstancePtr j = env.instance(to);
  if (i->schema() != j->schema()) throw UsageError(from + " and " + to + " are on different schemas");
  if (list) {
    HomEnumeration e = enumerate_homs(i, j, cap);
    std::cout << from << " -> " << to << ": " << homomorphisms(e.homs.size()) << " ("
              << (e.completeness == HomCompleteness::Complete ? "Complete" : "Capped") << ")\n";
    for (std::size_t k = 0; k < e.homs.size(); ++k) std::cout << "[" << k << "]\n" << e.homs[k].to_string();
  } else {
    HomCount c = count_homs(i, j, cap);
    std::cout << from << " -> " << to << ": " << homomorphisms(c.count) << " ("
              << (c.completeness == HomCompleteness::Complete ? "Complete" : "Capped") << ")\n";
  }
  return kOk;
}

int cmd_export(const Global& g, const std::string& file, const std::string& name, const std::string& csv,
               const std::string& triples) {
  if (csv.empty() && triples.empty()) throw UsageError("export needs --csv DIR or --triples FILE");
  Environment env = load(g, file);
  require_instance(env, name);
  InstancePtr i = env.instance(name);
  if (!csv.empty()) export_csv(*i, csv);
  if (!triples.empty()) {
    auto t = export_triples(*i);
    write_file_atomic(triples, render_triples(t));
    std::cout << name << ": " << t.size() << " triples\n";
  }
  return kOk;
}

int cmd_import(const Global& g, const std::string& file, const std::string& schema_name, const std::string& csv,
               const std::string& name, const std::string& output) {
  Environment env = load(g, file);
  require_schema(env, schema_name);
  SchemaPtr s = env.schema(schema_name);
  Instance i = import_csv(s, csv);
  SourceFile result;
  result.declarations.emplace_back(InstanceBlock{to_decl(i, name, schema_name), {}, {}});
  write_file_atomic(output, print_source(result));
  std::cout << name << " on " << schema_name << ": " << i.total_elements() << " elements\n";
  return kOk;
}

int cmd_print(const std::string& file, const std::string& output) {
  std::string text = print_source(parse_source(read_file(file), file));
  if (output.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(output, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schemas as categories: constraint checking, path-equation proofs and data migration."};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--max-kb-steps", g.max_kb_steps, "Completion iteration budget")->check(CLI::PositiveNumber);
  app.add_option("--max-path-len", g.max_path_len, "Longest path enumerated (hom-sets, comma categories)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-chase-rounds", g.max_chase_rounds, "Chase round limit for sigma")->check(CLI::PositiveNumber);
  app.add_option("--max-elements", g.max_elements, "Element limit for sigma and pi")->check(CLI::PositiveNumber);
  app.add_option("--include", g.includes, "Additional declaration file (repeatable)")
      ->allow_extra_args(false)
      ->check(CLI::ExistingFile);

  std::string file;
  auto add_file = [&](CLI::App* sub) { sub->add_option("FILE", file, "Declaration file")->required(); };

  auto* validate = app.add_subcommand("validate", "Validate every declaration in FILE");
  add_file(validate);

  std::string instance;
  auto* check = app.add_subcommand("check", "Check an instance against its schema's equations");
  add_file(check);
  check->add_option("--instance", instance)->required();

  std::string schema, equation;
  auto* prove = app.add_subcommand("prove", "Decide a path equation: Proven, Refuted or Unknown");
  add_file(prove);
  prove->add_option("--schema", schema)->required();
  prove->add_option("EQUATION", equation, "e.g. \"admin.works = id:Dept\"")->required();

  std::string mapping;
  auto* map_check = app.add_subcommand("map-check", "Check that a mapping preserves the source equations");
  add_file(map_check);
  map_check->add_option("--mapping", mapping)->required();

  MigrateArgs ma;
  auto* migrate = app.add_subcommand("migrate", "Run delta, sigma or pi along a mapping");
  add_file(migrate);
  migrate->add_option("--kind", ma.kind)->required()->check(CLI::IsMember({"delta", "sigma", "pi"}));
  migrate->add_option("--mapping", ma.mapping)->required();
  migrate->add_option("--instance", ma.instance)->required();
  migrate->add_option("-o,--output", ma.output, "Output declaration file")->required();
  migrate->add_option("--csv", ma.csv, "Also write the result as CSV into this directory");
  migrate->add_option("--provenance", ma.provenance, "Write sigma's generator provenance (TSV)");
  migrate->add_option("--name", ma.name, "Name of the output instance");
  migrate->add_flag("--allow-undetermined", ma.allow_undetermined,
                    "Proceed when functoriality could not be decided within the budget");

  std::string from, to;
  std::size_t cap = 1000000;
  bool list = false;
  auto* homs = app.add_subcommand("homs", "Count homomorphisms between two instances");
  add_file(homs);
  homs->add_option("--from", from)->required();
  homs->add_option("--to", to)->required();
  homs->add_option("--cap", cap, "Stop after this many")->check(CLI::PositiveNumber);
  homs->add_flag("--list", list, "Print each homomorphism");

  std::string csv, triples;
  auto* exp = app.add_subcommand("export", "Write an instance as CSV tables or triples");
  add_file(exp);
  exp->add_option("--instance", instance)->required();
  exp->add_option("--csv", csv, "Directory for Node.csv files");
  exp->add_option("--triples", triples, "Tab-separated triples file");

  std::string output, name;
  auto* imp = app.add_subcommand("import", "Read CSV tables as an instance");
  add_file(imp);
  imp->add_option("--schema", schema)->required();
  imp->add_option("--csv", csv, "Directory of Node.csv files")->required();
  imp->add_option("--name", name, "Instance name")->required();
  imp->add_option("-o,--output", output)->required();

  auto* print = app.add_subcommand("print", "Print FILE in canonical form");
  add_file(print);
  print->add_option("-o,--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(g, file);
    if (*check) return cmd_check(g, file, instance);
    if (*prove) return cmd_prove(g, file, schema, equation);
    if (*map_check) return cmd_map_check(g, file, mapping);
    if (*migrate) return cmd_migrate(g, file, ma);
    if (*homs) return cmd_homs(g, file, from, to, cap, list);
    if (*exp) return cmd_export(g, file, instance, csv, triples);
    if (*imp) return cmd_import(g, file, schema, csv, name, output);
    if (*print) return cmd_print(file, output);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    print_error(e);
    return kFailure;
  }
  return kUsage;
}

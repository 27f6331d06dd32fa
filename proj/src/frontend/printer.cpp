#include <sstream>

#include "catmig/frontend/source.hpp"

namespace catmig::frontend {

namespace {

template <class T, class F>
void join(std::ostream& os, const std::vector<T>& items, std::string_view sep, F each) {
  bool first = true;
  for (const auto& x : items) {
    if (!first) os << sep;
    first = false;
    each(x);
  }
}

// Multi-item sections put one item per line.
template <class T, class F>
void block_section(std::ostream& os, std::string_view title, const std::vector<T>& items, F each) {
  if (items.empty()) return;
  os << "  " << title << ":\n";
  join(os, items, ",\n", [&](const T& x) {
    os << "    ";
    each(x);
  });
  os << ";\n";
}

void print(std::ostream& os, const SchemaBlock& b) {
  const SchemaDecl& d = b.decl;
  os << "schema " << d.name << " {\n";
  auto names = [&](std::string_view title, const std::vector<std::string>& v) {
    if (v.empty()) return;
    os << "  " << title << ": ";
    join(os, v, ", ", [&](const std::string& n) { os << n; });
    os << ";\n";
  };
  names("entities", d.entities);
  names("types", d.types);
  block_section(os, "edges", d.edges,
                [&](const EdgeDecl& e) { os << e.name << ": " << e.source << " -> " << e.target; });
  block_section(os, "equations", d.equations,
                [&](const EquationDecl& e) { os << e.lhs.to_string() << " = " << e.rhs.to_string(); });
  os << "}\n";
}

void print(std::ostream& os, const InstanceBlock& b) {
  const InstanceDecl& d = b.decl;
  os << "instance " << d.name << " on " << d.schema << " {\n";
  for (const auto& c : d.carriers) {
    os << "  " << c.node << " = {";
    join(os, c.ids, ", ", [&](const std::string& id) { os << id; });
    os << "};\n";
  }
  for (const auto& m : d.edges) {
    if (m.entries.empty()) continue;
    os << "  " << m.edge << " = {";
    join(os, m.entries, ", ", [&](const EdgeAssignment& a) {
      os << a.source << " -> ";
      if (a.value.kind == RawValue::Kind::Quoted) {
        os << render_literal(Literal{a.value.text});
      } else {
        os << a.value.text;
      }
    });
    os << "};\n";
  }
  os << "}\n";
}

void print(std::ostream& os, const MappingBlock& b) {
  const MappingDecl& d = b.decl;
  os << "mapping " << d.name << " : " << d.source << " -> " << d.target << " {\n";
  block_section(os, "nodes", d.nodes, [&](const NodeAssignment& a) { os << a.source << " -> " << a.target; });
  block_section(os, "edges", d.edges, [&](const EdgeImage& e) { os << e.edge << " -> " << e.path.to_string(); });
  os << "}\n";
}

}  // namespace

std::string print_declaration(const Declaration& decl) {
  std::ostringstream os;
  std::visit([&](const auto& b) { print(os, b); }, decl);
  return os.str();
}

std::string print_source(const SourceFile& file) {
  std::string out;
  for (std::size_t i = 0; i < file.declarations.size(); ++i) {
    if (i > 0) out += "\n";
    out += print_declaration(file.declarations[i]);
  }
  return out;
}

}  // namespace catmig::frontend

#include "catmig/frontend/csv.hpp"

#include <filesystem>

#include "catmig/error.hpp"
#include "catmig/frontend/io.hpp"
#include "catmig/frontend/source.hpp"

namespace catmig::frontend {

namespace fs = std::filesystem;

std::vector<CsvRow> parse_csv(std::string_view text, const std::string& path) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool row_open = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_open = false;
  };
  while (i < text.size()) {
    char c = text[i];
    row_open = true;
    if (c == '"' && field.empty()) {
      std::size_t start_line = line;
      ++i;
      for (;;) {
        if (i >= text.size()) {
          throw Error(ErrorCode::SyntaxError,
                      (path.empty() ? "" : path + ":") + std::to_string(start_line) + ": unterminated quoted field");
        }
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_row();
      i += 2;
      ++line;
    } else if (c == '\n') {
      end_row();
      ++i;
      ++line;
    } else {
      field += c;
      ++i;
    }
  }
  if (row_open) end_row();
  return rows;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string plain_field(const std::string& s) {
  return s.find_first_of(",\"\r\n") == std::string::npos ? s : quote(s);
}

std::string field_for(const Instance& inst, const Edge& e, const Value& v) {
  if (const auto* el = std::get_if<Element>(&v)) return plain_field(inst.carrier(e.target)[el->index]);
  const Literal& lit = std::get<Literal>(v);
  if (const auto* s = std::get_if<std::string>(&lit)) return quote(*s);
  return std::to_string(std::get<std::int64_t>(lit));
}

}  // namespace

std::map<std::string, std::string> render_csv(const Instance& instance) {
  const Schema& s = *instance.schema();
  const Graph& g = s.graph();
  std::map<std::string, std::string> files;
  for (const auto& node : s.entities()) {
    const auto& out = g.out_edges(node);
    std::string text = "id";
    for (std::size_t ei : out) text += "," + plain_field(g.edges()[ei].name);
    text += "\n";
    const auto& carrier = instance.carrier(node);
    for (std::size_t x = 0; x < carrier.size(); ++x) {
      text += plain_field(carrier[x]);
      for (std::size_t ei : out) text += "," + field_for(instance, g.edges()[ei], instance.edge_values(ei)[x]);
      text += "\n";
    }
    files.emplace(node + ".csv", std::move(text));
  }
  return files;
}

void export_csv(const Instance& instance, const std::string& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + directory + ": " + ec.message());
  for (const auto& [file, text] : render_csv(instance)) write_file_atomic((fs::path(directory) / file).string(), text);
}

Instance import_csv(const SchemaPtr& schema, const std::string& directory) {
  const Schema& s = *schema;
  const Graph& g = s.graph();
  InstanceDecl decl;
  decl.schema = s.name();
  std::vector<EdgeMapDecl> maps;
  for (const auto& e : g.edges()) maps.push_back({e.name, {}});

  for (const auto& node : s.entities()) {
    const std::string path = (fs::path(directory) / (node + ".csv")).string();
    if (!fs::exists(path)) throw Error(ErrorCode::HeaderMismatch, "missing file " + path + " for node " + node);
    auto rows = parse_csv(read_file(path), path);
    const auto& out = g.out_edges(node);
    CsvRow expected{"id"};
    for (std::size_t ei : out) expected.push_back(g.edges()[ei].name);
    if (rows.empty() || rows.front() != expected) {
      std::string want, got;
      for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
      if (!rows.empty()) {
        for (const auto& h : rows.front()) got += (got.empty() ? "" : ",") + h;
      }
      throw Error(ErrorCode::HeaderMismatch, path + ": expected header '" + want + "', found '" + got + "'");
    }
    CarrierDecl carrier{node, {}};
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const CsvRow& row = rows[r];
      if (row.size() != expected.size()) {
        throw Error(ErrorCode::HeaderMismatch, path + ": row " + std::to_string(r + 1) + " has " +
                                                   std::to_string(row.size()) + " fields, header has " +
                                                   std::to_string(expected.size()));
      }
      if (!is_bare_token(row[0])) {
        throw Error(ErrorCode::SyntaxError, path + ": row " + std::to_string(r + 1) + ": '" + row[0] +
                                                "' is not a valid element id");
      }
      carrier.ids.push_back(row[0]);
      for (std::size_t k = 0; k < out.size(); ++k) {
        const Edge& e = g.edges()[out[k]];
        const std::string& field = row[k + 1];
        RawValue v = s.is_type(e.target) && s.builtin(e.target) == BuiltinType::String ? RawValue::quoted(field)
                                                                                         : RawValue::bare(field);
        maps[out[k]].entries.push_back({row[0], std::move(v)});
      }
    }
    decl.carriers.push_back(std::move(carrier));
  }
  decl.edges = std::move(maps);
  return validate_instance(schema, decl);
}

}  // namespace catmig::frontend

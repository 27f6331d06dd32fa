#pragma once

#include <string>
#include <vector>

#include "catmig/instance.hpp"

namespace catmig::frontend {

struct Triple {
  std::string subject;
  std::string edge;
  Value object;  // an element of the edge's target carrier, or a literal
  std::string object_text;  // element id or rendered literal

  bool operator==(const Triple&) const = default;
};

/// One triple per (element, outgoing edge), by node, element and edge order.
std::vector<Triple> export_triples(const Instance& instance);

/// Tab-separated `subject<TAB>edge<TAB>object` lines; literals are quoted.
std::string render_triples(const std::vector<Triple>& triples);

}  // namespace catmig::frontend

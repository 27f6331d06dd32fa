#include "catmig/migrate.hpp"

#include <stdexcept>

#include "catmig/error.hpp"

namespace catmig {

void MigrationLimits::validate() const {
  if (max_chase_rounds == 0 || max_elements == 0 || comma_path_bound == 0) {
    throw std::invalid_argument("migration limits must be strictly positive");
  }
  prover.validate();
}

CheckedMapping certify(Mapping mapping, const Budget& budget, bool allow_undetermined) {
  FunctorialityVerdict verdict = check_functoriality(mapping, budget);
  if (verdict.kind == FunctorialityKind::NotFunctorial) {
    const EquationCheck& c = verdict.checks[*verdict.refuted];
    throw Error(ErrorCode::NonFunctorialMapping,
                "equation " + mapping.source()->equations()[c.equation].to_string() + " maps to " +
                    c.lhs_image.to_string() + " = " + c.rhs_image.to_string() +
                    ", which is refuted (normal forms " + c.outcome.lhs_normal.to_string() + " and " +
                    c.outcome.rhs_normal.to_string() + ")");
  }
  if (verdict.kind == FunctorialityKind::Undetermined && !allow_undetermined) {
    std::string which;
    for (std::size_t i : verdict.unknown) {
      if (!which.empty()) which += "; ";
      which += mapping.source()->equations()[i].to_string();
    }
    throw Error(ErrorCode::NonFunctorialMapping,
                "functoriality is undetermined within budget for: " + which +
                    " (pass --allow-undetermined to migrate anyway)");
  }
  return CheckedMapping(std::move(mapping), std::move(verdict));
}

Instance delta(const CheckedMapping& F, const Instance& J) {
  const Mapping& m = F.mapping();
  if (!same_schema(*J.schema(), *m.target())) {
    throw Error(ErrorCode::SchemaMismatch, "delta expects an instance on " + m.target()->name());
  }
  const Schema& c = *m.source();
  const Graph& g = c.graph();
  std::vector<std::vector<std::string>> carriers(g.nodes().size());
  for (const auto& node : c.entities()) carriers[c.node_index(node)] = J.carrier(m.node_image(node));
  std::vector<std::vector<Value>> values(g.edges().size());
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const Edge& e = g.edges()[ei];
    const Path& image = m.edge_image(e.name);
    const std::size_t n = carriers[c.node_index(e.source)].size();
    values[ei].reserve(n);
    for (std::size_t x = 0; x < n; ++x) values[ei].push_back(eval_path(J, image, x));
  }
  return Instance::from_parts(m.source(), std::move(carriers), std::move(values));
}

InstanceMorphism delta_hom(const CheckedMapping& F, const InstanceMorphism& h) {
  const Mapping& m = F.mapping();
  const Schema& c = *m.source();
  const Schema& d = *m.target();
  InstanceMorphism out;
  out.source = std::make_shared<Instance>(delta(F, *h.source));
  out.target = std::make_shared<Instance>(delta(F, *h.target));
  out.components.resize(c.graph().nodes().size());
  for (const auto& node : c.entities()) {
    out.components[c.node_index(node)] = h.components.at(d.node_index(m.node_image(node)));
  }
  return out;
}

AdjointnessReport adjointness_check_sigma(const CheckedMapping& F, const InstancePtr& I,
                                          const InstancePtr& J, const MigrationLimits& limits,
                                          std::size_t cap) {
  auto pushed = std::make_shared<Instance>(sigma(F, *I, limits).instance);
  auto pulled = std::make_shared<Instance>(delta(F, *J));
  HomCount d = count_homs(pushed, J, cap);
  HomCount c = count_homs(I, pulled, cap);
  return {d.count, c.count,
          d.completeness == HomCompleteness::Complete && c.completeness == HomCompleteness::Complete};
}

AdjointnessReport adjointness_check_pi(const CheckedMapping& F, const InstancePtr& I,
                                       const InstancePtr& J, const MigrationLimits& limits,
                                       std::size_t cap) {
  auto pushed = std::make_shared<Instance>(pi(F, *I, limits));
  auto pulled = std::make_shared<Instance>(delta(F, *J));
  HomCount d = count_homs(J, pushed, cap);
  HomCount c = count_homs(pulled, I, cap);
  return {d.count, c.count,
          d.completeness == HomCompleteness::Complete && c.completeness == HomCompleteness::Complete};
}

}  // namespace catmig

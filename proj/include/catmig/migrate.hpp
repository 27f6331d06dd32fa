#pragma once

#include <string>
#include <vector>

#include "catmig/instance.hpp"
#include "catmig/mapping.hpp"

namespace catmig {

struct MigrationLimits {
  std::size_t max_chase_rounds = 1000;
  std::size_t max_elements = 100000;
  std::size_t comma_path_bound = 12;
  Budget prover;

  /// Throws std::invalid_argument on a zero field.
  void validate() const;
};

/// A mapping whose functoriality has been checked. Migrations only accept
/// this type, so an unchecked mapping cannot move data.
class CheckedMapping {
 public:
  const Mapping& mapping() const noexcept { return mapping_; }
  const FunctorialityVerdict& verdict() const noexcept { return verdict_; }

 private:
  friend CheckedMapping certify(Mapping, const Budget&, bool);
  CheckedMapping(Mapping m, FunctorialityVerdict v) : mapping_(std::move(m)), verdict_(std::move(v)) {}

  Mapping mapping_;
  FunctorialityVerdict verdict_;
};

/// Runs check_functoriality. Throws NonFunctorialMapping for NotFunctorial,
/// and for Undetermined unless `allow_undetermined` is set.
CheckedMapping certify(Mapping mapping, const Budget& budget = {}, bool allow_undetermined = false);

/// Pullback along F: the carrier at c is J's carrier at F(c) (same ids, same
/// order) and edge e acts as F(e) does in J.
Instance delta(const CheckedMapping& F, const Instance& J);
InstanceMorphism delta_hom(const CheckedMapping& F, const InstanceMorphism& h);

struct ProvenanceEntry {
  std::string node;     // source schema node
  std::string element;  // element id in the input
  std::string output;   // element id in the result

  bool operator==(const ProvenanceEntry&) const = default;
};

struct SigmaResult {
  Instance instance;
  std::vector<ProvenanceEntry> provenance;
  std::size_t rounds = 0;
};

/// Left pushforward along F, computed by a chase with labeled nulls named
/// !0, !1, ... in creation order. Each class of the final quotient is named
/// by its least input id, else by its least null. Throws SigmaDivergence,
/// LiteralCollision, or SigmaUnconstrainedAttribute.
SigmaResult sigma(const CheckedMapping& F, const Instance& I, const MigrationLimits& limits = {});

/// Right pushforward along F: elements at d are compatible families over the
/// comma category d / F, enumerated within limits.comma_path_bound. Throws
/// PiInfinite, PiUnconstrainedAttribute, ElementLimitExceeded, or
/// NonConvergentTheory.
Instance pi(const CheckedMapping& F, const Instance& I, const MigrationLimits& limits = {});

struct AdjointnessReport {
  std::size_t target_side = 0;  // homs computed on the target schema
  std::size_t source_side = 0;  // homs computed on the source schema
  bool complete = true;         // neither count hit the cap
  bool equal() const noexcept { return complete && target_side == source_side; }
};

/// |Hom(sigma_F I, J)| against |Hom(I, delta_F J)|.
AdjointnessReport adjointness_check_sigma(const CheckedMapping& F, const InstancePtr& I,
                                          const InstancePtr& J, const MigrationLimits& limits = {},
                                          std::size_t cap = 1000000);

/// |Hom(J, pi_F I)| against |Hom(delta_F J, I)|.
AdjointnessReport adjointness_check_pi(const CheckedMapping& F, const InstancePtr& I,
                                       const InstancePtr& J, const MigrationLimits& limits = {},
                                       std::size_t cap = 1000000);

}  // namespace catmig

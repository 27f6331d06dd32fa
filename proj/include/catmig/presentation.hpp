#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "catmig/path.hpp"

namespace catmig {

/// Resource limits for completion and proof search. All fields must be
/// strictly positive.
struct Budget {
  std::size_t max_completion_iterations = 2048;
  std::size_t max_rewrite_steps = 4096;
  std::size_t max_path_length = 12;

  /// Throws std::invalid_argument on a zero field.
  void validate() const;
};

enum class StepSource { Axiom, Rule };

/// One replacement of a factor of `before`. For an Axiom step `index` is the
/// equation index; for a Rule step it is the rule id. A forward step replaces
/// an occurrence of the left side with the right side.
struct RewriteStep {
  StepSource source = StepSource::Axiom;
  std::size_t index = 0;
  bool forward = true;
  std::size_t position = 0;
  Path before;
  Path after;

  bool operator==(const RewriteStep&) const = default;
};

using ProofTrace = std::vector<RewriteStep>;

/// The same chain read backwards.
ProofTrace reversed(const ProofTrace& trace);

std::string to_string(const RewriteStep& step);

struct RewriteRule {
  Path lhs;
  Path rhs;
  std::size_t id = 0;
  /// Chain from lhs to rhs using axioms and rules with a smaller id.
  ProofTrace derivation;
};

/// Orients an equation by the length-lex order: the greater side becomes the
/// left-hand side. Throws Unorientable when both sides are identical.
RewriteRule orient(const PathEquation& eq);

enum class CompletionStatus { Convergent, Partial };

std::string_view to_string(CompletionStatus status);

/// An equational theory over a graph together with the rewrite system
/// obtained by completing it. A freshly constructed theory has no rules and
/// is Partial until passed through complete().
class Theory {
 public:
  Theory() = default;
  /// Throws if an equation is not well typed in the graph.
  Theory(Graph graph, std::vector<PathEquation> equations);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<PathEquation>& equations() const noexcept { return equations_; }
  CompletionStatus status() const noexcept { return status_; }
  bool is_convergent() const noexcept { return status_ == CompletionStatus::Convergent; }

  /// Every rule ever created, indexed by id. Derivations may refer to rules
  /// that were later dropped as redundant.
  const std::vector<RewriteRule>& all_rules() const noexcept { return rules_; }
  /// Ids of the rules used for rewriting, ascending.
  const std::vector<std::size_t>& active_rules() const noexcept { return active_; }
  std::size_t rule_count() const noexcept { return active_.size(); }
  const RewriteRule& rule(std::size_t id) const { return rules_.at(id); }

  /// Degenerate equations dropped during completion.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Stable text rendering of status and active rules.
  std::string describe() const;

 private:
  friend Theory complete(const Theory& theory, const Budget& budget);

  Graph graph_;
  std::vector<PathEquation> equations_;
  std::vector<RewriteRule> rules_;
  std::vector<std::size_t> active_;
  std::vector<std::string> warnings_;
  CompletionStatus status_ = CompletionStatus::Partial;
};

/// Knuth-Bendix completion on typed words. Critical pairs are processed in
/// rule creation order; each seeded equation or overlap counts as one
/// iteration against the budget. Running out of budget yields Partial with
/// the rules found so far. Redundant rules are dropped once convergent.
Theory complete(const Theory& theory, const Budget& budget = {});

struct NormalForm {
  Path path;
  ProofTrace trace;
};

/// Rewrites the leftmost redex with the lowest rule id until irreducible.
/// Throws BudgetExceeded after `max_steps` steps.
NormalForm normalize_traced(const Path& p, const Theory& theory, std::size_t max_steps);
Path normalize(const Path& p, const Theory& theory, const Budget& budget = {});

/// True if no active rule's left-hand side occurs in `p`.
bool is_normal(const Path& p, const Theory& theory);

enum class Verdict { Proven, Refuted, Unknown };

std::string_view to_string(Verdict verdict);

struct ProofOutcome {
  Verdict verdict = Verdict::Unknown;
  /// For Proven: a chain from the first path to the second.
  ProofTrace trace;
  Path lhs_normal;
  Path rhs_normal;
};

/// Decides p = q when the theory is convergent. Otherwise distinct normal
/// forms trigger a breadth-first search applying axioms in both directions;
/// an exhausted search answers Unknown. Throws EndpointMismatch if p and q
/// do not share endpoints.
ProofOutcome prove_equal(const Theory& theory, const Path& p, const Path& q,
                         const Budget& budget = {});

enum class Completeness { Complete, Truncated };

std::string_view to_string(Completeness completeness);

struct PathEnumeration {
  std::vector<Path> paths;
  Completeness completeness = Completeness::Complete;
};

/// Normal-form paths from a to b of length at most budget.max_path_length,
/// shortest first. Complete when no normal form of exactly that length leaves
/// a at all, which means every longer word is reducible.
PathEnumeration enumerate_paths(const Theory& theory, const std::string& a, const std::string& b,
                                const Budget& budget = {});

/// Replays a chain step by step against the theory's equations and rules.
/// Rule steps must use ids below `rule_limit`. On failure, `why` (if given)
/// receives a description of the first bad step.
bool verify_trace(const Theory& theory, const Path& from, const Path& to, const ProofTrace& trace,
                  std::size_t rule_limit, std::string* why = nullptr);

/// Checks every rule's derivation, in id order.
bool verify_theory(const Theory& theory, std::string* why = nullptr);

}  // namespace catmig

#include "catmig/presentation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "catmig/error.hpp"

namespace catmig {

namespace {

using Word = std::vector<std::string>;

bool matches_at(const Word& word, std::size_t pos, const Word& pattern) {
  if (pos + pattern.size() > word.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), word.begin() + static_cast<std::ptrdiff_t>(pos));
}

Path splice(const Path& p, std::size_t pos, std::size_t len, const Word& replacement) {
  Word out(p.edges().begin(), p.edges().begin() + static_cast<std::ptrdiff_t>(pos));
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), p.edges().begin() + static_cast<std::ptrdiff_t>(pos + len), p.edges().end());
  return Path(p.start(), std::move(out));
}

// Node reached after the first `pos` edges of a well-typed path.
std::string node_at(const Graph& graph, const Path& p, std::size_t pos) {
  if (pos == 0) return p.start();
  return graph.edge(p.edges()[pos - 1]).target;
}

struct Rewriter {
  const std::vector<RewriteRule>& rules;
  const std::vector<std::size_t>& active;

  // Leftmost position, then lowest rule id.
  bool step(const Path& p, RewriteStep& out) const {
    const Word& w = p.edges();
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      for (std::size_t id : active) {
        const RewriteRule& r = rules[id];
        if (matches_at(w, pos, r.lhs.edges())) {
          out.source = StepSource::Rule;
          out.index = id;
          out.forward = true;
          out.position = pos;
          out.before = p;
          out.after = splice(p, pos, r.lhs.length(), r.rhs.edges());
          return true;
        }
      }
    }
    return false;
  }

  NormalForm run(const Path& p, std::size_t max_steps) const {
    NormalForm nf{p, {}};
    RewriteStep s;
    while (step(nf.path, s)) {
      if (nf.trace.size() >= max_steps) {
        throw Error(ErrorCode::BudgetExceeded, "normalizing " + p.to_string() + " took more than " +
                                                   std::to_string(max_steps) + " steps");
      }
      nf.path = s.after;
      nf.trace.push_back(std::move(s));
    }
    return nf;
  }
};

ProofTrace concat(ProofTrace a, const ProofTrace& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class Completion {
 public:
  Completion(Theory& theory, std::vector<RewriteRule>& rules, std::vector<std::size_t>& active,
             const Budget& budget)
      : theory_(theory), rules_(rules), active_(active), budget_(budget) {}

  // Returns false if the budget ran out.
  bool run() {
    const auto& eqs = theory_.equations();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (eqs[i].lhs == eqs[i].rhs) {
        warnings.push_back("dropped degenerate equation " + eqs[i].to_string());
        continue;
      }
      if (!tick()) return false;
      RewriteStep axiom{StepSource::Axiom, i, true, 0, eqs[i].lhs, eqs[i].rhs};
      if (!add_pair(eqs[i].lhs, eqs[i].rhs, {axiom})) return false;
    }
    for (std::size_t k = 0; k < rules_.size(); ++k) {
      for (std::size_t j = 0; j <= k; ++j) {
        if (!critical_pairs(j, k)) return false;
        if (j != k && !critical_pairs(k, j)) return false;
      }
    }
    return true;
  }

  std::vector<std::string> warnings;

 private:
  bool tick() { return ++iterations_ <= budget_.max_completion_iterations; }

  // Adds a rule joining s and t unless they already have a common normal
  // form. `chain` runs from s to t.
  bool add_pair(const Path& s, const Path& t, const ProofTrace& chain) {
    Rewriter rw{rules_, active_};
    NormalForm ns, nt;
    try {
      ns = rw.run(s, budget_.max_rewrite_steps);
      nt = rw.run(t, budget_.max_rewrite_steps);
    } catch (const Error&) {
      return false;
    }
    if (ns.path == nt.path) return true;
    RewriteRule rule;
    rule.id = rules_.size();
    if (path_less(nt.path, ns.path)) {
      rule.lhs = ns.path;
      rule.rhs = nt.path;
      rule.derivation = concat(concat(reversed(ns.trace), chain), nt.trace);
    } else {
      rule.lhs = nt.path;
      rule.rhs = ns.path;
      rule.derivation = concat(concat(reversed(nt.trace), reversed(chain)), ns.trace);
    }
    active_.push_back(rule.id);
    rules_.push_back(std::move(rule));
    return true;
  }

  // Overlaps where rule b's lhs sits inside or hangs off the end of rule a's.
  bool critical_pairs(std::size_t a, std::size_t b) {
    // Copies: add_pair may reallocate rules_.
    const Path l1 = rules_[a].lhs, r1 = rules_[a].rhs;
    const Path l2 = rules_[b].lhs, r2 = rules_[b].rhs;
    const Word& w1 = l1.edges();
    const Word& w2 = l2.edges();

    if (a != b && w2.size() <= w1.size()) {
      for (std::size_t pos = 0; pos + w2.size() <= w1.size(); ++pos) {
        if (!matches_at(w1, pos, w2)) continue;
        if (!tick()) return false;
        Path x = r1;
        Path y = splice(l1, pos, w2.size(), r2.edges());
        ProofTrace chain{{StepSource::Rule, a, false, 0, x, l1},
                         {StepSource::Rule, b, true, pos, l1, y}};
        if (!add_pair(x, y, chain)) return false;
      }
    }
    for (std::size_t v = 1; v < w1.size() && v < w2.size(); ++v) {
      if (!std::equal(w1.end() - static_cast<std::ptrdiff_t>(v), w1.end(), w2.begin())) continue;
      if (!tick()) return false;
      Word joined = w1;
      joined.insert(joined.end(), w2.begin() + static_cast<std::ptrdiff_t>(v), w2.end());
      Path w(l1.start(), joined);
      Path x = splice(w, 0, w1.size(), r1.edges());
      Path y = splice(w, w1.size() - v, w2.size(), r2.edges());
      ProofTrace chain{{StepSource::Rule, a, false, 0, x, w},
                       {StepSource::Rule, b, true, w1.size() - v, w, y}};
      if (!add_pair(x, y, chain)) return false;
    }
    return true;
  }

  Theory& theory_;
  std::vector<RewriteRule>& rules_;
  std::vector<std::size_t>& active_;
  const Budget& budget_;
  std::size_t iterations_ = 0;
};

}  // namespace

void Budget::validate() const {
  if (max_completion_iterations == 0 || max_rewrite_steps == 0 || max_path_length == 0) {
    throw std::invalid_argument("budget fields must be strictly positive");
  }
}

ProofTrace reversed(const ProofTrace& trace) {
  ProofTrace out;
  out.reserve(trace.size());
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    RewriteStep s = *it;
    std::swap(s.before, s.after);
    s.forward = !s.forward;
    out.push_back(std::move(s));
  }
  return out;
}

std::string to_string(const RewriteStep& step) {
  std::string out = step.before.to_string() + " -> " + step.after.to_string() + "  [";
  out += step.source == StepSource::Axiom ? "eq " : "rule ";
  out += std::to_string(step.index);
  out += step.forward ? "" : " reversed";
  out += " @" + std::to_string(step.position) + "]";
  return out;
}

RewriteRule orient(const PathEquation& eq) {
  if (eq.lhs == eq.rhs) {
    throw Error(ErrorCode::Unorientable, "both sides of " + eq.to_string() + " are identical");
  }
  RewriteRule rule;
  if (path_less(eq.rhs, eq.lhs)) {
    rule.lhs = eq.lhs;
    rule.rhs = eq.rhs;
  } else {
    rule.lhs = eq.rhs;
    rule.rhs = eq.lhs;
  }
  return rule;
}

std::string_view to_string(CompletionStatus status) {
  return status == CompletionStatus::Convergent ? "Convergent" : "Partial";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Proven: return "Proven";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(Completeness completeness) {
  return completeness == Completeness::Complete ? "Complete" : "Truncated";
}

Theory::Theory(Graph graph, std::vector<PathEquation> equations)
    : graph_(std::move(graph)), equations_(std::move(equations)) {
  for (const auto& eq : equations_) check_equation(graph_, eq);
}

std::string Theory::describe() const {
  std::string out = "status " + std::string(to_string(status_)) + "\n";
  out += "rules " + std::to_string(active_.size()) + "\n";
  for (std::size_t id : active_) {
    const RewriteRule& r = rules_[id];
    out += "  [" + std::to_string(id) + "] " + r.lhs.to_string() + " => " + r.rhs.to_string() +
           "  (derivation " + std::to_string(r.derivation.size()) + " steps)\n";
  }
  return out;
}

Theory complete(const Theory& theory, const Budget& budget) {
  budget.validate();
  Theory out(theory);
  out.rules_.clear();
  out.active_.clear();
  out.warnings_.clear();

  Completion completion(out, out.rules_, out.active_, budget);
  bool converged = completion.run();
  out.warnings_ = std::move(completion.warnings);
  out.status_ = converged ? CompletionStatus::Convergent : CompletionStatus::Partial;

  if (converged) {
    // Drop rules whose lhs is reducible by another surviving rule; this keeps
    // normal forms and the equational theory unchanged.
    std::vector<std::size_t> kept = out.active_;
    for (std::size_t id : out.active_) {
      const Word& lhs = out.rules_[id].lhs.edges();
      bool redundant = false;
      for (std::size_t other : kept) {
        if (other == id) continue;
        const Word& pat = out.rules_[other].lhs.edges();
        for (std::size_t pos = 0; pos + pat.size() <= lhs.size() && !redundant; ++pos) {
          redundant = matches_at(lhs, pos, pat);
        }
        if (redundant) break;
      }
      if (redundant) kept.erase(std::find(kept.begin(), kept.end(), id));
    }
    out.active_ = std::move(kept);
  }
  return out;
}

NormalForm normalize_traced(const Path& p, const Theory& theory, std::size_t max_steps) {
  theory.graph().check(p);
  return Rewriter{theory.all_rules(), theory.active_rules()}.run(p, max_steps);
}

Path normalize(const Path& p, const Theory& theory, const Budget& budget) {
  return normalize_traced(p, theory, budget.max_rewrite_steps).path;
}

bool is_normal(const Path& p, const Theory& theory) {
  RewriteStep unused;
  return !Rewriter{theory.all_rules(), theory.active_rules()}.step(p, unused);
}

namespace {

// Breadth-first search over words reachable from `from` by applying axioms
// in either direction, bounded in word length and number of visited words.
std::optional<ProofTrace> search_equal(const Theory& theory, const Path& from, const Path& to,
                                       const Budget& budget) {
  const Graph& graph = theory.graph();
  const auto& eqs = theory.equations();
  const std::size_t max_len =
      std::max({budget.max_path_length, from.length(), to.length()});

  struct Visit {
    Path word;
    std::size_t parent;
    RewriteStep step;
  };
  std::vector<Visit> visits{{from, 0, {}}};
  std::map<Word, std::size_t> seen{{from.edges(), 0}};
  std::deque<std::size_t> queue{0};

  auto rebuild = [&](std::size_t idx) {
    ProofTrace trace;
    while (idx != 0) {
      trace.push_back(visits[idx].step);
      idx = visits[idx].parent;
    }
    std::reverse(trace.begin(), trace.end());
    return trace;
  };

  if (from == to) return ProofTrace{};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    const Path word = visits[cur].word;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      for (bool forward : {true, false}) {
        const Path& pattern = forward ? eqs[i].lhs : eqs[i].rhs;
        const Path& replacement = forward ? eqs[i].rhs : eqs[i].lhs;
        if (pattern == replacement) continue;
        for (std::size_t pos = 0; pos + pattern.length() <= word.length(); ++pos) {
          if (pattern.is_identity()) {
            if (node_at(graph, word, pos) != pattern.start()) continue;
          } else if (!matches_at(word.edges(), pos, pattern.edges())) {
            continue;
          }
          Path next = splice(word, pos, pattern.length(), replacement.edges());
          if (next.length() > max_len || seen.count(next.edges())) continue;
          if (visits.size() >= budget.max_rewrite_steps) return std::nullopt;
          seen.emplace(next.edges(), visits.size());
          visits.push_back({next, cur, {StepSource::Axiom, i, forward, pos, word, next}});
          if (next == to) return rebuild(visits.size() - 1);
          queue.push_back(visits.size() - 1);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

ProofOutcome prove_equal(const Theory& theory, const Path& p, const Path& q, const Budget& budget) {
  budget.validate();
  const Graph& graph = theory.graph();
  graph.check(p);
  graph.check(q);
  if (p.start() != q.start() || graph.end_of(p) != graph.end_of(q)) {
    throw Error(ErrorCode::EndpointMismatch,
                p.to_string() + " runs " + p.start() + "->" + graph.end_of(p) + " but " +
                    q.to_string() + " runs " + q.start() + "->" + graph.end_of(q));
  }

  ProofOutcome outcome;
  NormalForm np, nq;
  try {
    np = normalize_traced(p, theory, budget.max_rewrite_steps);
    nq = normalize_traced(q, theory, budget.max_rewrite_steps);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    outcome.verdict = Verdict::Unknown;
    return outcome;
  }
  outcome.lhs_normal = np.path;
  outcome.rhs_normal = nq.path;

  if (np.path == nq.path) {
    outcome.verdict = Verdict::Proven;
    outcome.trace = concat(np.trace, reversed(nq.trace));
    return outcome;
  }
  if (theory.is_convergent()) {
    outcome.verdict = Verdict::Refuted;
    return outcome;
  }
  if (auto middle = search_equal(theory, np.path, nq.path, budget)) {
    outcome.verdict = Verdict::Proven;
    outcome.trace = concat(concat(np.trace, *middle), reversed(nq.trace));
    return outcome;
  }
  outcome.verdict = Verdict::Unknown;
  return outcome;
}

PathEnumeration enumerate_paths(const Theory& theory, const std::string& a, const std::string& b,
                                const Budget& budget) {
  budget.validate();
  const Graph& graph = theory.graph();
  graph.node(a);
  graph.node(b);
  const auto& rules = theory.all_rules();
  const auto& active = theory.active_rules();

  auto suffix_reducible = [&](const Word& w) {
    for (std::size_t id : active) {
      const Word& lhs = rules[id].lhs.edges();
      if (lhs.size() <= w.size() && matches_at(w, w.size() - lhs.size(), lhs)) return true;
    }
    return false;
  };

  PathEnumeration result;
  std::vector<std::pair<Path, std::string>> level{{Path::identity(a), a}};
  if (a == b) result.paths.push_back(Path::identity(a));

  for (std::size_t len = 1; len <= budget.max_path_length && !level.empty(); ++len) {
    std::vector<std::pair<Path, std::string>> next;
    for (const auto& [path, end] : level) {
      for (std::size_t ei : graph.out_edges(end)) {
        const Edge& e = graph.edges()[ei];
        Word w = path.edges();
        w.push_back(e.name);
        if (suffix_reducible(w)) continue;
        Path extended(a, std::move(w));
        if (e.target == b) result.paths.push_back(extended);
        next.emplace_back(std::move(extended), e.target);
      }
    }
    level = std::move(next);
  }
  result.completeness = level.empty() ? Completeness::Complete : Completeness::Truncated;
  return result;
}

bool verify_trace(const Theory& theory, const Path& from, const Path& to, const ProofTrace& trace,
                  std::size_t rule_limit, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const Graph& graph = theory.graph();
  if (!graph.is_well_typed(from)) return fail("start path " + from.to_string() + " is ill typed");
  Path cur = from;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const RewriteStep& s = trace[i];
    const std::string where = "step " + std::to_string(i) + ": ";
    if (!(s.before == cur)) return fail(where + "chain broken at " + cur.to_string());
    Path lhs, rhs;
    if (s.source == StepSource::Axiom) {
      if (s.index >= theory.equations().size()) return fail(where + "no such equation");
      lhs = theory.equations()[s.index].lhs;
      rhs = theory.equations()[s.index].rhs;
    } else {
      if (s.index >= rule_limit || s.index >= theory.all_rules().size()) {
        return fail(where + "rule " + std::to_string(s.index) + " not available");
      }
      lhs = theory.all_rules()[s.index].lhs;
      rhs = theory.all_rules()[s.index].rhs;
    }
    if (!s.forward) std::swap(lhs, rhs);
    if (s.position + lhs.length() > cur.length()) return fail(where + "position out of range");
    if (node_at(graph, cur, s.position) != lhs.start()) return fail(where + "node mismatch");
    if (!matches_at(cur.edges(), s.position, lhs.edges())) {
      return fail(where + lhs.to_string() + " does not occur in " + cur.to_string());
    }
    Path expected = splice(cur, s.position, lhs.length(), rhs.edges());
    if (!(expected == s.after)) return fail(where + "wrong result " + s.after.to_string());
    cur = expected;
  }
  if (!(cur == to)) return fail("chain ends at " + cur.to_string() + ", not " + to.to_string());
  return true;
}

bool verify_theory(const Theory& theory, std::string* why) {
  for (const RewriteRule& r : theory.all_rules()) {
    if (!path_less(r.rhs, r.lhs)) {
      if (why) *why = "rule " + std::to_string(r.id) + " is not decreasing";
      return false;
    }
    std::string inner;
    if (!verify_trace(theory, r.lhs, r.rhs, r.derivation, r.id, &inner)) {
      if (why) *why = "rule " + std::to_string(r.id) + ": " + inner;
      return false;
    }
  }
  return true;
}

}  // namespace catmig

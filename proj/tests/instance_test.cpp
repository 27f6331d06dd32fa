#include "catmig/instance.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "catmig/error.hpp"
#include "support/fixtures.hpp"

namespace catmig {
namespace {

using testing::share;

InstancePtr verbatim() { return share(validate_instance(testing::emp_dept(), testing::paper_verbatim_decl())); }
InstancePtr corrected() { return share(validate_instance(testing::emp_dept(), testing::paper_corrected_decl())); }

std::string show(const Value& v) {
  if (const auto* lit = std::get_if<Literal>(&v)) return render_literal(*lit);
  return std::to_string(std::get<Element>(v).index);
}

SchemaPtr single_node(std::vector<std::pair<std::string, std::string>> loops = {}) {
  SchemaDecl d;
  d.name = "One";
  d.entities = {"N"};
  d.types = {"String"};
  for (auto& [e, t] : loops) d.edges.push_back({e, "N", t});
  return validate_schema(d);
}

InstancePtr discrete(const SchemaPtr& s, std::size_t n, const std::string& prefix) {
  InstanceDecl d{"I", s->name(), {{"N", {}}}, {}};
  for (std::size_t i = 0; i < n; ++i) d.carriers[0].ids.push_back(prefix + std::to_string(i));
  return share(validate_instance(s, d));
}

TEST(InstanceTest, PaperTablesValidate) {
  auto i = verbatim();
  EXPECT_EQ(i->carrier("Emp"), (std::vector<std::string>{"101", "102", "103"}));
  EXPECT_EQ(i->carrier("Dept"), (std::vector<std::string>{"q10", "x02"}));
  EXPECT_EQ(i->total_elements(), 5u);
}

TEST(InstanceTest, EmptyFunctor) {
  InstanceDecl d{"E", "EmpDept", {}, {}};
  auto i = validate_instance(testing::emp_dept(), d);
  EXPECT_EQ(i.total_elements(), 0u);
  EXPECT_TRUE(check_constraints(i).empty());
}

TEST(InstanceTest, MissingEdgeValue) {
  InstanceDecl d = testing::paper_corrected_decl();
  auto& works = d.edges[1].entries;
  works.erase(works.begin() + 2);
  try {
    validate_instance(testing::emp_dept(), d);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has(ErrorCode::MissingEdgeValue));
    EXPECT_NE(std::string(e.what()).find("103"), std::string::npos);
  }
}

TEST(InstanceTest, ReportsAllStructuralProblems) {
  InstanceDecl d = testing::paper_corrected_decl();
  d.carriers[0].ids.push_back("101");                     // duplicate
  d.edges[0].entries[0].value = RawValue::bare("999");    // unknown target
  d.edges[3].entries[0].value = RawValue::bare("Al");     // bare token for a String
  try {
    validate_instance(testing::emp_dept(), d);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has(ErrorCode::DuplicateElementId));
    EXPECT_TRUE(e.has(ErrorCode::UnknownElement));
    EXPECT_TRUE(e.has(ErrorCode::LiteralTypeMismatch));
  }
}

TEST(InstanceTest, IntLiteralsParse) {
  SchemaDecl sd{"P", {"Person"}, {"Int"}, {{"age", "Person", "Int"}}, {}};
  auto s = validate_schema(sd);
  InstanceDecl d{"I", "P", {{"Person", {"p"}}}, {{"age", {{"p", RawValue::bare("-42")}}}}};
  auto i = validate_instance(s, d);
  EXPECT_EQ(std::get<Literal>(i.edge_values(0)[0]), Literal{std::int64_t{-42}});
  d.edges[0].entries[0].value = RawValue::quoted("42");
  EXPECT_THROW(validate_instance(s, d), ValidationError);
}

TEST(InstanceTest, EvalPath) {
  auto i = verbatim();
  const Graph& g = i->schema()->graph();
  EXPECT_EQ(show(eval_path(*i, Path("Emp", {"mgr", "name"}), "101")), "\"Carl\"");
  Value self = eval_path(*i, Path::identity("Emp"), "101");
  EXPECT_EQ(i->carrier("Emp")[std::get<Element>(self).index], "101");
  // Verbatim tables: works(admin(q10)) = works(102) = x02.
  Value v = eval_path(*i, Path("Dept", {"admin", "works"}), "q10");
  EXPECT_EQ(i->carrier("Dept")[std::get<Element>(v).index], "x02");
  Value c = eval_path(*corrected(), Path("Dept", {"admin", "works"}), "q10");
  EXPECT_EQ(i->carrier("Dept")[std::get<Element>(c).index], "q10");
  (void)g;
}

TEST(InstanceTest, VerbatimTablesViolateTheConstraint) {
  auto report = check_constraints(*verbatim());
  ASSERT_EQ(report.size(), 2u) << report.to_string();
  EXPECT_EQ(report.violations[0].element, "q10");
  EXPECT_EQ(report.violations[0].lhs, "x02");
  EXPECT_EQ(report.violations[0].rhs, "q10");
  EXPECT_EQ(report.violations[1].element, "x02");
  EXPECT_EQ(report.violations[1].lhs, "q10");
  EXPECT_EQ(report.violations[1].rhs, "x02");
}

TEST(InstanceTest, CorrectedTablesSatisfyTheConstraint) { EXPECT_TRUE(check_constraints(*corrected()).empty()); }

TEST(InstanceTest, NoEquationsNoViolations) {
  std::mt19937 rng(7);
  testing::RandomSchemaOptions o;
  o.loops = false;
  o.equations = false;
  for (int k = 0; k < 30; ++k) {
    auto s = testing::random_schema(rng, o);
    auto i = testing::random_instance(s, rng, 3, 1);
    if (i) EXPECT_TRUE(check_constraints(*i).empty());
  }
}

TEST(InstanceTest, IdentityHomIsValid) {
  auto i = corrected();
  EXPECT_TRUE(check_hom(identity_hom(i)).empty());
}

TEST(InstanceTest, HomMustFixLiterals) {
  auto i = corrected();
  InstanceDecl other = testing::paper_corrected_decl();
  other.edges[3].entries[0].value = RawValue::quoted("Alice");
  auto j = share(validate_instance(testing::emp_dept(), other));
  InstanceMorphism h{i, j, identity_hom(i).components};
  auto report = check_hom(h);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report.violations[0].element, "101");
  EXPECT_NE(report.violations[0].constraint_text.find("name"), std::string::npos);
}

TEST(InstanceTest, CollapsingTwoElements) {
  // Two elements with a self-map f and attribute a; the constant map onto a
  // single fixed point is a hom exactly when both attributes agree.
  auto s = single_node({{"f", "N"}, {"a", "String"}});
  auto build = [&](const std::string& a0, const std::string& a1) {
    InstanceDecl d{"I", "One", {{"N", {"x", "y"}}},
                   {{"f", {{"x", RawValue::bare("y")}, {"y", RawValue::bare("x")}}},
                    {"a", {{"x", RawValue::quoted(a0)}, {"y", RawValue::quoted(a1)}}}}};
    return share(validate_instance(s, d));
  };
  InstanceDecl pt{"P", "One", {{"N", {"z"}}}, {{"f", {{"z", RawValue::bare("z")}}}, {"a", {{"z", RawValue::quoted("k")}}}}};
  auto target = share(validate_instance(s, pt));
  for (auto [a0, a1, ok] : {std::tuple{"k", "k", true}, std::tuple{"k", "m", false}}) {
    auto src = build(a0, a1);
    InstanceMorphism h{src, target, {{0, 0}, {}}};
    EXPECT_EQ(check_hom(h).empty(), ok);
    EXPECT_EQ(*testing::brute_force_hom_count(src, target), ok ? 1u : 0u);
    EXPECT_EQ(count_homs(src, target, 100).count, ok ? 1u : 0u);
  }
}

TEST(InstanceTest, DiscreteHomCounts) {
  auto s = single_node();
  auto two = discrete(s, 2, "a");
  auto three = discrete(s, 3, "b");
  auto none = discrete(s, 0, "c");
  auto e = enumerate_homs(two, three, 100);
  EXPECT_EQ(e.homs.size(), 9u);
  EXPECT_EQ(e.completeness, HomCompleteness::Complete);
  EXPECT_EQ(enumerate_homs(two, none, 100).homs.size(), 0u);
  EXPECT_EQ(enumerate_homs(none, two, 100).homs.size(), 1u);
  auto capped = enumerate_homs(two, three, 4);
  EXPECT_EQ(capped.homs.size(), 4u);
  EXPECT_EQ(capped.completeness, HomCompleteness::Capped);
  auto exact = enumerate_homs(two, three, 9);
  EXPECT_EQ(exact.completeness, HomCompleteness::Complete);
}

TEST(InstanceTest, CorrectedEndomorphismsMatchBruteForce) {
  auto i = corrected();
  auto oracle = testing::brute_force_hom_count(i, i);
  ASSERT_TRUE(oracle.has_value());
  // Names are pairwise distinct, so only the identity survives.
  EXPECT_EQ(*oracle, 1u);
  auto e = enumerate_homs(i, i, 1000);
  EXPECT_EQ(e.homs.size(), *oracle);
  EXPECT_EQ(count_homs(i, i, 1000).count, *oracle);
}

TEST(InstanceTest, IsoCheck) {
  auto i = corrected();
  auto self = iso_check(i, i);
  ASSERT_TRUE(self.has_value());
  EXPECT_EQ(self->components, identity_hom(i).components);

  auto s = single_node();
  EXPECT_FALSE(iso_check(discrete(s, 2, "a"), discrete(s, 3, "b")).has_value());

  auto renamed = share(testing::renamed_reversed(*i, "r"));
  EXPECT_EQ(renamed->carrier("Emp"), (std::vector<std::string>{"r103", "r102", "r101"}));
  auto iso = iso_check(i, renamed);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(check_hom(*iso).empty());
  EXPECT_EQ(iso->components[renamed->schema()->node_index("Emp")], (std::vector<std::size_t>{2, 1, 0}));
}

TEST(InstanceTest, DeclRoundTrip) {
  auto i = verbatim();
  auto decl = to_decl(*i, "PaperVerbatim", "EmpDept");
  EXPECT_EQ(validate_instance(i->schema(), decl), *i);
}

TEST(InstancePropertyTest, EnumeratedHomsAreDistinctAndValid) {
  std::mt19937 rng(99);
  int checked = 0;
  for (int round = 0; round < 80; ++round) {
    auto s = testing::random_schema(rng, {});
    auto a = testing::random_instance(s, rng, 2);
    auto b = testing::random_instance(s, rng, 3);
    if (!a || !b) continue;
    auto ip = share(*a), jp = share(*b);
    auto oracle = testing::brute_force_hom_count(ip, jp);
    if (!oracle) continue;
    auto e = enumerate_homs(ip, jp, 100000);
    ASSERT_EQ(e.completeness, HomCompleteness::Complete);
    EXPECT_EQ(e.homs.size(), *oracle);
    std::set<std::vector<std::vector<std::size_t>>> seen;
    for (const auto& h : e.homs) {
      EXPECT_TRUE(check_hom(h).empty());
      EXPECT_TRUE(seen.insert(h.components).second);
    }
    EXPECT_EQ(count_homs(ip, jp, 100000).count, *oracle);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(InstancePropertyTest, HomsCompose) {
  std::mt19937 rng(5);
  int composed = 0;
  for (int round = 0; round < 80; ++round) {
    auto s = testing::random_schema(rng, {});
    auto a = testing::random_instance(s, rng, 2);
    auto b = testing::random_instance(s, rng, 2);
    auto c = testing::random_instance(s, rng, 2);
    if (!a || !b || !c) continue;
    auto ap = share(*a), bp = share(*b), cp = share(*c);
    auto f = enumerate_homs(ap, bp, 20);
    auto g = enumerate_homs(bp, cp, 20);
    for (const auto& x : f.homs) {
      for (const auto& y : g.homs) {
        EXPECT_TRUE(check_hom(compose_homs(x, y)).empty());
        ++composed;
      }
      EXPECT_EQ(compose_homs(identity_hom(ap), x).components, x.components);
    }
  }
  EXPECT_GT(composed, 0);
}

TEST(InstancePropertyTest, EvalRespectsProvableEquality) {
  std::mt19937 rng(31337);
  int compared = 0;
  for (int round = 0; round < 80; ++round) {
    auto s = testing::random_schema(rng, {});
    auto inst = testing::random_instance(s, rng, 3);
    if (!inst) continue;
    const Graph& g = s->graph();
    for (int walk = 0; walk < 10; ++walk) {
      // Random walk of up to 5 edges from a random entity node.
      const auto& entities = s->entities();
      std::string at = entities[std::uniform_int_distribution<std::size_t>(0, entities.size() - 1)(rng)];
      const std::string start = at;
      std::vector<std::string> edges;
      for (int k = 0; k < 5; ++k) {
        auto out = g.out_edges(at);
        if (out.empty()) break;
        const Edge& e = g.edges()[out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)]];
        edges.push_back(e.name);
        at = e.target;
      }
      Path p(start, edges);
      Path q = normalize(p, s->theory());
      ASSERT_EQ(prove_equal(s->theory(), p, q).verdict, Verdict::Proven);
      for (std::size_t x = 0; x < inst->carrier(start).size(); ++x) {
        EXPECT_EQ(eval_path(*inst, p, x), eval_path(*inst, q, x)) << p.to_string() << " vs " << q.to_string();
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 50);
}

}  // namespace
}  // namespace catmig

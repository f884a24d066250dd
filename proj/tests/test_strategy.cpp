#include <random>

#include "doctest.h"

#include "fixture_util.hpp"
#include "worked_strategies.hpp"

using namespace flowmend;

namespace {

FlowTriple fig4a_triple() {
    auto a = testutil::annotated("fixtures/udc/unsafe/fig4a.js", "udc");
    auto ts = slice(a);
    REQUIRE(ts.size() == 1);
    return ts[0];
}

AstDoc fig4b() { return parse(testutil::slurp("fixtures/udc/safe/fig4b.js")); }

}  // namespace

TEST_CASE("S1 intermediate locations match the worked example") {
    FlowTriple t = fig4a_triple();
    NodeId ls = eval_loc(testutil::s1_ls(), t);
    CHECK(t.doc.value(ls) == "foo");
    CHECK(t.doc.type(ls) == NodeType::VarExpr);
    NodeId le = eval_loc(testutil::s1_le(), t);
    CHECK(t.doc.type(le) == NodeType::BlockStmt);
    CHECK(eval_index(testutil::s1_index(), le, t) == 13);
    CHECK(t.doc.value(eval_loc(testutil::s1_lr2(), t)) == "data.id");
    CHECK(t.doc.value(eval_loc(testutil::s1_lr1(), t)) == "handlers");
    CHECK(emit_inline(materialize(testutil::s1().out, t)) == "if (handlers.hasOwnProperty(data.id)) { foo(data); }");
}

TEST_CASE("S1 and S2 both repair fig4a and S1 is cheaper") {
    FlowTriple t = fig4a_triple();
    CHECK(same_tree(apply_strategy(testutil::s1(), t), fig4b()));
    CHECK(same_tree(apply_strategy(testutil::s2(), t), fig4b()));
    CHECK(cost(testutil::s1()) == 28);
    CHECK(cost(testutil::s1()) < cost(testutil::s2()));
}

TEST_CASE("a Kleene step is cheaper than the same path spelled as edge steps") {
    LocExpr star;
    star.steps.push_back(TraversalFn::star(EdgeKind::SemChild, {Clause{false, NodeType::VarExpr}}));
    CHECK(cost(star) < cost(testutil::s2_ts()));
}

TEST_CASE("the empty traversal evaluates to the source") {
    FlowTriple t = fig4a_triple();
    CHECK(eval_loc(LocExpr::source(), t) == t.source);
}

TEST_CASE("offset indices shift by z") {
    FlowTriple t = fig4a_triple();
    NodeId le = eval_loc(testutil::s1_le(), t);
    for (int z = -3; z <= 3; ++z)
        CHECK(eval_index(IndexExpr::offset(testutil::s1_ls(), z), le, t) - eval_index(testutil::s1_index(), le, t) == z);
    NodeId stmt = t.doc.child(le, 4);
    LocExpr direct = testutil::s1_le().then({TraversalFn::edge(EdgeKind::SynChild, 4)});
    CHECK(eval_index(IndexExpr::offset(direct, 0), le, t) == child_index(t.doc, le, stmt));
    CHECK_THROWS_AS(eval_index(IndexExpr::offset(testutil::s1_le(), 0), le, t), NotAnAncestor);
}

TEST_CASE("Kleene results satisfy their clause and nothing earlier in BFS order does") {
    FlowTriple t = fig4a_triple();
    const TraversalFn f = testutil::s1_ls().steps[0];
    NodeId hit = eval_step(f, t.source, t);
    CHECK(satisfies(f.clauses, hit, t));
    // Walk the single-successor chain; every node before `hit` fails the clause.
    for (NodeId n = t.source; n != hit; n = t.doc.sem_children(n).at(0)) CHECK_FALSE(satisfies(f.clauses, n, t));
}

TEST_CASE("a strategy whose clause never holds is inapplicable") {
    auto a = testutil::annotated("fixtures/xss/unsafe/fig6a.js", "xss");
    FlowTriple t = slice(a).at(0);
    CHECK_THROWS_AS(apply_strategy(testutil::s1(), t), StrategyInapplicable);
}

TEST_CASE("S1 serializes to the canonical term and back") {
    std::string text = serialize(testutil::s1());
    CHECK(text.rfind("Replace(ApplyTraversal(ApplyTraversal(Source, GetKleeneStar(SemChild, GetClause(VarExpr) & "
                     "GetNeighbourClause(GetEdge(SynParent, GetConstant(-1)), CallExpr))), GetKleeneStar(SynParent",
                     0) == 0);
    CHECK(deserialize(text) == testutil::s1());
    CHECK(deserialize(serialize(testutil::s2())) == testutil::s2());
    CHECK_THROWS_AS(deserialize(text.substr(0, text.size() / 2)), StrategyParseError);
    CHECK_THROWS_AS(deserialize("Replace(Source, GetConstant(0), ConstantAST(IfStmt, \"\"))"), StrategyParseError);
}

namespace {

NodeType random_type(std::mt19937& rng) { return static_cast<NodeType>(rng() % 25); }

LocExpr random_loc(std::mt19937& rng, int depth);

IndexExpr random_index(std::mt19937& rng, int depth) {
    int z = static_cast<int>(rng() % 9) - 4;
    if (depth > 0 && rng() % 3 == 0) return IndexExpr::offset(random_loc(rng, depth - 1), z);
    return IndexExpr::constant(z);
}

LocExpr random_loc(std::mt19937& rng, int depth) {
    LocExpr l;
    if (depth > 0 && rng() % 2) l.base.push_back(random_loc(rng, depth - 1));
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
        EdgeKind k = static_cast<EdgeKind>(rng() % 4);
        if (rng() % 2) {
            ClauseConj c{Clause{false, random_type(rng)}};
            if (rng() % 2) c.push_back(Clause{true, random_type(rng), static_cast<EdgeKind>(rng() % 4), static_cast<int>(rng() % 3) - 1});
            l.steps.push_back(TraversalFn::star(k, c));
        } else {
            l.steps.push_back(TraversalFn::edge(k, random_index(rng, depth)));
        }
    }
    return l;
}

EAst random_east(std::mt19937& rng, int depth) {
    if (depth == 0 || rng() % 3 == 0) {
        if (rng() % 2) return EAst::ref(random_loc(rng, 2));
        const char* vals[] = {"x", "\"quoted\"", "a\\b", "", "new\nline"};
        return EAst::constant(NodeType::Literal, vals[rng() % 5]);
    }
    std::vector<EAst> kids;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) kids.push_back(random_east(rng, depth - 1));
    return EAst::constant(NodeType::BlockStmt, "", std::move(kids));
}

}  // namespace

TEST_CASE("random well-typed strategies round-trip through text") {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        Strategy s{rng() % 2 ? EditType::Insert : EditType::Replace, random_loc(rng, 2), random_index(rng, 2), random_east(rng, 3)};
        std::string text = serialize(s);
        REQUIRE(deserialize(text) == s);
        CHECK(serialize(deserialize(text)) == text);
    }
}

TEST_CASE("stores round-trip and reject corrupt records") {
    std::vector<StoreRecord> recs{{"udc-membership", testutil::s1()}, {"udc-membership", testutil::s2()}};
    std::string text = format_store(recs);
    auto back = parse_store(text);
    REQUIRE(back.size() == 2);
    CHECK(back[1].strategy == testutil::s2());
    CHECK(back[0].spec == "udc-membership");
    CHECK(format_store(back) == text);
    CHECK_THROWS_AS(parse_store("garbage\n"), StrategyParseError);
    CHECK_THROWS_AS(parse_store(text.substr(0, text.size() - 10)), StrategyParseError);
}

#include "doctest.h"

#include "flowmend/syntax.hpp"

using namespace flowmend;

namespace {

const char* kHandler = R"(app.get("/run", function (req, res) {
  var data = JSON.parse(req.body);
  let foo = handlers[data.id];
  if (handlers.hasOwnProperty(data.id)) {
    foo(data);
  }
});
)";

}  // namespace

TEST_CASE("pretty emit of a parsed handler reproduces the canonical text") {
    AstDoc d = parse(kHandler);
    CHECK(emit(d) == kHandler);
    CHECK(same_tree(parse(emit(d)), d));
}

TEST_CASE("ids are preorder and values are one-line") {
    AstDoc d = parse("if (x) y(); else { z = 1 }");
    CHECK(d.type(0) == NodeType::Program);
    CHECK(d.type(1) == NodeType::IfStmt);
    CHECK(d.value(1) == "if (x) { y(); } else { z = 1; }");
    CHECK(d.type(d.child(1, 1)) == NodeType::BlockStmt);
    for (NodeId n = 1; n < static_cast<NodeId>(d.size()); ++n) CHECK(d.parent(n) < n);
}

TEST_CASE("name leaves are typed by position") {
    AstDoc d = parse("let a = b.c; function f(p) { return p; }");
    // Program, DeclExpr, Declarator, VarDecl a, DotExpr, VarExpr b, Label c
    CHECK(d.type(3) == NodeType::VarDecl);
    CHECK(d.type(5) == NodeType::VarExpr);
    CHECK(d.type(6) == NodeType::Label);
    CHECK(d.value(4) == "b.c");
}

TEST_CASE("parentheses follow precedence") {
    for (const char* src : {"x = (a + b) * c;", "x = a - (b - c);", "x = !(a && b);", "(function () {})();",
                            "({a: 1}).a;", "x = typeof a === 'function';", "y = -(-a);", "f = (a) => ({b: a});",
                            "k in o && o[k]();", "z = new Foo.Bar(1, 'q');"}) {
        AstDoc d = parse(src);
        std::string once = emit(d);
        CHECK_MESSAGE(same_tree(parse(once), d), src);
        CHECK(emit(parse(once)) == once);
    }
    CHECK(emit(parse("x = (a + b) * c")) == "x = (a + b) * c;\n");
    CHECK(emit(parse("x = a + (b + c)")) == "x = a + (b + c);\n");
    CHECK(emit(parse("x = (a + b) + c")) == "x = a + b + c;\n");
}

TEST_CASE("parse errors carry a position") {
    try {
        parse("let = 3;");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col == 5);
    }
    CHECK_THROWS_AS(parse("for (;;) {}"), ParseError);
    CHECK_THROWS_AS(parse("x = 'open"), ParseError);
}

TEST_CASE("edits keep origins and reject malformed results") {
    AstDoc d = parse("a(); b(); c();");
    Tree ins = parse_fragment("z();", true);
    AstDoc e = insert_child(d, d.root(), 1, ins);
    CHECK(emit(e) == "a();\nz();\nb();\nc();\n");
    NodeId b_stmt = e.child(e.root(), 2);
    CHECK(e.origin(b_stmt) == d.child(d.root(), 1));
    CHECK(e.origin(e.child(e.root(), 1)) == kNoNode);
    CHECK_THROWS_AS(insert_child(d, d.root(), 4, ins), IndexOutOfRange);
    NodeId call = d.child(d.child(d.root(), 0), 0);
    CHECK_THROWS_AS(insert_child(d, call, 0, ins), NotAStatementList);
    CHECK_THROWS_AS(replace_child(d, d.root(), 0, parse_fragment("q", false)), MalformedTree);
    AstDoc r = replace_child(d, call, 0, parse_fragment("q", false));
    CHECK(emit(r) == "q();\nb();\nc();\n");
}

TEST_CASE("line ranges cover nested statements") {
    AstDoc d = parse(kHandler);
    EmitResult r = emit_with_lines(d);
    NodeId ifs = kNoNode;
    for (NodeId n = 0; n < static_cast<NodeId>(d.size()); ++n)
        if (d.type(n) == NodeType::IfStmt) ifs = n;
    REQUIRE(ifs != kNoNode);
    CHECK(r.lines[ifs] == std::pair<int, int>{4, 6});
    CHECK(r.lines[0] == std::pair<int, int>{1, 7});
}

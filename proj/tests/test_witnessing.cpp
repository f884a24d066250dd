#include <random>
#include <set>

#include "doctest.h"

#include "flowmend/witnessing.hpp"

#include "fixture_util.hpp"

using namespace flowmend;

namespace {

/// Program -> Expr -> ArrayLit -> n literals; ids 3.. are the literals.
AstDoc literals(int n) {
    Tree arr{NodeType::ArrayLit, "", {}};
    for (int i = 0; i < n; ++i) arr.kids.push_back(Tree{NodeType::Literal, std::to_string(i), {}});
    return AstDoc::from_tree(Tree{NodeType::Program, "", {Tree{NodeType::Expr, "", {arr}}}});
}

}  // namespace

TEST_CASE("fig4a is flagged and fig4b only witnessed") {
    auto unsafe = testutil::annotated("fixtures/udc/unsafe/fig4a.js", "udc");
    CHECK(find_vulnerabilities(unsafe).pairs.size() == 1);
    CHECK(find_witnesses(unsafe).triples.empty());

    auto safe = testutil::annotated("fixtures/udc/safe/fig4b.js", "udc");
    CHECK(find_vulnerabilities(safe).pairs.empty());
    auto w = find_witnesses(safe).triples;
    REQUIRE(w.size() == 1);
    CHECK(safe.doc.has(w[0].witness, Annotation::Guard));
    CHECK(w[0].to_witness.front() == w[0].source);
    CHECK(w[0].to_sink.back() == w[0].sink);
}

TEST_CASE("a node that is both source and sink is vulnerable even when blocked") {
    AstDoc d = literals(1);
    d.annotate(3, Annotation::Source);
    d.annotate(3, Annotation::Sink);
    d.annotate(3, Annotation::Guard);
    auto v = find_vulnerabilities(d).pairs;
    REQUIRE(v.size() == 1);
    CHECK(v[0].path == std::vector<NodeId>{3});
}

TEST_CASE("a blocked source starts no flow") {
    AstDoc d = literals(2);
    d.add_sem_edge(3, 4);
    d.annotate(3, Annotation::Source);
    d.annotate(3, Annotation::Sanitizer);
    d.annotate(4, Annotation::Sink);
    CHECK(find_vulnerabilities(d).pairs.empty());
    auto w = find_witnesses(d).triples;
    REQUIRE(w.size() == 1);
    CHECK(w[0].witness == 3);
}

TEST_CASE("a blocker on one path does not hide a parallel free path") {
    AstDoc d = literals(4);
    d.add_sem_edge(3, 4);
    d.add_sem_edge(4, 6);
    d.add_sem_edge(3, 5);
    d.add_sem_edge(5, 6);
    d.annotate(3, Annotation::Source);
    d.annotate(6, Annotation::Sink);
    d.annotate(4, Annotation::Guard);
    auto v = find_vulnerabilities(d).pairs;
    REQUIRE(v.size() == 1);
    CHECK(v[0].path == std::vector<NodeId>{3, 5, 6});
    CHECK(find_witnesses(d).triples.size() == 1);
}

TEST_CASE("reported paths follow semantic edges through free nodes") {
    std::mt19937 rng(7);
    for (int g = 0; g < 200; ++g) {
        AstDoc d = literals(8);
        std::bernoulli_distribution edge(0.2), mark(0.25);
        for (NodeId a = 3; a < 11; ++a)
            for (NodeId b = 3; b < 11; ++b)
                if (a != b && edge(rng)) d.add_sem_edge(a, b);
        for (NodeId n = 3; n < 11; ++n) {
            if (mark(rng)) d.annotate(n, Annotation::Source);
            if (mark(rng)) d.annotate(n, Annotation::Sink);
            if (mark(rng)) d.annotate(n, Annotation::Guard);
        }
        for (const Vulnerability& v : find_vulnerabilities(d).pairs) {
            REQUIRE(!v.path.empty());
            CHECK(v.path.front() == v.source);
            CHECK(v.path.back() == v.sink);
            if (v.source == v.sink) continue;
            for (std::size_t i = 0; i < v.path.size(); ++i) {
                CHECK_FALSE(d.has(v.path[i], Annotation::Guard));
                if (i + 1 < v.path.size()) {
                    const auto& ks = d.sem_children(v.path[i]);
                    CHECK(std::find(ks.begin(), ks.end(), v.path[i + 1]) != ks.end());
                }
            }
        }
    }
}

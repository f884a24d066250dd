#include "doctest.h"

#include "flowmend/perturb.hpp"
#include "flowmend/witnessing.hpp"

#include "fixture_util.hpp"

using namespace flowmend;

namespace {

MineResult mine(const std::vector<std::pair<std::string, std::string>>& files) {
    std::vector<CorpusFile> corpus;
    for (const auto& [file, spec] : files) corpus.push_back({file, testutil::annotated(file, spec)});
    return make_pairs(corpus);
}

}  // namespace

TEST_CASE("the five worked safe programs give one pair each") {
    const std::vector<std::pair<std::string, std::string>> files{
        {"fixtures/udc/safe/fig1a.js", "udc"}, {"fixtures/udc/safe/fig1b.js", "udc"},
        {"fixtures/udc/safe/fig1c.js", "udc"}, {"fixtures/udc/safe/fig4b.js", "udc"},
        {"fixtures/xss/safe/fig6b.js", "xss"}};
    std::size_t total = 0;
    for (const auto& f : files) {
        CAPTURE(f.first);
        MineResult r = mine({f});
        CHECK(r.pairs.size() == 1);
        CHECK(r.witness_triples == r.pairs.size() + r.skipped.size());
        total += r.pairs.size();
    }
    CHECK(total == 5);
}

TEST_CASE("mined edits round-trip and the unsafe side is flagged") {
    MineResult r = mine({{"fixtures/udc/safe/fig1a.js", "udc"},
                         {"fixtures/udc/safe/fig1b.js", "udc"},
                         {"fixtures/udc/safe/fig1c.js", "udc"},
                         {"fixtures/udc/safe/fig4b.js", "udc"},
                         {"fixtures/xss/safe/fig6b.js", "xss"}});
    REQUIRE(r.pairs.size() == 5);
    for (const PairedExample& p : r.pairs) {
        CAPTURE(p.id);
        CHECK(same_tree(apply_edit(p.unsafe.doc, p.edit), p.safe));
        CHECK(flags(find_vulnerabilities(p.unsafe), p.edit.triple.source, p.edit.triple.sink));
    }
}

TEST_CASE("removing the fig4b guard restores fig4a") {
    MineResult r = mine({{"fixtures/udc/safe/fig4b.js", "udc"}});
    REQUIRE(r.pairs.size() == 1);
    const PairedExample& p = r.pairs[0];
    CHECK(same_tree(p.unsafe.doc, parse(testutil::slurp("fixtures/udc/unsafe/fig4a.js"))));
    CHECK(p.edit.type == EditType::Replace);
    CHECK(p.edit.index == 13);
    CHECK(p.edit.editprog.type == NodeType::IfStmt);
}

TEST_CASE("an early-return guard is removed by an insert edit") {
    MineResult r = mine({{"fixtures/udc/safe/fig1b.js", "udc"}});
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].edit.type == EditType::Insert);
    CHECK(r.pairs[0].edit.editprog.type == NodeType::IfStmt);
}

TEST_CASE("removing the fig6b sanitizer restores fig6a") {
    MineResult r = mine({{"fixtures/xss/safe/fig6b.js", "xss"}});
    REQUIRE(r.pairs.size() == 1);
    const PairedExample& p = r.pairs[0];
    CHECK(same_tree(p.unsafe.doc, parse(testutil::slurp("fixtures/xss/unsafe/fig6a.js"))));
    CHECK(p.edit.type == EditType::Insert);
}

TEST_CASE("an unsafe program has no witness and mines nothing") {
    MineResult r = mine({{"fixtures/udc/unsafe/fig4a.js", "udc"}});
    CHECK(r.witness_triples == 0);
    CHECK(r.pairs.empty());
    CHECK(r.skipped.empty());
}

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "flowmend/cli.hpp"

#include "fixture_util.hpp"

namespace fs = std::filesystem;
using namespace flowmend;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("flowmend-test-" + tag + "-" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "flowmend");
    std::vector<char*> argv;
    for (std::string& s : args) argv.push_back(s.data());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> records(const std::string& jsonl) {
    std::vector<json> out;
    std::istringstream in(jsonl);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

std::string spec_file(const std::string& name) { return testutil::root_path("specs/" + name + ".flowspec"); }

}  // namespace

TEST_CASE("unified diff of one changed line") {
    std::string d = unified_diff("a\nb\nc\n", "a\nB\nc\n", "a/x.js", "b/x.js");
    CHECK(d == "--- a/x.js\n+++ b/x.js\n@@ -1,3 +1,3 @@\n a\n-b\n+B\n c\n");
    CHECK(unified_diff("same\n", "same\n", "a", "b").empty());
}

TEST_CASE("pure insertions use the line-before convention") {
    std::string d = unified_diff("a\n", "a\nb\n", "a/x", "b/x", 0);
    CHECK(d == "--- a/x\n+++ b/x\n@@ -1,0 +2 @@\n+b\n");
    LineChanges c = changed_lines("a\nb\nc\n", "a\nc\nd\n");
    CHECK(c.deleted == std::vector<int>{2});
    CHECK(c.inserted == std::vector<int>{3});
}

TEST_CASE("pairs written to disk read back intact") {
    TempDir tmp("pairs");
    VulnSpec spec = testutil::spec("udc");
    MineRun run = mine_files(list_sources(testutil::root_path("fixtures/udc/safe")),
                             testutil::root_path("fixtures/udc/safe"), spec);
    REQUIRE(run.result.pairs.size() >= 20);
    write_pairs(tmp.path, spec, run.result, run.parse_errors, run.files);

    json manifest = json::parse(read_file(tmp.path / spec.name / "manifest.json"));
    CHECK(manifest["pairs"].get<std::size_t>() ==
          manifest["witness_triples"].get<std::size_t>() - manifest["skipped"].size());
    CHECK(manifest["pair_ids"].size() == run.result.pairs.size());

    auto sets = read_pairs(tmp.path);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].warnings.empty());
    REQUIRE(sets[0].pairs.size() == run.result.pairs.size());
    for (std::size_t i = 0; i < sets[0].pairs.size(); ++i) {
        const PairedExample& p = sets[0].pairs[i];
        CHECK(same_tree(apply_edit(p.unsafe.doc, p.edit), p.safe));
        CHECK(serialize(lift(p)) == serialize(lift(run.result.pairs[i])));
    }
}

TEST_CASE("a corrupt pair is dropped with a warning") {
    TempDir tmp("corrupt");
    VulnSpec spec = testutil::spec("udc");
    MineRun run = mine_files({testutil::root_path("fixtures/udc/safe/fig1a.js"),
                              testutil::root_path("fixtures/udc/safe/fig4b.js")},
                             testutil::root_path("fixtures/udc/safe"), spec);
    write_pairs(tmp.path, spec, run.result, run.parse_errors, run.files);
    const fs::path victim = tmp.path / spec.name / "fig1a.js-0" / "safe.js";
    REQUIRE(fs::exists(victim));
    write_file(victim, "var x = 1;\n");
    auto sets = read_pairs(tmp.path);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].pairs.size() == 1);
    REQUIRE(sets[0].warnings.size() == 1);
    CHECK(sets[0].warnings[0].find("corrupt pair dropped") != std::string::npos);
}

TEST_CASE("scan exits 1 on a flagged flow and 0 otherwise") {
    Run bad = cli({"scan", "--spec", spec_file("udc"), testutil::root_path("fixtures/udc/unsafe/fig4a.js")});
    CHECK(bad.code == 1);
    auto recs = records(bad.out);
    REQUIRE_FALSE(recs.empty());
    CHECK(recs[0]["kind"] == "vulnerability");
    CHECK(recs[0]["sink"]["text"] == "foo");

    Run good = cli({"scan", "--spec", spec_file("udc"), testutil::root_path("fixtures/udc/safe/fig4b.js")});
    CHECK(good.code == 0);
    bool witnessed = false;
    for (const json& r : records(good.out)) witnessed = witnessed || r["kind"] == "witness";
    CHECK(witnessed);
}

TEST_CASE("bad arguments and missing files exit 2") {
    CHECK(cli({"scan"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"scan", "--spec", "/nonexistent.flowspec", "x.js"}).code == 2);
}

TEST_CASE("mine, learn, fix end to end") {
    TempDir tmp("e2e");
    const std::string pairs = (tmp.path / "pairs").string(), store = (tmp.path / "s.store").string();
    Run m = cli({"mine", "--spec", spec_file("udc"), "--out", pairs, testutil::root_path("fixtures/udc/safe")});
    REQUIRE(m.code == 0);
    CHECK(records(m.out).at(0)["pairs"].get<int>() >= 20);
    Run l = cli({"learn", "--out", store, pairs});
    REQUIRE(l.code == 0);
    CHECK(records(l.out).at(0)["strategies"].get<int>() > 0);
    CHECK(read_file(store).rfind("flowmend-strategies 1\n", 0) == 0);

    Run f = cli({"fix", "--spec", spec_file("udc"), "--store", store, "--out", (tmp.path / "fixes").string(),
                 testutil::root_path("fixtures/udc/unsafe/fig4a.js")});
    CHECK(f.code == 0);
    auto recs = records(f.out);
    REQUIRE(recs.size() >= 2);
    CHECK(recs[0]["kind"] == "candidate");
    CHECK(recs[0]["rank"] == 1);
    CHECK(fs::exists(recs[0]["patched_file"].get<std::string>()));
    CHECK(recs.back()["kind"] == "fix");
    CHECK(recs.back()["status"] == "fixed");

    Run safe = cli({"fix", "--spec", spec_file("udc"), "--store", store,
                    testutil::root_path("fixtures/udc/safe/fig4b.js")});
    CHECK(safe.code == 2);
    CHECK(records(safe.out).back()["status"] == "no flagged flow");
}

TEST_CASE("mining an empty directory writes an empty manifest") {
    TempDir tmp("empty");
    fs::create_directories(tmp.path / "corpus");
    Run m = cli({"mine", "--spec", spec_file("xss"), "--out", (tmp.path / "pairs").string(),
                 (tmp.path / "corpus").string()});
    CHECK(m.code == 0);
    json manifest = json::parse(read_file(tmp.path / "pairs" / "xss" / "manifest.json"));
    CHECK(manifest["files"] == 0);
    CHECK(manifest["pairs"] == 0);
    CHECK(manifest["pair_ids"].empty());
}

TEST_CASE("eval over a single file reports zero success") {
    TempDir tmp("single");
    fs::copy_file(testutil::root_path("fixtures/udc/safe/fig1a.js"), tmp.path / "fig1a.js");
    Run e = cli({"eval", "--spec", spec_file("udc"), tmp.path.string()});
    CHECK(e.code == 0);
    auto recs = records(e.out);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0]["kind"] == "eval-file");
    CHECK(recs[0]["outcome"] == "not-fixed");
    CHECK(recs[1]["kind"] == "eval-summary");
    CHECK(recs[1]["total"] == 1);
    CHECK(recs[1]["success_rate"] == "0.000");
}

TEST_CASE("eval marks files without a witnessed flow as errors") {
    TempDir tmp("nowitness");
    fs::copy_file(testutil::root_path("fixtures/udc/unsafe/fig4a.js"), tmp.path / "fig4a.js");
    fs::copy_file(testutil::root_path("fixtures/udc/safe/fig1a.js"), tmp.path / "fig1a.js");
    EvalReport r = evaluate(list_sources(tmp.path), tmp.path, testutil::spec("udc"));
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1].file == "fig4a.js");
    CHECK(r.rows[1].outcome == "error");
    CHECK(r.rows[1].note == "no witnessed flow");
    CHECK(eval_table(r).find("fig4a.js") != std::string::npos);
}

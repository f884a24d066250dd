#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowmend/learn.hpp"
#include "flowmend/strategy.hpp"
#include "flowmend/witnessing.hpp"

namespace flowmend {

/// Line-level diff with `context` lines around each hunk, `---`/`+++` headers included.
/// Empty when the texts are equal.
std::string unified_diff(const std::string& a, const std::string& b, const std::string& name_a,
                         const std::string& name_b, int context = 3);

/// 1-based line numbers a diff touches: deleted lines of `a` and inserted lines of `b`.
struct LineChanges {
    std::vector<int> deleted;
    std::vector<int> inserted;
};
LineChanges changed_lines(const std::string& a, const std::string& b);

/// `.js` files under `dir`, recursively, sorted by relative path.
std::vector<std::filesystem::path> list_sources(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

/// One candidate patch for one flagged flow.
struct FixCandidate {
    std::string strategy_id;
    long cost = 0;
    std::string patched_source;
    bool validated = false;
    /// Every changed line lies inside the edited child (old span for deletions, new span for insertions).
    bool confined = false;
    std::string diff;
};

/// Candidate check against the targeted flow: the patch re-parses to the same tree, the
/// sink survives, and no unguarded path leads from the source to the sink or into the edit.
struct Validation {
    bool ok = false;
    bool confined = false;
    std::string reason;
};
Validation validate_patch(const AnnotatedAst& unsafe, const FlowTriple& triple, const Strategy& s,
                          const AstDoc& patched);

struct RankedStrategy {
    std::string id;
    Strategy strategy;
};

/// Tries strategies in ascending cost (then id) on one flow; keeps up to `k` validated,
/// distinct patched texts.
std::vector<FixCandidate> fix_flow(const AnnotatedAst& unsafe, const FlowTriple& triple,
                                   const std::vector<RankedStrategy>& strategies, std::size_t k,
                                   const std::string& file_name = "input.js");

/// Pairs directory: `<root>/<spec>/<id>/{unsafe.js, safe.js, edit.meta}`, plus
/// `<root>/<spec>/spec.flowspec` and `<root>/<spec>/manifest.json`.
void write_pairs(const std::filesystem::path& root, const VulnSpec& spec, const MineResult& r,
                 const std::vector<std::string>& parse_errors, std::size_t files);

struct PairSet {
    VulnSpec spec;
    std::vector<PairedExample> pairs;
    /// Human-readable notes on pairs that were dropped.
    std::vector<std::string> warnings;
};

/// Reads every spec directory under `root` (or `root` itself when it holds a spec.flowspec).
std::vector<PairSet> read_pairs(const std::filesystem::path& root);

/// Mines one spec over a list of files; names are paths relative to `base`.
struct MineRun {
    MineResult result;
    std::vector<std::string> parse_errors;
    std::size_t files = 0;
};
MineRun mine_files(const std::vector<std::filesystem::path>& files, const std::filesystem::path& base,
                   const VulnSpec& spec);

struct EvalRow {
    std::string file;
    std::string outcome;  // fixed, not-fixed or error
    std::size_t pairs = 0;
    std::size_t fixed_pairs = 0;
    std::size_t unique_fixes = 0;
    std::string note;
};

struct EvalReport {
    std::string spec;
    std::vector<EvalRow> rows;
    std::size_t total = 0;
    std::size_t fixed = 0;
    double success_rate = 0.0;
    double mean_unique_fixes = 0.0;
    std::size_t training_pairs = 0;
};

struct EvalOptions {
    std::size_t k = 20;
    LearnOptions learn;
    /// Extra training files present in every fold.
    std::vector<std::filesystem::path> seed;
    std::filesystem::path seed_base;
};

/// Leave-one-out over `files`: learn from the pairs of every other file, perturb the held-out
/// file, fix it. A held-out pair counts as fixed when a validated candidate is also confined.
EvalReport evaluate(const std::vector<std::filesystem::path>& files, const std::filesystem::path& base,
                    const VulnSpec& spec, const EvalOptions& opt = {});

std::string eval_jsonl(const EvalReport& r);
std::string eval_table(const EvalReport& r);

/// Entry point behind the `flowmend` binary; returns the exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace flowmend

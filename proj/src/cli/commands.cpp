#include <algorithm>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "flowmend/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace flowmend {
namespace {

json where(const AstDoc& d, NodeId n) {
    const Span& s = d.span(n);
    return json{{"line", s.line}, {"col", s.col}, {"text", d.value(n)}};
}

std::vector<fs::path> expand(const std::vector<std::string>& paths) {
    std::vector<fs::path> out;
    for (const std::string& p : paths) {
        if (fs::is_directory(p)) {
            auto more = list_sources(p);
            out.insert(out.end(), more.begin(), more.end());
        } else {
            out.emplace_back(p);
        }
    }
    return out;
}

int cmd_scan(const std::vector<VulnSpec>& specs, const std::vector<std::string>& paths, std::ostream& out) {
    int code = 0;
    for (const fs::path& f : expand(paths)) {
        const std::string name = f.generic_string();
        AstDoc doc;
        try {
            doc = parse(read_file(f));
        } catch (const Error& e) {
            out << json{{"kind", "error"}, {"file", name}, {"message", e.what()}}.dump() << "\n";
            continue;
        }
        for (const VulnSpec& spec : specs) {
            AnnotatedAst a = annotate(doc, spec);
            auto vr = find_vulnerabilities(a);
            auto wr = find_witnesses(a);
            for (const Vulnerability& v : vr.pairs)
                out << json{{"kind", "vulnerability"}, {"file", name},          {"spec", spec.name},
                            {"source", where(a.doc, v.source)}, {"sink", where(a.doc, v.sink)}}
                           .dump()
                    << "\n";
            for (const Witness& w : wr.triples)
                out << json{{"kind", "witness"},
                            {"file", name},
                            {"spec", spec.name},
                            {"source", where(a.doc, w.source)},
                            {"witness", where(a.doc, w.witness)},
                            {"sink", where(a.doc, w.sink)}}
                           .dump()
                    << "\n";
            out << json{{"kind", "file"},
                        {"file", name},
                        {"spec", spec.name},
                        {"vulnerabilities", vr.pairs.size()},
                        {"witnesses", wr.triples.size()}}
                       .dump()
                << "\n";
            if (!vr.pairs.empty()) code = 1;
        }
    }
    return code;
}

int cmd_mine(const std::vector<VulnSpec>& specs, const std::string& corpus, const std::string& out_dir,
             std::ostream& out) {
    auto files = list_sources(corpus);
    for (const VulnSpec& spec : specs) {
        MineRun run = mine_files(files, corpus, spec);
        write_pairs(out_dir, spec, run.result, run.parse_errors, run.files);
        out << json{{"kind", "mine"},
                    {"spec", spec.name},
                    {"files", run.files},
                    {"witness_triples", run.result.witness_triples},
                    {"pairs", run.result.pairs.size()},
                    {"skipped", run.result.skipped.size()},
                    {"parse_errors", run.parse_errors.size()}}
                   .dump()
            << "\n";
    }
    return 0;
}

int cmd_learn(const std::string& pairs_dir, const std::string& store, const LearnOptions& opt, std::ostream& out,
              std::ostream& err) {
    std::vector<StoreRecord> records;
    for (PairSet& set : read_pairs(pairs_dir)) {
        for (const std::string& w : set.warnings) err << "warning: " << set.spec.name << "/" << w << "\n";
        auto learned = learn(set.pairs, opt);
        json summary{{"kind", "learn"}, {"spec", set.spec.name}, {"pairs", set.pairs.size()},
                     {"strategies", learned.size()}};
        if (!learned.empty()) {
            summary["min_cost"] = cost(learned.front());
            summary["max_cost"] = cost(learned.back());
        }
        out << summary.dump() << "\n";
        for (Strategy& s : learned) records.push_back({set.spec.name, std::move(s)});
    }
    write_store(store, records);
    return 0;
}

int cmd_fix(const std::vector<VulnSpec>& specs, const std::string& store, const std::string& file, std::size_t k,
            const std::string& out_dir, std::ostream& out) {
    auto records = read_store(store);
    AstDoc doc;
    try {
        doc = parse(read_file(file));
    } catch (const Error& e) {
        out << json{{"kind", "error"}, {"file", file}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
    const std::string name = fs::path(file).filename().string();
    const std::string stem = fs::path(file).stem().string();
    std::size_t flows = 0, validated = 0;
    for (const VulnSpec& spec : specs) {
        std::vector<RankedStrategy> ranked;
        for (std::size_t i = 0; i < records.size(); ++i)
            if (records[i].spec == spec.name) ranked.push_back({spec.name + "#" + std::to_string(i), records[i].strategy});
        AnnotatedAst a = annotate(doc, spec);
        for (const Vulnerability& v : find_vulnerabilities(a).pairs) {
            ++flows;
            FlowTriple t = make_triple(a, v.source, v.sink, std::nullopt);
            auto cands = fix_flow(a, t, ranked, k, name);
            for (std::size_t r = 0; r < cands.size(); ++r) {
                const FixCandidate& c = cands[r];
                ++validated;
                json j{{"kind", "candidate"},      {"file", file},          {"spec", spec.name},
                       {"flow", flows},            {"rank", r + 1},         {"source", where(a.doc, v.source)},
                       {"sink", where(a.doc, v.sink)}, {"strategy_id", c.strategy_id}, {"cost", c.cost},
                       {"validated", c.validated}, {"confined", c.confined}, {"diff", c.diff}};
                if (!out_dir.empty()) {
                    std::string base = stem + "." + std::to_string(flows) + "." + std::to_string(r + 1);
                    write_file(fs::path(out_dir) / (base + ".js"), c.patched_source);
                    write_file(fs::path(out_dir) / (base + ".diff"), c.diff);
                    j["patched_file"] = (fs::path(out_dir) / (base + ".js")).generic_string();
                }
                out << j.dump() << "\n";
            }
            if (cands.empty())
                out << json{{"kind", "unfixed"}, {"file", file}, {"spec", spec.name}, {"flow", flows},
                            {"source", where(a.doc, v.source)}, {"sink", where(a.doc, v.sink)},
                            {"reason", "no applicable strategy"}}
                           .dump()
                    << "\n";
        }
    }
    if (flows == 0) {
        out << json{{"kind", "fix"}, {"file", file}, {"status", "no flagged flow"}}.dump() << "\n";
        return 2;
    }
    out << json{{"kind", "fix"}, {"file", file}, {"flows", flows}, {"candidates", validated},
                {"status", validated ? "fixed" : "no applicable strategy"}}
               .dump()
        << "\n";
    return validated ? 0 : 2;
}

int cmd_eval(const std::vector<VulnSpec>& specs, const std::string& corpus, const EvalOptions& opt, bool table,
             std::ostream& out) {
    auto files = list_sources(corpus);
    for (const VulnSpec& spec : specs) {
        EvalReport r = evaluate(files, corpus, spec, opt);
        out << eval_jsonl(r);
        if (table) out << eval_table(r);
    }
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"flowmend: learns and applies information-flow repairs for JavaScript"};
    app.require_subcommand(1);

    std::string spec_path, store, out_dir, corpus, seed;
    std::vector<std::string> paths;
    std::size_t k = 20;
    LearnOptions lopt;
    bool table = false;

    auto* scan = app.add_subcommand("scan", "report flagged flows and witnessed flows");
    scan->add_option("--spec", spec_path, "flowspec file")->required();
    scan->add_option("paths", paths, "files or directories")->required();

    auto* mine = app.add_subcommand("mine", "mine paired examples from safe sources");
    mine->add_option("--spec", spec_path, "flowspec file")->required();
    mine->add_option("--out", out_dir, "pairs directory")->required();
    mine->add_option("corpus", corpus, "directory of sources")->required();

    auto* lrn = app.add_subcommand("learn", "learn strategies from a pairs directory");
    lrn->add_option("--out,--store", store, "strategy store to write")->required();
    lrn->add_option("--max-depth", lopt.max_depth, "reference search depth");
    lrn->add_option("--max-pairs", lopt.max_pairs_per_group, "merge pairs per group");
    lrn->add_option("pairs", corpus, "pairs directory")->required();

    auto* fix = app.add_subcommand("fix", "propose validated patches for flagged flows");
    fix->add_option("--spec", spec_path, "flowspec file")->required();
    fix->add_option("--store", store, "strategy store")->required();
    fix->add_option("--k", k, "candidates per flow");
    fix->add_option("--out", out_dir, "directory for patched files and diffs");
    fix->add_option("file", corpus, "source file")->required();

    auto* ev = app.add_subcommand("eval", "leave-one-out evaluation over a corpus");
    ev->add_option("--spec", spec_path, "flowspec file")->required();
    ev->add_option("--k", k, "candidates per flow");
    ev->add_option("--max-depth", lopt.max_depth, "reference search depth");
    ev->add_option("--max-pairs", lopt.max_pairs_per_group, "merge pairs per group");
    ev->add_option("--seed-corpus", seed, "extra training sources present in every fold");
    ev->add_flag("--table", table, "also print an aligned table");
    ev->add_option("corpus", corpus, "directory of sources")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "flowmend: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*lrn) return cmd_learn(corpus, store, lopt, out, err);
        auto specs = load_spec(spec_path);
        if (*scan) return cmd_scan(specs, paths, out);
        if (*mine) return cmd_mine(specs, corpus, out_dir, out);
        if (*fix) return cmd_fix(specs, store, corpus, k, out_dir, out);
        EvalOptions eo;
        eo.k = k;
        eo.learn = lopt;
        if (!seed.empty()) {
            eo.seed = list_sources(seed);
            eo.seed_base = seed;
        }
        return cmd_eval(specs, corpus, eo, table, out);
    } catch (const std::exception& e) {
        err << "flowmend: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace flowmend

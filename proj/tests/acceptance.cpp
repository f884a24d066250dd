// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <unistd.h>

#include "flowmend/cli.hpp"
#include "flowmend/learn.hpp"

#include "fixture_util.hpp"
#include "worked_strategies.hpp"

namespace fs = std::filesystem;
using namespace flowmend;

namespace {

constexpr double kFixSeconds = 5.0;
constexpr double kRoundTripSeconds = 30.0;
constexpr double kEvalSeconds = 120.0;
constexpr int kRandomGraphs = 500;
constexpr int kMaxGraphNodes = 12;
constexpr double kMinSuccessRate = 0.80;
constexpr double kMinMeanFixes = 2.0;
constexpr std::size_t kMinUdcFixtures = 20;
constexpr std::size_t kMinXssFixtures = 10;
constexpr int kWorkedIndex = 13;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<PairedExample> mine(const std::vector<std::string>& rel, const std::string& spec) {
    std::vector<fs::path> files;
    for (const std::string& r : rel) files.push_back(testutil::root_path(r));
    return mine_files(files, testutil::root_path("fixtures"), testutil::spec(spec)).result.pairs;
}

std::vector<std::string> corpus(const std::string& dir) {
    std::vector<std::string> out;
    for (const fs::path& p : list_sources(testutil::root_path(dir)))
        out.push_back(fs::relative(p, testutil::root_path("")).generic_string());
    return out;
}

std::vector<RankedStrategy> rank(std::vector<Strategy> ss) {
    std::vector<RankedStrategy> out;
    for (std::size_t i = 0; i < ss.size(); ++i) out.push_back({"s" + std::to_string(i), std::move(ss[i])});
    return out;
}

Outcome worked_example() {
    auto t0 = Clock::now();
    auto pairs = mine({"fixtures/udc/safe/own_router.js", "fixtures/udc/safe/own_worker.js"}, "udc");
    if (pairs.size() != 2) return {false, "expected 2 training pairs, got " + std::to_string(pairs.size())};
    auto strategies = rank(learn(pairs));
    auto a = testutil::annotated("fixtures/udc/unsafe/fig4a.js", "udc");
    auto vr = find_vulnerabilities(a);
    if (vr.pairs.size() != 1) return {false, "fig4a should have one flagged flow"};
    FlowTriple t = make_triple(a, vr.pairs[0].source, vr.pairs[0].sink, std::nullopt);
    auto cands = fix_flow(a, t, strategies, 20);
    double secs = since(t0);
    if (cands.empty()) return {false, "no validated candidate"};
    AstDoc top = parse(cands.front().patched_source);
    AstDoc want = parse(testutil::slurp("fixtures/udc/safe/fig4b.js"));
    bool iso = same_tree(top, want);
    // The guard sits at slot 13 of the handler body.
    NodeId guard = kNoNode;
    for (NodeId n = 0; n < static_cast<NodeId>(top.size()); ++n)
        if (top.type(n) == NodeType::IfStmt) guard = n;
    bool slot = guard != kNoNode && child_index(top, top.parent(guard), guard) == kWorkedIndex;
    std::ostringstream d;
    d << strategies.size() << " strategies, top cost " << cands.front().cost << ", isomorphic=" << iso
      << ", slot " << kWorkedIndex << "=" << slot << ", " << secs << "s";
    return {iso && slot && secs < kFixSeconds, d.str()};
}

Outcome strategy_semantics() {
    auto a = testutil::annotated("fixtures/udc/unsafe/fig4a.js", "udc");
    auto ts = slice(a);
    if (ts.size() != 1) return {false, "fig4a should slice to one flow"};
    const FlowTriple& t = ts[0];
    AstDoc want = parse(testutil::slurp("fixtures/udc/safe/fig4b.js"));
    bool ls = t.doc.value(eval_loc(testutil::s1_ls(), t)) == "foo";
    bool idx = eval_index(testutil::s1_index(), eval_loc(testutil::s1_le(), t), t) == kWorkedIndex;
    bool lr2 = t.doc.value(eval_loc(testutil::s1_lr2(), t)) == "data.id";
    bool s1 = same_tree(apply_strategy(testutil::s1(), t), want);
    bool s2 = same_tree(apply_strategy(testutil::s2(), t), want);
    long c1 = cost(testutil::s1()), c2 = cost(testutil::s2());
    std::ostringstream d;
    d << "Ls=foo " << ls << ", I=13 " << idx << ", Lr2=data.id " << lr2 << ", S1 " << s1 << ", S2 " << s2
      << ", cost " << c1 << " < " << c2;
    return {ls && idx && lr2 && s1 && s2 && c1 < c2, d.str()};
}

Outcome perturbation_round_trip() {
    auto t0 = Clock::now();
    std::size_t total = 0, good = 0;
    for (auto [dirs, spec] : std::vector<std::pair<std::vector<std::string>, std::string>>{
             {{"fixtures/udc/safe", "fixtures/udc/kleene"}, "udc"}, {{"fixtures/xss/safe"}, "xss"}}) {
        std::vector<std::string> files;
        for (const std::string& d : dirs) {
            auto more = corpus(d);
            files.insert(files.end(), more.begin(), more.end());
        }
        for (const PairedExample& p : mine(files, spec)) {
            ++total;
            bool rt = same_tree(apply_edit(p.unsafe.doc, p.edit), p.safe);
            bool flagged = flags(find_vulnerabilities(p.unsafe), p.edit.triple.source, p.edit.triple.sink);
            good += rt && flagged;
        }
    }
    double secs = since(t0);
    std::ostringstream d;
    d << good << "/" << total << " pairs round-trip and are flagged, " << secs << "s";
    return {total > 0 && good == total && secs < kRoundTripSeconds, d.str()};
}

/// Every simple path from `s`, reported through `visit(path)`.
void simple_paths(const AstDoc& d, NodeId s, const std::function<void(const std::vector<NodeId>&)>& visit) {
    std::vector<NodeId> path{s};
    std::vector<bool> on(d.size(), false);
    on[s] = true;
    std::function<void()> go = [&] {
        visit(path);
        for (NodeId y : d.sem_children(path.back())) {
            if (on[y]) continue;
            on[y] = true;
            path.push_back(y);
            go();
            path.pop_back();
            on[y] = false;
        }
    };
    go();
}

Outcome judgement_oracle() {
    std::mt19937 rng(20240611);
    int agree = 0;
    for (int g = 0; g < kRandomGraphs; ++g) {
        int leaves = std::uniform_int_distribution<int>(0, kMaxGraphNodes - 3)(rng);
        Tree arr{NodeType::ArrayLit, "", {}};
        for (int i = 0; i < leaves; ++i) arr.kids.push_back(Tree{NodeType::Literal, std::to_string(i), {}});
        Tree root{NodeType::Program, "", {Tree{NodeType::Expr, "", {arr}}}};
        AstDoc d = AstDoc::from_tree(root);
        const int n = static_cast<int>(d.size());
        double density = std::uniform_real_distribution<double>(0.05, 0.35)(rng);
        std::bernoulli_distribution edge(density), src(0.25), snk(0.25), blk(0.2), san(0.5);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && edge(rng)) d.add_sem_edge(a, b);
        for (int x = 0; x < n; ++x) {
            if (src(rng)) d.annotate(x, Annotation::Source);
            if (snk(rng)) d.annotate(x, Annotation::Sink);
            if (blk(rng)) d.annotate(x, san(rng) ? Annotation::Sanitizer : Annotation::Guard);
        }

        auto blocked = [&](NodeId x) { return d.has(x, Annotation::Sanitizer) || d.has(x, Annotation::Guard); };
        std::vector<std::vector<bool>> any(n, std::vector<bool>(n, false)), free(n, std::vector<bool>(n, false));
        for (NodeId s = 0; s < n; ++s)
            simple_paths(d, s, [&](const std::vector<NodeId>& p) {
                any[s][p.back()] = true;
                bool clear = true;
                for (NodeId x : p) clear = clear && !blocked(x);
                if (clear) free[s][p.back()] = true;
            });
        std::set<std::pair<NodeId, NodeId>> want_v;
        std::set<std::tuple<NodeId, NodeId, NodeId>> want_w;
        for (NodeId s = 0; s < n; ++s) {
            if (!d.has(s, Annotation::Source)) continue;
            for (NodeId k = 0; k < n; ++k) {
                if (!d.has(k, Annotation::Sink)) continue;
                if (s == k || free[s][k]) want_v.insert({s, k});
                for (NodeId w = 0; w < n; ++w)
                    if (blocked(w) && any[s][w] && any[w][k]) want_w.insert({s, w, k});
            }
        }

        std::set<std::pair<NodeId, NodeId>> got_v;
        bool paths_ok = true;
        for (const Vulnerability& v : find_vulnerabilities(d).pairs) {
            got_v.insert({v.source, v.sink});
            paths_ok = paths_ok && !v.path.empty() && v.path.front() == v.source && v.path.back() == v.sink;
            for (std::size_t i = 0; i + 1 < v.path.size(); ++i) {
                const auto& ks = d.sem_children(v.path[i]);
                paths_ok = paths_ok && std::find(ks.begin(), ks.end(), v.path[i + 1]) != ks.end();
            }
        }
        std::set<std::tuple<NodeId, NodeId, NodeId>> got_w;
        for (const Witness& w : find_witnesses(d).triples) got_w.insert({w.source, w.witness, w.sink});
        agree += got_v == want_v && got_w == want_w && paths_ok;
    }
    std::ostringstream d;
    d << agree << "/" << kRandomGraphs << " random graphs agree with the all-paths oracle";
    return {agree == kRandomGraphs, d.str()};
}

Outcome merge_soundness() {
    std::size_t checked = 0, sound = 0, emitted = 0, backed = 0;
    for (auto [dir, spec] : std::vector<std::pair<std::string, std::string>>{{"fixtures/udc/safe", "udc"},
                                                                            {"fixtures/xss/safe", "xss"}}) {
        auto pairs = mine(corpus(dir), spec);
        std::vector<EditMeta> metas;
        for (const PairedExample& p : pairs) metas.push_back(preprocess(p));
        std::vector<const EditMeta*> ptrs;
        for (const EditMeta& m : metas) ptrs.push_back(&m);
        // Independent check: emitted text of both applications equals the safe text.
        auto rederives = [](const Strategy& s, const PairedExample& p) {
            try {
                return emit(apply_strategy(s, p.edit.triple)) == emit(p.safe);
            } catch (const Error&) {
                return false;
            }
        };
        for (auto [i, j] : rank_similar(ptrs))
            for (const Strategy& s : merge_edits(metas[i], metas[j])) {
                ++checked;
                sound += rederives(s, pairs[i]) && rederives(s, pairs[j]);
            }
        for (const Strategy& s : learn(pairs)) {
            ++emitted;
            for (const PairedExample& p : pairs)
                if (rederives(s, p)) {
                    ++backed;
                    break;
                }
        }
    }
    std::ostringstream d;
    d << sound << "/" << checked << " merged strategies re-derive both parents; " << backed << "/" << emitted
      << " learned strategies re-derive a training pair";
    return {checked > 0 && sound == checked && backed == emitted, d.str()};
}

Outcome generalization() {
    auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream d;
    for (auto [dir, spec, min_files] : std::vector<std::tuple<std::string, std::string, std::size_t>>{
             {"fixtures/udc/safe", "udc", kMinUdcFixtures}, {"fixtures/xss/safe", "xss", kMinXssFixtures}}) {
        auto files = list_sources(testutil::root_path(dir));
        EvalReport r = evaluate(files, testutil::root_path(dir), testutil::spec(spec));
        d << spec << " " << r.fixed << "/" << r.total << " (" << r.success_rate << "), mean fixes "
          << r.mean_unique_fixes << "; ";
        ok = ok && files.size() >= min_files && r.success_rate >= kMinSuccessRate &&
             r.mean_unique_fixes >= kMinMeanFixes;
    }
    double secs = since(t0);
    d << secs << "s";
    return {ok && secs < kEvalSeconds, d.str()};
}

int cli(const std::vector<std::string>& args, std::string& out) {
    std::vector<std::string> own{"flowmend"};
    own.insert(own.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : own) argv.push_back(s.data());
    std::ostringstream o, e;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    out += o.str();
    return code;
}

/// Every file under `dir` keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
    return out;
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / ("flowmend-acceptance-" + std::to_string(::getpid()));
    std::vector<std::map<std::string, std::string>> runs;
    std::vector<std::string> outs;
    // Both runs use the same directory, since reports name the files they write.
    const fs::path w = base / "work";
    for (int run = 0; run < 2; ++run) {
        fs::remove_all(w);
        fs::create_directories(w);
        std::string out;
        for (auto [spec, dir, unsafe] : std::vector<std::tuple<std::string, std::string, std::string>>{
                 {"udc", "fixtures/udc/safe", "fixtures/udc/unsafe/fig4a.js"},
                 {"xss", "fixtures/xss/safe", "fixtures/xss/unsafe/fig6a.js"}}) {
            const std::string sp = testutil::root_path("specs/" + spec + ".flowspec");
            cli({"mine", "--spec", sp, "--out", (w / "pairs").string(), testutil::root_path(dir)}, out);
            cli({"learn", "--out", (w / (spec + ".store")).string(), (w / "pairs" / fs::path(spec == "udc" ? "udc-membership" : "xss")).string()}, out);
            cli({"fix", "--spec", sp, "--store", (w / (spec + ".store")).string(), "--out", (w / "fixes").string(),
                 testutil::root_path(unsafe)},
                out);
            cli({"eval", "--spec", sp, "--table", testutil::root_path(dir)}, out);
        }
        runs.push_back(snapshot(w));
        outs.push_back(out);
        fs::remove_all(w);
    }
    fs::remove_all(base);
    bool same = runs[0] == runs[1] && outs[0] == outs[1];
    std::ostringstream d;
    d << runs[0].size() << " output files and " << outs[0].size() << " bytes of reports compared";
    return {same && !runs[0].empty(), d.str()};
}

bool has_sem_kleene(const LocExpr& l) {
    for (const LocExpr& b : l.base)
        if (has_sem_kleene(b)) return true;
    for (const TraversalFn& f : l.steps)
        if (f.kleene && f.kind == EdgeKind::SemChild) return true;
    return false;
}

Outcome kleene_generalization() {
    auto pairs = mine({"fixtures/udc/kleene/chain7.js", "fixtures/udc/kleene/chain3.js"}, "udc");
    auto held = mine({"fixtures/udc/kleene/chain5.js"}, "udc");
    if (pairs.size() != 2 || held.size() != 1) return {false, "chain fixtures did not mine"};
    std::size_t e7 = pairs[0].edit.triple.doc.sem_edge_count(), e3 = pairs[1].edit.triple.doc.sem_edge_count();
    std::size_t e5 = held[0].edit.triple.doc.sem_edge_count();
    std::vector<Strategy> kleene;
    for (Strategy& s : learn(pairs))
        if (has_sem_kleene(s.loc)) kleene.push_back(std::move(s));
    auto cands = fix_flow(held[0].unsafe, held[0].edit.triple, rank(kleene), 20);
    bool fixed = false;
    for (const FixCandidate& c : cands) fixed = fixed || c.confined;
    std::ostringstream d;
    d << "semantic edges " << e7 << "/" << e3 << " -> " << e5 << ", " << kleene.size()
      << " strategies with a SemChild Kleene step, " << cands.size() << " validated fixes on the held-out chain";
    return {e7 == 7 && e3 == 3 && e5 == 5 && !kleene.empty() && fixed, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"worked-example fidelity", worked_example},
        {"strategy semantics", strategy_semantics},
        {"perturbation round-trip", perturbation_round_trip},
        {"judgement correctness", judgement_oracle},
        {"merge soundness", merge_soundness},
        {"desk-scale generalization", generalization},
        {"determinism", determinism},
        {"kleene generalization", kleene_generalization},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed ? 1 : 0;
}

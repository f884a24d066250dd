#include <cstdio>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "flowmend/cli.hpp"

namespace fs = std::filesystem;

namespace flowmend {

EvalReport evaluate(const std::vector<fs::path>& files, const fs::path& base, const VulnSpec& spec,
                    const EvalOptions& opt) {
    EvalReport rep;
    rep.spec = spec.name;

    // Mining is per file, so each file's pairs are the same in every fold.
    std::vector<MineRun> runs;
    runs.reserve(files.size());
    for (const fs::path& f : files) runs.push_back(mine_files({f}, base, spec));
    MineRun seed = mine_files(opt.seed, opt.seed_base, spec);

    Learner learner(opt.learn);
    for (std::size_t i = 0; i < files.size(); ++i) {
        EvalRow row;
        row.file = fs::is_directory(base) ? fs::relative(files[i], base).generic_string() : files[i].filename().string();
        const MineRun& held = runs[i];
        row.pairs = held.result.pairs.size();
        if (!held.parse_errors.empty()) {
            row.outcome = "error";
            row.note = held.parse_errors.front();
        } else if (held.result.pairs.empty()) {
            row.outcome = "error";
            row.note = held.result.skipped.empty() ? "no witnessed flow" : held.result.skipped.front().reason;
        } else {
            std::vector<const PairedExample*> train;
            for (const PairedExample& p : seed.result.pairs) train.push_back(&p);
            for (std::size_t j = 0; j < files.size(); ++j)
                if (j != i)
                    for (const PairedExample& p : runs[j].result.pairs) train.push_back(&p);
            rep.training_pairs = std::max(rep.training_pairs, train.size());
            try {
                std::vector<RankedStrategy> ranked;
                auto learned = learner.learn(train);
                for (std::size_t s = 0; s < learned.size(); ++s)
                    ranked.push_back({spec.name + "#" + std::to_string(s), std::move(learned[s])});
                for (const PairedExample& p : held.result.pairs) {
                    auto cands = fix_flow(p.unsafe, p.edit.triple, ranked, opt.k, row.file);
                    row.unique_fixes += cands.size();
                    bool ok = false;
                    for (const FixCandidate& c : cands) ok = ok || c.confined;
                    row.fixed_pairs += ok;
                }
                row.outcome = row.fixed_pairs == row.pairs ? "fixed" : "not-fixed";
            } catch (const std::exception& e) {
                row.outcome = "error";
                row.note = e.what();
            }
        }
        rep.rows.push_back(std::move(row));
    }

    rep.total = rep.rows.size();
    std::size_t fixes = 0;
    for (const EvalRow& r : rep.rows) {
        rep.fixed += r.outcome == "fixed";
        fixes += r.unique_fixes;
    }
    if (rep.total) {
        rep.success_rate = static_cast<double>(rep.fixed) / static_cast<double>(rep.total);
        rep.mean_unique_fixes = static_cast<double>(fixes) / static_cast<double>(rep.total);
    }
    return rep;
}

namespace {

std::string fixed3(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

}  // namespace

std::string eval_jsonl(const EvalReport& r) {
    std::string out;
    for (const EvalRow& row : r.rows) {
        nlohmann::json j{{"kind", "eval-file"}, {"spec", r.spec},         {"file", row.file},
                         {"outcome", row.outcome}, {"pairs", row.pairs}, {"fixed_pairs", row.fixed_pairs},
                         {"unique_fixes", row.unique_fixes}};
        if (!row.note.empty()) j["note"] = row.note;
        out += j.dump() + "\n";
    }
    // Rates are written as fixed-precision strings so reports compare byte for byte.
    nlohmann::json s{{"kind", "eval-summary"},
                     {"spec", r.spec},
                     {"total", r.total},
                     {"fixed", r.fixed},
                     {"success_rate", fixed3(r.success_rate)},
                     {"mean_unique_fixes", fixed3(r.mean_unique_fixes)},
                     {"training_pairs", r.training_pairs}};
    out += s.dump() + "\n";
    return out;
}

std::string eval_table(const EvalReport& r) {
    std::size_t w = 4;
    for (const EvalRow& row : r.rows) w = std::max(w, row.file.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(w)) << "file" << "  " << std::setw(9) << "outcome" << "  "
        << std::right << std::setw(5) << "pairs" << "  " << std::setw(5) << "fixes" << "\n";
    for (const EvalRow& row : r.rows)
        out << std::left << std::setw(static_cast<int>(w)) << row.file << "  " << std::setw(9) << row.outcome << "  "
            << std::right << std::setw(5) << row.pairs << "  " << std::setw(5) << row.unique_fixes << "\n";
    out << "spec " << r.spec << ": " << r.fixed << "/" << r.total << " fixed, success rate "
        << fixed3(r.success_rate) << ", mean unique fixes " << fixed3(r.mean_unique_fixes) << "\n";
    return out.str();
}

}  // namespace flowmend

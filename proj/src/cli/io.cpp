#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "flowmend/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace flowmend {
namespace {

/// Directory name for a pair id; path separators would nest directories.
std::string dir_name(const std::string& id) {
    std::string s = id;
    std::replace(s.begin(), s.end(), '/', '_');
    std::replace(s.begin(), s.end(), '\\', '_');
    return s;
}

json span_of(const AstDoc& reparsed, const std::vector<int>& path) {
    const Span& s = reparsed.span(reparsed.node_at(path));
    return json{{"path", path}, {"line", s.line}, {"col", s.col}, {"end_line", s.end_line}, {"end_col", s.end_col}};
}

bool is_statement(NodeType t) {
    switch (t) {
        case NodeType::BlockStmt:
        case NodeType::IfStmt:
        case NodeType::Expr:
        case NodeType::DeclExpr:
        case NodeType::ReturnStmt:
        case NodeType::ThrowStmt:
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(p.string() + ": cannot read");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(p.string() + ": cannot write");
    out << text;
}

std::vector<fs::path> list_sources(const fs::path& dir) {
    std::vector<fs::path> out;
    if (fs::is_regular_file(dir)) return {dir};
    if (!fs::is_directory(dir)) return out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".js") out.push_back(e.path());
    std::sort(out.begin(), out.end(), [&](const fs::path& a, const fs::path& b) {
        return fs::relative(a, dir).generic_string() < fs::relative(b, dir).generic_string();
    });
    return out;
}

MineRun mine_files(const std::vector<fs::path>& files, const fs::path& base, const VulnSpec& spec) {
    MineRun run;
    std::vector<CorpusFile> corpus;
    for (const fs::path& f : files) {
        ++run.files;
        std::string name = fs::is_directory(base) ? fs::relative(f, base).generic_string() : f.filename().string();
        try {
            corpus.push_back({name, annotate(parse(read_file(f)), spec)});
        } catch (const Error& e) {
            run.parse_errors.push_back(name + ": " + e.what());
        }
    }
    run.result = make_pairs(corpus);
    return run;
}

void write_pairs(const fs::path& root, const VulnSpec& spec, const MineResult& r,
                 const std::vector<std::string>& parse_errors, std::size_t files) {
    const fs::path dir = root / spec.name;
    // Only a previous mine output is cleared.
    if (fs::exists(dir / "manifest.json")) fs::remove_all(dir);
    fs::create_directories(dir);
    write_file(dir / "spec.flowspec", format_spec(spec));

    json ids = json::array();
    for (const PairedExample& p : r.pairs) {
        const fs::path pd = dir / dir_name(p.id);
        const std::string unsafe_text = emit(p.unsafe.doc);
        write_file(pd / "unsafe.js", unsafe_text);
        write_file(pd / "safe.js", emit(p.safe));
        const AstDoc reparsed = parse(unsafe_text);
        const AstDoc& view = p.edit.triple.doc;
        json meta{
            {"id", p.id},
            {"edit_type", std::string(to_string(p.edit.type))},
            {"editloc", view.path_of(p.edit.editloc)},
            {"index", p.edit.index},
            {"editprog", emit_inline(p.edit.editprog)},
            {"editprog_kind", is_statement(p.edit.editprog.type) ? "statement" : "expression"},
            {"source", span_of(reparsed, view.path_of(p.edit.triple.source))},
            {"sink", span_of(reparsed, view.path_of(p.edit.triple.sink))},
        };
        write_file(pd / "edit.meta", meta.dump(2) + "\n");
        ids.push_back(p.id);
    }

    json skipped = json::array();
    for (const SkippedTriple& s : r.skipped)
        skipped.push_back({{"file", s.file}, {"reason", s.reason}, {"source", s.source}, {"witness", s.witness},
                           {"sink", s.sink}});
    json manifest{
        {"spec", spec.name},
        {"files", files},
        {"witness_triples", r.witness_triples},
        {"pairs", r.pairs.size()},
        {"pair_ids", ids},
        {"skipped", skipped},
        {"parse_errors", parse_errors},
    };
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<PairSet> read_pairs(const fs::path& root) {
    std::vector<fs::path> dirs;
    if (fs::exists(root / "spec.flowspec")) {
        dirs.push_back(root);
    } else if (fs::is_directory(root)) {
        for (const auto& e : fs::directory_iterator(root))
            if (e.is_directory() && fs::exists(e.path() / "spec.flowspec")) dirs.push_back(e.path());
        std::sort(dirs.begin(), dirs.end());
    } else {
        throw Error(root.string() + ": not a pairs directory");
    }

    std::vector<PairSet> out;
    for (const fs::path& dir : dirs) {
        PairSet set;
        set.spec = parse_spec(read_file(dir / "spec.flowspec")).at(0);
        std::vector<fs::path> pair_dirs;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory() && fs::exists(e.path() / "edit.meta")) pair_dirs.push_back(e.path());
        std::sort(pair_dirs.begin(), pair_dirs.end());
        for (const fs::path& pd : pair_dirs) {
            try {
                json meta = json::parse(read_file(pd / "edit.meta"));
                PairedExample ex;
                ex.id = meta.at("id").get<std::string>();
                ex.unsafe = annotate(parse(read_file(pd / "unsafe.js")), set.spec);
                ex.safe = parse(read_file(pd / "safe.js"));
                const AstDoc& d = ex.unsafe.doc;
                const std::string type = meta.at("edit_type").get<std::string>();
                if (type != "Insert" && type != "Replace") throw Error("unknown edit_type " + type);
                ex.edit.type = type == "Insert" ? EditType::Insert : EditType::Replace;
                ex.edit.editloc = d.node_at(meta.at("editloc").get<std::vector<int>>());
                ex.edit.index = meta.at("index").get<int>();
                ex.edit.editprog = parse_fragment(meta.at("editprog").get<std::string>(),
                                                  meta.at("editprog_kind").get<std::string>() == "statement");
                normalize(ex.edit.editprog);
                NodeId src = d.node_at(meta.at("source").at("path").get<std::vector<int>>());
                NodeId snk = d.node_at(meta.at("sink").at("path").get<std::vector<int>>());
                if (ex.edit.editloc == kNoNode || src == kNoNode || snk == kNoNode) throw Error("dangling path");
                ex.edit.triple = make_triple(ex.unsafe, src, snk, std::nullopt);
                if (!same_tree(apply_edit(d, ex.edit), ex.safe)) throw Error("edit does not reproduce safe.js");
                set.pairs.push_back(std::move(ex));
            } catch (const std::exception& e) {
                set.warnings.push_back(pd.filename().string() + ": corrupt pair dropped (" + e.what() + ")");
            }
        }
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace flowmend

#pragma once

#include <string>
#include <vector>

#include "flowmend/dataflow.hpp"
#include "flowmend/perturb.hpp"

namespace flowmend {

struct LocExpr;

/// Constant(z), or OffsetIndex(anchor, z) when `anchor` holds one location.
struct IndexExpr {
    int z = 0;
    std::vector<LocExpr> anchor;

    bool is_offset() const { return !anchor.empty(); }
    static IndexExpr constant(int z);
    static IndexExpr offset(LocExpr anchor, int z);
    bool operator==(const IndexExpr& o) const;
};

/// TypeIs(type) when `neighbour` is false; otherwise the node reached by one EdgeStep
/// (probe_kind, probe_index) has `type`.
struct Clause {
    bool neighbour = false;
    NodeType type = NodeType::Program;
    EdgeKind probe_kind = EdgeKind::SynParent;
    int probe_index = -1;

    bool operator==(const Clause&) const = default;
    auto operator<=>(const Clause&) const = default;
};

using ClauseConj = std::vector<Clause>;

struct TraversalFn {
    bool kleene = false;
    EdgeKind kind = EdgeKind::SynParent;
    /// EdgeStep only. Parent steps: SynParent carries -1, SemParent an ordinal over predecessors.
    IndexExpr index;
    /// KleeneStep only; non-empty.
    ClauseConj clauses;

    static TraversalFn edge(EdgeKind k, IndexExpr ix);
    static TraversalFn edge(EdgeKind k, int z) { return edge(k, IndexExpr::constant(z)); }
    static TraversalFn star(EdgeKind k, ClauseConj c);
    bool operator==(const TraversalFn& o) const;
};

/// Source anchor when `base` is empty; steps apply first to last.
struct LocExpr {
    std::vector<LocExpr> base;
    std::vector<TraversalFn> steps;

    static LocExpr source() { return {}; }
    /// `this` followed by more steps, as a nested location.
    LocExpr then(std::vector<TraversalFn> more) const;
    bool operator==(const LocExpr& o) const;
};

struct EAst {
    bool reference = false;
    NodeType type = NodeType::Program;
    std::string value;
    std::vector<EAst> kids;
    /// Reference only; exactly one element.
    std::vector<LocExpr> loc;

    static EAst constant(NodeType t, std::string value, std::vector<EAst> kids = {});
    static EAst ref(LocExpr l);
    bool operator==(const EAst& o) const;
};

struct Strategy {
    EditType type = EditType::Replace;
    LocExpr loc;
    IndexExpr index;
    EAst out;

    bool operator==(const Strategy& o) const;
};

/// Node reached by `loc`. Evaluation uses the triple's view document.
NodeId eval_loc(const LocExpr& loc, const FlowTriple& triple);
int eval_index(const IndexExpr& ix, NodeId at, const FlowTriple& triple);
/// Applies one traversal step from `at`.
NodeId eval_step(const TraversalFn& f, NodeId at, const FlowTriple& triple);
bool satisfies(const ClauseConj& c, NodeId n, const FlowTriple& triple);

Tree materialize(const EAst& out, const FlowTriple& triple);

/// Un-validated result; any failure becomes StrategyInapplicable.
AstDoc apply_strategy(const Strategy& s, const FlowTriple& triple);

/// Where apply_strategy edits: editloc node and index, in the triple's document.
std::pair<NodeId, int> edit_site(const Strategy& s, const FlowTriple& triple);

long cost(const Strategy& s);
long cost(const LocExpr& l);
long cost(const IndexExpr& ix);
long cost(const EAst& e);

std::string serialize(const Strategy& s);
std::string serialize(const LocExpr& l);
std::string serialize(const EAst& e);
Strategy deserialize(const std::string& text);

/// One store entry; the header line carries the flowspec name and cost.
struct StoreRecord {
    std::string spec;
    Strategy strategy;
};

void write_store(const std::string& path, const std::vector<StoreRecord>& records);
std::vector<StoreRecord> read_store(const std::string& path);
std::string format_store(const std::vector<StoreRecord>& records);
std::vector<StoreRecord> parse_store(const std::string& text);

}  // namespace flowmend

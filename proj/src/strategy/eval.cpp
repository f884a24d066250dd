#include <cstdlib>
#include <deque>

#include "flowmend/strategy.hpp"

namespace flowmend {

IndexExpr IndexExpr::constant(int z) { return IndexExpr{z, {}}; }
IndexExpr IndexExpr::offset(LocExpr anchor, int z) { return IndexExpr{z, {std::move(anchor)}}; }
bool IndexExpr::operator==(const IndexExpr& o) const { return z == o.z && anchor == o.anchor; }

TraversalFn TraversalFn::edge(EdgeKind k, IndexExpr ix) {
    TraversalFn f;
    f.kind = k;
    f.index = std::move(ix);
    return f;
}

TraversalFn TraversalFn::star(EdgeKind k, ClauseConj c) {
    TraversalFn f;
    f.kleene = true;
    f.kind = k;
    f.clauses = std::move(c);
    return f;
}

bool TraversalFn::operator==(const TraversalFn& o) const {
    if (kleene != o.kleene || kind != o.kind) return false;
    return kleene ? clauses == o.clauses : index == o.index;
}

LocExpr LocExpr::then(std::vector<TraversalFn> more) const {
    LocExpr l;
    l.base.push_back(*this);
    l.steps = std::move(more);
    return l;
}

bool LocExpr::operator==(const LocExpr& o) const { return base == o.base && steps == o.steps; }

EAst EAst::constant(NodeType t, std::string value, std::vector<EAst> kids) {
    EAst e;
    e.type = t;
    e.value = std::move(value);
    e.kids = std::move(kids);
    return e;
}

EAst EAst::ref(LocExpr l) {
    EAst e;
    e.reference = true;
    e.loc.push_back(std::move(l));
    return e;
}

bool EAst::operator==(const EAst& o) const {
    if (reference != o.reference) return false;
    if (reference) return loc == o.loc;
    return type == o.type && value == o.value && kids == o.kids;
}

bool Strategy::operator==(const Strategy& o) const {
    return type == o.type && loc == o.loc && index == o.index && out == o.out;
}

namespace {

/// Neighbours of `n` along `kind`, in edge-index order.
std::vector<NodeId> neighbours(const AstDoc& d, NodeId n, EdgeKind kind) {
    switch (kind) {
        case EdgeKind::SynChild: return d.children(n);
        case EdgeKind::SemChild: return d.sem_children(n);
        case EdgeKind::SemParent: return d.sem_parents(n);
        case EdgeKind::SynParent:
            if (d.parent(n) == kNoNode) return {};
            return {d.parent(n)};
    }
    return {};
}

}  // namespace

NodeId eval_step(const TraversalFn& f, NodeId at, const FlowTriple& triple) {
    const AstDoc& d = triple.doc;
    if (f.kleene) {
        std::vector<bool> seen(d.size(), false);
        std::deque<NodeId> q{at};
        seen[at] = true;
        while (!q.empty()) {
            NodeId x = q.front();
            q.pop_front();
            if (satisfies(f.clauses, x, triple)) return x;
            for (NodeId y : neighbours(d, x, f.kind))
                if (!seen[y]) {
                    seen[y] = true;
                    q.push_back(y);
                }
        }
        throw TraversalStuck(std::string("no node satisfies the ") + std::string(to_string(f.kind)) + " clause");
    }
    if (f.kind == EdgeKind::SynParent) {
        if (d.parent(at) == kNoNode) throw TraversalStuck("root has no syntactic parent");
        return d.parent(at);
    }
    auto ns = neighbours(d, at, f.kind);
    int i = eval_index(f.index, at, triple);
    if (i < 0 || static_cast<std::size_t>(i) >= ns.size()) {
        if (ns.empty()) throw TraversalStuck(std::string("no ") + std::string(to_string(f.kind)) + " edge");
        throw IndexOutOfRange(std::string(to_string(f.kind)) + " " + std::to_string(i) + " of " +
                              std::to_string(ns.size()));
    }
    return ns[static_cast<std::size_t>(i)];
}

bool satisfies(const ClauseConj& c, NodeId n, const FlowTriple& triple) {
    for (const Clause& cl : c) {
        NodeId probe = n;
        if (cl.neighbour) {
            try {
                probe = eval_step(TraversalFn::edge(cl.probe_kind, cl.probe_index), n, triple);
            } catch (const Error&) {
                return false;
            }
        }
        if (triple.doc.type(probe) != cl.type) return false;
    }
    return true;
}

NodeId eval_loc(const LocExpr& loc, const FlowTriple& triple) {
    NodeId n = loc.base.empty() ? triple.source : eval_loc(loc.base[0], triple);
    for (const TraversalFn& f : loc.steps) n = eval_step(f, n, triple);
    return n;
}

int eval_index(const IndexExpr& ix, NodeId at, const FlowTriple& triple) {
    if (!ix.is_offset()) return ix.z;
    NodeId a = eval_loc(ix.anchor[0], triple);
    return child_index_containing(triple.doc, at, a) + ix.z;
}

Tree materialize(const EAst& out, const FlowTriple& triple) {
    if (out.reference) return triple.doc.subtree(eval_loc(out.loc.at(0), triple));
    Tree t;
    t.type = out.type;
    t.token = out.value;
    for (const EAst& k : out.kids) t.kids.push_back(materialize(k, triple));
    return t;
}

std::pair<NodeId, int> edit_site(const Strategy& s, const FlowTriple& triple) {
    try {
        NodeId at = eval_loc(s.loc, triple);
        return {at, eval_index(s.index, at, triple)};
    } catch (const StrategyInapplicable&) {
        throw;
    } catch (const Error& e) {
        throw StrategyInapplicable(e.what());
    }
}

AstDoc apply_strategy(const Strategy& s, const FlowTriple& triple) {
    auto [at, index] = edit_site(s, triple);
    try {
        Tree prog = materialize(s.out, triple);
        if (s.type == EditType::Replace) return replace_child(triple.doc, at, index, prog);
        return insert_child(triple.doc, at, index, prog);
    } catch (const Error& e) {
        throw StrategyInapplicable(e.what());
    }
}

long cost(const LocExpr& l) {
    long c = l.base.empty() ? 0 : cost(l.base[0]);
    for (const TraversalFn& f : l.steps) c += f.kleene ? 1 : 2 + cost(f.index);
    return c;
}

long cost(const IndexExpr& ix) { return std::labs(ix.z) + (ix.is_offset() ? cost(ix.anchor[0]) : 0); }

long cost(const EAst& e) {
    if (e.reference) return cost(e.loc[0]);
    long c = 1;
    for (const EAst& k : e.kids) c += cost(k);
    return c;
}

long cost(const Strategy& s) { return cost(s.loc) + cost(s.index) + cost(s.out); }

}  // namespace flowmend

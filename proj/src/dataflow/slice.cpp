#include <algorithm>
#include <deque>

#include "flowmend/dataflow.hpp"

namespace flowmend {
namespace {

std::vector<bool> forward(const AstDoc& d, NodeId from, NodeId skip) {
    std::vector<bool> seen(d.size(), false);
    if (from == skip) return seen;
    std::deque<NodeId> q{from};
    seen[from] = true;
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        for (NodeId y : d.sem_children(x))
            if (y != skip && !seen[y]) {
                seen[y] = true;
                q.push_back(y);
            }
    }
    return seen;
}

std::vector<bool> backward(const AstDoc& d, NodeId to) {
    std::vector<bool> seen(d.size(), false);
    std::deque<NodeId> q{to};
    seen[to] = true;
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        for (NodeId y : d.sem_parents(x))
            if (!seen[y]) {
                seen[y] = true;
                q.push_back(y);
            }
    }
    return seen;
}

}  // namespace

FlowTriple make_triple(const AnnotatedAst& aast, NodeId source, NodeId sink, std::optional<NodeId> witness) {
    const AstDoc& d = aast.doc;
    FlowTriple t;
    t.source = source;
    t.sink = sink;
    t.witness = witness;
    t.doc = d;
    t.doc.clear_semantics();
    auto fwd = forward(d, source, kNoNode);
    auto bwd = backward(d, sink);
    for (NodeId a = 0; a < static_cast<NodeId>(d.size()); ++a) {
        if (!fwd[a]) continue;
        for (NodeId b : d.sem_children(a))
            if (bwd[b]) t.doc.add_sem_edge(a, b);
        for (int k = 0; k < 5; ++k)
            if (d.has(a, static_cast<Annotation>(k))) t.doc.annotate(a, static_cast<Annotation>(k));
    }
    for (NodeId a = 0; a < static_cast<NodeId>(d.size()); ++a)
        if (!fwd[a])
            for (int k = 0; k < 5; ++k)
                if (d.has(a, static_cast<Annotation>(k))) t.doc.annotate(a, static_cast<Annotation>(k));
    if (witness) t.doc.annotate(*witness, Annotation::Witness);
    return t;
}

std::vector<FlowTriple> slice(const AnnotatedAst& aast) {
    std::vector<FlowTriple> out;
    std::vector<NodeId> blockers = aast.sanitizers;
    blockers.insert(blockers.end(), aast.guards.begin(), aast.guards.end());
    std::sort(blockers.begin(), blockers.end());
    for (NodeId s : aast.sources) {
        auto fwd = forward(aast.doc, s, kNoNode);
        for (NodeId k : aast.sinks) {
            if (!fwd[k]) continue;
            std::optional<NodeId> witness;
            for (NodeId w : blockers) {
                if (w == s || w == k || !fwd[w]) continue;
                if (!forward(aast.doc, s, w)[k]) {
                    witness = w;
                    break;
                }
            }
            out.push_back(make_triple(aast, s, k, witness));
        }
    }
    return out;
}

}  // namespace flowmend

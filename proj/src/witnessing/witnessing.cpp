#include <algorithm>
#include <deque>

#include "flowmend/witnessing.hpp"

namespace flowmend {
namespace {

bool blocks(const AstDoc& d, NodeId n) { return d.has(n, Annotation::Sanitizer) || d.has(n, Annotation::Guard); }

std::vector<NodeId> annotated(const AstDoc& d, Annotation a) {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < static_cast<NodeId>(d.size()); ++n)
        if (d.has(n, a)) out.push_back(n);
    return out;
}

/// BFS predecessor table from `from`. With `free_only`, blocked nodes are neither entered nor left.
std::vector<NodeId> bfs(const AstDoc& d, NodeId from, bool free_only) {
    std::vector<NodeId> pred(d.size(), kNoNode - 1);
    pred[from] = kNoNode;
    if (free_only && blocks(d, from)) return pred;
    std::deque<NodeId> q{from};
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        for (NodeId y : d.sem_children(x)) {
            if (pred[y] != kNoNode - 1) continue;
            if (free_only && blocks(d, y)) continue;
            pred[y] = x;
            q.push_back(y);
        }
    }
    return pred;
}

bool reached(const std::vector<NodeId>& pred, NodeId n) { return pred[n] != kNoNode - 1; }

std::vector<NodeId> path_to(const std::vector<NodeId>& pred, NodeId n) {
    std::vector<NodeId> p;
    for (NodeId x = n; x != kNoNode; x = pred[x]) p.push_back(x);
    std::reverse(p.begin(), p.end());
    return p;
}

}  // namespace

VulnerabilityReport find_vulnerabilities(const AstDoc& d) {
    VulnerabilityReport r;
    auto sinks = annotated(d, Annotation::Sink);
    for (NodeId s : annotated(d, Annotation::Source)) {
        auto pred = bfs(d, s, true);
        for (NodeId k : sinks) {
            if (k == s) {
                r.pairs.push_back({s, k, {s}});
                continue;
            }
            if (reached(pred, k)) r.pairs.push_back({s, k, path_to(pred, k)});
        }
    }
    return r;
}

WitnessReport find_witnesses(const AstDoc& d) {
    WitnessReport r;
    auto sinks = annotated(d, Annotation::Sink);
    std::vector<NodeId> blockers;
    for (NodeId n = 0; n < static_cast<NodeId>(d.size()); ++n)
        if (blocks(d, n)) blockers.push_back(n);
    for (NodeId s : annotated(d, Annotation::Source)) {
        auto from_s = bfs(d, s, false);
        for (NodeId w : blockers) {
            if (!reached(from_s, w)) continue;
            auto from_w = bfs(d, w, false);
            for (NodeId k : sinks)
                if (reached(from_w, k)) r.triples.push_back({s, w, k, path_to(from_s, w), path_to(from_w, k)});
        }
    }
    std::sort(r.triples.begin(), r.triples.end(), [](const Witness& a, const Witness& b) {
        return std::tie(a.source, a.witness, a.sink) < std::tie(b.source, b.witness, b.sink);
    });
    return r;
}

bool flags(const VulnerabilityReport& report, NodeId source, NodeId sink) {
    for (const Vulnerability& v : report.pairs)
        if (v.source == source && v.sink == sink) return true;
    return false;
}

}  // namespace flowmend

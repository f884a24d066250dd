#include <algorithm>
#include <set>
#include <sstream>

#include "flowmend/cli.hpp"

namespace flowmend {
namespace {

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

/// Lines outside [old_lo, old_hi] and [new_lo, new_hi] (1-based, inclusive; an empty old range
/// has old_hi = old_lo - 1) must match pairwise.
bool only_span_changed(const std::string& before, const std::string& after, int old_lo, int old_hi, int new_lo,
                       int new_hi) {
    auto a = split_lines(before), b = split_lines(after);
    if (old_lo - 1 != new_lo - 1) return false;
    for (int i = 0; i < old_lo - 1; ++i)
        if (a.at(i) != b.at(i)) return false;
    int tail_a = static_cast<int>(a.size()) - old_hi;
    int tail_b = static_cast<int>(b.size()) - new_hi;
    if (tail_a != tail_b || tail_a < 0) return false;
    for (int i = 0; i < tail_a; ++i)
        if (a[static_cast<std::size_t>(old_hi + i)] != b[static_cast<std::size_t>(new_hi + i)]) return false;
    return true;
}

}  // namespace

Validation validate_patch(const AnnotatedAst& unsafe, const FlowTriple& triple, const Strategy& s,
                          const AstDoc& patched) {
    Validation v;
    auto [loc, index] = edit_site(s, triple);
    const std::string text = emit(patched);
    try {
        if (!same_tree(parse(text), patched)) {
            v.reason = "patched source does not re-parse to the patched tree";
            return v;
        }
    } catch (const Error& e) {
        v.reason = std::string("patched source does not parse: ") + e.what();
        return v;
    }

    AnnotatedAst a = annotate(patched, unsafe.spec);
    const AstDoc& d = a.doc;
    NodeId ploc = d.find_origin(loc);
    NodeId edited = ploc == kNoNode ? kNoNode : d.child(ploc, index);
    if (edited == kNoNode) {
        v.reason = "edit location lost";
        return v;
    }
    std::set<NodeId> sources, sinks;
    for (NodeId n : a.sources)
        if (d.origin(n) == triple.source) sources.insert(n);
    // A rebuilt sink inside the edited subtree still counts; deleting the sink does not.
    for (NodeId n : a.sinks)
        if (d.origin(n) == triple.sink || d.contains(edited, n)) sinks.insert(n);
    bool rebuilt = std::any_of(sinks.begin(), sinks.end(), [&](NodeId n) { return d.contains(edited, n); });
    if (d.find_origin(triple.sink) == kNoNode && !rebuilt) {
        v.reason = "sink removed";
        return v;
    }
    for (const Vulnerability& vul : find_vulnerabilities(a).pairs)
        if (sources.count(vul.source) && sinks.count(vul.sink)) {
            v.reason = "flow still unguarded";
            return v;
        }
    v.ok = true;

    auto before = emit_with_lines(unsafe.doc);
    auto after = emit_with_lines(patched);
    auto [new_lo, new_hi] = after.lines.at(static_cast<std::size_t>(edited));
    int old_lo = new_lo, old_hi = new_lo - 1;
    if (s.type == EditType::Replace) {
        NodeId old = unsafe.doc.child(loc, index);
        std::tie(old_lo, old_hi) = before.lines.at(static_cast<std::size_t>(old));
    }
    v.confined = only_span_changed(before.text, after.text, old_lo, old_hi, new_lo, new_hi);
    return v;
}

std::vector<FixCandidate> fix_flow(const AnnotatedAst& unsafe, const FlowTriple& triple,
                                   const std::vector<RankedStrategy>& strategies, std::size_t k,
                                   const std::string& file_name) {
    std::vector<std::pair<long, const RankedStrategy*>> order;
    for (const RankedStrategy& r : strategies) order.push_back({cost(r.strategy), &r});
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second->id < y.second->id;
    });

    const std::string original = emit(unsafe.doc);
    std::vector<FixCandidate> out;
    std::set<std::string> seen;
    for (const auto& [c, r] : order) {
        if (out.size() >= k) break;
        AstDoc patched;
        try {
            patched = apply_strategy(r->strategy, triple);
        } catch (const Error&) {
            continue;
        }
        std::string text = emit(patched);
        if (seen.count(text)) continue;
        Validation v;
        try {
            v = validate_patch(unsafe, triple, r->strategy, patched);
        } catch (const Error&) {
            continue;
        }
        if (!v.ok) continue;
        seen.insert(text);
        FixCandidate fc;
        fc.strategy_id = r->id;
        fc.cost = c;
        fc.validated = true;
        fc.confined = v.confined;
        fc.diff = unified_diff(original, text, "a/" + file_name, "b/" + file_name);
        fc.patched_source = std::move(text);
        out.push_back(std::move(fc));
    }
    return out;
}

}  // namespace flowmend

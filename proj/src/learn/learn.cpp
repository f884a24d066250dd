#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "flowmend/learn.hpp"

namespace flowmend {
namespace {

struct Hop {
    NodeId to;
    EdgeKind kind;
    int index;
};

/// All four edge kinds from n, in the order searches expand them.
std::vector<Hop> hops(const AstDoc& d, NodeId n) {
    std::vector<Hop> out;
    if (d.parent(n) != kNoNode) out.push_back({d.parent(n), EdgeKind::SynParent, -1});
    const auto& ks = d.children(n);
    for (std::size_t i = 0; i < ks.size(); ++i) out.push_back({ks[i], EdgeKind::SynChild, static_cast<int>(i)});
    const auto& ps = d.sem_parents(n);
    for (std::size_t i = 0; i < ps.size(); ++i) out.push_back({ps[i], EdgeKind::SemParent, static_cast<int>(i)});
    const auto& cs = d.sem_children(n);
    for (std::size_t i = 0; i < cs.size(); ++i) out.push_back({cs[i], EdgeKind::SemChild, static_cast<int>(i)});
    return out;
}

int depth(const AstDoc& d, NodeId n) {
    int k = 0;
    for (NodeId p = d.parent(n); p != kNoNode; p = d.parent(p)) ++k;
    return k;
}

/// Breadth-first search keeping every shortest-path predecessor.
struct ShortestPaths {
    std::vector<int> dist;
    std::vector<std::vector<std::pair<NodeId, ConcreteStep>>> preds;
    std::vector<NodeId> order;

    /// Paths start -> n in deterministic order, at most `cap`.
    void paths_to(NodeId n, std::size_t cap, std::vector<std::vector<ConcreteStep>>& out) const {
        std::vector<ConcreteStep> rev;
        std::function<void(NodeId)> walk = [&](NodeId x) {
            if (out.size() >= cap) return;
            if (preds[x].empty()) {
                out.emplace_back(rev.rbegin(), rev.rend());
                return;
            }
            for (const auto& [p, step] : preds[x]) {
                rev.push_back(step);
                walk(p);
                rev.pop_back();
            }
        };
        walk(n);
    }
};

ShortestPaths bfs(const AstDoc& d, NodeId start, int max_depth, bool sem_child_only) {
    ShortestPaths sp;
    sp.dist.assign(d.size(), -1);
    sp.preds.resize(d.size());
    sp.dist[start] = 0;
    std::deque<NodeId> q{start};
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        sp.order.push_back(x);
        if (max_depth >= 0 && sp.dist[x] >= max_depth) continue;
        for (const Hop& h : hops(d, x)) {
            if (sem_child_only && h.kind != EdgeKind::SemChild) continue;
            ConcreteStep st;
            st.kind = h.kind;
            st.index = h.index;
            st.src = x;
            st.dst = h.to;
            if (sp.dist[h.to] < 0) {
                sp.dist[h.to] = sp.dist[x] + 1;
                sp.preds[h.to].push_back({x, st});
                q.push_back(h.to);
            } else if (sp.dist[h.to] == sp.dist[x] + 1) {
                sp.preds[h.to].push_back({x, st});
            }
        }
    }
    return sp;
}

ClauseConj clauses_for(const AstDoc& d, NodeId n) {
    ClauseConj c{Clause{false, d.type(n), EdgeKind::SynParent, -1}};
    if (d.parent(n) != kNoNode) c.push_back(Clause{true, d.type(d.parent(n)), EdgeKind::SynParent, -1});
    return c;
}

TraversalFn to_fn(const ConcreteStep& s) {
    if (s.kleene) return TraversalFn::star(s.kind, s.clauses);
    return TraversalFn::edge(s.kind, s.index);
}

LocExpr extend(const LocExpr& base, std::vector<TraversalFn> steps) {
    if (steps.empty()) return base;
    if (base.base.empty() && base.steps.empty()) return LocExpr{{}, std::move(steps)};
    return base.then(std::move(steps));
}

/// Ranked candidate with its cost and text cached.
struct Cand {
    EAst e;
    long cost;
    std::string text;
};

Cand make_cand(EAst e) {
    long c = cost(e);
    std::string t = serialize(e);
    return Cand{std::move(e), c, std::move(t)};
}

bool cand_less(const Cand& a, const Cand& b) { return a.cost != b.cost ? a.cost < b.cost : a.text < b.text; }

EAst constant_of(const Tree& t) {
    std::vector<EAst> kids;
    for (const Tree& k : t.kids) kids.push_back(constant_of(k));
    return EAst::constant(t.type, t.token, std::move(kids));
}

void preorder(const Tree& t, std::vector<const Tree*>& out) {
    out.push_back(&t);
    for (const Tree& k : t.kids) preorder(k, out);
}

int position_of(const Tree& root, const Tree& node) {
    std::vector<const Tree*> all;
    preorder(root, all);
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] == &node) return static_cast<int>(i);
    throw Error("merge_prog: node is not part of the edit program");
}

/// Offset of `i` from the slot of `loc` that holds `sem`, when `sem` lies strictly below `loc`.
std::optional<int> offset_from(const AstDoc& d, NodeId loc, NodeId sem, int i) {
    if (sem == loc || !d.contains(loc, sem)) return std::nullopt;
    return i - child_index_containing(d, loc, sem);
}

std::vector<Cand> merge_node(const Tree& c1, int p1, const Tree& c2, int p2, const MergeContext& ctx,
                             const LearnOptions& opt) {
    std::vector<Cand> out;
    if (same_tree(c1, c2)) out.push_back(make_cand(constant_of(c1)));

    if (c1.type == c2.type && c1.token == c2.token && c1.kids.size() == c2.kids.size() && !c1.kids.empty()) {
        std::vector<std::vector<Cand>> per_kid;
        int q1 = p1 + 1, q2 = p2 + 1;
        bool ok = true;
        for (std::size_t k = 0; k < c1.kids.size() && ok; ++k) {
            per_kid.push_back(merge_node(c1.kids[k], q1, c2.kids[k], q2, ctx, opt));
            ok = !per_kid.back().empty();
            std::vector<const Tree*> s1, s2;
            preorder(c1.kids[k], s1);
            preorder(c2.kids[k], s2);
            q1 += static_cast<int>(s1.size());
            q2 += static_cast<int>(s2.size());
        }
        if (ok) {
            struct Partial {
                std::vector<const Cand*> picks;
                long cost;
                std::string text;
            };
            std::vector<Partial> beam{{{}, 1, ""}};
            for (const auto& options : per_kid) {
                std::vector<Partial> next;
                for (const Partial& p : beam)
                    for (const Cand& c : options) {
                        Partial q = p;
                        q.picks.push_back(&c);
                        q.cost += c.cost;
                        q.text += c.text + ",";
                        next.push_back(std::move(q));
                    }
                std::sort(next.begin(), next.end(), [](const Partial& a, const Partial& b) {
                    return a.cost != b.cost ? a.cost < b.cost : a.text < b.text;
                });
                if (next.size() > opt.max_east) next.resize(opt.max_east);
                beam = std::move(next);
            }
            for (const Partial& p : beam) {
                std::vector<EAst> kids;
                for (const Cand* c : p.picks) kids.push_back(c->e);
                EAst e = EAst::constant(c1.type, c1.token, std::move(kids));
                if (out.empty() || !(out.front().e == e)) out.push_back(make_cand(std::move(e)));
            }
        }
    }

    auto r1 = ctx.a->refs.at(static_cast<std::size_t>(p1)).find(ctx.sem_a);
    auto r2 = ctx.b->refs.at(static_cast<std::size_t>(p2)).find(ctx.sem_b);
    if (r1 != ctx.a->refs[p1].end() && r2 != ctx.b->refs[p2].end()) {
        const std::string v1 = emit_inline(c1), v2 = emit_inline(c2);
        std::set<std::string> seen;
        for (const ConcreteTraversal& t1 : r1->second)
            for (const ConcreteTraversal& t2 : r2->second)
                for (auto& steps : merge_traversal(t1, t2, &ctx)) {
                    EAst e = EAst::ref(extend(ctx.ts, std::move(steps)));
                    std::string text = serialize(e);
                    if (!seen.insert(text).second) continue;
                    try {
                        const FlowTriple& ta = ctx.a->ex->edit.triple;
                        const FlowTriple& tb = ctx.b->ex->edit.triple;
                        if (ta.doc.value(eval_loc(e.loc[0], ta)) != v1) continue;
                        if (tb.doc.value(eval_loc(e.loc[0], tb)) != v2) continue;
                    } catch (const Error&) {
                        continue;
                    }
                    out.push_back(make_cand(std::move(e)));
                }
    }

    std::sort(out.begin(), out.end(), cand_less);
    out.erase(std::unique(out.begin(), out.end(), [](const Cand& a, const Cand& b) { return a.text == b.text; }),
              out.end());
    if (out.size() > opt.max_east) out.resize(opt.max_east);
    return out;
}

using Skeleton = std::multiset<std::pair<int, NodeType>>;

void skeleton(const Tree& t, int d, Skeleton& out) {
    out.insert({d, t.type});
    for (const Tree& k : t.kids) skeleton(k, d + 1, out);
}

std::size_t overlap(const Skeleton& a, const Skeleton& b) {
    std::vector<std::pair<int, NodeType>> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return both.size();
}

}  // namespace

ConcreteTraversal compress(const ConcreteTraversal& t, const FlowTriple& triple) {
    const AstDoc& d = triple.doc;
    ConcreteTraversal out;
    out.sem_loc = t.sem_loc;
    std::size_t i = 0;
    while (i < t.steps.size()) {
        const ConcreteStep& s = t.steps[i];
        std::size_t j = i + 1;
        if (!s.kleene && s.kind != EdgeKind::SynChild)
            while (j < t.steps.size() && !t.steps[j].kleene && t.steps[j].kind == s.kind) ++j;
        if (j - i >= 2) {
            ConcreteStep k;
            k.kind = s.kind;
            k.kleene = true;
            k.src = s.src;
            k.dst = t.steps[j - 1].dst;
            k.clauses = clauses_for(d, k.dst);
            bool sound = false;
            try {
                sound = eval_step(to_fn(k), k.src, triple) == k.dst;
            } catch (const Error&) {
            }
            if (sound) {
                out.steps.push_back(std::move(k));
                i = j;
                continue;
            }
            out.steps.insert(out.steps.end(), t.steps.begin() + static_cast<long>(i), t.steps.begin() + static_cast<long>(j));
            i = j;
            continue;
        }
        out.steps.push_back(s);
        ++i;
    }
    while (out.sem_len < out.steps.size() && !is_syntactic(out.steps[out.sem_len].kind)) ++out.sem_len;
    return out;
}

std::vector<ConcreteTraversal> get_edit_loc_traversals(const PairedExample& ex, const LearnOptions& opt) {
    const FlowTriple& tr = ex.edit.triple;
    const AstDoc& d = tr.doc;
    const NodeId loc = ex.edit.editloc;
    const int idx = ex.edit.index;
    const auto& kids = d.children(loc);

    std::vector<NodeId> slots;
    if (ex.edit.type == EditType::Insert && idx >= 1 && static_cast<std::size_t>(idx - 1) < kids.size())
        slots.push_back(kids[static_cast<std::size_t>(idx - 1)]);
    if (idx >= 0 && static_cast<std::size_t>(idx) < kids.size()) slots.push_back(kids[static_cast<std::size_t>(idx)]);

    ShortestPaths sp = bfs(d, tr.source, -1, true);
    const int loc_depth = depth(d, loc);

    struct Junction {
        int total;
        NodeId node;
    };
    std::vector<Junction> junctions;
    for (NodeId n = 0; n < static_cast<NodeId>(d.size()); ++n) {
        if (sp.dist[n] < 0) continue;
        bool inside = std::any_of(slots.begin(), slots.end(), [&](NodeId s) { return d.contains(s, n); });
        if (!inside) continue;
        int total = sp.dist[n] + depth(d, n) - loc_depth;
        if (static_cast<std::size_t>(total) > opt.max_path_len) continue;
        junctions.push_back({total, n});
    }
    std::sort(junctions.begin(), junctions.end(),
              [](const Junction& a, const Junction& b) { return a.total != b.total ? a.total < b.total : a.node < b.node; });

    std::vector<ConcreteTraversal> out;
    for (const Junction& j : junctions) {
        if (out.size() >= opt.max_loc_paths) break;
        std::vector<std::vector<ConcreteStep>> sem;
        sp.paths_to(j.node, opt.max_loc_paths - out.size(), sem);
        for (auto& path : sem) {
            ConcreteTraversal t;
            t.steps = std::move(path);
            t.sem_loc = j.node;
            t.sem_len = t.steps.size();
            for (NodeId n = j.node; n != loc; n = d.parent(n)) {
                ConcreteStep up;
                up.kind = EdgeKind::SynParent;
                up.index = -1;
                up.src = n;
                up.dst = d.parent(n);
                t.steps.push_back(up);
            }
            out.push_back(compress(t, tr));
        }
    }
    return out;
}

std::vector<ConcreteTraversal> max_level_bfs(NodeId start, const std::string& value, const AstDoc& doc,
                                             int max_depth, std::size_t max_paths) {
    ShortestPaths sp = bfs(doc, start, max_depth, false);
    std::vector<ConcreteTraversal> out;
    for (NodeId n : sp.order) {
        if (out.size() >= max_paths) break;
        if (doc.value(n) != value) continue;
        std::vector<std::vector<ConcreteStep>> paths;
        sp.paths_to(n, max_paths - out.size(), paths);
        for (auto& p : paths) {
            ConcreteTraversal t;
            t.steps = std::move(p);
            t.sem_loc = start;
            out.push_back(std::move(t));
        }
    }
    return out;
}

EditMeta preprocess(const PairedExample& ex, const LearnOptions& opt) {
    EditMeta m;
    m.ex = &ex;
    m.traversals = get_edit_loc_traversals(ex, opt);
    std::set<NodeId> sems;
    for (const ConcreteTraversal& t : m.traversals) sems.insert(t.sem_loc);

    std::vector<const Tree*> nodes;
    preorder(ex.edit.editprog, nodes);
    m.refs.resize(nodes.size());
    const AstDoc& d = ex.edit.triple.doc;
    std::set<std::string> present;
    for (NodeId n = 0; n < static_cast<NodeId>(d.size()); ++n) present.insert(d.value(n));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string v;
        try {
            v = emit_inline(*nodes[i]);
        } catch (const Error&) {
            continue;
        }
        if (!present.count(v)) continue;
        for (NodeId s : sems) {
            auto paths = max_level_bfs(s, v, d, opt.max_depth, opt.max_ref_paths);
            if (!paths.empty()) m.refs[i][s] = std::move(paths);
        }
    }
    return m;
}

std::vector<std::pair<std::size_t, std::size_t>> rank_similar(const std::vector<const EditMeta*>& metas,
                                                              std::size_t max_per_group) {
    std::map<std::pair<int, NodeType>, std::vector<std::size_t>> groups;
    std::vector<Skeleton> sk(metas.size());
    for (std::size_t i = 0; i < metas.size(); ++i) {
        const Edit& e = metas[i]->ex->edit;
        skeleton(e.editprog, 0, sk[i]);
        groups[{static_cast<int>(e.type), e.editprog.type}].push_back(i);
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& [key, members] : groups) {
        struct Scored {
            std::size_t sim, i, j;
        };
        std::vector<Scored> all;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                all.push_back({overlap(sk[members[a]], sk[members[b]]), members[a], members[b]});
        std::sort(all.begin(), all.end(), [](const Scored& x, const Scored& y) {
            if (x.sim != y.sim) return x.sim > y.sim;
            return std::tie(x.i, x.j) < std::tie(y.i, y.j);
        });
        if (all.size() > max_per_group) all.resize(max_per_group);
        for (const Scored& s : all) out.push_back({s.i, s.j});
    }
    return out;
}

std::vector<TraversalFn> merge_edge(const ConcreteStep& e1, const ConcreteStep& e2, const MergeContext* ctx) {
    if (e1.kind != e2.kind || e1.kleene != e2.kleene) return {};
    if (e1.kleene) {
        ClauseConj both;
        for (const Clause& c : e1.clauses)
            if (std::find(e2.clauses.begin(), e2.clauses.end(), c) != e2.clauses.end()) both.push_back(c);
        if (both.empty()) return {};
        return {TraversalFn::star(e1.kind, std::move(both))};
    }
    if (e1.index == e2.index) return {TraversalFn::edge(e1.kind, e1.index)};
    if (e1.kind != EdgeKind::SynChild || !ctx) return {};
    auto o1 = offset_from(ctx->a->ex->edit.triple.doc, e1.src, ctx->sem_a, e1.index);
    auto o2 = offset_from(ctx->b->ex->edit.triple.doc, e2.src, ctx->sem_b, e2.index);
    if (!o1 || !o2 || *o1 != *o2) return {};
    return {TraversalFn::edge(EdgeKind::SynChild, IndexExpr::offset(ctx->ts, *o1))};
}

std::vector<std::vector<TraversalFn>> merge_traversal(const ConcreteTraversal& t1, const ConcreteTraversal& t2,
                                                      const MergeContext* ctx) {
    if (t1.steps.size() != t2.steps.size()) return {};
    std::vector<std::vector<TraversalFn>> acc{{}};
    for (std::size_t i = 0; i < t1.steps.size(); ++i) {
        auto options = merge_edge(t1.steps[i], t2.steps[i], ctx);
        if (options.empty()) return {};
        std::vector<std::vector<TraversalFn>> next;
        for (const auto& p : acc)
            for (const TraversalFn& f : options) {
                next.push_back(p);
                next.back().push_back(f);
            }
        acc = std::move(next);
    }
    return acc;
}

std::vector<IndexExpr> merge_index(int i1, int i2, NodeId loc1, NodeId loc2, const MergeContext& ctx) {
    if (i1 == i2) return {IndexExpr::constant(i1)};
    auto o1 = offset_from(ctx.a->ex->edit.triple.doc, loc1, ctx.sem_a, i1);
    auto o2 = offset_from(ctx.b->ex->edit.triple.doc, loc2, ctx.sem_b, i2);
    if (!o1 || !o2 || *o1 != *o2) return {};
    return {IndexExpr::offset(ctx.ts, *o1)};
}

std::vector<EAst> merge_prog(const Tree& c1, const Tree& c2, const MergeContext& ctx, const LearnOptions& opt) {
    int p1 = position_of(ctx.a->ex->edit.editprog, c1);
    int p2 = position_of(ctx.b->ex->edit.editprog, c2);
    std::vector<EAst> out;
    for (Cand& c : merge_node(c1, p1, c2, p2, ctx, opt)) out.push_back(std::move(c.e));
    return out;
}

bool reproduces(const Strategy& s, const PairedExample& ex) {
    try {
        return same_tree(apply_strategy(s, ex.edit.triple), ex.safe);
    } catch (const Error&) {
        return false;
    }
}

std::vector<Strategy> merge_edits(const EditMeta& a, const EditMeta& b, const LearnOptions& opt) {
    const Edit& ea = a.ex->edit;
    const Edit& eb = b.ex->edit;
    if (ea.type != eb.type) return {};
    constexpr std::size_t kKeepPerMerge = 8;
    constexpr std::size_t kTriesPerMerge = 32;

    std::vector<std::pair<long, Strategy>> found;
    std::set<std::string> seen;
    for (const ConcreteTraversal& ta : a.traversals)
        for (const ConcreteTraversal& tb : b.traversals) {
            if (found.size() >= kTriesPerMerge) break;
            if (ta.sem_len != tb.sem_len) continue;
            for (auto& steps : merge_traversal(ta, tb)) {
                std::vector<TraversalFn> prefix(steps.begin(), steps.begin() + static_cast<long>(ta.sem_len));
                std::vector<TraversalFn> rest(steps.begin() + static_cast<long>(ta.sem_len), steps.end());
                MergeContext ctx{&a, &b, ta.sem_loc, tb.sem_loc, extend(LocExpr::source(), std::move(prefix))};
                LocExpr loc = extend(ctx.ts, std::move(rest));
                auto indices = merge_index(ea.index, eb.index, ea.editloc, eb.editloc, ctx);
                if (indices.empty()) continue;
                auto progs = merge_node(ea.editprog, 0, eb.editprog, 0, ctx, opt);
                for (const IndexExpr& ix : indices)
                    for (const Cand& c : progs) {
                        Strategy s{ea.type, loc, ix, c.e};
                        std::string key = serialize(s);
                        if (!seen.insert(key).second) continue;
                        if (!reproduces(s, *a.ex) || !reproduces(s, *b.ex)) continue;
                        found.push_back({cost(s), std::move(s)});
                    }
            }
        }
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return serialize(x.second) < serialize(y.second);
    });
    std::vector<Strategy> out;
    for (auto& f : found) {
        if (out.size() >= kKeepPerMerge) break;
        out.push_back(std::move(f.second));
    }
    return out;
}

Strategy lift(const PairedExample& ex) {
    const AstDoc& d = ex.edit.triple.doc;
    const NodeId loc = ex.edit.editloc;
    NodeId top = ex.edit.triple.source;
    std::vector<TraversalFn> steps;
    while (!d.contains(top, loc)) {
        top = d.parent(top);
        steps.push_back(TraversalFn::edge(EdgeKind::SynParent, -1));
    }
    std::vector<TraversalFn> down;
    for (NodeId n = loc; n != top; n = d.parent(n))
        down.push_back(TraversalFn::edge(EdgeKind::SynChild, child_index(d, d.parent(n), n)));
    steps.insert(steps.end(), down.rbegin(), down.rend());
    return Strategy{ex.edit.type, LocExpr{{}, std::move(steps)}, IndexExpr::constant(ex.edit.index),
                    constant_of(ex.edit.editprog)};
}

std::vector<Strategy> Learner::learn(const std::vector<const PairedExample*>& pairs) {
    std::vector<const EditMeta*> metas;
    for (const PairedExample* p : pairs) {
        auto it = metas_.find(p->id);
        if (it == metas_.end()) it = metas_.emplace(p->id, preprocess(*p, opt_)).first;
        it->second.ex = p;
        metas.push_back(&it->second);
    }

    std::vector<Strategy> all;
    std::vector<bool> covered(pairs.size(), false);
    for (auto [i, j] : rank_similar(metas, opt_.max_pairs_per_group)) {
        auto key = std::make_pair(pairs[i]->id, pairs[j]->id);
        auto it = merges_.find(key);
        if (it == merges_.end()) it = merges_.emplace(key, merge_edits(*metas[i], *metas[j], opt_)).first;
        if (!it->second.empty()) covered[i] = covered[j] = true;
        all.insert(all.end(), it->second.begin(), it->second.end());
    }

    // Pairs no merge generalized still contribute their own edit.
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (covered[i]) continue;
        Strategy s = lift(*pairs[i]);
        if (reproduces(s, *pairs[i])) all.push_back(std::move(s));
    }

    std::vector<std::pair<std::string, Strategy>> keyed;
    std::set<std::string> seen;
    for (Strategy& s : all) {
        std::string k = serialize(s);
        if (seen.insert(k).second) keyed.push_back({std::move(k), std::move(s)});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        long cx = cost(x.second), cy = cost(y.second);
        return cx != cy ? cx < cy : x.first < y.first;
    });
    std::vector<Strategy> out;
    for (auto& k : keyed) out.push_back(std::move(k.second));
    return out;
}

std::vector<Strategy> learn(const std::vector<PairedExample>& pairs, const LearnOptions& opt) {
    std::vector<const PairedExample*> ptrs;
    for (const PairedExample& p : pairs) ptrs.push_back(&p);
    return Learner(opt).learn(ptrs);
}

}  // namespace flowmend

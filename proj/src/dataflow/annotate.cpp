// Def-use taint analysis over one document: builds the raw flow graph, places guards on the
// flows they protect, then keeps the flows reachable from a source.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "flowmend/dataflow.hpp"

namespace flowmend {

const GuardInfo* AnnotatedAst::guard(NodeId n) const {
    for (const GuardInfo& g : guard_info)
        if (g.guard == n) return &g;
    return nullptr;
}

namespace {

/// A propagation step a -> b; `site` is the syntactic position that justifies it.
struct Flow {
    NodeId a;
    NodeId b;
    NodeId site;
};

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

/// Name a callee is known by: `f(...)` gives f, `a.b.f(...)` gives f.
std::string callee_name(const AstDoc& d, NodeId callee) {
    if (d.type(callee) == NodeType::VarExpr) return d.token(callee);
    if (d.type(callee) == NodeType::DotExpr) return d.token(d.child(callee, 1));
    return {};
}

const std::string& op_of(const AstDoc& d, NodeId bin) { return d.token(d.child(bin, 1)); }

class Analyzer {
public:
    Analyzer(const AstDoc& d, const VulnSpec& spec) : d_(d), spec_(spec), n_(static_cast<NodeId>(d.size())) {}

    AnnotatedAst run() {
        AnnotatedAst out;
        out.doc = d_;
        out.spec = spec_;
        if (n_ == 0) return out;
        scopes();
        callees();
        defs_.assign(static_cast<std::size_t>(n_), {});
        is_use_.assign(static_cast<std::size_t>(n_), false);
        State st;
        block(d_.root(), st);
        build_flows();
        find_sources();
        auto candidates = guard_candidates();
        auto raw = reach(flows_);
        std::vector<GuardInfo> guards;
        for (auto& [g, checked] : candidates) {
            if (raw[static_cast<std::size_t>(checked)].empty()) continue;
            if (auto info = region_of(g, checked)) guards.push_back(*info);
        }
        std::sort(guards.begin(), guards.end(), [](const GuardInfo& a, const GuardInfo& b) { return a.guard < b.guard; });
        for (const GuardInfo& g : guards) interpose(g, raw);
        auto fin = reach(flows_);
        auto tainted = [&](NodeId x) { return !fin[static_cast<std::size_t>(x)].empty(); };

        std::set<std::pair<NodeId, NodeId>> kept;
        for (const Flow& f : flows_)
            if (tainted(f.a) && f.a != f.b) kept.insert({f.a, f.b});
        for (auto [a, b] : kept) out.doc.add_sem_edge(a, b);

        out.sources = sources_;
        for (NodeId s : sources_) out.doc.annotate(s, Annotation::Source);
        for (NodeId k : find_sinks(tainted)) {
            out.sinks.push_back(k);
            out.doc.annotate(k, Annotation::Sink);
        }
        for (NodeId n = 0; n < n_; ++n) {
            if (d_.type(n) != NodeType::CallExpr || !tainted(n)) continue;
            std::string name = callee_name(d_, d_.child(n, 0));
            if (std::find(spec_.sanitizers.begin(), spec_.sanitizers.end(), name) == spec_.sanitizers.end()) continue;
            out.sanitizers.push_back(n);
            out.doc.annotate(n, Annotation::Sanitizer);
        }
        for (const GuardInfo& g : guards) {
            if (!tainted(g.guard)) continue;
            out.guards.push_back(g.guard);
            out.guard_info.push_back(g);
            out.doc.annotate(g.guard, Annotation::Guard);
        }
        std::sort(out.sinks.begin(), out.sinks.end());
        out.sinks.erase(std::unique(out.sinks.begin(), out.sinks.end()), out.sinks.end());
        return out;
    }

private:
    using State = std::map<int, std::vector<NodeId>>;

    const AstDoc& d_;
    const VulnSpec& spec_;
    NodeId n_;

    std::vector<NodeId> fn_of_;  // innermost enclosing FuncExpr, or the root
    std::set<std::pair<NodeId, std::string>> declared_;
    std::map<std::pair<NodeId, std::string>, int> binding_ids_;
    std::map<int, std::vector<NodeId>> fn_by_name_;
    std::map<std::pair<int, std::string>, std::vector<NodeId>> fn_by_member_;
    std::vector<std::vector<NodeId>> defs_;  // reaching definitions per use
    std::vector<bool> is_use_;
    std::vector<Flow> flows_;
    std::vector<NodeId> sources_;

    void scopes() {
        fn_of_.assign(static_cast<std::size_t>(n_), d_.root());
        for (NodeId n = 1; n < n_; ++n) {
            NodeId p = d_.parent(n);
            fn_of_[n] = d_.type(p) == NodeType::FuncExpr ? p : fn_of_[p];
        }
        for (NodeId n = 0; n < n_; ++n)
            if (d_.type(n) == NodeType::Param || d_.type(n) == NodeType::VarDecl)
                declared_.insert({fn_of_[n], d_.token(n)});
    }

    int binding(NodeId name_node) {
        const std::string& name = d_.token(name_node);
        NodeId f = fn_of_[name_node];
        for (;;) {
            if (declared_.count({f, name})) break;
            if (f == d_.root()) break;
            f = fn_of_[f];
        }
        auto [it, fresh] = binding_ids_.try_emplace({f, name}, static_cast<int>(binding_ids_.size()));
        (void)fresh;
        return it->second;
    }

    /// Member key of `m` when it is `base.k` or `base["k"]` with a plain variable base.
    std::optional<std::pair<int, std::string>> member_key(NodeId m) {
        if (d_.type(m) != NodeType::DotExpr && d_.type(m) != NodeType::IndexExpr) return std::nullopt;
        NodeId base = d_.child(m, 0);
        NodeId key = d_.child(m, 1);
        if (d_.type(base) != NodeType::VarExpr) return std::nullopt;
        if (d_.type(m) == NodeType::DotExpr) return std::make_pair(binding(base), d_.token(key));
        if (d_.type(key) != NodeType::Literal) return std::nullopt;
        return std::make_pair(binding(base), unquote(d_.token(key)));
    }

    void record_object(int b, NodeId obj) {
        for (NodeId p : d_.children(obj)) {
            NodeId v = d_.child(p, 0);
            if (d_.type(v) == NodeType::FuncExpr) fn_by_member_[{b, unquote(d_.token(p))}].push_back(v);
        }
    }

    void callees() {
        for (NodeId n = 0; n < n_; ++n) {
            NodeType t = d_.type(n);
            if (t == NodeType::Declarator && d_.children(n).size() == 2) {
                NodeId name = d_.child(n, 0), init = d_.child(n, 1);
                if (d_.type(init) == NodeType::FuncExpr) fn_by_name_[binding(name)].push_back(init);
                if (d_.type(init) == NodeType::ObjectLit) record_object(binding(name), init);
            } else if (t == NodeType::AssignExpr) {
                NodeId lhs = d_.child(n, 0), rhs = d_.child(n, 1);
                if (d_.type(lhs) == NodeType::VarExpr) {
                    if (d_.type(rhs) == NodeType::FuncExpr) fn_by_name_[binding(lhs)].push_back(rhs);
                    if (d_.type(rhs) == NodeType::ObjectLit) record_object(binding(lhs), rhs);
                } else if (d_.type(rhs) == NodeType::FuncExpr) {
                    if (auto k = member_key(lhs)) fn_by_member_[*k].push_back(rhs);
                }
            }
        }
    }

    std::vector<NodeId> resolve(NodeId callee) {
        if (d_.type(callee) == NodeType::VarExpr) {
            auto it = fn_by_name_.find(binding(callee));
            return it == fn_by_name_.end() ? std::vector<NodeId>{} : it->second;
        }
        if (auto k = member_key(callee)) {
            auto it = fn_by_member_.find(*k);
            if (it != fn_by_member_.end()) return it->second;
        }
        return {};
    }

    // Evaluation-order walk recording reaching definitions at every use.

    bool block(NodeId n, State& st) {
        bool live = true;
        for (NodeId s : d_.children(n))
            if (!stmt(s, st)) live = false;
        return live;
    }

    bool stmt(NodeId n, State& st) {
        const auto& ks = d_.children(n);
        switch (d_.type(n)) {
            case NodeType::BlockStmt: return block(n, st);
            case NodeType::Expr: expr(ks[0], st); return true;
            case NodeType::DeclExpr:
                for (NodeId decl : ks) {
                    if (d_.children(decl).size() == 2) expr(d_.child(decl, 1), st);
                    NodeId name = d_.child(decl, 0);
                    st[binding(name)] = {name};
                }
                return true;
            case NodeType::IfStmt: {
                expr(ks[0], st);
                State a = st, b = st;
                bool la = stmt(ks[1], a);
                bool lb = ks.size() == 3 ? stmt(ks[2], b) : true;
                if (la && !lb) st = std::move(a);
                else if (!la && lb) st = std::move(b);
                else {
                    st = std::move(a);
                    for (auto& [k, v] : b) {
                        auto& dst = st[k];
                        dst.insert(dst.end(), v.begin(), v.end());
                        std::sort(dst.begin(), dst.end());
                        dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
                    }
                }
                return la || lb;
            }
            case NodeType::ReturnStmt:
            case NodeType::ThrowStmt:
                if (!ks.empty()) expr(ks[0], st);
                return false;
            default: return true;
        }
    }

    void expr(NodeId n, State& st) {
        const auto& ks = d_.children(n);
        switch (d_.type(n)) {
            case NodeType::VarExpr: {
                is_use_[n] = true;
                auto it = st.find(binding(n));
                if (it != st.end()) defs_[n] = it->second;
                return;
            }
            case NodeType::AssignExpr: {
                NodeId lhs = ks[0];
                if (d_.type(lhs) == NodeType::VarExpr) {
                    int b = binding(lhs);
                    if (d_.token(n) != "=") {
                        auto it = st.find(b);
                        if (it != st.end())
                            for (NodeId def : it->second) flows_.push_back({def, lhs, lhs});
                    }
                    expr(ks[1], st);
                    st[b] = {lhs};
                } else {
                    for (NodeId c : d_.children(lhs)) expr(c, st);
                    expr(ks[1], st);
                }
                return;
            }
            case NodeType::FuncExpr: {
                State inner = st;
                for (std::size_t i = 0; i + 1 < ks.size(); ++i) inner[binding(ks[i])] = {ks[i]};
                NodeId body = ks.back();
                if (d_.type(body) == NodeType::BlockStmt) block(body, inner);
                else expr(body, inner);
                return;
            }
            default:
                for (NodeId c : ks) expr(c, st);
                return;
        }
    }

    // Flow construction.

    bool is_callee(NodeId n) {
        NodeId p = d_.parent(n);
        if (p == kNoNode) return false;
        NodeType t = d_.type(p);
        return (t == NodeType::CallExpr || t == NodeType::NewExpr) && d_.child(p, 0) == n;
    }

    std::vector<NodeId> targets(NodeId e) {
        NodeId p = d_.parent(e);
        if (p == kNoNode) return {};
        int i = child_index(d_, p, e);
        switch (d_.type(p)) {
            case NodeType::DotExpr:
                return i == 0 ? std::vector<NodeId>{p} : std::vector<NodeId>{};
            case NodeType::IndexExpr:
                if (i == 0 || is_callee(p)) return {p};
                return targets(p);
            case NodeType::Declarator:
                return i == 1 ? std::vector<NodeId>{d_.child(p, 0)} : std::vector<NodeId>{};
            case NodeType::AssignExpr:
                return i == 1 ? std::vector<NodeId>{d_.child(p, 0)} : std::vector<NodeId>{};
            case NodeType::BinaryExpr: {
                const std::string& op = op_of(d_, p);
                return (op == "+" || op == "||") ? std::vector<NodeId>{p} : std::vector<NodeId>{};
            }
            case NodeType::CallExpr: {
                if (i == 0) return {};
                auto fns = resolve(d_.child(p, 0));
                if (fns.empty()) return {p};
                std::vector<NodeId> out;
                for (NodeId f : fns)
                    if (static_cast<std::size_t>(i) < d_.children(f).size()) out.push_back(d_.child(f, i - 1));
                return out;
            }
            case NodeType::NewExpr:
                return i == 0 ? std::vector<NodeId>{} : std::vector<NodeId>{p};
            default: return {};
        }
    }

    /// Uses whose value is consumed directly by their parent step.
    bool elided(NodeId u) {
        NodeId p = d_.parent(u);
        NodeType t = d_.type(p);
        if ((t == NodeType::DotExpr || t == NodeType::IndexExpr) && d_.child(p, 0) == u) return true;
        return t == NodeType::CallExpr && d_.child(p, 0) != u && !resolve(d_.child(p, 0)).empty();
    }

    void build_flows() {
        for (NodeId e = 0; e < n_; ++e) {
            NodeType t = d_.type(e);
            bool expression = t == NodeType::CallExpr || t == NodeType::IndexExpr || t == NodeType::DotExpr ||
                              t == NodeType::VarExpr || t == NodeType::AssignExpr || t == NodeType::BinaryExpr ||
                              t == NodeType::UnaryExpr || t == NodeType::FuncExpr || t == NodeType::Literal ||
                              t == NodeType::ObjectLit || t == NodeType::ArrayLit || t == NodeType::NewExpr;
            if (!expression) continue;
            auto ts = targets(e);
            if (t == NodeType::VarExpr && is_use_[e]) {
                if (elided(e)) {
                    for (NodeId def : defs_[e])
                        for (NodeId x : ts) flows_.push_back({def, x, e});
                    continue;
                }
                for (NodeId def : defs_[e]) flows_.push_back({def, e, e});
            }
            for (NodeId x : ts) flows_.push_back({e, x, e});
        }
    }

    void find_sources() {
        std::set<NodeId> out;
        for (const SourcePattern& p : spec_.sources) {
            for (NodeId n = 0; n < n_; ++n) {
                switch (p.kind) {
                    case SourcePattern::Kind::NamedParam:
                        if (d_.type(n) == NodeType::Param && d_.token(n) == p.name) out.insert(n);
                        break;
                    case SourcePattern::Kind::CallResult:
                        if (d_.type(n) == NodeType::CallExpr && callee_name(d_, d_.child(n, 0)) == p.name) out.insert(n);
                        break;
                    case SourcePattern::Kind::HandlerParam: {
                        if (d_.type(n) != NodeType::CallExpr || callee_name(d_, d_.child(n, 0)) != p.name) break;
                        const auto& ks = d_.children(n);
                        for (std::size_t i = 1; i < ks.size(); ++i) {
                            if (d_.type(ks[i]) != NodeType::FuncExpr) continue;
                            if (static_cast<std::size_t>(p.index) + 1 < d_.children(ks[i]).size())
                                out.insert(d_.child(ks[i], p.index));
                        }
                        break;
                    }
                }
            }
        }
        sources_.assign(out.begin(), out.end());
    }

    /// Source sets reaching each node over `flows`.
    std::vector<std::vector<NodeId>> reach(const std::vector<Flow>& flows) {
        std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n_));
        for (const Flow& f : flows) adj[f.a].push_back(f.b);
        std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(n_));
        for (NodeId s : sources_) {
            std::vector<bool> seen(static_cast<std::size_t>(n_), false);
            std::deque<NodeId> q{s};
            seen[s] = true;
            while (!q.empty()) {
                NodeId x = q.front();
                q.pop_front();
                out[x].push_back(s);
                for (NodeId y : adj[x])
                    if (!seen[y]) {
                        seen[y] = true;
                        q.push_back(y);
                    }
            }
        }
        return out;
    }

    /// (guard node, checked operand) for every syntactic guard match.
    std::vector<std::pair<NodeId, NodeId>> guard_candidates() {
        std::map<NodeId, NodeId> out;
        for (const GuardPattern& g : spec_.guards) {
            for (NodeId n = 0; n < n_; ++n) {
                if (out.count(n)) continue;
                const auto& ks = d_.children(n);
                if (g.kind == GuardPattern::Kind::MethodCall) {
                    if (d_.type(n) != NodeType::CallExpr || ks.size() < 2) continue;
                    NodeId callee = ks[0];
                    if (d_.type(callee) != NodeType::DotExpr || d_.token(d_.child(callee, 1)) != g.name) continue;
                    out[n] = ks[1];
                    continue;
                }
                if (d_.type(n) != NodeType::BinaryExpr) continue;
                const std::string& op = op_of(d_, n);
                if (g.kind == GuardPattern::Kind::InOperator) {
                    if (op != "in") continue;
                    out[n] = ks[0];
                    flows_.push_back({ks[0], n, ks[0]});
                    continue;
                }
                if (op != "===" && op != "==" && op != "!==" && op != "!=") continue;
                for (int side = 0; side < 2; ++side) {
                    NodeId u = ks[side == 0 ? 0 : 2], lit = ks[side == 0 ? 2 : 0];
                    if (d_.type(u) != NodeType::UnaryExpr || d_.token(u) != "typeof") continue;
                    if (d_.type(lit) != NodeType::Literal || unquote(d_.token(lit)) != g.name) continue;
                    NodeId x = d_.child(u, 0);
                    out[n] = x;
                    flows_.push_back({x, n, x});
                    break;
                }
            }
        }
        std::vector<std::pair<NodeId, NodeId>> v(out.begin(), out.end());
        return v;
    }

    bool positive(NodeId g) {
        if (d_.type(g) == NodeType::CallExpr) return true;
        const std::string& op = op_of(d_, g);
        return op != "!==" && op != "!=";
    }

    static bool only_exits(const AstDoc& d, NodeId branch) {
        if (d.type(branch) != NodeType::BlockStmt || d.children(branch).size() != 1) return false;
        NodeType t = d.type(d.child(branch, 0));
        return t == NodeType::ReturnStmt || t == NodeType::ThrowStmt;
    }

    std::optional<GuardInfo> region_of(NodeId g, NodeId checked) {
        GuardInfo info;
        info.guard = g;
        info.checked = checked;
        bool pol = positive(g);
        NodeId c = g;
        while (d_.parent(c) != kNoNode && d_.type(d_.parent(c)) == NodeType::UnaryExpr && d_.token(d_.parent(c)) == "!") {
            pol = !pol;
            c = d_.parent(c);
        }
        NodeId top = c;
        if (pol)
            while (d_.parent(top) != kNoNode && d_.type(d_.parent(top)) == NodeType::BinaryExpr &&
                   op_of(d_, d_.parent(top)) == "&&")
                top = d_.parent(top);
        NodeId p = d_.parent(top);
        if (p != kNoNode && d_.type(p) == NodeType::IfStmt && d_.child(p, 0) == top) {
            info.owner = p;
            if (pol) {
                info.shape = GuardShape::IfThen;
                region_[g] = {d_.child(p, 1)};
                return info;
            }
            NodeId list = d_.parent(p);
            if (d_.children(p).size() != 2 || !only_exits(d_, d_.child(p, 1)) || !is_statement_list(d_.type(list)))
                return std::nullopt;
            std::vector<NodeId> rest;
            const auto& sib = d_.children(list);
            for (std::size_t i = static_cast<std::size_t>(child_index(d_, list, p)) + 1; i < sib.size(); ++i)
                rest.push_back(sib[i]);
            if (rest.empty()) return std::nullopt;
            info.shape = GuardShape::EarlyReturn;
            region_[g] = rest;
            return info;
        }
        NodeId q = d_.parent(c);
        if (pol && q != kNoNode && d_.type(q) == NodeType::BinaryExpr && op_of(d_, q) == "&&" && d_.child(q, 0) == c) {
            info.shape = GuardShape::AndOperand;
            info.owner = q;
            region_[g] = {d_.child(q, 2)};
            return info;
        }
        return std::nullopt;
    }

    std::map<NodeId, std::vector<NodeId>> region_;

    void interpose(const GuardInfo& g, const std::vector<std::vector<NodeId>>& raw) {
        const auto& roots = region_[g.guard];
        auto inside = [&](NodeId x) {
            for (NodeId r : roots)
                if (d_.contains(r, x)) return true;
            return false;
        };
        const auto& want = raw[g.checked];
        auto shares = [&](NodeId a) {
            const auto& have = raw[a];
            for (NodeId s : have)
                if (std::find(want.begin(), want.end(), s) != want.end()) return true;
            return false;
        };
        std::vector<Flow> next;
        next.reserve(flows_.size());
        for (const Flow& f : flows_) {
            if (f.a != g.guard && f.b != g.guard && inside(f.site) && !inside(f.a) && shares(f.a)) {
                next.push_back({f.a, g.guard, f.site});
                next.push_back({g.guard, f.b, f.site});
            } else {
                next.push_back(f);
            }
        }
        flows_ = std::move(next);
    }

    template <typename Tainted>
    std::vector<NodeId> find_sinks(Tainted tainted) {
        std::vector<NodeId> out;
        std::function<void(NodeId)> arg_sink = [&](NodeId a) {
            if (d_.type(a) == NodeType::ObjectLit) {
                for (NodeId p : d_.children(a)) arg_sink(d_.child(p, 0));
                return;
            }
            if (tainted(a)) out.push_back(a);
        };
        for (const SinkPattern& p : spec_.sinks) {
            for (NodeId n = 0; n < n_; ++n) {
                if (d_.type(n) != NodeType::CallExpr) continue;
                NodeId callee = d_.child(n, 0);
                if (p.kind == SinkPattern::Kind::DynamicCall) {
                    if (d_.type(callee) == NodeType::VarExpr && tainted(callee)) out.push_back(callee);
                    if (d_.type(callee) == NodeType::IndexExpr && tainted(d_.child(callee, 1))) out.push_back(callee);
                } else if (callee_name(d_, callee) == p.callee) {
                    if (static_cast<std::size_t>(p.index) + 1 < d_.children(n).size()) arg_sink(d_.child(n, p.index + 1));
                }
            }
        }
        return out;
    }
};

}  // namespace

AnnotatedAst annotate(const AstDoc& ast, const VulnSpec& spec) {
    if (ast.sem_edge_count() != 0) throw Error("annotate: document already carries semantic edges");
    return Analyzer(ast, spec).run();
}

}  // namespace flowmend

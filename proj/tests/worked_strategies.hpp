#pragma once

#include "flowmend/strategy.hpp"

namespace testutil {

using namespace flowmend;

/// Ls of S1: first call-callee variable along the flow.
inline LocExpr s1_ls() {
    ClauseConj c{Clause{false, NodeType::VarExpr}, Clause{true, NodeType::CallExpr, EdgeKind::SynParent, -1}};
    LocExpr l;
    l.steps.push_back(TraversalFn::star(EdgeKind::SemChild, c));
    return l;
}

inline LocExpr s1_le() {
    return s1_ls().then({TraversalFn::star(EdgeKind::SynParent, {Clause{false, NodeType::BlockStmt}})});
}

inline IndexExpr s1_index() { return IndexExpr::offset(s1_ls(), 0); }

inline LocExpr s1_lr2() {
    return s1_ls().then({TraversalFn::edge(EdgeKind::SemParent, 0), TraversalFn::edge(EdgeKind::SemParent, 0)});
}

inline LocExpr s1_lr1() {
    return s1_lr2().then({TraversalFn::edge(EdgeKind::SynParent, -1), TraversalFn::edge(EdgeKind::SynChild, 0)});
}

inline LocExpr s1_lr3() { return s1_le().then({TraversalFn::edge(EdgeKind::SynChild, s1_index())}); }

/// if (REF1.hasOwnProperty(REF2)) { REF3 }
inline EAst membership_guard(LocExpr r1, LocExpr r2, LocExpr r3) {
    EAst callee = EAst::constant(NodeType::DotExpr, "", {EAst::ref(std::move(r1)), EAst::constant(NodeType::Label, "hasOwnProperty")});
    EAst call = EAst::constant(NodeType::CallExpr, "", {std::move(callee), EAst::ref(std::move(r2))});
    EAst body = EAst::constant(NodeType::BlockStmt, "", {EAst::ref(std::move(r3))});
    return EAst::constant(NodeType::IfStmt, "", {std::move(call), std::move(body)});
}

inline Strategy s1() { return Strategy{EditType::Replace, s1_le(), s1_index(), membership_guard(s1_lr1(), s1_lr2(), s1_lr3())}; }

inline LocExpr s2_ts() {
    LocExpr l;
    for (int i = 0; i < 7; ++i) l.steps.push_back(TraversalFn::edge(EdgeKind::SemChild, 0));
    return l;
}

inline LocExpr s2_le() {
    std::vector<TraversalFn> up(3, TraversalFn::edge(EdgeKind::SynParent, -1));
    return s2_ts().then(up);
}

/// S2 with constant indices throughout; the references walk down from the `let foo` statement.
inline Strategy s2() {
    LocExpr decl = s2_le().then({TraversalFn::edge(EdgeKind::SynChild, 7)});
    LocExpr handlers = decl.then({TraversalFn::edge(EdgeKind::SynChild, 0), TraversalFn::edge(EdgeKind::SynChild, 1),
                                  TraversalFn::edge(EdgeKind::SynChild, 0)});
    LocExpr key = decl.then({TraversalFn::edge(EdgeKind::SynChild, 0), TraversalFn::edge(EdgeKind::SynChild, 1),
                             TraversalFn::edge(EdgeKind::SynChild, 1)});
    LocExpr sink_stmt = s2_le().then({TraversalFn::edge(EdgeKind::SynChild, 13)});
    return Strategy{EditType::Replace, s2_le(), IndexExpr::constant(13), membership_guard(handlers, key, sink_stmt)};
}

}  // namespace testutil

#include <algorithm>

#include "flowmend/perturb.hpp"
#include "flowmend/witnessing.hpp"

namespace flowmend {

std::string_view to_string(EditType t) { return t == EditType::Insert ? "Insert" : "Replace"; }

AstDoc apply_edit(const AstDoc& unsafe, const Edit& edit) {
    if (edit.type == EditType::Replace) return replace_child(unsafe, edit.editloc, edit.index, edit.editprog);
    return insert_child(unsafe, edit.editloc, edit.index, edit.editprog);
}

namespace {

/// Exit statements keep their shape but lose values and messages.
void strip_exits(Tree& t) {
    if (t.type == NodeType::ReturnStmt) {
        t.kids.clear();
    } else if (t.type == NodeType::ThrowStmt) {
        Tree err;
        err.type = NodeType::NewExpr;
        Tree callee;
        callee.type = NodeType::VarExpr;
        callee.token = "Error";
        err.kids.push_back(std::move(callee));
        t.kids.clear();
        t.kids.push_back(std::move(err));
    } else {
        for (Tree& k : t.kids) strip_exits(k);
    }
}

/// Finishes a pair: re-annotates the unsafe side and maps the flow onto it.
PairedExample finish(const AnnotatedAst& safe, const FlowTriple& triple, AstDoc unsafe_doc, EditType type,
                     NodeId safe_loc, int index, Tree editprog, AstDoc safe_norm) {
    PairedExample ex;
    ex.unsafe = annotate(unsafe_doc, safe.spec);
    ex.safe = std::move(safe_norm);
    ex.safe.clear_semantics();
    ex.edit.type = type;
    ex.edit.editloc = unsafe_doc.node_at(safe.doc.path_of(safe_loc));
    ex.edit.index = index;
    ex.edit.editprog = std::move(editprog);
    // An endpoint that was the replaced node itself maps to whatever now fills its slot.
    NodeId replaced = type == EditType::Replace ? safe.doc.child(safe_loc, index) : kNoNode;
    auto map_end = [&](NodeId n) {
        if (n == replaced) return unsafe_doc.node_at(safe.doc.path_of(n));
        return ex.unsafe.doc.find_origin(n);
    };
    NodeId src = map_end(triple.source);
    NodeId snk = map_end(triple.sink);
    if (src == kNoNode || snk == kNoNode) throw UnsupportedGuardShape("flow endpoints do not survive the removal");
    ex.edit.triple = make_triple(ex.unsafe, src, snk, std::nullopt);
    return ex;
}

NodeId statement_list_slot(const AstDoc& d, NodeId stmt) {
    NodeId list = d.parent(stmt);
    if (list == kNoNode || !is_statement_list(d.type(list))) return kNoNode;
    return list;
}

}  // namespace

PairedExample remove_guard(const AnnotatedAst& safe, const FlowTriple& triple) {
    const AstDoc& d = safe.doc;
    if (!triple.witness) throw UnsupportedGuardShape("flow has no witness");
    const GuardInfo* g = safe.guard(*triple.witness);
    if (!g) throw UnsupportedGuardShape("witness is not a guard");
    switch (g->shape) {
        case GuardShape::IfThen: {
            NodeId ifs = g->owner;
            NodeId list = statement_list_slot(d, ifs);
            if (list == kNoNode) throw UnsupportedGuardShape("guarded if is not a statement of a block");
            int idx = child_index(d, list, ifs);
            NodeId then = d.child(ifs, 1);
            const auto& stmts = d.children(then);
            if (stmts.empty()) throw UnsupportedGuardShape("guarded branch is empty");
            AstDoc unsafe = stmts.size() == 1 ? replace_child(d, list, idx, d.subtree(stmts[0]))
                                              : replace_child(d, list, idx, d.subtree(then));
            return finish(safe, triple, std::move(unsafe), EditType::Replace, list, idx, d.subtree(ifs), d);
        }
        case GuardShape::EarlyReturn: {
            NodeId ifs = g->owner;
            NodeId list = statement_list_slot(d, ifs);
            if (list == kNoNode) throw UnsupportedGuardShape("early-return guard is not a statement of a block");
            int idx = child_index(d, list, ifs);
            Tree prog = d.subtree(ifs);
            strip_exits(prog);
            AstDoc safe_norm = replace_child(d, list, idx, prog);
            AstDoc unsafe = remove_child(d, list, idx);
            return finish(safe, triple, std::move(unsafe), EditType::Insert, list, idx, std::move(prog),
                          std::move(safe_norm));
        }
        case GuardShape::AndOperand: {
            NodeId conj = g->owner;
            NodeId gp = d.parent(conj);
            int idx = child_index(d, gp, conj);
            AstDoc unsafe = replace_child(d, gp, idx, d.subtree(d.child(conj, 2)));
            return finish(safe, triple, std::move(unsafe), EditType::Replace, gp, idx, d.subtree(conj), d);
        }
    }
    throw UnsupportedGuardShape("unknown guard shape");
}

PairedExample remove_sanitizer(const AnnotatedAst& safe, const FlowTriple& triple) {
    const AstDoc& d = safe.doc;
    if (!triple.witness) throw UnsupportedSanitizerShape("flow has no witness");
    NodeId w = *triple.witness;
    if (!d.has(w, Annotation::Sanitizer) || d.type(w) != NodeType::CallExpr)
        throw UnsupportedSanitizerShape("witness is not a sanitizer call");
    if (d.children(w).size() < 2) throw UnsupportedSanitizerShape("sanitizer call has no argument");
    NodeId p = d.parent(w);
    if (d.type(p) == NodeType::AssignExpr && d.child(p, 1) == w && d.token(p) == "=") {
        NodeId lhs = d.child(p, 0);
        NodeId stmt = d.parent(p);
        NodeId list = d.type(stmt) == NodeType::Expr ? statement_list_slot(d, stmt) : kNoNode;
        if (list != kNoNode && d.type(lhs) == NodeType::VarExpr && d.children(w).size() == 2 &&
            d.value(d.child(w, 1)) == d.value(lhs)) {
            int idx = child_index(d, list, stmt);
            AstDoc unsafe = remove_child(d, list, idx);
            return finish(safe, triple, std::move(unsafe), EditType::Insert, list, idx, d.subtree(stmt), d);
        }
    }
    int idx = child_index(d, p, w);
    AstDoc unsafe = replace_child(d, p, idx, d.subtree(d.child(w, 1)));
    return finish(safe, triple, std::move(unsafe), EditType::Replace, p, idx, d.subtree(w), d);
}

MineResult make_pairs(const std::vector<CorpusFile>& corpus) {
    MineResult r;
    for (const CorpusFile& f : corpus) {
        WitnessReport wr = find_witnesses(f.aast);
        r.witness_triples += wr.triples.size();
        std::vector<std::size_t> kept_here;
        int k = 0;
        for (const Witness& w : wr.triples) {
            auto skip = [&](std::string reason) {
                r.skipped.push_back({f.name, w.source, w.witness, w.sink, std::move(reason)});
            };
            FlowTriple t = make_triple(f.aast, w.source, w.sink, w.witness);
            PairedExample ex;
            try {
                ex = f.aast.doc.has(w.witness, Annotation::Guard) ? remove_guard(f.aast, t) : remove_sanitizer(f.aast, t);
            } catch (const Error& e) {
                skip(e.what());
                continue;
            }
            bool dup = false;
            for (std::size_t i : kept_here) {
                const PairedExample* prev = &r.pairs[i];
                if (prev->edit.type == ex.edit.type && prev->edit.editloc == ex.edit.editloc &&
                    prev->edit.index == ex.edit.index && same_tree(prev->unsafe.doc, ex.unsafe.doc) &&
                    prev->edit.triple.sink == ex.edit.triple.sink && prev->edit.triple.source == ex.edit.triple.source)
                    dup = true;
            }
            if (dup) {
                skip("duplicate of an earlier removal");
                continue;
            }
            if (!flags(find_vulnerabilities(ex.unsafe), ex.edit.triple.source, ex.edit.triple.sink)) {
                skip("unsafe side is not flagged");
                continue;
            }
            AnnotatedAst safe_a = annotate(ex.safe, f.aast.spec);
            NodeId ss = ex.safe.origin(0) == kNoNode ? w.source : ex.safe.find_origin(w.source);
            NodeId sk = ex.safe.origin(0) == kNoNode ? w.sink : ex.safe.find_origin(w.sink);
            if (ss != kNoNode && sk != kNoNode && flags(find_vulnerabilities(safe_a), ss, sk)) {
                skip("safe side is still flagged");
                continue;
            }
            AstDoc redo;
            try {
                redo = apply_edit(ex.unsafe.doc, ex.edit);
            } catch (const Error& e) {
                skip(std::string("edit does not apply: ") + e.what());
                continue;
            }
            if (!same_tree(redo, ex.safe)) {
                skip("edit does not reproduce the safe program");
                continue;
            }
            ex.id = f.name + "-" + std::to_string(k++);
            kept_here.push_back(r.pairs.size());
            r.pairs.push_back(std::move(ex));
        }
    }
    return r;
}

}  // namespace flowmend

#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowmend/perturb.hpp"
#include "flowmend/strategy.hpp"

namespace flowmend {

/// One step of a concrete path; Kleene steps cover a compressed run.
struct ConcreteStep {
    EdgeKind kind = EdgeKind::SemChild;
    bool kleene = false;
    int index = 0;
    ClauseConj clauses;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
};

struct ConcreteTraversal {
    std::vector<ConcreteStep> steps;
    /// Last node of the semantic prefix (the start when the prefix is empty).
    NodeId sem_loc = kNoNode;
    /// Number of leading semantic steps.
    std::size_t sem_len = 0;

    NodeId end(NodeId start) const { return steps.empty() ? start : steps.back().dst; }
};

struct EditMeta {
    const PairedExample* ex = nullptr;
    std::vector<ConcreteTraversal> traversals;
    /// Per edit-program node (preorder position), per semantic location: reference paths.
    std::vector<std::map<NodeId, std::vector<ConcreteTraversal>>> refs;
};

struct LearnOptions {
    int max_depth = 6;
    std::size_t max_loc_paths = 8;
    std::size_t max_path_len = 64;
    std::size_t max_ref_paths = 4;
    std::size_t max_east = 16;
    std::size_t max_pairs_per_group = 64;
};

/// Paths source -> editloc of shape SemChild* then SynParent*, where the junction lies in the
/// edited slot (child `index`, or `index - 1` as well for inserts). Each junction contributes
/// its shortest semantic paths; results are ordered by length and compressed.
std::vector<ConcreteTraversal> get_edit_loc_traversals(const PairedExample& ex, const LearnOptions& opt = {});

/// Collapses same-kind runs (length >= 2, SynChild excluded) into Kleene steps whose clauses
/// come from the run's final node. Runs whose Kleene search would stop elsewhere stay concrete.
ConcreteTraversal compress(const ConcreteTraversal& t, const FlowTriple& triple);

/// Shortest paths over all four edge kinds from `start` to nodes whose value is `value`.
std::vector<ConcreteTraversal> max_level_bfs(NodeId start, const std::string& value, const AstDoc& doc,
                                             int max_depth = 6, std::size_t max_paths = 4);

EditMeta preprocess(const PairedExample& ex, const LearnOptions& opt = {});

/// Candidate pairs (i, j), i < j, most similar first, restricted to matching edit type and
/// edit-program root type.
std::vector<std::pair<std::size_t, std::size_t>> rank_similar(const std::vector<const EditMeta*>& metas,
                                                              std::size_t max_per_group = 64);

/// Context shared by one merge: both semantic locations and the merged semantic prefix.
struct MergeContext {
    const EditMeta* a;
    const EditMeta* b;
    NodeId sem_a;
    NodeId sem_b;
    LocExpr ts;
};

std::vector<TraversalFn> merge_edge(const ConcreteStep& e1, const ConcreteStep& e2, const MergeContext* ctx = nullptr);
std::vector<std::vector<TraversalFn>> merge_traversal(const ConcreteTraversal& t1, const ConcreteTraversal& t2,
                                                      const MergeContext* ctx = nullptr);
std::vector<IndexExpr> merge_index(int i1, int i2, NodeId loc1, NodeId loc2, const MergeContext& ctx);
std::vector<EAst> merge_prog(const Tree& c1, const Tree& c2, const MergeContext& ctx, const LearnOptions& opt = {});
std::vector<Strategy> merge_edits(const EditMeta& a, const EditMeta& b, const LearnOptions& opt = {});

/// Replays the example's own edit with constant steps.
Strategy lift(const PairedExample& ex);

/// Applying `s` to the example's unsafe flow reproduces its safe program.
bool reproduces(const Strategy& s, const PairedExample& ex);

/// Keeps preprocessing and pairwise merges keyed by pair id, so repeated calls over
/// overlapping pair sets (leave-one-out folds) reuse work.
class Learner {
public:
    explicit Learner(LearnOptions opt = {}) : opt_(opt) {}
    std::vector<Strategy> learn(const std::vector<const PairedExample*>& pairs);

private:
    LearnOptions opt_;
    std::map<std::string, EditMeta> metas_;
    std::map<std::pair<std::string, std::string>, std::vector<Strategy>> merges_;
};

std::vector<Strategy> learn(const std::vector<PairedExample>& pairs, const LearnOptions& opt = {});

}  // namespace flowmend

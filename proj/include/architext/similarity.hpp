#ifndef ARCHITEXT_SIMILARITY_HPP
#define ARCHITEXT_SIMILARITY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "architext/tree.hpp"

namespace architext {

enum class SimilarityKind {
    JaccardEntityNames,   // Jaccard index on the set of entity names (default)
    LabelMultisetJaccard, // multiset Jaccard on non-token labels
    TreeEditSimilarity,   // 1 - edit distance / (|x| + |y|)
    Custom,
};

/// Symmetric base similarity f over sub-trees, bounded in [0,1], f(x,x)=1.
struct SimilarityFn {
    SimilarityKind kind = SimilarityKind::JaccardEntityNames;
    std::function<double(const SubTreeRef&, const SubTreeRef&)> custom;

    static SimilarityFn jaccard() { return {SimilarityKind::JaccardEntityNames, nullptr}; }
    static SimilarityFn label_multiset() { return {SimilarityKind::LabelMultisetJaccard, nullptr}; }
    static SimilarityFn tree_edit() { return {SimilarityKind::TreeEditSimilarity, nullptr}; }
    static SimilarityFn make_custom(std::function<double(const SubTreeRef&, const SubTreeRef&)> f) {
        return {SimilarityKind::Custom, std::move(f)};
    }
};

struct SimParams {
    SimilarityFn f;
    double tau = 0.7;
};

/// Disjoint blocks of positions covering the clustered scope. Blocks are
/// ordered by smallest member, members sorted ascending.
struct Partition {
    std::vector<std::vector<Position>> blocks;
    std::map<Position, std::size_t> class_of;

    std::size_t block_of(const Position& p) const { return class_of.at(p); }
    bool covers(const Position& p) const { return class_of.count(p) != 0; }

    static Partition from_blocks(std::vector<std::vector<Position>> blocks);
};

/// Jaccard index over the entity-name sets of two sub-trees. Two entity-free
/// sub-trees compare as 1; empty versus non-empty as 0.
double jaccard_entity_names(const SubTreeRef& x, const SubTreeRef& y);

/// Base similarity dispatch.
double base_similarity(const SubTreeRef& x, const SubTreeRef& y, const SimilarityFn& f);

/// Contextual similarity: the harmonic-weighted average of f over the
/// tree-ancestor chains, levels 0..min(depth(x), depth(y)) with weight
/// 1/(i+1) at level i.
double sim(const SubTreeRef& x, const SubTreeRef& y, const SimilarityFn& f);

/// Single-link cut at tau over an abstract similarity matrix: connected
/// components of the thresholded graph (sim >= tau).
std::vector<std::vector<std::size_t>> cluster_matrix(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& sim, double tau);

/// tau-equivalence classes of `scope`: transitive closure of pairwise
/// sim >= tau.
Partition equivalence_classes(const Tree& tree, const std::vector<Position>& scope,
                              const SimParams& params);

/// Partition of the whole domain by exact label equality.
Partition label_classes(const Tree& tree);

/// Per-tree similarity evaluator with interned sub-tree features and a
/// memoized f, so repeated ancestor comparisons are cheap. Supports the
/// built-in similarity kinds; also scores hypothetical sub-trees described
/// by a feature chain (the rewrite engine's candidate evaluation).
class SimEngine {
public:
    SimEngine(const Tree& tree, const SimilarityFn& f);
    ~SimEngine();
    SimEngine(SimEngine&&) noexcept;
    SimEngine& operator=(SimEngine&&) noexcept;

    double sim_positions(const Position& x, const Position& y);

    /// Feature id of the sub-tree at p.
    std::uint32_t feature(const Position& p) const;

    /// Feature id for a hypothetical sub-tree holding exactly these entity
    /// names (Jaccard kind) or labels (multiset kind).
    std::uint32_t intern_names(const std::vector<std::string>& names);

    /// Feature id for a hypothetical sub-tree given as a node value.
    std::uint32_t intern_node(const Node& candidate);

    /// Entity names under p (sorted, unique).
    const std::vector<std::string>& names_at(const Position& p) const;

    /// sim of a hypothetical node against position y. `chain` lists feature
    /// ids from the candidate (level 0) upwards through its would-be
    /// ancestors; the chain may stop early, capping the compared depth.
    double sim_chain(const std::vector<std::uint32_t>& chain, const Position& y);

    /// Feature ids from p up to the root; sim depends only on this chain.
    std::vector<std::uint32_t> chain_at(const Position& p) const;

    double sim_chains(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);

    double f_features(std::uint32_t a, std::uint32_t b);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Number of worker threads: ARCHITEXT_THREADS when set, else 1.
unsigned thread_budget();

} // namespace architext

#endif

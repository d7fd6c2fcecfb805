#ifndef ARCHITEXT_ENGINE_HPP
#define ARCHITEXT_ENGINE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "architext/grammar.hpp"
#include "architext/metagrammar.hpp"
#include "architext/similarity.hpp"
#include "architext/tree.hpp"

namespace architext {

struct StructuringConfig {
    SimParams sim;
    std::size_t min_support = 2;
    std::size_t max_cycles = 50;
};

/// Edit operations in the order they are attempted within one iteration.
enum class EditOp {
    FindGroups = 0,
    FindSubgroups = 1,
    MergeGroups = 2,
    FindCollectionsOfGroups = 3,
    FindRelationships = 4,
    FindCollectionsOfRelationships = 5,
    ReduceBottom = 6,
    ReduceTop = 7,
    None = 8,
};

const char* edit_op_name(EditOp op);

struct IterationMetrics {
    std::size_t nb_prod = 0;
    std::size_t nb_unlabelled = 0;
    std::size_t nb_group_kinds = 0;
    std::size_t nb_rel_kinds = 0;
    std::size_t nb_coll_kinds = 0;
    std::size_t nb_equiv_classes = 0;
    double mean_group_instances = 0.0;
    double mean_rel_instances = 0.0;
    double mean_coll_instances = 0.0;
};

struct IterationLog {
    std::size_t iteration = 0;
    EditOp op = EditOp::None;
    IterationMetrics metrics;
};

/// Dense ids per structure kind, one id per content fingerprint; ids are
/// never reused for a different fingerprint.
class NameRegistry {
public:
    std::string group_id(const std::string& fingerprint) { return id(groups_, next_group_, fingerprint); }
    std::string rel_id(const std::string& fingerprint) { return id(rels_, next_rel_, fingerprint); }
    std::string coll_id(const std::string& fingerprint) { return id(colls_, next_coll_, fingerprint); }

    /// The id group_id would return, without assigning it.
    std::string peek_group(const std::string& fingerprint) const {
        auto it = groups_.find(fingerprint);
        return it != groups_.end() ? it->second : std::to_string(next_group_);
    }

private:
    std::string id(std::map<std::string, std::string>& table, std::size_t& next,
                   const std::string& fp) {
        auto it = table.find(fp);
        if (it != table.end()) return it->second;
        std::string v = std::to_string(next++);
        table.emplace(fp, v);
        return v;
    }
    std::map<std::string, std::string> groups_, rels_, colls_;
    std::size_t next_group_ = 0, next_rel_ = 0, next_coll_ = 0;
};

/// Per-iteration working state: scope, tau-equivalence classes, and the
/// similarity engine used to score hypothetical rewrites. Group occurrences
/// are bucketed by feature chain so support counting is proportional to the
/// number of distinct group shapes, not group instances.
struct EquivContext {
    const Tree* tree = nullptr;
    SimParams params;
    std::vector<Position> scope; // internal (non-leaf) positions
    Partition partition;
    std::shared_ptr<SimEngine> engine;
    std::vector<Position> group_positions;
    std::vector<std::vector<std::uint32_t>> group_chains; // distinct
    std::vector<std::size_t> group_chain_count;

    static EquivContext compute(const Tree& tree, const SimParams& params);

    /// Builds a context around an externally supplied partition.
    static EquivContext from_partition(const Tree& tree, const SimParams& params,
                                       Partition partition);
};

/// Number of instance occurrences of the class: its cardinality.
std::size_t support(const Tree& tree, const Partition& partition, std::size_t block);

std::optional<Tree> find_groups(const Tree& tree, const Partition& partition,
                                std::size_t min_support, NameRegistry& registry);

std::optional<Tree> find_subgroups(const EquivContext& ctx, std::size_t min_support,
                                   NameRegistry& registry);

std::optional<Tree> merge_groups(const EquivContext& ctx, NameRegistry& registry);

std::optional<Tree> find_relations(const Tree& tree, NameRegistry& registry);

enum class CollectionKind { Groups, Relations };

std::optional<Tree> find_collections(const Tree& tree, const Partition& partition,
                                     CollectionKind kind, NameRegistry& registry);

std::optional<Tree> reduce_bottom(const Tree& tree);
std::optional<Tree> reduce_top(const Tree& tree);

/// Entity-subset shapes tried by find_subgroups for m entity children:
/// proper subsets by decreasing size, lexicographic within a size.
std::vector<std::vector<std::size_t>> subgroup_subsets(std::size_t m);

/// Sibling combinations tried by merge_groups at `st`, largest first;
/// combinations never contain two tau-equivalent group children.
std::vector<std::vector<Position>> merge_combinations(const Tree& tree, const Partition& partition,
                                                      const Position& st);

struct StructuringResult {
    Tree instance;
    CondensedGrammar grammar;
    std::vector<IterationLog> logs;
    bool valid = false;
    std::size_t iterations_used = 0;
    std::size_t best_iteration = 0;
    std::size_t frontier_size = 0;
};

/// The structuring loop: per iteration, recompute equivalence classes, apply
/// the first modifying operation, re-extract the grammar, and stop on
/// validity or after max_cycles. On budget exhaustion the best instance seen
/// (fewest frontier positions) is returned.
StructuringResult structure(const Tree& instance, const StructuringConfig& config);

/// CSV rendering of the logs: header
/// iteration,op,nb_prod,nb_unlabelled,nb_group,nb_rel,nb_coll,nb_equiv,
/// mean_group_inst,mean_rel_inst,mean_coll_inst
std::string metrics_csv(const std::vector<IterationLog>& logs);

} // namespace architext

#endif

#ifndef ARCHITEXT_CORPUS_HPP
#define ARCHITEXT_CORPUS_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "architext/bracketed.hpp"
#include "architext/tree.hpp"

namespace architext {

/// Token-span entity annotation; indices are 0-based and inclusive.
struct NamedEntity {
    std::string name;
    std::size_t start_token = 0;
    std::size_t end_token = 0;

    std::size_t size() const { return end_token - start_token + 1; }
};

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One sentence tree plus its annotations. tokenPositions realizes treePos:
/// leaf index -> position, in left-to-right order.
struct AnnotatedSentence {
    Node tree;
    std::vector<NamedEntity> entities;
};

struct CorpusConfig {
    std::set<std::string> conjunction_tags = {"CONJ"};
    std::set<std::string> cc_tags = {"CC"};
    std::set<std::string> keep_tags; // labels exempt from the unary collapse
};

/// Reads the TSV entity file. Header must be exactly
/// "sentence\tentity\tstart\tend". Returns entities grouped by sentence index.
std::map<std::size_t, std::vector<NamedEntity>> read_entities_file(const std::string& path,
                                                                   std::size_t sentence_count);

/// Parses the trees file and merges the sentences under a common root, in
/// file order. No enrichment.
Tree read_corpus(const std::string& trees_path, const std::string& entities_path,
                 const CorpusConfig& config);

/// Interposes an Entity node above each annotated token span. Entities whose
/// tokens are not contiguous leaves are skipped; a message per skip goes to
/// `warnings` when given.
Node insert_entities(const AnnotatedSentence& sentence, std::vector<std::string>* warnings = nullptr);

/// Rewrites every entity-inside-entity nesting into the ER/EC form until no
/// entity dominates another.
Node unnest_entities(const Node& tree);
Tree unnest_entities(const Tree& tree);

/// Flattens recursive coordination: a conjunction node absorbs the children
/// of its conjunction children; a phrase holding a CC child absorbs same-tag
/// children one level down.
Node flatten_conjunctions(const Node& tree, const CorpusConfig& config);
Tree flatten_conjunctions(const Tree& tree, const CorpusConfig& config);

/// Two-step simplification: (1) delete maximal entity-free sub-trees, then
/// (2) collapse non-entity unary nodes (child replaces parent) to fixpoint,
/// sparing keep_tags, aux nodes and the root.
Tree simplify(const Tree& tree, const CorpusConfig& config = {});

/// Full ingestion: read, flatten, enrich, unnest, merge, simplify.
/// This is the instance-construction step of the structuring pipeline.
Tree ingest(const std::string& trees_path, const std::string& entities_path,
            const CorpusConfig& config);

/// In-memory variant used by tests and the generator.
Tree ingest_sentences(const std::vector<AnnotatedSentence>& sentences, const CorpusConfig& config,
                      std::vector<std::string>* warnings = nullptr);

/// Multiset of (entity name, concatenated token text) pairs; the quantity
/// every ingest transformation and the structuring loop must preserve.
std::multiset<std::pair<std::string, std::string>> entity_signature(const Tree& tree);
std::multiset<std::pair<std::string, std::string>> entity_signature(const Node& tree);

} // namespace architext

#endif

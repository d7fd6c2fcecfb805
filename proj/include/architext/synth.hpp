#ifndef ARCHITEXT_SYNTH_HPP
#define ARCHITEXT_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "architext/corpus.hpp"
#include "architext/grammar.hpp"

namespace architext {

struct PlantedGroup {
    std::string id;
    std::vector<std::string> entities;
};

struct PlantedRelation {
    std::string id;
    std::string left, right; // group ids
};

struct SentenceTemplate {
    std::size_t weight = 1;
    bool is_relation = false;
    std::string target; // group or relation id
};

struct NoiseModel {
    double dropout = 0.0; // per-entity annotation dropout
    std::size_t extra_depth_min = 0, extra_depth_max = 0;
    double shuffle = 0.0; // probability of shuffling entity order
};

struct PlantedSchema {
    std::vector<PlantedGroup> groups;
    std::vector<PlantedRelation> relations;
    std::vector<SentenceTemplate> templates;
    NoiseModel noise;

    const PlantedGroup* group(const std::string& id) const;
    const PlantedRelation* relation(const std::string& id) const;
};

/// Declarative schema text:
///   group G0 = dose frequency substance
///   relation R0 = G0 G1
///   template 2 group G0
///   template 1 relation R0
///   noise dropout 0.1
///   noise extra_depth 0 2
///   noise shuffle 0.05
PlantedSchema parse_schema(const std::string& text);

struct GeneratedCorpus {
    std::string trees_text;    // bracketed sentences, one per line
    std::string entities_text; // TSV annotations
    CondensedGrammar ground_truth;
    Tree canonical_instance; // ideally structured instance (oracle for accepts)
};

/// Seed-deterministic corpus generation; per-sentence derived seeds keep the
/// output independent of generation order.
GeneratedCorpus generate(const PlantedSchema& schema, std::size_t n_sentences,
                         std::uint64_t seed);

} // namespace architext

#endif

#include "architext/similarity.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "architext/bracketed.hpp"

namespace architext {

namespace {

void entity_names_of(const Node& n, std::set<std::string>& out) {
    if (n.label.kind == LabelKind::Entity) out.insert(n.label.text);
    for (const auto& c : n.children) entity_names_of(c, out);
}

std::set<std::string> entity_names_of(const SubTreeRef& ref) {
    std::set<std::string> out;
    entity_names_of(ref.tree->to_node(ref.at), out);
    return out;
}

void label_multiset_of(const Node& n, std::map<std::string, std::size_t>& out) {
    if (n.label.kind != LabelKind::Token) ++out[n.label.render()];
    for (const auto& c : n.children) label_multiset_of(c, out);
}

double jaccard_sets(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& s : a) inter += b.count(s);
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double multiset_jaccard(const std::map<std::string, std::size_t>& a,
                        const std::map<std::string, std::size_t>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t mins = 0, maxs = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            maxs += ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            maxs += ib->second;
            ++ib;
        } else {
            mins += std::min(ia->second, ib->second);
            maxs += std::max(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return maxs == 0 ? 1.0 : static_cast<double>(mins) / static_cast<double>(maxs);
}

// Zhang-Shasha ordered tree edit distance, unit costs.
struct ZsTree {
    std::vector<const Node*> post; // postorder
    std::vector<std::size_t> lml;  // leftmost leaf (postorder index)
    std::vector<std::size_t> keyroots;

    explicit ZsTree(const Node& root) {
        walk(root);
        std::map<std::size_t, std::size_t> last_with_lml;
        for (std::size_t i = 0; i < post.size(); ++i) last_with_lml[lml[i]] = i;
        for (const auto& [_, i] : last_with_lml) keyroots.push_back(i);
        std::sort(keyroots.begin(), keyroots.end());
    }

    std::size_t walk(const Node& n) {
        std::size_t lm = 0;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            std::size_t child_lm = walk(n.children[i]);
            if (i == 0) lm = child_lm;
        }
        if (n.children.empty()) lm = post.size();
        post.push_back(&n);
        lml.push_back(lm);
        return lm;
    }
};

std::size_t tree_edit_distance(const Node& a, const Node& b) {
    ZsTree ta(a), tb(b);
    std::size_t na = ta.post.size(), nb = tb.post.size();
    std::vector<std::vector<std::size_t>> td(na, std::vector<std::size_t>(nb, 0));
    std::vector<std::vector<std::size_t>> fd(na + 1, std::vector<std::size_t>(nb + 1, 0));

    for (std::size_t ki : ta.keyroots) {
        for (std::size_t kj : tb.keyroots) {
            std::size_t li = ta.lml[ki], lj = tb.lml[kj];
            fd[li][lj] = 0;
            for (std::size_t i = li; i <= ki; ++i) fd[i + 1][lj] = fd[i][lj] + 1;
            for (std::size_t j = lj; j <= kj; ++j) fd[li][j + 1] = fd[li][j] + 1;
            for (std::size_t i = li; i <= ki; ++i) {
                for (std::size_t j = lj; j <= kj; ++j) {
                    if (ta.lml[i] == li && tb.lml[j] == lj) {
                        std::size_t rename =
                            ta.post[i]->label == tb.post[j]->label ? 0 : 1;
                        fd[i + 1][j + 1] = std::min({fd[i][j + 1] + 1, fd[i + 1][j] + 1,
                                                     fd[i][j] + rename});
                        td[i][j] = fd[i + 1][j + 1];
                    } else {
                        fd[i + 1][j + 1] =
                            std::min({fd[i][j + 1] + 1, fd[i + 1][j] + 1,
                                      fd[ta.lml[i]][tb.lml[j]] + td[i][j]});
                    }
                }
            }
        }
    }
    return td[na - 1][nb - 1];
}

double tree_edit_similarity(const Node& a, const Node& b) {
    std::size_t d = tree_edit_distance(a, b);
    std::size_t denom = a.size() + b.size();
    return 1.0 - static_cast<double>(d) / static_cast<double>(denom);
}

} // namespace

double jaccard_entity_names(const SubTreeRef& x, const SubTreeRef& y) {
    return jaccard_sets(entity_names_of(x), entity_names_of(y));
}

double base_similarity(const SubTreeRef& x, const SubTreeRef& y, const SimilarityFn& f) {
    switch (f.kind) {
        case SimilarityKind::JaccardEntityNames:
            return jaccard_entity_names(x, y);
        case SimilarityKind::LabelMultisetJaccard: {
            std::map<std::string, std::size_t> ma, mb;
            label_multiset_of(x.tree->to_node(x.at), ma);
            label_multiset_of(y.tree->to_node(y.at), mb);
            return multiset_jaccard(ma, mb);
        }
        case SimilarityKind::TreeEditSimilarity:
            return tree_edit_similarity(x.tree->to_node(x.at), y.tree->to_node(y.at));
        case SimilarityKind::Custom:
            return f.custom(x, y);
    }
    return 0.0;
}

double sim(const SubTreeRef& x, const SubTreeRef& y, const SimilarityFn& f) {
    std::size_t depth_min = std::min(x.at.depth(), y.at.depth());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i <= depth_min; ++i) {
        double w = 1.0 / static_cast<double>(i + 1);
        SubTreeRef px = ancestor(x, i), py = ancestor(y, i);
        double fi = (px.tree == py.tree && px.at == py.at) ? 1.0 : base_similarity(px, py, f);
        num += w * fi;
        den += w;
    }
    return num / den;
}

Partition Partition::from_blocks(std::vector<std::vector<Position>> blocks) {
    Partition p;
    for (auto& b : blocks) {
        if (b.empty()) throw std::invalid_argument("empty partition block");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    p.blocks = std::move(blocks);
    for (std::size_t i = 0; i < p.blocks.size(); ++i)
        for (const auto& pos : p.blocks[i]) {
            if (!p.class_of.emplace(pos, i).second)
                throw std::invalid_argument("partition blocks overlap at " + pos.to_string());
        }
    return p;
}

std::vector<std::vector<std::size_t>> cluster_matrix(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& sim, double tau) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (sim(i, j) >= tau) {
                std::size_t ri = find(i), rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(by_root.size());
    for (auto& [_, members] : by_root) out.push_back(std::move(members));
    return out;
}

unsigned thread_budget() {
    if (const char* env = std::getenv("ARCHITEXT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

// ---------------------------------------------------------------------------
// SimEngine

struct SimEngine::Impl {
    const Tree* tree;
    SimilarityFn fn;

    std::vector<Position> positions; // preorder
    std::map<Position, std::size_t> index_of;
    std::vector<std::uint32_t> feat;

    // Interned feature payloads, by feature id.
    std::map<std::string, std::uint32_t> intern_keys;
    std::vector<std::vector<std::string>> name_sets;              // Jaccard
    std::vector<std::map<std::string, std::size_t>> multisets;    // LabelMultiset
    std::vector<Node> subtrees;                                   // TreeEdit
    std::vector<bool> subtree_set;

    std::unordered_map<std::uint64_t, double> f_memo;

    std::uint32_t intern(const std::string& key) {
        auto it = intern_keys.find(key);
        if (it != intern_keys.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(intern_keys.size());
        intern_keys.emplace(key, id);
        name_sets.emplace_back();
        multisets.emplace_back();
        subtrees.emplace_back();
        subtree_set.push_back(false);
        return id;
    }

    std::uint32_t intern_name_vec(std::vector<std::string> names) {
        std::string key;
        if (fn.kind == SimilarityKind::JaccardEntityNames) {
            std::sort(names.begin(), names.end());
            names.erase(std::unique(names.begin(), names.end()), names.end());
            for (const auto& s : names) key += s, key += '\x1f';
            std::uint32_t id = intern(key);
            if (name_sets[id].empty()) name_sets[id] = std::move(names);
            return id;
        }
        // multiset kind
        std::map<std::string, std::size_t> ms;
        for (auto& s : names) ++ms[s];
        for (const auto& [s, c] : ms) key += s + ':' + std::to_string(c) + '\x1f';
        std::uint32_t id = intern(key);
        if (multisets[id].empty()) multisets[id] = std::move(ms);
        return id;
    }

    std::uint32_t intern_subtree(const Node& n) {
        std::uint32_t id = intern(write_bracketed(n));
        if (!subtree_set[id]) {
            subtrees[id] = n;
            subtree_set[id] = true;
        }
        return id;
    }

    double f_of(std::uint32_t a, std::uint32_t b) {
        if (a == b) return 1.0;
        std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
        auto it = f_memo.find(key);
        if (it != f_memo.end()) return it->second;
        double v = 0.0;
        switch (fn.kind) {
            case SimilarityKind::JaccardEntityNames: {
                const auto& na = name_sets[a];
                const auto& nb = name_sets[b];
                if (na.empty() && nb.empty()) {
                    v = 1.0;
                } else {
                    std::size_t inter = 0, i = 0, j = 0;
                    while (i < na.size() && j < nb.size()) {
                        if (na[i] < nb[j]) ++i;
                        else if (nb[j] < na[i]) ++j;
                        else ++inter, ++i, ++j;
                    }
                    std::size_t uni = na.size() + nb.size() - inter;
                    v = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
                }
                break;
            }
            case SimilarityKind::LabelMultisetJaccard:
                v = multiset_jaccard(multisets[a], multisets[b]);
                break;
            case SimilarityKind::TreeEditSimilarity:
                v = tree_edit_similarity(subtrees[a], subtrees[b]);
                break;
            case SimilarityKind::Custom:
                throw std::logic_error("SimEngine does not support custom similarity");
        }
        f_memo.emplace(key, v);
        return v;
    }
};

SimEngine::SimEngine(const Tree& tree, const SimilarityFn& f) : impl_(new Impl) {
    if (f.kind == SimilarityKind::Custom)
        throw std::invalid_argument("SimEngine requires a built-in similarity kind");
    impl_->tree = &tree;
    impl_->fn = f;
    impl_->positions = tree.positions();
    for (std::size_t i = 0; i < impl_->positions.size(); ++i)
        impl_->index_of.emplace(impl_->positions[i], i);
    impl_->feat.resize(impl_->positions.size());

    // Children come after parents in preorder; walk in reverse so features
    // can be built bottom-up.
    std::vector<std::vector<std::string>> names(impl_->positions.size());
    for (std::size_t k = impl_->positions.size(); k-- > 0;) {
        const Position& p = impl_->positions[k];
        const NodeLabel& l = tree.label(p);
        switch (f.kind) {
            case SimilarityKind::JaccardEntityNames: {
                std::vector<std::string> acc;
                if (l.kind == LabelKind::Entity) acc.push_back(l.text);
                for (const Position& c : tree.children(p)) {
                    const auto& cn = names[impl_->index_of.at(c)];
                    acc.insert(acc.end(), cn.begin(), cn.end());
                }
                std::sort(acc.begin(), acc.end());
                acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
                names[k] = acc;
                impl_->feat[k] = impl_->intern_name_vec(std::move(acc));
                break;
            }
            case SimilarityKind::LabelMultisetJaccard: {
                std::vector<std::string> acc;
                if (l.kind != LabelKind::Token) acc.push_back(l.render());
                for (const Position& c : tree.children(p)) {
                    const auto& cn = names[impl_->index_of.at(c)];
                    acc.insert(acc.end(), cn.begin(), cn.end());
                }
                names[k] = acc;
                impl_->feat[k] = impl_->intern_name_vec(acc);
                break;
            }
            case SimilarityKind::TreeEditSimilarity:
                impl_->feat[k] = impl_->intern_subtree(tree.to_node(p));
                break;
            case SimilarityKind::Custom:
                break;
        }
    }
}

SimEngine::~SimEngine() = default;
SimEngine::SimEngine(SimEngine&&) noexcept = default;
SimEngine& SimEngine::operator=(SimEngine&&) noexcept = default;

std::uint32_t SimEngine::feature(const Position& p) const {
    return impl_->feat[impl_->index_of.at(p)];
}

std::uint32_t SimEngine::intern_names(const std::vector<std::string>& names) {
    return impl_->intern_name_vec(names);
}

std::uint32_t SimEngine::intern_node(const Node& candidate) {
    switch (impl_->fn.kind) {
        case SimilarityKind::JaccardEntityNames: {
            std::set<std::string> names;
            entity_names_of(candidate, names);
            return impl_->intern_name_vec({names.begin(), names.end()});
        }
        case SimilarityKind::LabelMultisetJaccard: {
            std::map<std::string, std::size_t> ms;
            label_multiset_of(candidate, ms);
            std::vector<std::string> flat;
            for (const auto& [s, c] : ms)
                for (std::size_t k = 0; k < c; ++k) flat.push_back(s);
            return impl_->intern_name_vec(std::move(flat));
        }
        case SimilarityKind::TreeEditSimilarity:
            return impl_->intern_subtree(candidate);
        case SimilarityKind::Custom:
            break;
    }
    throw std::logic_error("SimEngine does not support custom similarity");
}

const std::vector<std::string>& SimEngine::names_at(const Position& p) const {
    if (impl_->fn.kind != SimilarityKind::JaccardEntityNames)
        throw std::logic_error("names_at requires the Jaccard kind");
    return impl_->name_sets[feature(p)];
}

double SimEngine::f_features(std::uint32_t a, std::uint32_t b) { return impl_->f_of(a, b); }

double SimEngine::sim_positions(const Position& x, const Position& y) {
    std::size_t depth_min = std::min(x.depth(), y.depth());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i <= depth_min; ++i) {
        double w = 1.0 / static_cast<double>(i + 1);
        Position px = x.ancestor(i), py = y.ancestor(i);
        double fi = px == py ? 1.0 : impl_->f_of(feature(px), feature(py));
        num += w * fi;
        den += w;
    }
    return num / den;
}

double SimEngine::sim_chain(const std::vector<std::uint32_t>& chain, const Position& y) {
    std::size_t depth_min = std::min(chain.size() - 1, y.depth());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i <= depth_min; ++i) {
        double w = 1.0 / static_cast<double>(i + 1);
        num += w * impl_->f_of(chain[i], feature(y.ancestor(i)));
        den += w;
    }
    return num / den;
}

std::vector<std::uint32_t> SimEngine::chain_at(const Position& p) const {
    std::vector<std::uint32_t> chain;
    chain.reserve(p.depth() + 1);
    Position q = p;
    chain.push_back(feature(q));
    while (!q.is_root()) {
        q = q.parent();
        chain.push_back(feature(q));
    }
    return chain;
}

double SimEngine::sim_chains(const std::vector<std::uint32_t>& a,
                             const std::vector<std::uint32_t>& b) {
    std::size_t depth_min = std::min(a.size(), b.size()) - 1;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i <= depth_min; ++i) {
        double w = 1.0 / static_cast<double>(i + 1);
        num += w * impl_->f_of(a[i], b[i]);
        den += w;
    }
    return num / den;
}

// ---------------------------------------------------------------------------

Partition equivalence_classes(const Tree& tree, const std::vector<Position>& scope,
                              const SimParams& params) {
    std::vector<Position> pos = scope;
    std::sort(pos.begin(), pos.end());
    std::size_t n = pos.size();
    if (n == 0) return Partition{};

    if (params.f.kind == SimilarityKind::Custom) {
        std::vector<double> sims(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                sims[i * n + j] =
                    sim(SubTreeRef{&tree, pos[i]}, SubTreeRef{&tree, pos[j]}, params.f);
        auto lookup = [&](std::size_t i, std::size_t j) {
            return i < j ? sims[i * n + j] : sims[j * n + i];
        };
        auto idx_blocks = cluster_matrix(n, lookup, params.tau);
        std::vector<std::vector<Position>> blocks;
        for (const auto& ib : idx_blocks) {
            std::vector<Position> b;
            for (std::size_t i : ib) b.push_back(pos[i]);
            blocks.push_back(std::move(b));
        }
        return Partition::from_blocks(std::move(blocks));
    }

    // The contextual similarity of a position depends only on its ancestor
    // feature chain, so positions with identical chains are interchangeable:
    // cluster the distinct chains and expand to positions afterwards.
    SimEngine engine(tree, params.f);
    std::map<std::vector<std::uint32_t>, std::size_t> chain_ids;
    std::vector<std::vector<std::uint32_t>> chains;
    std::vector<std::size_t> chain_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, fresh] = chain_ids.emplace(engine.chain_at(pos[i]), chains.size());
        if (fresh) chains.push_back(it->first);
        chain_of[i] = it->second;
    }

    std::size_t m = chains.size();
    std::vector<double> sims(m * m, 0.0);
    unsigned threads = thread_budget();
    if (threads <= 1 || m < 256) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                sims[i * m + j] = engine.sim_chains(chains[i], chains[j]);
    } else {
        // feature interning is deterministic per tree, so worker-local
        // engines share the same feature ids; the f memo is not shared
        std::vector<std::thread> pool;
        std::size_t chunk = (m + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::size_t lo = t * chunk, hi = std::min(m, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                SimEngine local(tree, params.f);
                for (std::size_t i = lo; i < hi; ++i)
                    for (std::size_t j = i + 1; j < m; ++j)
                        sims[i * m + j] = local.sim_chains(chains[i], chains[j]);
            });
        }
        for (auto& th : pool) th.join();
    }

    auto lookup = [&](std::size_t i, std::size_t j) {
        return i < j ? sims[i * m + j] : sims[j * m + i];
    };
    auto chain_blocks = cluster_matrix(m, lookup, params.tau);
    std::vector<std::vector<Position>> blocks(chain_blocks.size());
    std::vector<std::size_t> block_of_chain(m);
    for (std::size_t b = 0; b < chain_blocks.size(); ++b)
        for (std::size_t c : chain_blocks[b]) block_of_chain[c] = b;
    for (std::size_t i = 0; i < n; ++i)
        blocks[block_of_chain[chain_of[i]]].push_back(pos[i]);
    return Partition::from_blocks(std::move(blocks));
}

Partition label_classes(const Tree& tree) {
    std::map<NodeLabel, std::vector<Position>> by_label;
    for (const auto& [p, l] : tree.nodes()) by_label[l].push_back(p);
    std::vector<std::vector<Position>> blocks;
    blocks.reserve(by_label.size());
    for (auto& [_, b] : by_label) blocks.push_back(std::move(b));
    return Partition::from_blocks(std::move(blocks));
}

} // namespace architext

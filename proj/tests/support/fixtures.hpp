#pragma once

#include "hcdht/index_node.hpp"
#include "hcdht/topology.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hcdht::testing {

/// Six-keyword universe with positions in listed order, so that
/// {Wikipedia, Rome} is node 001001.
inline std::shared_ptr<TableHasher> six_keyword_hasher() {
    return std::make_shared<TableHasher>(std::map<std::string, unsigned, std::less<>>{
        {"Temperature", 0}, {"PoI", 1}, {"Wikipedia", 2}, {"Bologna", 3}, {"Urbino", 4}, {"Rome", 5}});
}

/// Plain-set brute force over every record of every node, independent of the
/// routing and traversal code.
struct BruteForce {
    struct Entry {
        std::set<std::string> keywords;
        std::string cid;
    };
    std::vector<Entry> entries;

    explicit BruteForce(const std::vector<NodeState>& nodes) {
        for (const auto& node : nodes) {
            for (const auto& [keys, cids] : node.table()) {
                std::set<std::string> ks(keys.keywords().begin(), keys.keywords().end());
                for (const auto& cid : cids) entries.push_back({ks, cid});
            }
        }
    }

    std::set<std::string> exact(const std::set<std::string>& query) const {
        std::set<std::string> out;
        for (const auto& e : entries) {
            if (e.keywords == query) out.insert(e.cid);
        }
        return out;
    }

    std::set<std::string> superset(const std::set<std::string>& query) const {
        std::set<std::string> out;
        for (const auto& e : entries) {
            bool all = true;
            for (const auto& k : query) all = all && e.keywords.count(k) == 1;
            if (all) out.insert(e.cid);
        }
        return out;
    }
};

inline std::set<std::string> as_set(const std::vector<std::string>& v) {
    return std::set<std::string>(v.begin(), v.end());
}

inline std::set<std::string> as_set(const KeywordSet& k) {
    return std::set<std::string>(k.keywords().begin(), k.keywords().end());
}

/// Every subset of `universe` (2^n of them), each as a KeywordSet.
inline std::vector<KeywordSet> all_subsets(const std::vector<std::string>& universe) {
    std::vector<KeywordSet> out;
    const std::size_t n = universe.size();
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::string> words;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1U) words.push_back(universe[i]);
        }
        out.emplace_back(std::move(words));
    }
    return out;
}

}  // namespace hcdht::testing

#include "hcdht/index_node.hpp"

#include "hcdht/errors.hpp"

namespace hcdht {

ObjectRecord::ObjectRecord(std::string cid_, KeywordSet keywords_)
    : cid(std::move(cid_)), keywords(std::move(keywords_)) {
    if (cid.empty()) throw InvalidRecord("cid must be non-empty");
}

NodeState::NodeState(NodeId id, std::map<NodeId, std::string> neighbor_addresses,
                     std::shared_ptr<const KeywordHasher> hasher)
    : id_(id), neighbors_(std::move(neighbor_addresses)), hasher_(std::move(hasher)) {
    if (!hasher_) throw ConfigError("node state requires a keyword hasher");
    const auto expected = neighbors(id_);
    bool exact = neighbors_.size() == expected.size();
    for (const auto& n : expected) exact = exact && neighbors_.contains(n);
    if (!exact) throw ConfigError("neighbor map of " + id_.str() + " must hold exactly its r neighbors");
}

bool NodeState::responsible_for(const KeywordSet& keywords) const {
    return one(keywords, dimension(), *hasher_) == id_;
}

void NodeState::local_insert(const ObjectRecord& obj) {
    if (obj.cid.empty()) throw InvalidRecord("cid must be non-empty");
    if (!responsible_for(obj.keywords)) {
        throw NotResponsible("node " + id_.str() + " is not responsible for {" +
                             obj.keywords.join() + "}");
    }
    table_[obj.keywords].insert(obj.cid);
}

bool NodeState::local_remove(const ObjectRecord& obj) {
    auto it = table_.find(obj.keywords);
    if (it == table_.end()) return false;
    const bool erased = it->second.erase(obj.cid) > 0;
    if (it->second.empty()) table_.erase(it);
    return erased;
}

std::set<std::string> NodeState::local_pin_lookup(const KeywordSet& keywords) const {
    if (!responsible_for(keywords)) {
        throw NotResponsible("node " + id_.str() + " is not responsible for {" + keywords.join() +
                             "}");
    }
    if (auto it = table_.find(keywords); it != table_.end()) return it->second;
    return {};
}

std::vector<std::string> NodeState::local_superset_lookup(const KeywordSet& keywords,
                                                          std::size_t limit) const {
    const NodeId query = one(keywords, dimension(), *hasher_);
    if (!id_.covers(query)) {
        throw NotInSupersetRegion(id_.str() + " does not cover " + query.str());
    }
    std::vector<std::string> out;
    for (const auto& [entry_keys, cids] : table_) {
        if (out.size() >= limit) break;
        if (!entry_keys.includes(keywords)) continue;
        for (const auto& cid : cids) {
            if (out.size() >= limit) break;
            out.push_back(cid);
        }
    }
    return out;
}

std::size_t NodeState::record_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [keys, cids] : table_) n += cids.size();
    return n;
}

}  // namespace hcdht

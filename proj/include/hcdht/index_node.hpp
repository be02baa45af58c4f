#pragma once

#include "hcdht/topology.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hcdht {

/// A content identifier and the exact keyword set it was published under.
struct ObjectRecord {
    std::string cid;
    KeywordSet keywords;

    ObjectRecord() = default;
    ObjectRecord(std::string cid, KeywordSet keywords);

    friend bool operator==(const ObjectRecord&, const ObjectRecord&) = default;
};

/// Canonical keyword set -> CIDs published under exactly that set.
/// Iteration order is keyset order, then CID byte order.
using IndexTable = std::map<KeywordSet, std::set<std::string>>;

/// State of one logical node. Plain value type; the owner serializes access.
class NodeState {
public:
    static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

    /// `hasher` is shared by every node of a network and must outlive the state.
    NodeState(NodeId id, std::map<NodeId, std::string> neighbor_addresses,
              std::shared_ptr<const KeywordHasher> hasher);

    const NodeId& id() const noexcept { return id_; }
    Dimension dimension() const noexcept { return id_.dimension(); }
    const IndexTable& table() const noexcept { return table_; }
    const std::map<NodeId, std::string>& neighbor_addresses() const noexcept { return neighbors_; }
    const KeywordHasher& hasher() const noexcept { return *hasher_; }

    /// Whether this node is one(keywords).
    bool responsible_for(const KeywordSet& keywords) const;

    /// Stores `obj`. Idempotent. Throws NotResponsible when one(obj.keywords) != id().
    void local_insert(const ObjectRecord& obj);

    /// Returns false when the record was not present.
    bool local_remove(const ObjectRecord& obj);

    /// CIDs stored under exactly `keywords`. Throws NotResponsible.
    std::set<std::string> local_pin_lookup(const KeywordSet& keywords) const;

    /// Up to `limit` CIDs from entries whose keyword set includes `keywords`,
    /// in table order. Throws NotInSupersetRegion when id() does not cover
    /// one(keywords).
    std::vector<std::string> local_superset_lookup(const KeywordSet& keywords,
                                                   std::size_t limit) const;

    std::size_t record_count() const noexcept;

private:
    NodeId id_;
    std::map<NodeId, std::string> neighbors_;
    std::shared_ptr<const KeywordHasher> hasher_;
    IndexTable table_;
};

}  // namespace hcdht

#pragma once

#include "hcdht/index_node.hpp"
#include "hcdht/topology.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace hcdht {

enum class Op { Insert, Remove, Pin, Superset, Probe };

const char* to_string(Op op);
Op parse_op(std::string_view name);

/// A node-to-node message. `target` is the node that must execute `op`;
/// intermediate nodes only forward it.
struct Envelope {
    NodeId target;
    Op op;
    KeywordSet keywords;
    std::string cid;
    /// Superset: objects still wanted from this subtree.
    std::size_t limit = 0;
    /// Superset: CIDs already collected elsewhere in the traversal.
    std::vector<std::string> exclude;
    std::uint32_t hop_counter = 0;
};

enum class ReplyStatus { Ok, Stored, Removed, NotFound, RoutingFailure, Rejected };

const char* to_string(ReplyStatus status);
ReplyStatus parse_reply_status(std::string_view name);

struct Reply {
    ReplyStatus status = ReplyStatus::Ok;
    std::vector<std::string> cids;
    /// Edges traversed while producing this reply (forward direction only).
    std::uint32_t hops = 0;
    /// Nodes that handled the envelope, in the order they handled it.
    std::vector<NodeId> path;
    /// Node that stored or removed the record.
    std::optional<NodeId> node;
    /// Part of a superset traversal could not be reached.
    bool partial = false;
    std::string error;
};

/// Delivers an envelope to a node's handler and returns its reply. Throws
/// TransportError when the node cannot be reached.
class Transport {
public:
    virtual ~Transport() = default;
    virtual Reply deliver(const NodeId& to, const Envelope& envelope) = 0;
};

/// A NodeState plus the lock that serializes access to it. Handlers forward
/// through the transport without holding the lock.
class LogicalNode {
public:
    explicit LogicalNode(NodeState state);

    LogicalNode(const LogicalNode&) = delete;
    LogicalNode& operator=(const LogicalNode&) = delete;

    const NodeId& id() const noexcept { return id_; }
    Reply handle(const Envelope& envelope, Transport& transport);
    NodeState snapshot() const;

private:
    Reply forward(const Envelope& envelope, Transport& transport);
    Reply execute(const Envelope& envelope, Transport& transport);
    Reply visit_superset(const Envelope& envelope, Transport& transport);

    NodeId id_;
    mutable std::shared_mutex mutex_;
    NodeState state_;
};

/// Cap on Superset Search results; always at least 1.
class SupersetLimit {
public:
    explicit SupersetLimit(std::size_t l);
    std::size_t value() const noexcept { return l_; }

private:
    std::size_t l_;
};

struct QueryResult {
    std::vector<std::string> cids;
    std::uint32_t hops = 0;
    std::vector<NodeId> nodes_visited;
    /// Hops spent reaching the responsible node, before any traversal.
    std::uint32_t route_hops = 0;
    bool partial = false;
};

/// Client side of the protocol: injects requests at a chosen start node.
class QueryEngine {
public:
    QueryEngine(Transport& transport, Dimension r, std::shared_ptr<const KeywordHasher> hasher);

    Dimension dimension() const noexcept { return r_; }
    const KeywordHasher& hasher() const noexcept { return *hasher_; }

    /// Delivers a no-op at `target`. Returns the path taken.
    QueryResult route(const NodeId& start, const NodeId& target);
    QueryResult pin_search(const NodeId& start, const KeywordSet& keywords);
    QueryResult superset_search(const NodeId& start, const KeywordSet& keywords, SupersetLimit limit);

    /// Routes `obj` to its responsible node and stores it there. Returns that node.
    NodeId insert(const NodeId& start, const ObjectRecord& obj);
    /// Returns false when the record was not stored.
    bool remove(const NodeId& start, const ObjectRecord& obj);

private:
    Reply send(const NodeId& start, const Envelope& envelope);

    Transport& transport_;
    Dimension r_;
    std::shared_ptr<const KeywordHasher> hasher_;
};

}  // namespace hcdht

#include "hcdht/query_engine.hpp"

#include "hcdht/errors.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_set>

namespace hcdht {

const char* to_string(Op op) {
    switch (op) {
        case Op::Insert: return "insert";
        case Op::Remove: return "remove";
        case Op::Pin: return "pin";
        case Op::Superset: return "superset";
        case Op::Probe: return "probe";
    }
    return "?";
}

Op parse_op(std::string_view name) {
    for (Op op : {Op::Insert, Op::Remove, Op::Pin, Op::Superset, Op::Probe}) {
        if (name == to_string(op)) return op;
    }
    throw Error("unknown op '" + std::string(name) + "'");
}

const char* to_string(ReplyStatus status) {
    switch (status) {
        case ReplyStatus::Ok: return "ok";
        case ReplyStatus::Stored: return "stored";
        case ReplyStatus::Removed: return "removed";
        case ReplyStatus::NotFound: return "not_found";
        case ReplyStatus::RoutingFailure: return "routing_failure";
        case ReplyStatus::Rejected: return "rejected";
    }
    return "?";
}

ReplyStatus parse_reply_status(std::string_view name) {
    for (ReplyStatus s : {ReplyStatus::Ok, ReplyStatus::Stored, ReplyStatus::Removed,
                          ReplyStatus::NotFound, ReplyStatus::RoutingFailure,
                          ReplyStatus::Rejected}) {
        if (name == to_string(s)) return s;
    }
    throw Error("unknown reply status '" + std::string(name) + "'");
}

LogicalNode::LogicalNode(NodeState state) : id_(state.id()), state_(std::move(state)) {}

NodeState LogicalNode::snapshot() const {
    std::shared_lock lock(mutex_);
    return state_;
}

Reply LogicalNode::handle(const Envelope& envelope, Transport& transport) {
    Reply reply;
    try {
        if (envelope.target.r() != id_.r()) {
            throw DimensionMismatch("envelope for dimension " + std::to_string(envelope.target.r()) +
                                    " delivered to " + id_.str());
        }
        // A well-formed message never needs more than r routing hops plus r
        // tree edges.
        if (envelope.hop_counter > 2 * id_.r()) {
            throw Error("hop limit exceeded at " + id_.str());
        }
        if (envelope.target != id_) return forward(envelope, transport);
        return execute(envelope, transport);
    } catch (const Error& e) {
        reply.status = ReplyStatus::Rejected;
        reply.error = e.what();
        reply.path = {id_};
    }
    return reply;
}

Reply LogicalNode::forward(const Envelope& envelope, Transport& transport) {
    const NodeId next = next_hop(id_, envelope.target);
    Envelope onward = envelope;
    ++onward.hop_counter;

    Reply reply;
    try {
        reply = transport.deliver(next, onward);
        reply.hops += 1;
    } catch (const TransportError& e) {
        reply = Reply{};
        reply.status = ReplyStatus::RoutingFailure;
        reply.error = id_.str() + " could not reach " + next.str() + ": " + e.what();
    }
    reply.path.insert(reply.path.begin(), id_);
    return reply;
}

Reply LogicalNode::execute(const Envelope& envelope, Transport& transport) {
    Reply reply;
    reply.path = {id_};
    switch (envelope.op) {
        case Op::Probe:
            break;
        case Op::Pin: {
            std::shared_lock lock(mutex_);
            auto cids = state_.local_pin_lookup(envelope.keywords);
            reply.cids.assign(cids.begin(), cids.end());
            break;
        }
        case Op::Insert: {
            std::unique_lock lock(mutex_);
            state_.local_insert(ObjectRecord(envelope.cid, envelope.keywords));
            reply.status = ReplyStatus::Stored;
            reply.node = id_;
            break;
        }
        case Op::Remove: {
            std::unique_lock lock(mutex_);
            const bool removed = state_.local_remove(ObjectRecord(envelope.cid, envelope.keywords));
            reply.status = removed ? ReplyStatus::Removed : ReplyStatus::NotFound;
            reply.node = id_;
            break;
        }
        case Op::Superset:
            return visit_superset(envelope, transport);
    }
    return reply;
}

Reply LogicalNode::visit_superset(const Envelope& envelope, Transport& transport) {
    Reply reply;
    reply.path = {id_};
    const std::size_t wanted = envelope.limit;
    if (wanted == 0) return reply;

    const NodeId query = one(envelope.keywords, id_.dimension(), state_.hasher());
    std::unordered_set<std::string> seen(envelope.exclude.begin(), envelope.exclude.end());

    {
        std::shared_lock lock(mutex_);
        // Every excluded CID can shadow at most one local match.
        const std::size_t fetch =
            wanted > NodeState::kUnlimited - seen.size() ? NodeState::kUnlimited : wanted + seen.size();
        for (auto& cid : state_.local_superset_lookup(envelope.keywords, fetch)) {
            if (reply.cids.size() >= wanted) break;
            if (seen.insert(cid).second) reply.cids.push_back(std::move(cid));
        }
    }

    for (const NodeId& child : superset_children(id_, query)) {
        if (reply.cids.size() >= wanted) break;
        Envelope down = envelope;
        down.target = child;
        down.limit = wanted - reply.cids.size();
        down.exclude.assign(seen.begin(), seen.end());
        std::sort(down.exclude.begin(), down.exclude.end());
        ++down.hop_counter;

        Reply sub;
        try {
            sub = transport.deliver(child, down);
        } catch (const TransportError&) {
            reply.partial = true;
            continue;
        }
        if (sub.status != ReplyStatus::Ok) {
            reply.partial = true;
            if (reply.error.empty()) reply.error = sub.error;
        }
        reply.partial = reply.partial || sub.partial;
        reply.hops += 1 + sub.hops;
        reply.path.insert(reply.path.end(), sub.path.begin(), sub.path.end());
        for (auto& cid : sub.cids) {
            if (reply.cids.size() >= wanted) break;
            if (seen.insert(cid).second) reply.cids.push_back(std::move(cid));
        }
    }
    return reply;
}

SupersetLimit::SupersetLimit(std::size_t l) : l_(l) {
    if (l == 0) throw ConfigError("superset limit must be at least 1");
}

QueryEngine::QueryEngine(Transport& transport, Dimension r,
                         std::shared_ptr<const KeywordHasher> hasher)
    : transport_(transport), r_(r), hasher_(std::move(hasher)) {
    if (!hasher_) throw ConfigError("query engine requires a keyword hasher");
}

namespace {

std::vector<std::string> path_strings(const std::vector<NodeId>& path) {
    std::vector<std::string> out;
    out.reserve(path.size());
    for (const auto& id : path) out.push_back(id.str());
    return out;
}

Envelope make_envelope(const NodeId& target, Op op, KeywordSet keywords) {
    return Envelope{target, op, std::move(keywords), {}, 0, {}, 0};
}

}  // namespace

Reply QueryEngine::send(const NodeId& start, const Envelope& envelope) {
    if (start.r() != r_.value() || envelope.target.r() != r_.value()) {
        throw DimensionMismatch("query ids must have dimension " + std::to_string(r_.value()));
    }
    Reply reply;
    try {
        reply = transport_.deliver(start, envelope);
    } catch (const TransportError& e) {
        throw RoutingFailure(std::string("start node unreachable: ") + e.what(), {});
    }
    if (reply.status == ReplyStatus::RoutingFailure) {
        throw RoutingFailure(reply.error, path_strings(reply.path));
    }
    if (reply.status == ReplyStatus::Rejected) throw Error(reply.error);
    return reply;
}

QueryResult QueryEngine::route(const NodeId& start, const NodeId& target) {
    Reply reply = send(start, make_envelope(target, Op::Probe, {}));
    return QueryResult{{}, reply.hops, std::move(reply.path), reply.hops, false};
}

QueryResult QueryEngine::pin_search(const NodeId& start, const KeywordSet& keywords) {
    const NodeId target = one(keywords, r_, *hasher_);
    Reply reply = send(start, make_envelope(target, Op::Pin, keywords));
    return QueryResult{std::move(reply.cids), reply.hops, std::move(reply.path), reply.hops, false};
}

QueryResult QueryEngine::superset_search(const NodeId& start, const KeywordSet& keywords,
                                         SupersetLimit limit) {
    const NodeId target = one(keywords, r_, *hasher_);
    Envelope envelope = make_envelope(target, Op::Superset, keywords);
    envelope.limit = limit.value();
    Reply reply = send(start, envelope);
    return QueryResult{std::move(reply.cids), reply.hops, std::move(reply.path),
                       hamming(start, target), reply.partial};
}

NodeId QueryEngine::insert(const NodeId& start, const ObjectRecord& obj) {
    Envelope envelope = make_envelope(one(obj.keywords, r_, *hasher_), Op::Insert, obj.keywords);
    envelope.cid = obj.cid;
    Reply reply = send(start, envelope);
    if (reply.status != ReplyStatus::Stored || !reply.node) {
        throw Error("insert was not acknowledged: " + std::string(to_string(reply.status)));
    }
    return *reply.node;
}

bool QueryEngine::remove(const NodeId& start, const ObjectRecord& obj) {
    Envelope envelope = make_envelope(one(obj.keywords, r_, *hasher_), Op::Remove, obj.keywords);
    envelope.cid = obj.cid;
    Reply reply = send(start, envelope);
    return reply.status == ReplyStatus::Removed;
}

}  // namespace hcdht

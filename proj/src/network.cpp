#include "hcdht/network.hpp"

#include "hcdht/errors.hpp"

#include <cstdio>

namespace hcdht {

const char* to_string(TransportKind kind) {
    return kind == TransportKind::InProcess ? "inproc" : "wire";
}

TransportKind parse_transport(std::string_view name) {
    if (name == "inproc" || name == "in-process") return TransportKind::InProcess;
    if (name == "wire" || name == "http") return TransportKind::Wire;
    throw ConfigError("unknown transport '" + std::string(name) + "' (expected inproc or wire)");
}

std::string node_address(const NetworkConfig& cfg, const NodeId& id) {
    if (cfg.transport == TransportKind::InProcess) return "inproc://" + id.str();
    return node_endpoint(cfg.host, cfg.base_port, id).str();
}

std::map<NodeId, std::string> neighbor_addresses(const NetworkConfig& cfg, const NodeId& id) {
    std::map<NodeId, std::string> out;
    for (const auto& n : neighbors(id)) out.emplace(n, node_address(cfg, n));
    return out;
}

Reply InProcessTransport::deliver(const NodeId& to, const Envelope& envelope) {
    if (to.index() >= nodes_.size()) throw TransportError("no node " + to.str());
    return nodes_[to.index()]->handle(envelope, *this);
}

namespace {

NetworkConfig validated(NetworkConfig cfg) {
    if (cfg.r < Dimension::kMin || cfg.r > kMaxNetworkDimension) {
        throw ConfigError("network dimension must be in [1, " + std::to_string(kMaxNetworkDimension) +
                          "], got " + std::to_string(cfg.r));
    }
    if (cfg.transport == TransportKind::Wire) check_port_range(Dimension(cfg.r), cfg.base_port);
    if (!cfg.hasher) cfg.hasher = std::make_shared<DigestHasher>();
    return cfg;
}

}  // namespace

Network::Network(NetworkConfig cfg) : cfg_(validated(std::move(cfg))), r_(cfg_.r) {
    nodes_.reserve(r_.node_count());
    for (std::uint64_t i = 0; i < r_.node_count(); ++i) {
        const NodeId id = NodeId::from_index(r_, i);
        nodes_.push_back(
            std::make_unique<LogicalNode>(NodeState(id, neighbor_addresses(cfg_, id), cfg_.hasher)));
    }
    inproc_ = std::make_unique<InProcessTransport>(nodes_);
    client_transport_ = inproc_.get();

    if (cfg_.transport == TransportKind::Wire) {
        const std::string host = cfg_.host;
        const std::uint16_t base = cfg_.base_port;
        wire_ = std::make_unique<WireTransport>(
            [host, base](const NodeId& id) { return node_endpoint(host, base, id); });
        servers_.reserve(nodes_.size());
        for (auto& node : nodes_) {
            auto server = std::make_unique<NodeServer>(*node, *wire_, cfg_.hasher);
            server->start(node_endpoint(host, base, node->id()));
            servers_.push_back(std::move(server));
        }
        client_transport_ = wire_.get();
    }

    engine_ = std::make_unique<QueryEngine>(*client_transport_, r_, cfg_.hasher);
    universe_ = workload_keywords(r_, *cfg_.hasher);
}

Network::~Network() {
    for (auto& server : servers_) server->stop();
}

LogicalNode& Network::node(const NodeId& id) {
    if (id.r() != r_.value() || id.index() >= nodes_.size()) {
        throw DimensionMismatch("node " + id.str() + " is not part of this network");
    }
    return *nodes_[id.index()];
}

std::vector<NodeState> Network::snapshot() const {
    std::vector<NodeState> out;
    out.reserve(nodes_.size());
    for (const auto& node : nodes_) out.push_back(node->snapshot());
    return out;
}

std::vector<ObjectRecord> Network::populate(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ObjectRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        KeywordSet keywords = random_keyset(rng, universe_, r_);
        char cid[40];
        std::snprintf(cid, sizeof cid, "obj-%016llx", static_cast<unsigned long long>(rng.next()));
        const NodeId start = NodeId::from_index(r_, rng.below(r_.node_count()));
        ObjectRecord obj(cid, std::move(keywords));
        engine_->insert(start, obj);
        records.push_back(std::move(obj));
    }
    return records;
}

}  // namespace hcdht

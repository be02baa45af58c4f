#pragma once

#include "hcdht/query_engine.hpp"
#include "hcdht/random.hpp"
#include "hcdht/wire.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hcdht {

enum class TransportKind { InProcess, Wire };

const char* to_string(TransportKind kind);
TransportKind parse_transport(std::string_view name);

struct NetworkConfig {
    unsigned r = 3;
    TransportKind transport = TransportKind::InProcess;
    std::string host = "127.0.0.1";
    std::uint16_t base_port = 9000;
    std::uint64_t seed = 0;
    /// Defaults to the digest hasher when null.
    std::shared_ptr<const KeywordHasher> hasher;
};

/// Largest dimension a single process will instantiate.
inline constexpr unsigned kMaxNetworkDimension = 16;

/// Transport address of `id` under `cfg`: "inproc://<id>" or "host:port".
std::string node_address(const NetworkConfig& cfg, const NodeId& id);

/// Neighbor address map of `id` under `cfg`.
std::map<NodeId, std::string> neighbor_addresses(const NetworkConfig& cfg, const NodeId& id);

/// Calls the target node's handler directly on the calling thread.
class InProcessTransport final : public Transport {
public:
    explicit InProcessTransport(std::vector<std::unique_ptr<LogicalNode>>& nodes) : nodes_(nodes) {}
    Reply deliver(const NodeId& to, const Envelope& envelope) override;

private:
    std::vector<std::unique_ptr<LogicalNode>>& nodes_;
};

/// A complete 2^r-node hypercube hosted in this process.
class Network {
public:
    /// Throws ConfigError for an invalid config and BootstrapError when a
    /// wire-mode node cannot bind its port.
    explicit Network(NetworkConfig cfg);
    ~Network();

    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    const NetworkConfig& config() const noexcept { return cfg_; }
    Dimension dimension() const noexcept { return r_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const KeywordHasher& hasher() const noexcept { return *cfg_.hasher; }
    std::shared_ptr<const KeywordHasher> shared_hasher() const { return cfg_.hasher; }

    QueryEngine& engine() noexcept { return *engine_; }
    Transport& transport() noexcept { return *client_transport_; }

    LogicalNode& node(const NodeId& id);
    /// Copies of every node's state, ordered by id index.
    std::vector<NodeState> snapshot() const;

    /// Inserts `count` generated objects, each injected at a random start
    /// node and routed to its responsible node. Pure function of `seed`.
    std::vector<ObjectRecord> populate(std::size_t count, std::uint64_t seed);

    const std::vector<std::string>& keyword_universe() const noexcept { return universe_; }

private:
    NetworkConfig cfg_;
    Dimension r_;
    std::vector<std::unique_ptr<LogicalNode>> nodes_;
    std::unique_ptr<InProcessTransport> inproc_;
    std::unique_ptr<WireTransport> wire_;
    std::vector<std::unique_ptr<NodeServer>> servers_;
    Transport* client_transport_ = nullptr;
    std::unique_ptr<QueryEngine> engine_;
    std::vector<std::string> universe_;
};

}  // namespace hcdht

#pragma once

#include "hcdht/query_engine.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace hcdht {

nlohmann::json to_json(const Envelope& envelope);
Envelope envelope_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Reply& reply);
Reply reply_from_json(const nlohmann::json& j);

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    static Endpoint parse(std::string_view host_port);
    std::string str() const { return host + ":" + std::to_string(port); }
};

/// Address of a node under the base-port rule: port = base_port + id.index().
Endpoint node_endpoint(const std::string& host, std::uint16_t base_port, const NodeId& id);

/// Throws ConfigError when the 2^r ports starting at base_port do not fit.
void check_port_range(Dimension r, std::uint16_t base_port);

/// Sends envelopes to POST /internal/forward on the target node.
class WireTransport final : public Transport {
public:
    using AddressFn = std::function<Endpoint(const NodeId&)>;

    explicit WireTransport(AddressFn address, int timeout_seconds = 10);

    Reply deliver(const NodeId& to, const Envelope& envelope) override;

private:
    AddressFn address_;
    int timeout_seconds_;
};

/// HTTP+JSON front end of one logical node.
///
///   POST /insert   {"cid", "keywords"}          -> {"status":"stored","node":id}
///   POST /remove   {"cid", "keywords"}          -> {"status":"removed"|"not_found"}
///   GET  /pin?keywords=a,b                      -> {"cids":[...],"hops":n}
///   GET  /superset?keywords=a,b&limit=l         -> {"cids":[...],"hops":n}
///   POST /internal/forward  envelope            -> reply
///   GET  /info                                  -> {"id","r","neighbors"}
class NodeServer {
public:
    /// `forwarder` carries onward legs; both it and `node` must outlive the server.
    NodeServer(LogicalNode& node, Transport& forwarder,
               std::shared_ptr<const KeywordHasher> hasher, std::size_t worker_threads = 4);
    ~NodeServer();

    NodeServer(const NodeServer&) = delete;
    NodeServer& operator=(const NodeServer&) = delete;

    /// Binds synchronously and serves on a background thread. Throws
    /// BootstrapError naming the node when the bind fails.
    void start(const Endpoint& endpoint);
    void stop();
    /// Serves on the calling thread until stop() is called from elsewhere.
    void run(const Endpoint& endpoint);

private:
    void bind(const Endpoint& endpoint);
    void install_routes();

    LogicalNode& node_;
    Transport& forwarder_;
    std::shared_ptr<const KeywordHasher> hasher_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

}  // namespace hcdht

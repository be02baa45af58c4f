#include "hcdht/wire.hpp"

#include "hcdht/errors.hpp"

#include <httplib.h>

#include <charconv>

namespace hcdht {

using nlohmann::json;

namespace {

json keywords_json(const KeywordSet& keywords) { return json(keywords.keywords()); }

KeywordSet keywords_from_json(const json& j) {
    if (!j.is_array()) throw InvalidKeyword("keywords must be a JSON array of strings");
    return KeywordSet(j.get<std::vector<std::string>>());
}

json path_json(const std::vector<NodeId>& path) {
    json out = json::array();
    for (const auto& id : path) out.push_back(id.str());
    return out;
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
}

void reply_json(httplib::Response& res, const json& body) {
    res.status = 200;
    res.set_content(body.dump(), "application/json");
}

/// Routing failures are reported as 502 so clients see a transport problem.
void reply_failure(httplib::Response& res, const Reply& reply) {
    const int status = reply.status == ReplyStatus::RoutingFailure ? 502 : 400;
    res.status = status;
    res.set_content(json{{"error", reply.error}, {"path", path_json(reply.path)}}.dump(),
                    "application/json");
}

std::size_t parse_limit(const std::string& text) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
        throw ConfigError("limit must be a positive integer, got '" + text + "'");
    }
    return value;
}

int socket_options_exclusive(socket_t sock) {
    // The library default enables SO_REUSEPORT, which lets two servers share a
    // port silently. Only SO_REUSEADDR is wanted.
    int yes = 1;
    return setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
                      sizeof(yes));
}

}  // namespace

json to_json(const Envelope& envelope) {
    json payload{{"keywords", keywords_json(envelope.keywords)}};
    if (!envelope.cid.empty()) payload["cid"] = envelope.cid;
    if (envelope.op == Op::Superset) {
        payload["limit"] = envelope.limit;
        payload["exclude"] = envelope.exclude;
    }
    return json{{"target", envelope.target.str()},
                {"op", to_string(envelope.op)},
                {"payload", std::move(payload)},
                {"hop_counter", envelope.hop_counter}};
}

Envelope envelope_from_json(const json& j) {
    const json& payload = j.at("payload");
    Envelope envelope{NodeId::parse(j.at("target").get<std::string>()),
                      parse_op(j.at("op").get<std::string>()),
                      keywords_from_json(payload.at("keywords")),
                      payload.value("cid", std::string{}),
                      payload.value("limit", std::size_t{0}),
                      payload.value("exclude", std::vector<std::string>{}),
                      j.value("hop_counter", std::uint32_t{0})};
    return envelope;
}

json to_json(const Reply& reply) {
    json j{{"status", to_string(reply.status)},
           {"cids", reply.cids},
           {"hops", reply.hops},
           {"path", path_json(reply.path)},
           {"partial", reply.partial}};
    if (reply.node) j["node"] = reply.node->str();
    if (!reply.error.empty()) j["error"] = reply.error;
    return j;
}

Reply reply_from_json(const json& j) {
    Reply reply;
    reply.status = parse_reply_status(j.at("status").get<std::string>());
    reply.cids = j.at("cids").get<std::vector<std::string>>();
    reply.hops = j.at("hops").get<std::uint32_t>();
    for (const auto& id : j.at("path")) reply.path.push_back(NodeId::parse(id.get<std::string>()));
    if (j.contains("node")) reply.node = NodeId::parse(j.at("node").get<std::string>());
    reply.partial = j.value("partial", false);
    reply.error = j.value("error", std::string{});
    return reply;
}

Endpoint Endpoint::parse(std::string_view host_port) {
    const auto colon = host_port.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw ConfigError("address must be host:port, got '" + std::string(host_port) + "'");
    }
    const auto port_text = host_port.substr(colon + 1);
    unsigned port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port == 0 || port > 65535) {
        throw ConfigError("invalid port in '" + std::string(host_port) + "'");
    }
    return Endpoint{std::string(host_port.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

void check_port_range(Dimension r, std::uint16_t base_port) {
    if (base_port == 0 || base_port + r.node_count() - 1 > 65535) {
        throw ConfigError("ports " + std::to_string(base_port) + ".." +
                          std::to_string(base_port + r.node_count() - 1) +
                          " do not fit in the port range");
    }
}

Endpoint node_endpoint(const std::string& host, std::uint16_t base_port, const NodeId& id) {
    check_port_range(id.dimension(), base_port);
    return Endpoint{host, static_cast<std::uint16_t>(base_port + id.index())};
}

WireTransport::WireTransport(AddressFn address, int timeout_seconds)
    : address_(std::move(address)), timeout_seconds_(timeout_seconds) {}

Reply WireTransport::deliver(const NodeId& to, const Envelope& envelope) {
    const Endpoint endpoint = address_(to);
    httplib::Client client(endpoint.host, endpoint.port);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_write_timeout(timeout_seconds_, 0);

    auto res = client.Post("/internal/forward", to_json(envelope).dump(), "application/json");
    if (!res) {
        throw TransportError("node " + to.str() + " at " + endpoint.str() + ": " +
                             httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw TransportError("node " + to.str() + " at " + endpoint.str() + " answered HTTP " +
                             std::to_string(res->status) + ": " + res->body);
    }
    try {
        return reply_from_json(json::parse(res->body));
    } catch (const json::exception& e) {
        throw TransportError("malformed reply from " + to.str() + ": " + e.what());
    }
}

NodeServer::NodeServer(LogicalNode& node, Transport& forwarder,
                       std::shared_ptr<const KeywordHasher> hasher, std::size_t worker_threads)
    : node_(node),
      forwarder_(forwarder),
      hasher_(std::move(hasher)),
      server_(std::make_unique<httplib::Server>()) {
    server_->new_task_queue = [worker_threads] { return new httplib::ThreadPool(worker_threads); };
    server_->set_socket_options(socket_options_exclusive);
    install_routes();
}

NodeServer::~NodeServer() { stop(); }

void NodeServer::install_routes() {
    const Dimension r = node_.id().dimension();

    auto run_local = [this](Envelope envelope) { return node_.handle(envelope, forwarder_); };

    auto record_from_body = [](const httplib::Request& req) {
        const json body = json::parse(req.body);
        return ObjectRecord(body.at("cid").get<std::string>(), keywords_from_json(body.at("keywords")));
    };

    server_->Post("/insert", [=, this](const httplib::Request& req, httplib::Response& res) {
        try {
            ObjectRecord obj = record_from_body(req);
            Envelope env{one(obj.keywords, r, *hasher_), Op::Insert, obj.keywords, obj.cid, 0, {}, 0};
            Reply reply = run_local(std::move(env));
            if (reply.status != ReplyStatus::Stored) return reply_failure(res, reply);
            reply_json(res, {{"status", "stored"}, {"node", reply.node->str()}, {"hops", reply.hops}});
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });

    server_->Post("/remove", [=, this](const httplib::Request& req, httplib::Response& res) {
        try {
            ObjectRecord obj = record_from_body(req);
            Envelope env{one(obj.keywords, r, *hasher_), Op::Remove, obj.keywords, obj.cid, 0, {}, 0};
            Reply reply = run_local(std::move(env));
            if (reply.status != ReplyStatus::Removed && reply.status != ReplyStatus::NotFound) {
                return reply_failure(res, reply);
            }
            reply_json(res, {{"status", to_string(reply.status)}, {"hops", reply.hops}});
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });

    server_->Get("/pin", [=, this](const httplib::Request& req, httplib::Response& res) {
        try {
            KeywordSet keywords = KeywordSet::parse_list(req.get_param_value("keywords"));
            Envelope env{one(keywords, r, *hasher_), Op::Pin, keywords, {}, 0, {}, 0};
            Reply reply = run_local(std::move(env));
            if (reply.status != ReplyStatus::Ok) return reply_failure(res, reply);
            reply_json(res, {{"cids", reply.cids}, {"hops", reply.hops}});
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });

    server_->Get("/superset", [=, this](const httplib::Request& req, httplib::Response& res) {
        try {
            KeywordSet keywords = KeywordSet::parse_list(req.get_param_value("keywords"));
            const std::size_t limit =
                req.has_param("limit") ? parse_limit(req.get_param_value("limit")) : 10;
            Envelope env{one(keywords, r, *hasher_), Op::Superset, keywords, {}, limit, {}, 0};
            Reply reply = run_local(std::move(env));
            if (reply.status != ReplyStatus::Ok) return reply_failure(res, reply);
            json body{{"cids", reply.cids}, {"hops", reply.hops}};
            if (reply.partial) body["partial"] = true;
            reply_json(res, body);
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });

    server_->Post("/internal/forward", [=, this](const httplib::Request& req, httplib::Response& res) {
        try {
            Reply reply = run_local(envelope_from_json(json::parse(req.body)));
            reply_json(res, to_json(reply));
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });

    server_->Get("/info", [this](const httplib::Request&, httplib::Response& res) {
        const NodeState state = node_.snapshot();
        json neighbors = json::array();
        json addresses = json::object();
        for (const auto& n : hcdht::neighbors(state.id())) {
            neighbors.push_back(n.str());
            addresses[n.str()] = state.neighbor_addresses().at(n);
        }
        reply_json(res, {{"id", state.id().str()},
                         {"r", state.dimension().value()},
                         {"neighbors", neighbors},
                         {"addresses", addresses},
                         {"records", state.record_count()}});
    });
}

void NodeServer::bind(const Endpoint& endpoint) {
    if (!server_->bind_to_port(endpoint.host, endpoint.port)) {
        throw BootstrapError(node_.id().str(), "cannot bind " + endpoint.str());
    }
}

void NodeServer::start(const Endpoint& endpoint) {
    bind(endpoint);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void NodeServer::run(const Endpoint& endpoint) {
    bind(endpoint);
    server_->listen_after_bind();
}

void NodeServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace hcdht

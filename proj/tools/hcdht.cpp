#include "hcdht/dao_scenario.hpp"
#include "hcdht/errors.hpp"
#include "hcdht/experiment.hpp"
#include "hcdht/gateway.hpp"
#include "hcdht/network.hpp"
#include "hcdht/wire.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <httplib.h>
#include <json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenario = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTransport = 3;

class UsageError : public hcdht::Error {
public:
    using Error::Error;
};

class ClientTransportError : public hcdht::Error {
public:
    using Error::Error;
};

struct ServeArgs {
    unsigned r = 0;
    bool all = false;
    std::string node;
    std::string host = "127.0.0.1";
    std::uint16_t base_port = 9000;
};

struct ClientArgs {
    std::string addr = "127.0.0.1:9000";
    std::string keywords;
    std::string cid;
    std::size_t limit = 10;
    std::string resolver_url;
    std::string resolver_seed;
    int timeout = 10;
};

struct ExperimentArgs {
    hcdht::ExperimentPlan plan;
    std::string transport = "inproc";
    std::string out;
    std::string raw_out;
};

/// Blocks SIGINT and SIGTERM for every thread created afterwards so that
/// wait_for_signal() can collect them synchronously.
sigset_t block_termination_signals() {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    return set;
}

int wait_for_signal(const sigset_t& set) {
    int sig = 0;
    sigwait(&set, &sig);
    return sig;
}

int cmd_serve(const ServeArgs& args) {
    if (args.all == !args.node.empty()) throw UsageError("serve needs exactly one of --all or --node");
    if (args.r == 0 || args.r > hcdht::kMaxNetworkDimension) {
        throw hcdht::ConfigError(fmt::format("--r must be in [1, {}]", hcdht::kMaxNetworkDimension));
    }
    hcdht::NetworkConfig cfg;
    cfg.r = args.r;
    cfg.transport = hcdht::TransportKind::Wire;
    cfg.host = args.host;
    cfg.base_port = args.base_port;
    const hcdht::Dimension r(args.r);
    hcdht::check_port_range(r, args.base_port);

    const sigset_t signals = block_termination_signals();

    if (args.all) {
        hcdht::Network net(cfg);
        for (std::uint64_t i = 0; i < r.node_count(); ++i) {
            const auto id = hcdht::NodeId::from_index(r, i);
            fmt::print("serving {} at {}\n", id.str(), hcdht::node_address(cfg, id));
        }
        std::fflush(stdout);
        const int sig = wait_for_signal(signals);
        fmt::print(stderr, "received signal {}, stopping\n", sig);
        return kExitOk;
    }

    const hcdht::NodeId id = hcdht::NodeId::parse(args.node);
    if (id.dimension() != r) {
        throw hcdht::ConfigError(fmt::format("node id {} does not have {} positions", args.node, args.r));
    }
    auto hasher = std::make_shared<hcdht::DigestHasher>();
    hcdht::LogicalNode node(hcdht::NodeState(id, hcdht::neighbor_addresses(cfg, id), hasher));
    hcdht::WireTransport transport(
        [&](const hcdht::NodeId& n) { return hcdht::node_endpoint(cfg.host, cfg.base_port, n); });
    hcdht::NodeServer server(node, transport, hasher);
    server.start(hcdht::node_endpoint(cfg.host, cfg.base_port, id));
    fmt::print("serving {} at {}\n", id.str(), hcdht::node_address(cfg, id));
    std::fflush(stdout);
    const int sig = wait_for_signal(signals);
    fmt::print(stderr, "received signal {}, stopping\n", sig);
    server.stop();
    return kExitOk;
}

hcdht::KeywordSet parse_keywords(const std::string& text) {
    try {
        auto keys = hcdht::KeywordSet::parse_list(text);
        if (keys.empty()) throw UsageError("--keywords must name at least one keyword");
        return keys;
    } catch (const hcdht::InvalidKeyword& e) {
        throw UsageError(e.what());
    }
}

json call_node(const ClientArgs& args, const std::string& method, const std::string& path,
               const std::string& body = {}) {
    const hcdht::Endpoint endpoint = hcdht::Endpoint::parse(args.addr);
    httplib::Client client(endpoint.host, endpoint.port);
    client.set_connection_timeout(args.timeout, 0);
    client.set_read_timeout(args.timeout, 0);
    auto res = method == "GET" ? client.Get(path) : client.Post(path, body, "application/json");
    if (!res) {
        throw ClientTransportError(fmt::format("{}: {}", endpoint.str(), httplib::to_string(res.error())));
    }
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception&) {
        throw ClientTransportError(fmt::format("{} answered HTTP {} with a non-JSON body", endpoint.str(),
                                               res->status));
    }
    if (res->status == 400) throw UsageError(reply.value("error", std::string("bad request")));
    if (res->status != 200) {
        throw ClientTransportError(fmt::format("{} answered HTTP {}: {}", endpoint.str(), res->status,
                                               reply.value("error", std::string{})));
    }
    return reply;
}

std::string keyword_query(const hcdht::KeywordSet& keys) {
    return httplib::detail::encode_query_param(keys.join());
}

int cmd_record(const ClientArgs& args, const std::string& path) {
    if (args.cid.empty()) throw UsageError("--cid is required");
    const auto keys = parse_keywords(args.keywords);
    const json body{{"cid", args.cid}, {"keywords", keys.keywords()}};
    std::cout << call_node(args, "POST", path, body.dump()).dump() << '\n';
    return kExitOk;
}

std::unique_ptr<hcdht::ContentResolver> make_resolver(const ClientArgs& args) {
    if (!args.resolver_url.empty() && !args.resolver_seed.empty()) {
        throw UsageError("--resolver-url and --resolver-seed are exclusive");
    }
    if (!args.resolver_url.empty()) return std::make_unique<hcdht::DaemonResolver>(args.resolver_url);
    if (!args.resolver_seed.empty()) {
        return std::make_unique<hcdht::MockResolver>(hcdht::MockResolver::from_json_file(args.resolver_seed));
    }
    return nullptr;
}

const char* status_name(hcdht::ResolveStatus status) {
    switch (status) {
        case hcdht::ResolveStatus::Found: return "found";
        case hcdht::ResolveStatus::NotFound: return "not_found";
        case hcdht::ResolveStatus::Unavailable: return "unavailable";
    }
    return "?";
}

/// Adds a "content" array resolving every returned CID.
void attach_content(json& reply, const hcdht::ContentResolver& resolver) {
    json content = json::array();
    for (const auto& cid : reply.at("cids")) {
        json entry{{"cid", cid}};
        try {
            if (auto bytes = resolver.resolve(cid.get<std::string>())) {
                entry["status"] = status_name(hcdht::ResolveStatus::Found);
                entry["bytes_base64"] = hcdht::base64_encode(*bytes);
            } else {
                entry["status"] = status_name(hcdht::ResolveStatus::NotFound);
            }
        } catch (const hcdht::GatewayUnavailable&) {
            entry["status"] = status_name(hcdht::ResolveStatus::Unavailable);
        }
        content.push_back(std::move(entry));
    }
    reply["content"] = std::move(content);
}

int cmd_query(const ClientArgs& args, bool superset) {
    const auto keys = parse_keywords(args.keywords);
    if (superset && args.limit == 0) throw UsageError("--limit must be positive");
    const auto resolver = make_resolver(args);
    std::string path = (superset ? "/superset?keywords=" : "/pin?keywords=") + keyword_query(keys);
    if (superset) path += "&limit=" + std::to_string(args.limit);
    json reply = call_node(args, "GET", path);
    if (resolver) attach_content(reply, *resolver);
    std::cout << reply.dump() << '\n';
    return kExitOk;
}

void write_file(const std::string& path, const hcdht::ExperimentReport& report,
                void (*writer)(std::ostream&, const hcdht::ExperimentReport&)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hcdht::Error("cannot write " + path);
    writer(out, report);
}

std::string default_raw_path(const std::string& out) {
    const std::string ext = ".csv";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
        return out.substr(0, out.size() - ext.size()) + ".raw.csv";
    }
    return out + ".raw.csv";
}

int cmd_experiment(ExperimentArgs args) {
    args.plan.transport = hcdht::parse_transport(args.transport);
    const auto report = hcdht::run_experiment(args.plan);
    if (!args.out.empty()) {
        write_file(args.out, report, hcdht::write_summary_csv);
        write_file(args.raw_out.empty() ? default_raw_path(args.out) : args.raw_out, report,
                   hcdht::write_raw_csv);
    } else if (!args.raw_out.empty()) {
        write_file(args.raw_out, report, hcdht::write_raw_csv);
    }
    hcdht::write_summary_table(std::cout, report);
    return kExitOk;
}

int cmd_dao(const std::string& scenario) {
    std::ifstream in(scenario);
    if (!in) throw UsageError("cannot open scenario " + scenario);
    hcdht::dao::Dao dao;
    try {
        for (const auto& line : hcdht::dao::run_scenario(in, dao)) std::cout << line << '\n';
    } catch (const hcdht::dao::ScenarioError& e) {
        std::cerr << "error: " << scenario << ": " << e.what() << '\n';
        return kExitScenario;
    }
    std::cout << hcdht::dao::to_json(dao.state()).dump(2) << '\n';
    return kExitOk;
}

void add_client_options(CLI::App& cmd, ClientArgs& args, bool record) {
    cmd.add_option("--addr", args.addr, "Node address host:port")->capture_default_str();
    cmd.add_option("--keywords", args.keywords, "Comma-separated keywords")->required();
    if (record) cmd.add_option("--cid", args.cid, "Content identifier")->required();
    cmd.add_option("--timeout", args.timeout, "Seconds per request")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypercube keyword index: nodes, queries, experiments and governance scenarios"};
    app.require_subcommand(1);

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Host logical nodes over HTTP");
    serve_cmd->add_option("--r", serve.r, "Hypercube dimension")->required();
    serve_cmd->add_flag("--all", serve.all, "Host all 2^r nodes in this process");
    serve_cmd->add_option("--node", serve.node, "Host only this node id");
    serve_cmd->add_option("--host", serve.host)->capture_default_str();
    serve_cmd->add_option("--base-port", serve.base_port)->capture_default_str();

    ClientArgs client;
    auto* insert_cmd = app.add_subcommand("insert", "Publish a CID under a keyword set");
    add_client_options(*insert_cmd, client, true);
    auto* remove_cmd = app.add_subcommand("remove", "Withdraw a CID from a keyword set");
    add_client_options(*remove_cmd, client, true);
    auto* pin_cmd = app.add_subcommand("pin", "Objects described by exactly these keywords");
    add_client_options(*pin_cmd, client, false);
    auto* superset_cmd = app.add_subcommand("superset", "Objects described by at least these keywords");
    add_client_options(*superset_cmd, client, false);
    superset_cmd->add_option("--limit", client.limit, "Maximum number of CIDs")->capture_default_str();
    for (auto* cmd : {pin_cmd, superset_cmd}) {
        cmd->add_option("--resolver-url", client.resolver_url, "Storage daemon URL for content");
        cmd->add_option("--resolver-seed", client.resolver_seed, "JSON map cid -> base64 content");
    }

    ExperimentArgs experiment;
    auto* exp_cmd = app.add_subcommand("experiment", "Run the hop-count experiment grid");
    exp_cmd->add_option("--nodes", experiment.plan.node_counts, "Network sizes (powers of two)")
        ->delimiter(',')
        ->capture_default_str();
    exp_cmd->add_option("--objects", experiment.plan.object_counts, "Object counts")
        ->delimiter(',')
        ->capture_default_str();
    exp_cmd->add_option("--queries", experiment.plan.queries_per_cell, "Queries per cell and op")
        ->capture_default_str();
    exp_cmd->add_option("--limit", experiment.plan.superset_limit, "Superset limit")->capture_default_str();
    exp_cmd->add_option("--seed", experiment.plan.seed)->capture_default_str();
    exp_cmd->add_option("--transport", experiment.transport, "inproc or wire")->capture_default_str();
    exp_cmd->add_option("--host", experiment.plan.host)->capture_default_str();
    exp_cmd->add_option("--base-port", experiment.plan.base_port)->capture_default_str();
    exp_cmd->add_option("--out", experiment.out, "Summary CSV path");
    exp_cmd->add_option("--raw-out", experiment.raw_out, "Per-query CSV path");

    std::string scenario;
    auto* dao_cmd = app.add_subcommand("dao", "Run a governance scenario file");
    dao_cmd->add_option("--scenario", scenario, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*serve_cmd) return cmd_serve(serve);
        if (*insert_cmd) return cmd_record(client, "/insert");
        if (*remove_cmd) return cmd_record(client, "/remove");
        if (*pin_cmd) return cmd_query(client, false);
        if (*superset_cmd) return cmd_query(client, true);
        if (*exp_cmd) return cmd_experiment(experiment);
        if (*dao_cmd) return cmd_dao(scenario);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hcdht::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hcdht::InvalidNodeId& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hcdht::InvalidDimension& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ClientTransportError& e) {
        std::cerr << "transport error: " << e.what() << '\n';
        return kExitTransport;
    } catch (const hcdht::BootstrapError& e) {
        std::cerr << "bootstrap error: " << e.what() << '\n';
        return kExitTransport;
    } catch (const hcdht::TransportError& e) {
        std::cerr << "transport error: " << e.what() << '\n';
        return kExitTransport;
    } catch (const hcdht::RoutingFailure& e) {
        std::cerr << "routing failure: " << e.what() << '\n';
        return kExitTransport;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}

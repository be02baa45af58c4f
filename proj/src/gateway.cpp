#include "hcdht/gateway.hpp"

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace hcdht {

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw Error("base64 input length must be a multiple of 4");
    std::string out(3 * (text.size() / 4), '\0');
    const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) throw Error("malformed base64 input");
    // EVP_DecodeBlock keeps the bytes produced by '=' padding.
    std::size_t padding = 0;
    if (!text.empty() && text.back() == '=') ++padding;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
    out.resize(static_cast<std::size_t>(n) - padding);
    return out;
}

MockResolver::MockResolver(std::map<std::string, std::string, std::less<>> contents)
    : contents_(std::move(contents)) {}

MockResolver MockResolver::from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error("resolver seed must be a JSON object of cid -> base64");
    std::map<std::string, std::string, std::less<>> contents;
    for (const auto& [cid, encoded] : j.items()) {
        contents.emplace(cid, base64_decode(encoded.get<std::string>()));
    }
    return MockResolver(std::move(contents));
}

MockResolver MockResolver::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open resolver seed " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::optional<std::string> MockResolver::resolve(std::string_view cid) const {
    if (cid.empty()) throw InvalidRecord("cid must be non-empty");
    if (auto it = contents_.find(cid); it != contents_.end()) return it->second;
    return std::nullopt;
}

DaemonResolver::DaemonResolver(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

std::optional<std::string> DaemonResolver::resolve(std::string_view cid) const {
    if (cid.empty()) throw InvalidRecord("cid must be non-empty");
    httplib::Client client(base_url_);
    if (!client.is_valid()) throw GatewayUnavailable("invalid daemon url " + base_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);

    const std::string path = "/api/v0/cat?arg=" + httplib::detail::encode_query_param(std::string(cid));
    auto res = client.Post(path);
    if (!res) {
        throw GatewayUnavailable("daemon at " + base_url_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status == 200) return res->body;
    // The daemon reports unknown or unparseable CIDs as an error body rather
    // than a dedicated status.
    if (res->status == 404 || (res->status == 500 && (res->body.find("not found") != std::string::npos ||
                                                      res->body.find("invalid") != std::string::npos))) {
        return std::nullopt;
    }
    throw GatewayUnavailable("daemon at " + base_url_ + " answered HTTP " + std::to_string(res->status));
}

std::vector<ResolvedContent> pin_search_with_content(QueryEngine& engine, const NodeId& start,
                                                     const KeywordSet& keywords,
                                                     const ContentResolver& resolver) {
    const QueryResult result = engine.pin_search(start, keywords);
    std::vector<ResolvedContent> out;
    out.reserve(result.cids.size());
    for (const auto& cid : result.cids) {
        ResolvedContent entry{cid, ResolveStatus::NotFound, std::nullopt};
        try {
            entry.bytes = resolver.resolve(cid);
            if (entry.bytes) entry.status = ResolveStatus::Found;
        } catch (const GatewayUnavailable&) {
            entry.status = ResolveStatus::Unavailable;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace hcdht

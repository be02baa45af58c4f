#pragma once

#include "hcdht/errors.hpp"
#include "hcdht/query_engine.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcdht {

/// The storage daemon could not be reached or answered with a server error.
class GatewayUnavailable : public Error {
public:
    using Error::Error;
};

/// Read-only access to content-addressed storage.
class ContentResolver {
public:
    virtual ~ContentResolver() = default;
    /// Bytes stored under `cid`, or nullopt when the CID is unknown. Throws
    /// GatewayUnavailable when the backend cannot answer.
    virtual std::optional<std::string> resolve(std::string_view cid) const = 0;
};

class MockResolver final : public ContentResolver {
public:
    MockResolver() = default;
    explicit MockResolver(std::map<std::string, std::string, std::less<>> contents);

    /// Seed file: JSON object mapping CID to base64-encoded bytes.
    static MockResolver from_json_file(const std::string& path);
    static MockResolver from_json(std::string_view text);

    std::optional<std::string> resolve(std::string_view cid) const override;

private:
    std::map<std::string, std::string, std::less<>> contents_;
};

/// Client for a daemon exposing `POST /api/v0/cat?arg=<cid>`.
class DaemonResolver final : public ContentResolver {
public:
    /// `base_url` like "http://127.0.0.1:5001".
    explicit DaemonResolver(std::string base_url, int timeout_seconds = 5);

    std::optional<std::string> resolve(std::string_view cid) const override;

private:
    std::string base_url_;
    int timeout_seconds_;
};

enum class ResolveStatus { Found, NotFound, Unavailable };

struct ResolvedContent {
    std::string cid;
    ResolveStatus status = ResolveStatus::NotFound;
    std::optional<std::string> bytes;
};

/// Pin Search whose CIDs are then resolved one by one. Resolution failures
/// are recorded per entry and never fail the query.
std::vector<ResolvedContent> pin_search_with_content(QueryEngine& engine, const NodeId& start,
                                                     const KeywordSet& keywords,
                                                     const ContentResolver& resolver);

std::string base64_encode(std::string_view bytes);
/// Throws Error on malformed input.
std::string base64_decode(std::string_view text);

}  // namespace hcdht

#include "hcdht/topology.hpp"

#include "hcdht/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>

namespace hcdht {

namespace {

std::uint32_t full_mask(unsigned r) {
    return r == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << r) - 1;
}

void require_same_dimension(const NodeId& a, const NodeId& b) {
    if (a.r() != b.r()) {
        throw DimensionMismatch("node ids of dimension " + std::to_string(a.r()) + " and " +
                                std::to_string(b.r()));
    }
}

}  // namespace

Dimension::Dimension(unsigned r) : r_(r) {
    if (r < kMin || r > kMax) {
        throw InvalidDimension("dimension must be in [1, 32], got " + std::to_string(r));
    }
}

NodeId::NodeId(Dimension r, std::uint32_t positions) : r_(r.value()), positions_(positions) {
    if ((positions & ~full_mask(r_)) != 0) {
        throw InvalidNodeId("position mask has bits beyond dimension " + std::to_string(r_));
    }
}

NodeId NodeId::from_index(Dimension r, std::uint64_t index) {
    if (index >= r.node_count()) {
        throw InvalidNodeId("index " + std::to_string(index) + " out of range for dimension " +
                            std::to_string(r.value()));
    }
    std::uint32_t positions = 0;
    for (unsigned p = 0; p < r.value(); ++p) {
        if ((index >> (r.value() - 1 - p)) & 1U) positions |= std::uint32_t{1} << p;
    }
    return NodeId(r, positions);
}

NodeId NodeId::parse(std::string_view text) {
    if (text.empty() || text.size() > Dimension::kMax) {
        throw InvalidNodeId("node id must have 1..32 characters: '" + std::string(text) + "'");
    }
    std::uint32_t positions = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            positions |= std::uint32_t{1} << i;
        } else if (text[i] != '0') {
            throw InvalidNodeId("node id may only contain '0' and '1': '" + std::string(text) + "'");
        }
    }
    return NodeId(Dimension(static_cast<unsigned>(text.size())), positions);
}

bool NodeId::test(unsigned position) const {
    if (position >= r_) throw InvalidNodeId("position " + std::to_string(position) + " out of range");
    return (positions_ >> position) & 1U;
}

NodeId NodeId::flipped(unsigned position) const {
    if (position >= r_) throw InvalidNodeId("position " + std::to_string(position) + " out of range");
    return NodeId(Dimension(r_), positions_ ^ (std::uint32_t{1} << position));
}

unsigned NodeId::popcount() const noexcept {
    return static_cast<unsigned>(std::popcount(positions_));
}

std::uint64_t NodeId::index() const noexcept {
    std::uint64_t index = 0;
    for (unsigned p = 0; p < r_; ++p) {
        index = (index << 1) | ((positions_ >> p) & 1U);
    }
    return index;
}

bool NodeId::covers(const NodeId& other) const {
    require_same_dimension(*this, other);
    return (positions_ & other.positions_) == other.positions_;
}

std::string NodeId::str() const {
    std::string out(r_, '0');
    for (unsigned p = 0; p < r_; ++p) {
        if ((positions_ >> p) & 1U) out[p] = '1';
    }
    return out;
}

KeywordSet::KeywordSet(std::initializer_list<std::string> keywords)
    : KeywordSet(std::vector<std::string>(keywords)) {}

KeywordSet::KeywordSet(std::vector<std::string> keywords) : keywords_(std::move(keywords)) {
    for (const auto& k : keywords_) {
        if (k.empty()) throw InvalidKeyword("keywords must be non-empty");
    }
    std::sort(keywords_.begin(), keywords_.end());
    keywords_.erase(std::unique(keywords_.begin(), keywords_.end()), keywords_.end());
}

KeywordSet KeywordSet::parse_list(std::string_view comma_separated) {
    std::vector<std::string> out;
    if (comma_separated.empty()) return KeywordSet{};
    std::size_t start = 0;
    while (true) {
        auto comma = comma_separated.find(',', start);
        auto piece = comma_separated.substr(start, comma == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : comma - start);
        if (piece.empty()) {
            throw InvalidKeyword("empty keyword in list '" + std::string(comma_separated) + "'");
        }
        out.emplace_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return KeywordSet(std::move(out));
}

bool KeywordSet::contains(std::string_view keyword) const {
    return std::binary_search(keywords_.begin(), keywords_.end(), keyword);
}

bool KeywordSet::includes(const KeywordSet& subset) const {
    return std::includes(keywords_.begin(), keywords_.end(), subset.keywords_.begin(),
                         subset.keywords_.end());
}

std::string KeywordSet::join(char sep) const {
    std::string out;
    for (const auto& k : keywords_) {
        if (!out.empty()) out += sep;
        out += k;
    }
    return out;
}

unsigned DigestHasher::position(std::string_view keyword, Dimension r) const {
    if (keyword.empty()) throw InvalidKeyword("keywords must be non-empty");
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(keyword.data(), keyword.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::uint64_t head = 0;
    for (int i = 0; i < 8; ++i) head = (head << 8) | digest[static_cast<std::size_t>(i)];
    return static_cast<unsigned>(head % r.value());
}

TableHasher::TableHasher(std::map<std::string, unsigned, std::less<>> table)
    : table_(std::move(table)) {}

void TableHasher::assign(std::string keyword, unsigned position) {
    if (keyword.empty()) throw InvalidKeyword("keywords must be non-empty");
    table_[std::move(keyword)] = position;
}

unsigned TableHasher::position(std::string_view keyword, Dimension r) const {
    if (keyword.empty()) throw InvalidKeyword("keywords must be non-empty");
    if (auto it = table_.find(keyword); it != table_.end()) {
        return it->second % r.value();
    }
    return fallback_.position(keyword, r);
}

const KeywordHasher& default_hasher() {
    static const DigestHasher hasher;
    return hasher;
}

unsigned keyword_bit(std::string_view keyword, Dimension r, const KeywordHasher& hasher) {
    return hasher.position(keyword, r);
}

NodeId one(const KeywordSet& keywords, Dimension r, const KeywordHasher& hasher) {
    std::uint32_t positions = 0;
    for (const auto& k : keywords.keywords()) {
        positions |= std::uint32_t{1} << keyword_bit(k, r, hasher);
    }
    return NodeId(r, positions);
}

std::vector<NodeId> neighbors(const NodeId& id) {
    std::vector<NodeId> out;
    out.reserve(id.r());
    for (unsigned p = 0; p < id.r(); ++p) out.push_back(id.flipped(p));
    return out;
}

unsigned hamming(const NodeId& a, const NodeId& b) {
    require_same_dimension(a, b);
    return static_cast<unsigned>(std::popcount(a.positions() ^ b.positions()));
}

NodeId next_hop(const NodeId& current, const NodeId& target) {
    require_same_dimension(current, target);
    const std::uint32_t diff = current.positions() ^ target.positions();
    if (diff == 0) throw AlreadyAtTarget("already at " + target.str());
    return current.flipped(static_cast<unsigned>(std::countr_zero(diff)));
}

std::vector<NodeId> superset_children(const NodeId& v, const NodeId& query) {
    require_same_dimension(v, query);
    if (!v.covers(query)) {
        throw NotInSupersetRegion(v.str() + " does not cover " + query.str());
    }
    const std::uint32_t free = full_mask(v.r()) & ~query.positions();
    const std::uint32_t set_free = v.positions() & free;
    const unsigned bound =
        set_free == 0 ? v.r() : static_cast<unsigned>(std::countr_zero(set_free));

    std::vector<NodeId> out;
    for (unsigned p = 0; p < bound; ++p) {
        if ((free >> p) & 1U) out.push_back(v.flipped(p));
    }
    return out;
}

}  // namespace hcdht

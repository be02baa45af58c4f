#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hcdht {

/// Number of hypercube dimensions. The network has exactly 2^r logical nodes.
class Dimension {
public:
    static constexpr unsigned kMin = 1;
    static constexpr unsigned kMax = 32;

    explicit Dimension(unsigned r);

    unsigned value() const noexcept { return r_; }
    std::uint64_t node_count() const noexcept { return std::uint64_t{1} << r_; }

    friend bool operator==(Dimension, Dimension) = default;

private:
    unsigned r_;
};

/// An r-bit hypercube node identifier.
///
/// Bit *position* i is the i-th character of the text form (leftmost is
/// position 0). `index()` reads the text form as a binary number, so the
/// leftmost position is the most significant bit of the index.
class NodeId {
public:
    NodeId(Dimension r, std::uint32_t positions);

    static NodeId zero(Dimension r) { return NodeId(r, 0); }
    static NodeId from_index(Dimension r, std::uint64_t index);
    static NodeId parse(std::string_view text);

    Dimension dimension() const noexcept { return Dimension(r_); }
    unsigned r() const noexcept { return r_; }

    /// Set of positions as a mask: bit i of the mask is position i.
    std::uint32_t positions() const noexcept { return positions_; }
    bool test(unsigned position) const;
    NodeId flipped(unsigned position) const;
    unsigned popcount() const noexcept;
    std::uint64_t index() const noexcept;

    /// True when every position set in `other` is also set here.
    bool covers(const NodeId& other) const;

    std::string str() const;

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
        if (auto c = a.r_ <=> b.r_; c != 0) return c;
        return a.index() <=> b.index();
    }

private:
    unsigned r_;
    std::uint32_t positions_;
};

/// Canonical keyword set: deduplicated, sorted by byte order, no empty strings.
class KeywordSet {
public:
    KeywordSet() = default;
    KeywordSet(std::initializer_list<std::string> keywords);
    explicit KeywordSet(std::vector<std::string> keywords);

    /// Splits on commas. Empty elements are rejected.
    static KeywordSet parse_list(std::string_view comma_separated);

    const std::vector<std::string>& keywords() const noexcept { return keywords_; }
    std::size_t size() const noexcept { return keywords_.size(); }
    bool empty() const noexcept { return keywords_.empty(); }
    bool contains(std::string_view keyword) const;
    bool includes(const KeywordSet& subset) const;

    std::string join(char sep = ',') const;

    friend bool operator==(const KeywordSet&, const KeywordSet&) = default;
    friend auto operator<=>(const KeywordSet& a, const KeywordSet& b) {
        return a.keywords_ <=> b.keywords_;
    }

private:
    std::vector<std::string> keywords_;
};

/// Maps a keyword to a bit position in {0..r-1}.
class KeywordHasher {
public:
    virtual ~KeywordHasher() = default;
    virtual unsigned position(std::string_view keyword, Dimension r) const = 0;
};

/// SHA-256 of the keyword's UTF-8 bytes, first eight bytes read big-endian,
/// reduced modulo r. Stable across runs and platforms.
class DigestHasher final : public KeywordHasher {
public:
    unsigned position(std::string_view keyword, Dimension r) const override;
};

/// Table-driven hasher. Keywords absent from the table fall back to the digest.
class TableHasher final : public KeywordHasher {
public:
    TableHasher() = default;
    explicit TableHasher(std::map<std::string, unsigned, std::less<>> table);

    void assign(std::string keyword, unsigned position);
    unsigned position(std::string_view keyword, Dimension r) const override;

private:
    std::map<std::string, unsigned, std::less<>> table_;
    DigestHasher fallback_;
};

const KeywordHasher& default_hasher();

unsigned keyword_bit(std::string_view keyword, Dimension r,
                     const KeywordHasher& hasher = default_hasher());

/// The node responsible for `keywords`: set positions are exactly the
/// keyword positions. The empty set maps to the all-zeros node.
NodeId one(const KeywordSet& keywords, Dimension r,
           const KeywordHasher& hasher = default_hasher());

/// The r neighbors of `id`, ordered by flipped position ascending.
std::vector<NodeId> neighbors(const NodeId& id);

unsigned hamming(const NodeId& a, const NodeId& b);

/// Greedy bit-fixing step: flips the lowest-index position where `current`
/// and `target` differ.
NodeId next_hop(const NodeId& current, const NodeId& target);

/// Children of `v` in the binomial spanning tree of the bit-superset region
/// rooted at `query`. A free position is one not set in `query`; a child sets
/// one free position strictly below the lowest free position already set in
/// `v` (any free position when `v` has none). Ordered by position ascending.
std::vector<NodeId> superset_children(const NodeId& v, const NodeId& query);

}  // namespace hcdht

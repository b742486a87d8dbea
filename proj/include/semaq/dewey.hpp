#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semaq {

/// Hierarchical node identifier: a node's code is its parent's code plus a
/// zero-based child ordinal. The root is the single component `0`.
///
/// Document order is lexicographic order on the component sequence, and
/// ancestry is strict prefix containment.
class DeweyCode {
public:
    DeweyCode() = default;
    DeweyCode(std::initializer_list<std::uint32_t> parts) : parts_(parts) {}
    explicit DeweyCode(std::vector<std::uint32_t> parts) : parts_(std::move(parts)) {}

    /// Parses the dotted form ("0.2.3"). Throws std::invalid_argument.
    static DeweyCode parse(std::string_view dotted);

    std::string str() const;

    /// Number of components; the root has level 1.
    std::uint32_t level() const { return static_cast<std::uint32_t>(parts_.size()); }
    bool empty() const { return parts_.empty(); }

    std::span<const std::uint32_t> components() const { return parts_; }
    std::uint32_t operator[](std::size_t i) const { return parts_[i]; }

    DeweyCode child(std::uint32_t ordinal) const;
    DeweyCode parent() const;
    /// First `n` components.
    DeweyCode prefix(std::size_t n) const;

    /// True iff `this` is a strict prefix of `other`.
    bool is_ancestor_of(const DeweyCode& other) const;
    /// True iff `this` is a prefix of `other` (or equal).
    bool is_ancestor_or_self_of(const DeweyCode& other) const;

    friend bool operator==(const DeweyCode&, const DeweyCode&) = default;
    friend std::strong_ordering operator<=>(const DeweyCode& a, const DeweyCode& b) {
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<std::uint32_t> parts_;
};

/// Length of the longest common prefix of two codes.
std::size_t common_prefix_length(const DeweyCode& a, const DeweyCode& b);

/// Lowest common ancestor (longest common prefix).
DeweyCode lca(const DeweyCode& a, const DeweyCode& b);

/// LCA of a non-empty set. Throws std::invalid_argument on an empty set.
DeweyCode lca(std::span<const DeweyCode> codes);

struct DeweyHash {
    std::size_t operator()(const DeweyCode& code) const noexcept;
};

}  // namespace semaq

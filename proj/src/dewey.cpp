#include "semaq/dewey.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace semaq {

DeweyCode DeweyCode::parse(std::string_view dotted) {
    if (dotted.empty()) {
        throw std::invalid_argument("empty Dewey code");
    }
    std::vector<std::uint32_t> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string_view piece =
            dotted.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        std::uint32_t value = 0;
        const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size()) {
            throw std::invalid_argument("malformed Dewey code: " + std::string(dotted));
        }
        parts.push_back(value);
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    return DeweyCode(std::move(parts));
}

std::string DeweyCode::str() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i > 0) {
            out.push_back('.');
        }
        out += std::to_string(parts_[i]);
    }
    return out;
}

DeweyCode DeweyCode::child(std::uint32_t ordinal) const {
    std::vector<std::uint32_t> parts = parts_;
    parts.push_back(ordinal);
    return DeweyCode(std::move(parts));
}

DeweyCode DeweyCode::parent() const {
    if (parts_.size() <= 1) {
        return {};
    }
    return prefix(parts_.size() - 1);
}

DeweyCode DeweyCode::prefix(std::size_t n) const {
    n = std::min(n, parts_.size());
    return DeweyCode(std::vector<std::uint32_t>(parts_.begin(), parts_.begin() + static_cast<std::ptrdiff_t>(n)));
}

bool DeweyCode::is_ancestor_of(const DeweyCode& other) const {
    return parts_.size() < other.parts_.size() && is_ancestor_or_self_of(other);
}

bool DeweyCode::is_ancestor_or_self_of(const DeweyCode& other) const {
    return parts_.size() <= other.parts_.size() &&
           std::equal(parts_.begin(), parts_.end(), other.parts_.begin());
}

std::size_t common_prefix_length(const DeweyCode& a, const DeweyCode& b) {
    const auto ca = a.components();
    const auto cb = b.components();
    const std::size_t n = std::min(ca.size(), cb.size());
    std::size_t i = 0;
    while (i < n && ca[i] == cb[i]) {
        ++i;
    }
    return i;
}

DeweyCode lca(const DeweyCode& a, const DeweyCode& b) {
    return a.prefix(common_prefix_length(a, b));
}

DeweyCode lca(std::span<const DeweyCode> codes) {
    if (codes.empty()) {
        throw std::invalid_argument("lca of an empty set");
    }
    std::size_t len = codes.front().level();
    for (const auto& c : codes.subspan(1)) {
        len = std::min(len, common_prefix_length(codes.front(), c));
    }
    return codes.front().prefix(len);
}

std::size_t DeweyHash::operator()(const DeweyCode& code) const noexcept {
    // FNV-1a over the components.
    std::size_t h = 1469598103934665603ull;
    for (std::uint32_t part : code.components()) {
        h ^= part + 0x9e3779b9u;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace semaq

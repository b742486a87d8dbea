#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "semaq/dewey.hpp"

namespace semaq {

/// Raised for malformed XML; carries the byte offset where parsing failed.
class XmlParseError : public std::runtime_error {
public:
    XmlParseError(const std::string& what, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Raised when the input holds no root element at all.
class EmptyDocumentError : public std::runtime_error {
public:
    EmptyDocumentError() : std::runtime_error("empty XML document") {}
};

struct XmlNode {
    DeweyCode code;
    std::string label;
    std::vector<std::pair<std::string, std::string>> attributes;
    /// Character data directly inside this element, one entry per text run.
    std::vector<std::string> text;
    std::vector<std::size_t> children;  // indices into XmlTree::nodes()
    std::optional<std::size_t> parent;
};

struct Token {
    std::string text;
    DeweyCode node;
    /// Ordinal within the node's token stream. Separate text runs (tag name,
    /// each attribute value, each character-data run) are separated by a
    /// skipped ordinal so that phrases never straddle two runs.
    std::size_t position = 0;
};

struct TokenizeOptions {
    bool include_tag_names = true;
};

/// Immutable ordered labeled tree; nodes are stored in document order.
class XmlTree {
public:
    XmlTree() = default;
    explicit XmlTree(std::vector<XmlNode> nodes);

    const std::vector<XmlNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    const XmlNode& root() const { return nodes_.front(); }
    /// Depth of the deepest node; the root has depth 1.
    std::uint32_t max_depth() const { return max_depth_; }

    const XmlNode* find(const DeweyCode& code) const;

private:
    std::vector<XmlNode> nodes_;
    std::unordered_map<DeweyCode, std::size_t, DeweyHash> by_code_;
    std::uint32_t max_depth_ = 0;
};

XmlTree parse_document(std::string_view xml);
XmlTree parse_file(const std::string& path);

/// Serializes the tree back to XML. Character data is written before the
/// element's children, so mixed-content interleaving is not preserved, but
/// Dewey codes are.
std::string to_xml(const XmlTree& tree);

/// Splits on every non-alphanumeric byte and lowercases ASCII. Bytes >= 0x80
/// are kept as word characters so UTF-8 words survive intact.
std::vector<std::string> split_words(std::string_view text);

/// Lowercased words of `keyword` joined by single spaces. Throws
/// std::invalid_argument when no word remains.
std::string normalize_keyword(std::string_view keyword);

std::vector<Token> tokenize(const XmlNode& node, const TokenizeOptions& options = {});

/// Nodes, in document order, whose token stream contains `keyword` as a
/// contiguous phrase.
std::vector<DeweyCode> match_nodes(const XmlTree& tree, std::string_view keyword,
                                   const TokenizeOptions& options = {});

/// True iff `phrase` occurs contiguously in `tokens`.
bool contains_phrase(const std::vector<Token>& tokens, const std::vector<std::string>& phrase);

}  // namespace semaq

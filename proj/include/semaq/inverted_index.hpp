#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semaq/dewey.hpp"
#include "semaq/xml_tree.hpp"

namespace semaq {

/// Document-ordered match nodes of one keyword (a single token or a phrase).
struct PostingList {
    std::string keyword;
    std::vector<DeweyCode> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    std::span<const DeweyCode> view() const { return entries; }
};

struct IndexMeta {
    std::string source_path;
    std::size_t node_count = 0;
    std::uint32_t max_depth = 1;
    std::size_t keyword_count = 0;
};

class IndexError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class IndexVersionError : public IndexError {
    using IndexError::IndexError;
};
class IndexChecksumError : public IndexError {
    using IndexError::IndexError;
};

/// Keyword -> posting list. Single tokens are always indexed; multi-word
/// phrases are indexed when registered at build time, or resolved lazily
/// from the token streams when the index was built in-process. A loaded
/// index only knows the phrases that were persisted.
///
/// Thread-safety: all const members may be called concurrently; the lazy
/// phrase cache is guarded internally.
class InvertedIndex {
public:
    static constexpr std::string_view kFormatMagic = "SEMAQ-INDEX";
    static constexpr std::string_view kFormatVersion = "v1";

    InvertedIndex();
    ~InvertedIndex();
    InvertedIndex(InvertedIndex&&) noexcept;
    InvertedIndex& operator=(InvertedIndex&&) noexcept;

    static InvertedIndex build(const XmlTree& tree, const std::vector<std::string>& phrases = {},
                               const TokenizeOptions& options = {});

    bool has_keyword(std::string_view keyword) const;
    std::size_t list_size(std::string_view keyword) const;
    /// Posting list for `keyword`; an empty list when absent. The reference
    /// stays valid for the lifetime of the index.
    const PostingList& postings(std::string_view keyword) const;

    /// False only for a multi-word phrase that a loaded index cannot resolve.
    bool can_resolve(std::string_view keyword) const;

    const IndexMeta& meta() const { return meta_; }
    void set_source_path(std::string path) { meta_.source_path = std::move(path); }
    /// Persisted keywords (single tokens and registered phrases), sorted.
    std::vector<std::string> keywords() const;

    std::string serialize() const;
    static InvertedIndex deserialize(std::string_view text);
    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

    /// Structural equality over persisted content (source path ignored).
    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b);

private:
    struct TokenStore;

    const PostingList* lookup(const std::string& normalized) const;
    PostingList resolve_phrase(const std::string& normalized) const;

    IndexMeta meta_;
    std::map<std::string, PostingList> lists_;  // persisted part
    std::shared_ptr<const TokenStore> tokens_;  // null for a loaded index
    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::string, std::unique_ptr<PostingList>> phrase_cache_;
};

}  // namespace semaq

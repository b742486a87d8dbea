#include "semaq/inverted_index.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace semaq {

struct InvertedIndex::TokenStore {
    std::vector<DeweyCode> codes;  // document order
    std::vector<std::vector<Token>> tokens;

    const std::vector<Token>* tokens_of(const DeweyCode& code) const {
        auto it = std::lower_bound(codes.begin(), codes.end(), code);
        if (it == codes.end() || *it != code) {
            return nullptr;
        }
        return &tokens[static_cast<std::size_t>(it - codes.begin())];
    }
};

InvertedIndex::InvertedIndex() = default;
InvertedIndex::~InvertedIndex() = default;

InvertedIndex::InvertedIndex(InvertedIndex&& other) noexcept
    : meta_(std::move(other.meta_)),
      lists_(std::move(other.lists_)),
      tokens_(std::move(other.tokens_)),
      phrase_cache_(std::move(other.phrase_cache_)) {}

InvertedIndex& InvertedIndex::operator=(InvertedIndex&& other) noexcept {
    if (this != &other) {
        meta_ = std::move(other.meta_);
        lists_ = std::move(other.lists_);
        tokens_ = std::move(other.tokens_);
        phrase_cache_ = std::move(other.phrase_cache_);
    }
    return *this;
}

InvertedIndex InvertedIndex::build(const XmlTree& tree, const std::vector<std::string>& phrases,
                                   const TokenizeOptions& options) {
    InvertedIndex index;
    auto store = std::make_shared<TokenStore>();
    store->codes.reserve(tree.size());
    store->tokens.reserve(tree.size());

    for (const auto& node : tree.nodes()) {
        std::vector<Token> tokens = tokenize(node, options);
        for (const auto& tok : tokens) {
            auto& list = index.lists_[tok.text];
            if (list.entries.empty() || list.entries.back() != node.code) {
                list.keyword = tok.text;
                list.entries.push_back(node.code);
            }
        }
        store->codes.push_back(node.code);
        store->tokens.push_back(std::move(tokens));
    }
    index.tokens_ = std::move(store);

    for (const auto& raw : phrases) {
        const std::string phrase = normalize_keyword(raw);
        if (phrase.find(' ') != std::string::npos && !index.lists_.contains(phrase)) {
            index.lists_.emplace(phrase, index.resolve_phrase(phrase));
        }
    }

    index.meta_.node_count = tree.size();
    index.meta_.max_depth = std::max<std::uint32_t>(1, tree.max_depth());
    index.meta_.keyword_count = index.lists_.size();
    return index;
}

PostingList InvertedIndex::resolve_phrase(const std::string& normalized) const {
    PostingList out{normalized, {}};
    if (!tokens_) {
        return out;
    }
    const std::vector<std::string> words = split_words(normalized);
    // Candidate nodes: the shortest single-word list, verified per node.
    const PostingList* shortest = nullptr;
    for (const auto& w : words) {
        auto it = lists_.find(w);
        if (it == lists_.end()) {
            return out;
        }
        if (shortest == nullptr || it->second.size() < shortest->size()) {
            shortest = &it->second;
        }
    }
    for (const auto& code : shortest->entries) {
        const auto* tokens = tokens_->tokens_of(code);
        if (tokens != nullptr && contains_phrase(*tokens, words)) {
            out.entries.push_back(code);
        }
    }
    return out;
}

const PostingList* InvertedIndex::lookup(const std::string& normalized) const {
    if (auto it = lists_.find(normalized); it != lists_.end()) {
        return &it->second;
    }
    if (normalized.find(' ') == std::string::npos || !tokens_) {
        return nullptr;
    }
    std::lock_guard lock(cache_mutex_);
    auto& slot = phrase_cache_[normalized];
    if (!slot) {
        slot = std::make_unique<PostingList>(resolve_phrase(normalized));
    }
    return slot.get();
}

const PostingList& InvertedIndex::postings(std::string_view keyword) const {
    static const PostingList kEmpty{};
    const PostingList* list = lookup(normalize_keyword(keyword));
    return list != nullptr ? *list : kEmpty;
}

bool InvertedIndex::has_keyword(std::string_view keyword) const { return !postings(keyword).empty(); }

std::size_t InvertedIndex::list_size(std::string_view keyword) const { return postings(keyword).size(); }

bool InvertedIndex::can_resolve(std::string_view keyword) const {
    const std::string normalized = normalize_keyword(keyword);
    return tokens_ || normalized.find(' ') == std::string::npos || lists_.contains(normalized);
}

std::vector<std::string> InvertedIndex::keywords() const {
    std::vector<std::string> out;
    out.reserve(lists_.size());
    for (const auto& [kw, list] : lists_) {
        out.push_back(kw);
    }
    return out;
}

namespace {

std::string crc_hex(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) {
            return out;
        }
        start = at + 1;
    }
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw IndexError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

std::string InvertedIndex::serialize() const {
    std::string body;
    body += kFormatMagic;
    body += ' ';
    body += kFormatVersion;
    body += '\n';
    body += "meta " + std::to_string(meta_.node_count) + ' ' + std::to_string(meta_.max_depth) + '\n';
    for (const auto& [kw, list] : lists_) {
        std::string encoded = kw;
        std::replace(encoded.begin(), encoded.end(), ' ', '+');
        body += encoded;
        body += '\t';
        body += std::to_string(list.size());
        body += '\t';
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            if (i > 0) {
                body += ',';
            }
            body += list.entries[i].str();
        }
        body += '\n';
    }
    const std::string crc = crc_hex(body);
    body += "crc32 " + crc + '\n';
    return body;
}

InvertedIndex InvertedIndex::deserialize(std::string_view text) {
    const std::size_t first_nl = text.find('\n');
    const std::string_view header = text.substr(0, first_nl);
    const auto head = split(header, ' ');
    if (head.size() != 2 || head[0] != kFormatMagic) {
        throw IndexError("not a semaq index file");
    }
    if (head[1] != kFormatVersion) {
        throw IndexVersionError("index format version " + std::string(head[1]) +
                                " is not supported (expected " + std::string(kFormatVersion) + ")");
    }

    // The checksum line must be the last line and cover every byte before it.
    std::string_view trimmed = text;
    if (!trimmed.empty() && trimmed.back() == '\n') {
        trimmed.remove_suffix(1);
    }
    const std::size_t last_nl = trimmed.rfind('\n');
    const std::string_view last_line =
        last_nl == std::string_view::npos ? trimmed : trimmed.substr(last_nl + 1);
    if (last_nl == std::string_view::npos || last_line.substr(0, 6) != "crc32 ") {
        throw IndexChecksumError("index checksum line missing (truncated file?)");
    }
    const std::string_view body = text.substr(0, last_nl + 1);
    const std::string expected(last_line.substr(6));
    const std::string actual = crc_hex(body);
    if (expected != actual) {
        throw IndexChecksumError("index checksum mismatch: stored " + expected + ", computed " + actual);
    }

    InvertedIndex index;
    auto lines = split(body, '\n');
    lines.pop_back();  // empty tail after the final newline
    if (lines.size() < 2) {
        throw IndexError("index file missing meta line");
    }
    const auto meta = split(lines[1], ' ');
    if (meta.size() != 3 || meta[0] != "meta") {
        throw IndexError("malformed meta line");
    }
    index.meta_.node_count = parse_number<std::size_t>(meta[1], "node count");
    index.meta_.max_depth = parse_number<std::uint32_t>(meta[2], "max depth");

    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto fields = split(lines[i], '\t');
        if (fields.size() != 3) {
            throw IndexError("malformed keyword line " + std::to_string(i + 1));
        }
        std::string kw(fields[0]);
        std::replace(kw.begin(), kw.end(), '+', ' ');
        PostingList list{kw, {}};
        const auto count = parse_number<std::size_t>(fields[1], "posting count");
        if (!fields[2].empty()) {
            for (auto code : split(fields[2], ',')) {
                try {
                    list.entries.push_back(DeweyCode::parse(code));
                } catch (const std::invalid_argument& e) {
                    throw IndexError(e.what());
                }
            }
        }
        if (list.entries.size() != count) {
            throw IndexError("posting count mismatch for '" + kw + "'");
        }
        if (!std::is_sorted(list.entries.begin(), list.entries.end()) ||
            std::adjacent_find(list.entries.begin(), list.entries.end()) != list.entries.end()) {
            throw IndexError("postings for '" + kw + "' are not strictly ascending");
        }
        index.lists_.emplace(std::move(kw), std::move(list));
    }
    index.meta_.keyword_count = index.lists_.size();
    return index;
}

void InvertedIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IndexError("cannot write index file " + path);
    }
    out << serialize();
    if (!out) {
        throw IndexError("failed writing index file " + path);
    }
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IndexError("cannot read index file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    InvertedIndex index = deserialize(buf.str());
    index.meta_.source_path = path;
    return index;
}

bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
    if (a.meta_.node_count != b.meta_.node_count || a.meta_.max_depth != b.meta_.max_depth ||
        a.lists_.size() != b.lists_.size()) {
        return false;
    }
    return std::equal(a.lists_.begin(), a.lists_.end(), b.lists_.begin(), [](const auto& x, const auto& y) {
        return x.first == y.first && x.second.entries == y.second.entries;
    });
}

}  // namespace semaq

#include "semaq/xml_tree.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace semaq {

XmlParseError::XmlParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

XmlTree::XmlTree(std::vector<XmlNode> nodes) : nodes_(std::move(nodes)) {
    by_code_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        by_code_.emplace(nodes_[i].code, i);
        max_depth_ = std::max(max_depth_, nodes_[i].code.level());
    }
}

const XmlNode* XmlTree::find(const DeweyCode& code) const {
    auto it = by_code_.find(code);
    return it == by_code_.end() ? nullptr : &nodes_[it->second];
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return is_name_start(c) || std::isdigit(u) || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Recursive-descent parser over the raw bytes. Builds nodes in document
// order, so a node's index is also its preorder rank.
class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    XmlTree run() {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF") {
            pos_ = 3;
        }
        skip_misc();
        if (eof()) {
            throw EmptyDocumentError();
        }
        if (peek() != '<') {
            fail("expected root element");
        }
        parse_element(DeweyCode{0}, std::nullopt);
        skip_misc();
        if (!eof()) {
            fail("content after root element");
        }
        return XmlTree(std::move(nodes_));
    }

private:
    bool eof() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }
    bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

    [[noreturn]] void fail(const std::string& what) const { throw XmlParseError(what, pos_); }

    void skip_spaces() {
        while (!eof() && is_space(peek())) {
            ++pos_;
        }
    }

    void skip_past(std::string_view terminator, const char* what) {
        const std::size_t end = in_.find(terminator, pos_);
        if (end == std::string_view::npos) {
            fail(std::string("unterminated ") + what);
        }
        pos_ = end + terminator.size();
    }

    // Whitespace, comments, processing instructions and DOCTYPE.
    void skip_misc() {
        while (true) {
            skip_spaces();
            if (starts_with("<?")) {
                skip_past("?>", "processing instruction");
            } else if (starts_with("<!--")) {
                skip_past("-->", "comment");
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_doctype() {
        int bracket = 0;
        while (!eof()) {
            const char c = in_[pos_++];
            if (c == '[') {
                ++bracket;
            } else if (c == ']') {
                --bracket;
            } else if (c == '>' && bracket == 0) {
                return;
            }
        }
        fail("unterminated DOCTYPE");
    }

    std::string parse_name() {
        if (eof() || !is_name_start(peek())) {
            fail("expected name");
        }
        const std::size_t start = pos_;
        while (!eof() && is_name_char(peek())) {
            ++pos_;
        }
        return std::string(in_.substr(start, pos_ - start));
    }

    void parse_reference(std::string& out) {
        const std::size_t start = pos_;
        const std::size_t semi = in_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) {
            fail("malformed entity reference");
        }
        const std::string_view ent = in_.substr(pos_ + 1, semi - pos_ - 1);
        pos_ = semi + 1;
        if (ent == "lt") {
            out.push_back('<');
        } else if (ent == "gt") {
            out.push_back('>');
        } else if (ent == "amp") {
            out.push_back('&');
        } else if (ent == "quot") {
            out.push_back('"');
        } else if (ent == "apos") {
            out.push_back('\'');
        } else if (ent.size() > 1 && ent[0] == '#') {
            const bool hex = ent[1] == 'x' || ent[1] == 'X';
            const std::string digits(ent.substr(hex ? 2 : 1));
            std::uint32_t cp = 0;
            try {
                std::size_t used = 0;
                cp = static_cast<std::uint32_t>(std::stoul(digits, &used, hex ? 16 : 10));
                if (used != digits.size() || cp > 0x10FFFF) {
                    throw std::invalid_argument(digits);
                }
            } catch (const std::exception&) {
                pos_ = start;
                fail("bad character reference");
            }
            append_utf8(out, cp);
        } else {
            pos_ = start;
            fail("unknown entity '" + std::string(ent) + "'");
        }
    }

    std::string parse_attribute_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) {
            fail("expected quoted attribute value");
        }
        const char quote = in_[pos_++];
        std::string value;
        while (true) {
            if (eof()) {
                fail("unterminated attribute value");
            }
            const char c = peek();
            if (c == quote) {
                ++pos_;
                return value;
            }
            if (c == '<') {
                fail("'<' in attribute value");
            }
            if (c == '&') {
                parse_reference(value);
            } else {
                value.push_back(c);
                ++pos_;
            }
        }
    }

    void parse_element(const DeweyCode& code, std::optional<std::size_t> parent) {
        ++pos_;  // '<'
        const std::size_t index = nodes_.size();
        nodes_.push_back(XmlNode{code, parse_name(), {}, {}, {}, parent});

        while (true) {
            skip_spaces();
            if (eof()) {
                fail("unterminated start tag");
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            std::string name = parse_name();
            skip_spaces();
            if (eof() || peek() != '=') {
                fail("expected '=' after attribute name");
            }
            ++pos_;
            skip_spaces();
            std::string value = parse_attribute_value();
            nodes_[index].attributes.emplace_back(std::move(name), std::move(value));
        }

        std::uint32_t next_child = 0;
        std::string text;
        auto flush_text = [&] {
            if (!text.empty()) {
                nodes_[index].text.push_back(std::move(text));
                text.clear();
            }
        };
        while (true) {
            if (eof()) {
                fail("unexpected end of input inside <" + nodes_[index].label + ">");
            }
            if (starts_with("</")) {
                flush_text();
                pos_ += 2;
                const std::size_t name_at = pos_;
                const std::string closing = parse_name();
                if (closing != nodes_[index].label) {
                    pos_ = name_at;
                    fail("mismatched end tag </" + closing + "> for <" + nodes_[index].label + ">");
                }
                skip_spaces();
                if (eof() || peek() != '>') {
                    fail("expected '>' in end tag");
                }
                ++pos_;
                return;
            }
            if (starts_with("<!--")) {
                skip_past("-->", "comment");
            } else if (starts_with("<![CDATA[")) {
                pos_ += 9;
                const std::size_t end = in_.find("]]>", pos_);
                if (end == std::string_view::npos) {
                    fail("unterminated CDATA section");
                }
                text.append(in_.substr(pos_, end - pos_));
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                skip_past("?>", "processing instruction");
            } else if (peek() == '<') {
                flush_text();
                const DeweyCode child_code = code.child(next_child++);
                const std::size_t child_index = nodes_.size();
                parse_element(child_code, index);
                nodes_[index].children.push_back(child_index);
            } else if (peek() == '&') {
                parse_reference(text);
            } else {
                text.push_back(in_[pos_++]);
            }
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    std::vector<XmlNode> nodes_;
};

void escape_into(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
}

void write_node(const XmlTree& tree, const XmlNode& node, std::string& out) {
    out += '<';
    out += node.label;
    for (const auto& [name, value] : node.attributes) {
        out += ' ';
        out += name;
        out += "=\"";
        escape_into(out, value);
        out += '"';
    }
    if (node.text.empty() && node.children.empty()) {
        out += "/>";
        return;
    }
    out += '>';
    for (std::size_t i = 0; i < node.text.size(); ++i) {
        // Adjacent runs would otherwise merge into one on re-parse.
        if (i > 0) {
            out += "<!---->";
        }
        escape_into(out, node.text[i]);
    }
    for (std::size_t child : node.children) {
        write_node(tree, tree.nodes()[child], out);
    }
    out += "</";
    out += node.label;
    out += '>';
}

void append_tokens(std::vector<Token>& out, std::string_view text, const DeweyCode& code,
                   std::size_t& position) {
    std::vector<std::string> words = split_words(text);
    if (words.empty()) {
        return;
    }
    for (auto& w : words) {
        out.push_back(Token{std::move(w), code, position++});
    }
    ++position;  // run boundary
}

}  // namespace

XmlTree parse_document(std::string_view xml) { return Parser(xml).run(); }

XmlTree parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

std::string to_xml(const XmlTree& tree) {
    std::string out;
    if (tree.size() > 0) {
        write_node(tree, tree.root(), out);
    }
    out += '\n';
    return out;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || u >= 0x80) {
            current.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }
    return words;
}

std::string normalize_keyword(std::string_view keyword) {
    const std::vector<std::string> words = split_words(keyword);
    if (words.empty()) {
        throw std::invalid_argument("empty keyword");
    }
    std::string out = words.front();
    for (std::size_t i = 1; i < words.size(); ++i) {
        out += ' ';
        out += words[i];
    }
    return out;
}

std::vector<Token> tokenize(const XmlNode& node, const TokenizeOptions& options) {
    std::vector<Token> tokens;
    std::size_t position = 0;
    if (options.include_tag_names) {
        append_tokens(tokens, node.label, node.code, position);
    }
    for (const auto& [name, value] : node.attributes) {
        append_tokens(tokens, value, node.code, position);
    }
    for (const auto& run : node.text) {
        append_tokens(tokens, run, node.code, position);
    }
    return tokens;
}

bool contains_phrase(const std::vector<Token>& tokens, const std::vector<std::string>& phrase) {
    if (phrase.empty() || tokens.size() < phrase.size()) {
        return false;
    }
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < phrase.size() && ok; ++j) {
            ok = tokens[i + j].text == phrase[j] &&
                 tokens[i + j].position == tokens[i].position + j;
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

std::vector<DeweyCode> match_nodes(const XmlTree& tree, std::string_view keyword,
                                   const TokenizeOptions& options) {
    const std::vector<std::string> phrase = split_words(keyword);
    std::vector<DeweyCode> out;
    if (phrase.empty()) {
        return out;
    }
    for (const auto& node : tree.nodes()) {
        if (contains_phrase(tokenize(node, options), phrase)) {
            out.push_back(node.code);
        }
    }
    return out;
}

}  // namespace semaq

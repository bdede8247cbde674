#include "synteo/xml.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace synteo::xml {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view doc) : doc_(doc) {}

    bool eof() const { return pos_ >= doc_.size(); }
    char peek() const { return doc_[pos_]; }
    bool starts_with(std::string_view s) const {
        return doc_.compare(pos_, s.size(), s) == 0;
    }

    char advance() {
        char c = doc_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip(size_t n) {
        for (size_t i = 0; i < n && !eof(); ++i) advance();
    }

    void skip_whitespace() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, col_);
    }

    int line() const { return line_; }
    int column() const { return col_; }

private:
    std::string_view doc_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
           c == '.' || c == ':';
}

std::string parse_name(Cursor& cur) {
    std::string name;
    while (!cur.eof() && is_name_char(cur.peek())) name.push_back(cur.advance());
    if (name.empty()) cur.fail("expected name");
    return name;
}

std::string decode_entity(Cursor& cur) {
    // cur sits just past '&'
    std::string ent;
    while (!cur.eof() && cur.peek() != ';') {
        ent.push_back(cur.advance());
        if (ent.size() > 8) cur.fail("unterminated entity reference");
    }
    if (cur.eof()) cur.fail("unterminated entity reference");
    cur.advance();  // ';'
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "amp") return "&";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    cur.fail("unknown entity '&" + ent + ";'");
}

std::string parse_attr_value(Cursor& cur) {
    if (cur.eof() || (cur.peek() != '"' && cur.peek() != '\''))
        cur.fail("expected quoted attribute value");
    char quote = cur.advance();
    std::string value;
    while (!cur.eof() && cur.peek() != quote) {
        char c = cur.advance();
        if (c == '&')
            value += decode_entity(cur);
        else
            value.push_back(c);
    }
    if (cur.eof()) cur.fail("unterminated attribute value");
    cur.advance();
    return value;
}

void skip_comment(Cursor& cur) {
    cur.skip(4);  // "<!--"
    while (!cur.eof() && !cur.starts_with("-->")) cur.advance();
    if (cur.eof()) cur.fail("unterminated comment");
    cur.skip(3);
}

Node parse_element(Cursor& cur);

void parse_content(Cursor& cur, Node& node) {
    while (!cur.eof()) {
        if (cur.starts_with("<!--")) {
            skip_comment(cur);
        } else if (cur.starts_with("</")) {
            cur.skip(2);
            std::string closing = parse_name(cur);
            if (closing != node.name)
                cur.fail("mismatched closing tag </" + closing + "> for <" +
                         node.name + ">");
            cur.skip_whitespace();
            if (cur.eof() || cur.peek() != '>') cur.fail("expected '>'");
            cur.advance();
            return;
        } else if (cur.peek() == '<') {
            node.children.push_back(parse_element(cur));
        } else {
            char c = cur.advance();
            if (c == '&')
                node.text += decode_entity(cur);
            else
                node.text.push_back(c);
        }
    }
    cur.fail("missing closing tag for <" + node.name + ">");
}

Node parse_element(Cursor& cur) {
    Node node;
    node.line = cur.line();
    if (cur.eof() || cur.peek() != '<') cur.fail("expected '<'");
    cur.advance();
    node.name = parse_name(cur);
    while (true) {
        cur.skip_whitespace();
        if (cur.eof()) cur.fail("unterminated start tag <" + node.name + ">");
        if (cur.starts_with("/>")) {
            cur.skip(2);
            return node;
        }
        if (cur.peek() == '>') {
            cur.advance();
            parse_content(cur, node);
            // strip pure-whitespace text between child elements
            bool blank = true;
            for (char c : node.text)
                if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
            if (blank) node.text.clear();
            return node;
        }
        std::string key = parse_name(cur);
        cur.skip_whitespace();
        if (cur.eof() || cur.peek() != '=') cur.fail("expected '=' after attribute name");
        cur.advance();
        cur.skip_whitespace();
        std::string value = parse_attr_value(cur);
        for (const auto& [k, v] : node.attributes)
            if (k == key) cur.fail("duplicate attribute '" + key + "'");
        node.attributes.emplace_back(std::move(key), std::move(value));
    }
}

void serialize_node(const Node& node, std::string& out, int depth) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    out += indent;
    out += '<';
    out += node.name;
    for (const auto& [k, v] : node.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        out += escape_text(v);
        out += '"';
    }
    if (node.children.empty() && node.text.empty()) {
        out += "/>\n";
        return;
    }
    out += '>';
    if (node.children.empty()) {
        out += escape_text(node.text);
        out += "</" + node.name + ">\n";
        return;
    }
    out += '\n';
    for (const Node& child : node.children) serialize_node(child, out, depth + 1);
    out += indent + "</" + node.name + ">\n";
}

}  // namespace

const std::string* Node::find_attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
        if (k == key) return &v;
    return nullptr;
}

std::string Node::attribute(std::string_view key) const {
    const std::string* v = find_attribute(key);
    if (!v)
        throw std::runtime_error("<" + name + "> (line " + std::to_string(line) +
                                 "): missing attribute '" + std::string(key) + "'");
    return *v;
}

std::string Node::attribute_or(std::string_view key, std::string fallback) const {
    const std::string* v = find_attribute(key);
    return v ? *v : std::move(fallback);
}

double Node::number_attribute(std::string_view key) const {
    std::string raw = attribute(key);
    try {
        size_t consumed = 0;
        double value = std::stod(raw, &consumed);
        if (consumed != raw.size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("<" + name + "> (line " + std::to_string(line) +
                                 "): attribute '" + std::string(key) +
                                 "' is not a number: '" + raw + "'");
    }
}

const Node* Node::find_child(std::string_view child_name) const {
    for (const Node& c : children)
        if (c.name == child_name) return &c;
    return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view child_name) const {
    std::vector<const Node*> out;
    for (const Node& c : children)
        if (c.name == child_name) out.push_back(&c);
    return out;
}

void Node::set_attribute(std::string key, std::string value) {
    for (auto& [k, v] : attributes)
        if (k == key) {
            v = std::move(value);
            return;
        }
    attributes.emplace_back(std::move(key), std::move(value));
}

Node parse(std::string_view document) {
    Cursor cur(document);
    cur.skip_whitespace();
    if (cur.starts_with("<?xml")) {
        while (!cur.eof() && !cur.starts_with("?>")) cur.advance();
        if (cur.eof()) cur.fail("unterminated XML declaration");
        cur.skip(2);
    }
    cur.skip_whitespace();
    while (cur.starts_with("<!--")) {
        skip_comment(cur);
        cur.skip_whitespace();
    }
    if (cur.eof()) cur.fail("empty document");
    Node root = parse_element(cur);
    cur.skip_whitespace();
    while (cur.starts_with("<!--")) {
        skip_comment(cur);
        cur.skip_whitespace();
    }
    if (!cur.eof()) cur.fail("trailing content after root element");
    return root;
}

std::string serialize(const Node& root) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    serialize_node(root, out, 0);
    return out;
}

std::string escape_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace synteo::xml

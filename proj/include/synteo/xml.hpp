#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synteo::xml {

// Minimal XML subset: elements, attributes, character data and comments.
// No DTDs, processing instructions beyond the <?xml?> declaration, or
// namespaces. Enough for ontology, snapshot and VOC annotation files.

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) +
                             ", column " + std::to_string(col_)),
          line(line_), column(col_) {}
};

class Node {
public:
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Node> children;
    std::string text;  // concatenated character data
    int line = 0;      // position of the opening tag, 1-based

    const std::string* find_attribute(std::string_view key) const;
    std::string attribute(std::string_view key) const;  // throws if missing
    std::string attribute_or(std::string_view key, std::string fallback) const;
    double number_attribute(std::string_view key) const;

    const Node* find_child(std::string_view child_name) const;
    std::vector<const Node*> children_named(std::string_view child_name) const;

    void set_attribute(std::string key, std::string value);
};

Node parse(std::string_view document);

// Canonical serialization: stable attribute order (as stored), 2-space
// indent, LF line endings. serialize(parse(serialize(n))) == serialize(n).
std::string serialize(const Node& root);

std::string escape_text(std::string_view raw);

}  // namespace synteo::xml

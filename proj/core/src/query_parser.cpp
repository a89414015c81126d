// Copyright 2026 The gqlcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gqlcheck/query_parser.hpp"

#include <cctype>

namespace gqlcheck {

namespace {

bool is_name_start(char c) {
    return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool is_name_char(char c) {
    return c == '_' || std::isalnum(static_cast<unsigned char>(c));
}

void append_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    AstDocument document() {
        AstDocument doc;
        skip_ignored();
        if (peek_name()) {
            const std::string op = name();
            if (op == "query") {
                doc.operation = Operation::Query;
            } else if (op == "mutation") {
                doc.operation = Operation::Mutation;
            } else if (op == "subscription") {
                fail("subscriptions are not supported");
            } else if (op == "fragment") {
                fail("named fragments are not supported");
            } else {
                fail("unexpected token \"" + op + "\" before selection set");
            }
            skip_ignored();
            if (peek_name()) {
                name(); // optional operation name
                skip_ignored();
            }
        }
        doc.roots = selection_set();
        skip_ignored();
        if (pos_ != text_.size()) {
            fail("trailing content after the selection set");
        }
        return doc;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw QueryParseError(message + " at offset " + std::to_string(pos_));
    }

    void skip_ignored() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool peek_name() const { return !at_end() && is_name_start(text_[pos_]); }

    void expect(char c) {
        if (at_end() || text_[pos_] != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string name() {
        if (!peek_name()) {
            fail("expected a name");
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<AstSelection> selection_set() {
        skip_ignored();
        expect('{');
        std::vector<AstSelection> selections;
        while (true) {
            skip_ignored();
            if (at_end()) {
                fail("unterminated selection set");
            }
            if (peek() == '}') {
                ++pos_;
                break;
            }
            selections.push_back(selection());
        }
        if (selections.empty()) {
            fail("empty selection set");
        }
        return selections;
    }

    AstSelection selection() {
        skip_ignored();
        if (peek() == '.') {
            return inline_fragment();
        }
        AstSelection field;
        field.name = name();
        skip_ignored();
        if (peek() == ':') {
            fail("aliases are not supported");
        }
        if (peek() == '(') {
            field.args = arguments();
            skip_ignored();
        }
        if (peek() == '@') {
            fail("directives are not supported");
        }
        if (peek() == '{') {
            field.children = selection_set();
        }
        return field;
    }

    AstSelection inline_fragment() {
        if (text_.substr(pos_, 3) != "...") {
            fail("expected \"...\"");
        }
        pos_ += 3;
        skip_ignored();
        const std::string keyword = name();
        if (keyword != "on") {
            fail("fragment spreads are not supported (expected \"on\")");
        }
        skip_ignored();
        AstSelection fragment;
        fragment.is_inline_fragment = true;
        fragment.name = name();
        fragment.children = selection_set();
        return fragment;
    }

    ArgList arguments() {
        expect('(');
        ArgList args;
        while (true) {
            skip_ignored();
            if (at_end()) {
                fail("unterminated argument list");
            }
            if (peek() == ')') {
                ++pos_;
                break;
            }
            std::string arg_name = name();
            skip_ignored();
            expect(':');
            skip_ignored();
            Json arg_value = value();
            for (const auto& [existing, unused] : args) {
                if (existing == arg_name) {
                    fail("duplicate argument \"" + arg_name + "\"");
                }
            }
            args.emplace_back(std::move(arg_name), std::move(arg_value));
        }
        if (args.empty()) {
            fail("empty argument list");
        }
        return args;
    }

    Json value() {
        skip_ignored();
        if (at_end()) {
            fail("expected a value");
        }
        const char c = peek();
        if (c == '$') {
            fail("variables are not supported");
        }
        if (c == '"') {
            return string_value();
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            return number_value();
        }
        if (c == '[') {
            ++pos_;
            Json arr = Json::array();
            while (true) {
                skip_ignored();
                if (at_end()) {
                    fail("unterminated list value");
                }
                if (peek() == ']') {
                    ++pos_;
                    return arr;
                }
                arr.push_back(value());
            }
        }
        if (c == '{') {
            ++pos_;
            Json obj = Json::object();
            while (true) {
                skip_ignored();
                if (at_end()) {
                    fail("unterminated input object value");
                }
                if (peek() == '}') {
                    ++pos_;
                    return obj;
                }
                std::string key = name();
                skip_ignored();
                expect(':');
                obj[key] = value();
            }
        }
        if (is_name_start(c)) {
            const std::string word = name();
            if (word == "true") {
                return true;
            }
            if (word == "false") {
                return false;
            }
            if (word == "null") {
                return nullptr;
            }
            return word; // enum literal
        }
        fail("unexpected character in value position");
    }

    Json string_value() {
        expect('"');
        if (text_.substr(pos_, 2) == "\"\"") {
            fail("block strings are not supported");
        }
        std::string out;
        while (true) {
            if (at_end()) {
                fail("unterminated string");
            }
            const char c = text_[pos_];
            if (c == '"') {
                ++pos_;
                return out;
            }
            if (c == '\n' || c == '\r') {
                fail("raw line terminator inside a string");
            }
            if (c == '\\') {
                ++pos_;
                if (at_end()) {
                    fail("unterminated escape sequence");
                }
                const char esc = text_[pos_++];
                switch (esc) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case '/': out.push_back('/'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'u': {
                        if (pos_ + 4 > text_.size()) {
                            fail("truncated unicode escape");
                        }
                        unsigned cp = 0;
                        for (int i = 0; i < 4; ++i) {
                            const char h = text_[pos_++];
                            cp <<= 4;
                            if (h >= '0' && h <= '9') {
                                cp |= static_cast<unsigned>(h - '0');
                            } else if (h >= 'a' && h <= 'f') {
                                cp |= static_cast<unsigned>(h - 'a' + 10);
                            } else if (h >= 'A' && h <= 'F') {
                                cp |= static_cast<unsigned>(h - 'A' + 10);
                            } else {
                                fail("bad unicode escape digit");
                            }
                        }
                        append_utf8(out, cp);
                        break;
                    }
                    default:
                        fail("unknown escape sequence");
                }
                continue;
            }
            out.push_back(c);
            ++pos_;
        }
    }

    Json number_value() {
        const std::size_t start = pos_;
        if (peek() == '-') {
            ++pos_;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
            fail("malformed number");
        }
        if (peek() == '0') {
            ++pos_;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                fail("leading zero in number");
            }
        } else {
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
        }
        bool is_float = false;
        if (peek() == '.') {
            is_float = true;
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                fail("malformed float (digits must follow '.')");
            }
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
        }
        if (peek() == 'e' || peek() == 'E') {
            is_float = true;
            ++pos_;
            if (peek() == '+' || peek() == '-') {
                ++pos_;
            }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                fail("malformed float exponent");
            }
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
        }
        const std::string token(text_.substr(start, pos_ - start));
        if (is_float) {
            return std::stod(token);
        }
        try {
            return std::stoll(token);
        } catch (const std::out_of_range&) {
            return std::stod(token);
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void flatten_into(const AstSelection& selection, std::optional<std::string> fragment_on,
                  std::vector<QueryTree>& out) {
    if (selection.is_inline_fragment) {
        for (const auto& child : selection.children) {
            flatten_into(child, selection.name, out);
        }
        return;
    }
    QueryTree tree;
    tree.name = selection.name;
    tree.args = selection.args;
    tree.fragment_on = std::move(fragment_on);
    for (const auto& child : selection.children) {
        flatten_into(child, std::nullopt, tree.children);
    }
    out.push_back(std::move(tree));
}

} // namespace

AstDocument parse_query(std::string_view text) {
    return Parser(text).document();
}

QueryTree ast_to_tree(const AstSelection& root) {
    std::vector<QueryTree> out;
    flatten_into(root, std::nullopt, out);
    if (out.size() != 1) {
        throw Error("expected exactly one root field");
    }
    return std::move(out.front());
}

std::vector<QueryTree> ast_to_trees(const AstDocument& doc) {
    std::vector<QueryTree> trees;
    for (const auto& root : doc.roots) {
        flatten_into(root, std::nullopt, trees);
    }
    return trees;
}

} // namespace gqlcheck

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

#pragma once

#include <string_view>

#include "gqlcheck/schema.hpp"
#include "gqlcheck/synthesis.hpp"

namespace gqlcheck {

// Parsed selection: a field with arguments and children, or an inline
// fragment (name holds the type condition). Enum literals arrive as plain
// JSON strings. Variables, directives, aliases and named fragments are
// rejected with QueryParseError.
struct AstSelection {
    bool is_inline_fragment = false;
    std::string name;
    ArgList args;
    std::vector<AstSelection> children;
};

struct AstDocument {
    Operation operation = Operation::Query;
    std::vector<AstSelection> roots;
};

AstDocument parse_query(std::string_view text);

// Conversion to the QueryTree shape used by coverage and conformance code;
// inline-fragment wrappers become fragment_on tags on their children.
QueryTree ast_to_tree(const AstSelection& root);
std::vector<QueryTree> ast_to_trees(const AstDocument& doc);

} // namespace gqlcheck

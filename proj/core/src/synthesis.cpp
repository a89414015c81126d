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

#include "gqlcheck/synthesis.hpp"

#include <algorithm>
#include <map>

namespace gqlcheck {

namespace {

NodeKind classify(const TypeRef& type) {
    switch (type.named().kind) {
        case TypeKind::Scalar:
            return NodeKind::Scalar;
        case TypeKind::Enum:
            return NodeKind::Enum;
        case TypeKind::Object:
        case TypeKind::Interface:
        case TypeKind::Union:
            return NodeKind::Object;
        default:
            throw Error("type \"" + type.named().name.value_or("?") +
                        "\" cannot be used as a field result");
    }
}

ArgList generate_args(const FieldSpec& field, const std::string& parent_type,
                      const SchemaModel& schema, const GeneratorRegistry& registry,
                      GenContext& ctx) {
    ArgList args;
    for (const auto& arg : field.args) {
        const std::string path = parent_type + "." + field.name + "." + arg.name;
        if (auto value = gen_argument(arg, schema, registry, ctx, path)) {
            args.emplace_back(arg.name, std::move(*value));
        }
    }
    return args;
}

// Draws k distinct indices out of [0, n) via a partial Fisher-Yates pass.
std::vector<std::size_t> draw_distinct(GenContext& ctx, std::size_t n, std::size_t k) {
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) {
        indices[i] = i;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + ctx.rng.below(n - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

void escape_into(std::string& out, const std::string& text) {
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (c < 0x20) {
                    constexpr char hex[] = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[(c >> 4) & 0xF];
                    out += hex[c & 0xF];
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
}

void literal_into(std::string& out, const Json& value) {
    if (const std::string* name = as_enum(value)) {
        out += *name;
        return;
    }
    switch (value.type()) {
        case Json::value_t::null:
            out += "null";
            break;
        case Json::value_t::boolean:
            out += value.get<bool>() ? "true" : "false";
            break;
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned:
        case Json::value_t::number_float:
            out += value.dump();
            break;
        case Json::value_t::string:
            out.push_back('"');
            escape_into(out, value.get_ref<const Json::string_t&>());
            out.push_back('"');
            break;
        case Json::value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : value) {
                if (!first) {
                    out += ", ";
                }
                first = false;
                literal_into(out, item);
            }
            out.push_back(']');
            break;
        }
        case Json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) {
                    out += ", ";
                }
                first = false;
                out += key;
                out += ": ";
                literal_into(out, item);
            }
            out.push_back('}');
            break;
        }
        default:
            out += "null";
    }
}

void render_field(const QueryTree& node, int depth, std::string& out);

void render_children(const std::vector<QueryTree>& children, int depth, std::string& out) {
    out += " {\n";
    const std::optional<std::string>* open_fragment = nullptr;
    for (const auto& child : children) {
        const bool in_fragment = child.fragment_on.has_value();
        const bool same_fragment =
            open_fragment && *open_fragment == child.fragment_on;
        if (open_fragment && !same_fragment) {
            out.append(static_cast<std::size_t>(depth + 1) * 2, ' ');
            out += "}\n";
            open_fragment = nullptr;
        }
        if (in_fragment && !open_fragment) {
            out.append(static_cast<std::size_t>(depth + 1) * 2, ' ');
            out += "... on " + *child.fragment_on + " {\n";
            open_fragment = &child.fragment_on;
        }
        render_field(child, depth + (in_fragment ? 2 : 1), out);
    }
    if (open_fragment) {
        out.append(static_cast<std::size_t>(depth + 1) * 2, ' ');
        out += "}\n";
    }
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "}";
}

void render_field(const QueryTree& node, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += node.name;
    if (!node.args.empty()) {
        out.push_back('(');
        bool first = true;
        for (const auto& [name, value] : node.args) {
            if (!first) {
                out += ", ";
            }
            first = false;
            out += name;
            out += ": ";
            literal_into(out, value);
        }
        out.push_back(')');
    }
    if (!node.children.empty()) {
        render_children(node.children, depth, out);
    }
    out.push_back('\n');
}

} // namespace

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Object: return "OBJECT";
        case NodeKind::Scalar: return "SCALAR";
        case NodeKind::Enum: return "ENUM";
    }
    return "?";
}

std::size_t QueryTree::node_count() const {
    std::size_t count = 1;
    for (const auto& child : children) {
        count += child.node_count();
    }
    return count;
}

FlatQuery generate_flat(const SchemaModel& schema, const SynthesisConfig& cfg,
                        const GeneratorRegistry& registry, GenContext& ctx) {
    std::vector<FieldSpec> query_roots;
    try {
        query_roots = valid_query_roots(schema, false);
    } catch (const NoQueryRoot&) {
        throw EmptySchema("schema has no query root");
    }
    std::size_t query_count = query_roots.size();
    std::vector<FieldSpec> roots = std::move(query_roots);
    if (cfg.include_mutations && schema.mutation_root) {
        if (const ObjectSpec* mutation = schema.find_object(*schema.mutation_root)) {
            roots.insert(roots.end(), mutation->fields.begin(), mutation->fields.end());
        }
    }
    if (roots.empty()) {
        throw EmptySchema("schema offers no root fields to generate from");
    }

    FlatQuery result;
    const std::size_t pick = ctx.rng.below(roots.size());
    result.operation = pick < query_count ? Operation::Query : Operation::Mutation;
    const FieldSpec& root_field = roots[pick];
    const std::string root_parent =
        result.operation == Operation::Query ? schema.query_root : *schema.mutation_root;

    int next_object_id = 0;
    auto make_node = [&](const FieldSpec& field, const std::string& parent_type,
                         std::optional<int> parent_id, int generation,
                         std::optional<std::string> fragment_on) {
        GenNode node;
        node.name = field.name;
        node.kind = classify(field.type);
        node.type_name = *field.type.named().name;
        if (node.kind == NodeKind::Object) {
            node.object_id = next_object_id++;
        }
        node.field_id = parent_id;
        node.generation = generation;
        node.args = generate_args(field, parent_type, schema, registry, ctx);
        node.fragment_on = std::move(fragment_on);
        return node;
    };

    result.nodes.push_back(make_node(root_field, root_parent, std::nullopt, 0, std::nullopt));

    const int iterations = std::min(cfg.size, cfg.max_iterations);
    for (int generation = 1; generation <= iterations; ++generation) {
        // Only object nodes of the previous generation are expanded; earlier
        // generations are already settled.
        std::vector<std::size_t> parents;
        for (std::size_t i = 0; i < result.nodes.size(); ++i) {
            if (result.nodes[i].generation == generation - 1 &&
                result.nodes[i].kind == NodeKind::Object) {
                parents.push_back(i);
            }
        }
        if (parents.empty()) {
            break;
        }
        for (const std::size_t parent_index : parents) {
            const GenNode parent = result.nodes[parent_index];
            const ObjectSpec* object = schema.find_object(parent.type_name);
            if (!object) {
                throw DanglingTypeReference("generated node references unknown type \"" +
                                            parent.type_name + "\"");
            }

            std::optional<std::string> fragment_on;
            if (object->kind != ObjectKind::Object) {
                if (object->possible_types.empty()) {
                    continue;
                }
                fragment_on = object->possible_types[ctx.rng.below(object->possible_types.size())];
                const ObjectSpec* concrete = schema.find_object(*fragment_on);
                if (!concrete) {
                    throw DanglingTypeReference("possible type \"" + *fragment_on +
                                                "\" is not defined");
                }
                // __typename makes the chosen branch observable in responses.
                GenNode typename_node;
                typename_node.name = "__typename";
                typename_node.kind = NodeKind::Scalar;
                typename_node.type_name = "String";
                typename_node.field_id = parent.object_id;
                typename_node.generation = generation;
                result.nodes.push_back(std::move(typename_node));
                object = concrete;
            }

            if (object->fields.empty()) {
                continue;
            }
            const std::size_t max_draw =
                std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.max_fields, 1)),
                                      object->fields.size());
            const std::size_t count = 1 + ctx.rng.below(max_draw);
            const std::string& parent_type = fragment_on ? *fragment_on : parent.type_name;
            for (const std::size_t field_index :
                 draw_distinct(ctx, object->fields.size(), count)) {
                result.nodes.push_back(make_node(object->fields[field_index], parent_type,
                                                 parent.object_id, generation, fragment_on));
            }
        }
    }
    return result;
}

std::vector<GenNode> clean_flat(const std::vector<GenNode>& nodes) {
    std::vector<bool> alive(nodes.size(), true);
    bool removed = true;
    while (removed) {
        removed = false;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!alive[i] || nodes[i].kind != NodeKind::Object) {
                continue;
            }
            bool has_child = false;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                if (alive[j] && nodes[j].field_id && nodes[i].object_id &&
                    *nodes[j].field_id == *nodes[i].object_id) {
                    has_child = true;
                    break;
                }
            }
            if (!has_child) {
                alive[i] = false;
                removed = true;
            }
        }
    }
    std::vector<GenNode> cleaned;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (alive[i]) {
            cleaned.push_back(nodes[i]);
        }
    }
    return cleaned;
}

QueryTree build_tree(const std::vector<GenNode>& nodes) {
    if (nodes.empty()) {
        throw Error("cannot build a tree from an empty node list");
    }
    std::map<int, std::vector<std::size_t>> children_of;
    std::optional<std::size_t> root_index;
    std::map<int, std::size_t> object_index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].object_id) {
            object_index[*nodes[i].object_id] = i;
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].field_id) {
            if (!object_index.count(*nodes[i].field_id)) {
                throw OrphanNode("node \"" + nodes[i].name + "\" references missing object id " +
                                 std::to_string(*nodes[i].field_id));
            }
            children_of[*nodes[i].field_id].push_back(i);
        } else {
            if (root_index) {
                throw Error("flat list contains more than one root node");
            }
            root_index = i;
        }
    }
    if (!root_index) {
        throw OrphanNode("flat list contains no root node");
    }

    // Children attach in flat-list order, leaves first by construction.
    auto assemble = [&](auto&& self, std::size_t index) -> QueryTree {
        const GenNode& node = nodes[index];
        QueryTree tree;
        tree.name = node.name;
        tree.args = node.args;
        tree.fragment_on = node.fragment_on;
        if (node.object_id) {
            if (auto it = children_of.find(*node.object_id); it != children_of.end()) {
                for (const std::size_t child : it->second) {
                    tree.children.push_back(self(self, child));
                }
            }
        }
        return tree;
    };
    return assemble(assemble, *root_index);
}

std::string serialize(const QueryTree& tree, Operation op) {
    std::string out = op == Operation::Mutation ? "mutation {\n" : "{\n";
    render_field(tree, 1, out);
    out += "}\n";
    return out;
}

std::string graphql_literal(const Json& value) {
    std::string out;
    literal_into(out, value);
    return out;
}

Json query_envelope(const std::string& query_text) {
    return Json{{"query", query_text}};
}

} // namespace gqlcheck

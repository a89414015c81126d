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

#include "gqlcheck/schema.hpp"

#include <fstream>

namespace gqlcheck {

const char* to_string(TypeKind kind) {
    switch (kind) {
        case TypeKind::Scalar: return "SCALAR";
        case TypeKind::Object: return "OBJECT";
        case TypeKind::Enum: return "ENUM";
        case TypeKind::InputObject: return "INPUT_OBJECT";
        case TypeKind::Interface: return "INTERFACE";
        case TypeKind::Union: return "UNION";
        case TypeKind::List: return "LIST";
        case TypeKind::NonNull: return "NON_NULL";
    }
    return "?";
}

const char* to_string(Operation op) {
    return op == Operation::Query ? "query" : "mutation";
}

const TypeRef& TypeRef::named() const {
    const TypeRef* t = this;
    while (t->of_type) {
        t = t->of_type.get();
    }
    return *t;
}

bool TypeRef::is_list() const {
    if (kind == TypeKind::List) {
        return true;
    }
    return kind == TypeKind::NonNull && of_type && of_type->kind == TypeKind::List;
}

TypeRef TypeRef::make_named(TypeKind kind, std::string name) {
    TypeRef t;
    t.kind = kind;
    t.name = std::move(name);
    return t;
}

TypeRef TypeRef::list_of(TypeRef inner) {
    TypeRef t;
    t.kind = TypeKind::List;
    t.of_type = std::make_shared<const TypeRef>(std::move(inner));
    return t;
}

TypeRef TypeRef::non_null_of(TypeRef inner) {
    TypeRef t;
    t.kind = TypeKind::NonNull;
    t.of_type = std::make_shared<const TypeRef>(std::move(inner));
    return t;
}

bool operator==(const TypeRef& a, const TypeRef& b) {
    if (a.kind != b.kind || a.name != b.name) {
        return false;
    }
    if (static_cast<bool>(a.of_type) != static_cast<bool>(b.of_type)) {
        return false;
    }
    return !a.of_type || *a.of_type == *b.of_type;
}

const FieldSpec* ObjectSpec::find_field(std::string_view field_name) const {
    for (const auto& field : fields) {
        if (field.name == field_name) {
            return &field;
        }
    }
    return nullptr;
}

const ObjectSpec* SchemaModel::find_object(std::string_view type_name) const {
    auto it = objects.find(std::string(type_name));
    return it == objects.end() ? nullptr : &it->second;
}

bool SchemaModel::has_type(std::string_view type_name) const {
    const std::string key(type_name);
    return objects.count(key) || scalars.count(key) || enums.count(key) ||
           input_objects.count(key);
}

bool is_builtin_scalar(std::string_view name) {
    return name == "Int" || name == "Float" || name == "String" ||
           name == "Boolean" || name == "ID";
}

bool is_meta_name(std::string_view name) {
    return name.size() >= 2 && name[0] == '_' && name[1] == '_';
}

namespace {

TypeKind parse_kind(const Json& j, const std::string& where) {
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw MalformedIntrospection("missing type kind in " + where);
    }
    const std::string k = j["kind"].get<std::string>();
    if (k == "SCALAR") return TypeKind::Scalar;
    if (k == "OBJECT") return TypeKind::Object;
    if (k == "ENUM") return TypeKind::Enum;
    if (k == "INPUT_OBJECT") return TypeKind::InputObject;
    if (k == "INTERFACE") return TypeKind::Interface;
    if (k == "UNION") return TypeKind::Union;
    if (k == "LIST") return TypeKind::List;
    if (k == "NON_NULL") return TypeKind::NonNull;
    throw MalformedIntrospection("unknown type kind \"" + k + "\" in " + where);
}

TypeRef parse_type_ref(const Json& j, const std::string& where) {
    if (!j.is_object()) {
        throw MalformedIntrospection("type reference is not an object in " + where);
    }
    TypeRef ref;
    ref.kind = parse_kind(j, where);
    if (ref.kind == TypeKind::List || ref.kind == TypeKind::NonNull) {
        if (!j.contains("ofType") || j["ofType"].is_null()) {
            throw MalformedIntrospection("wrapper type without ofType in " + where);
        }
        TypeRef inner = parse_type_ref(j["ofType"], where);
        if (ref.kind == TypeKind::NonNull && inner.kind == TypeKind::NonNull) {
            throw MalformedIntrospection("NON_NULL directly wraps NON_NULL in " + where);
        }
        ref.of_type = std::make_shared<const TypeRef>(std::move(inner));
        return ref;
    }
    if (!j.contains("name") || !j["name"].is_string()) {
        throw MalformedIntrospection("named type without a name in " + where);
    }
    ref.name = j["name"].get<std::string>();
    return ref;
}

ArgSpec parse_arg(const Json& j, const std::string& where) {
    ArgSpec arg;
    if (!j.contains("name") || !j["name"].is_string()) {
        throw MalformedIntrospection("argument without a name in " + where);
    }
    arg.name = j["name"].get<std::string>();
    if (!j.contains("type")) {
        throw MalformedIntrospection("argument \"" + arg.name + "\" without a type in " + where);
    }
    arg.type = parse_type_ref(j["type"], where + "." + arg.name);
    arg.required = arg.type.kind == TypeKind::NonNull;
    arg.default_present = j.contains("defaultValue") && !j["defaultValue"].is_null();
    return arg;
}

FieldSpec parse_field(const Json& j, const std::string& type_name) {
    FieldSpec field;
    if (!j.contains("name") || !j["name"].is_string()) {
        throw MalformedIntrospection("field without a name on type " + type_name);
    }
    field.name = j["name"].get<std::string>();
    const std::string where = type_name + "." + field.name;
    if (!j.contains("type")) {
        throw MalformedIntrospection("field " + where + " has no type");
    }
    field.type = parse_type_ref(j["type"], where);
    if (j.contains("args") && j["args"].is_array()) {
        for (const auto& a : j["args"]) {
            field.args.push_back(parse_arg(a, where));
        }
    }
    return field;
}

const Json& locate_schema_object(const Json& doc) {
    if (doc.is_object() && doc.contains("data") && doc["data"].is_object() &&
        doc["data"].contains("__schema")) {
        return doc["data"]["__schema"];
    }
    if (doc.is_object() && doc.contains("__schema")) {
        return doc["__schema"];
    }
    throw MalformedIntrospection("document does not contain \"__schema\"");
}

} // namespace

void SchemaModel::validate() const {
    auto check_ref = [&](const TypeRef& ref, const std::string& where) {
        const TypeRef& base = ref.named();
        if (!base.name || base.name->empty()) {
            throw MalformedIntrospection("unnamed type reference in " + where);
        }
        if (!has_type(*base.name)) {
            throw DanglingTypeReference(where + " references unknown type \"" + *base.name + "\"");
        }
    };

    if (!query_root.empty() && !objects.count(query_root)) {
        throw DanglingTypeReference("query root \"" + query_root + "\" is not an object type");
    }
    if (mutation_root && !objects.count(*mutation_root)) {
        throw DanglingTypeReference("mutation root \"" + *mutation_root + "\" is not an object type");
    }

    for (const auto& [name, object] : objects) {
        std::set<std::string_view> seen;
        for (const auto& field : object.fields) {
            if (field.name.empty()) {
                throw MalformedIntrospection("empty field name on type " + name);
            }
            if (!seen.insert(field.name).second) {
                throw MalformedIntrospection("duplicate field \"" + field.name + "\" on type " + name);
            }
            check_ref(field.type, name + "." + field.name);
            for (const auto& arg : field.args) {
                check_ref(arg.type, name + "." + field.name + "(" + arg.name + ")");
            }
        }
        for (const auto& possible : object.possible_types) {
            if (!objects.count(possible)) {
                throw DanglingTypeReference("possible type \"" + possible + "\" of " + name +
                                            " is not an object type");
            }
        }
    }
    for (const auto& [name, fields] : input_objects) {
        for (const auto& arg : fields) {
            check_ref(arg.type, name + "." + arg.name);
        }
    }
}

SchemaModel parse_introspection(const Json& doc) {
    const Json& schema_json = locate_schema_object(doc);
    if (!schema_json.is_object()) {
        throw MalformedIntrospection("\"__schema\" is not an object");
    }

    SchemaModel model;
    if (schema_json.contains("queryType") && schema_json["queryType"].is_object() &&
        schema_json["queryType"].contains("name") && schema_json["queryType"]["name"].is_string()) {
        model.query_root = schema_json["queryType"]["name"].get<std::string>();
    } else {
        throw MalformedIntrospection("missing queryType");
    }
    if (schema_json.contains("mutationType") && schema_json["mutationType"].is_object() &&
        schema_json["mutationType"].contains("name") &&
        schema_json["mutationType"]["name"].is_string()) {
        model.mutation_root = schema_json["mutationType"]["name"].get<std::string>();
    }

    if (!schema_json.contains("types") || !schema_json["types"].is_array()) {
        throw MalformedIntrospection("missing types array");
    }

    for (const auto& type_json : schema_json["types"]) {
        if (!type_json.is_object()) {
            throw MalformedIntrospection("types array contains a non-object entry");
        }
        const TypeKind kind = parse_kind(type_json, "types[]");
        if (!type_json.contains("name") || !type_json["name"].is_string()) {
            throw MalformedIntrospection("type definition without a name");
        }
        const std::string name = type_json["name"].get<std::string>();

        switch (kind) {
            case TypeKind::Scalar:
                model.scalars.insert(name);
                break;
            case TypeKind::Object:
            case TypeKind::Interface:
            case TypeKind::Union: {
                ObjectSpec object;
                object.name = name;
                object.kind = kind == TypeKind::Object     ? ObjectKind::Object
                              : kind == TypeKind::Interface ? ObjectKind::Interface
                                                            : ObjectKind::Union;
                if (type_json.contains("fields") && type_json["fields"].is_array()) {
                    for (const auto& f : type_json["fields"]) {
                        object.fields.push_back(parse_field(f, name));
                    }
                }
                if (type_json.contains("possibleTypes") && type_json["possibleTypes"].is_array()) {
                    for (const auto& p : type_json["possibleTypes"]) {
                        if (p.is_object() && p.contains("name") && p["name"].is_string()) {
                            object.possible_types.push_back(p["name"].get<std::string>());
                        }
                    }
                }
                model.objects.emplace(name, std::move(object));
                break;
            }
            case TypeKind::Enum: {
                std::vector<std::string> values;
                if (type_json.contains("enumValues") && type_json["enumValues"].is_array()) {
                    for (const auto& v : type_json["enumValues"]) {
                        if (v.is_object() && v.contains("name") && v["name"].is_string()) {
                            values.push_back(v["name"].get<std::string>());
                        }
                    }
                }
                model.enums.emplace(name, std::move(values));
                break;
            }
            case TypeKind::InputObject: {
                std::vector<ArgSpec> fields;
                if (type_json.contains("inputFields") && type_json["inputFields"].is_array()) {
                    for (const auto& f : type_json["inputFields"]) {
                        fields.push_back(parse_arg(f, name));
                    }
                }
                model.input_objects.emplace(name, std::move(fields));
                break;
            }
            case TypeKind::List:
            case TypeKind::NonNull:
                throw MalformedIntrospection("wrapper kind in type definition \"" + name + "\"");
        }
    }

    model.validate();
    return model;
}

SchemaModel parse_introspection_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open schema file: " + path);
    }
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw MalformedIntrospection("schema file is not valid JSON: " + path);
    }
    return parse_introspection(doc);
}

std::vector<FieldSpec> valid_query_roots(const SchemaModel& schema, bool include_mutations) {
    const ObjectSpec* query = schema.find_object(schema.query_root);
    if (!query) {
        throw NoQueryRoot("schema has no query root object");
    }
    std::vector<FieldSpec> roots = query->fields;
    if (include_mutations && schema.mutation_root) {
        if (const ObjectSpec* mutation = schema.find_object(*schema.mutation_root)) {
            roots.insert(roots.end(), mutation->fields.begin(), mutation->fields.end());
        }
    }
    return roots;
}

const std::string& introspection_query() {
    // Fragment-free rendition of the canonical introspection query; nesting
    // of ofType covers nine wrapper levels, which is deeper than any
    // practical schema.
    static const std::string query = [] {
        std::string type_ref = "kind name";
        for (int i = 0; i < 9; ++i) {
            type_ref = "kind name ofType { " + type_ref + " }";
        }
        std::string q = "query IntrospectionQuery { __schema { ";
        q += "queryType { name } mutationType { name } subscriptionType { name } ";
        q += "types { kind name description ";
        q += "fields(includeDeprecated: true) { name description ";
        q += "args { name description type { " + type_ref + " } defaultValue } ";
        q += "type { " + type_ref + " } isDeprecated deprecationReason } ";
        q += "inputFields { name description type { " + type_ref + " } defaultValue } ";
        q += "interfaces { " + type_ref + " } ";
        q += "enumValues(includeDeprecated: true) { name description isDeprecated deprecationReason } ";
        q += "possibleTypes { " + type_ref + " } } ";
        q += "directives { name description locations args { name type { " + type_ref +
             " } defaultValue } } } }";
        return q;
    }();
    return query;
}

} // namespace gqlcheck

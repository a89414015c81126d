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

#include "gqlcheck/fixture.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>

#include "gqlcheck/query_parser.hpp"

namespace gqlcheck {

namespace {

// Unhandled resolver crash; surfaces as HTTP 500.
struct ResolverCrash {
    std::string what;
};

// Request-level validation problem; surfaces as HTTP 400.
struct RequestInvalid {
    std::string what;
};

Json t_named(const char* kind, const char* name) {
    return Json{{"kind", kind}, {"name", name}, {"ofType", nullptr}};
}

Json t_list(Json inner) {
    return Json{{"kind", "LIST"}, {"name", nullptr}, {"ofType", std::move(inner)}};
}

Json t_non_null(Json inner) {
    return Json{{"kind", "NON_NULL"}, {"name", nullptr}, {"ofType", std::move(inner)}};
}

Json mk_arg(const char* name, Json type) {
    return Json{{"name", name}, {"description", nullptr}, {"type", std::move(type)},
                {"defaultValue", nullptr}};
}

Json mk_field(const char* name, Json type, Json args = Json::array()) {
    return Json{{"name", name},          {"description", nullptr},
                {"args", std::move(args)}, {"type", std::move(type)},
                {"isDeprecated", false},  {"deprecationReason", nullptr}};
}

Json mk_object(const char* name, Json fields) {
    return Json{{"kind", "OBJECT"},      {"name", name},
                {"description", nullptr}, {"fields", std::move(fields)},
                {"inputFields", nullptr}, {"interfaces", Json::array()},
                {"enumValues", nullptr},  {"possibleTypes", nullptr}};
}

Json mk_scalar(const char* name) {
    return Json{{"kind", "SCALAR"},      {"name", name},
                {"description", nullptr}, {"fields", nullptr},
                {"inputFields", nullptr}, {"interfaces", nullptr},
                {"enumValues", nullptr},  {"possibleTypes", nullptr}};
}

Json mk_enum(const char* name, std::initializer_list<const char*> values) {
    Json enum_values = Json::array();
    for (const char* v : values) {
        enum_values.push_back(Json{{"name", v},
                                   {"description", nullptr},
                                   {"isDeprecated", false},
                                   {"deprecationReason", nullptr}});
    }
    return Json{{"kind", "ENUM"},        {"name", name},
                {"description", nullptr}, {"fields", nullptr},
                {"inputFields", nullptr}, {"interfaces", nullptr},
                {"enumValues", std::move(enum_values)}, {"possibleTypes", nullptr}};
}

Json build_introspection() {
    Json types = Json::array();

    types.push_back(mk_object(
        "Query",
        Json::array({
            mk_field("project", t_named("OBJECT", "Project"),
                     Json::array({mk_arg("id", t_non_null(t_named("SCALAR", "ID")))})),
            mk_field("projects", t_list(t_named("OBJECT", "Project")),
                     Json::array({mk_arg("search", t_named("SCALAR", "String"))})),
            mk_field("user", t_named("OBJECT", "User"),
                     Json::array({mk_arg("id", t_non_null(t_named("SCALAR", "ID")))})),
            mk_field("users", t_list(t_named("OBJECT", "User"))),
        })));

    types.push_back(mk_object(
        "Mutation", Json::array({mk_field("noop", t_named("SCALAR", "Boolean"))})));

    types.push_back(mk_object(
        "Project",
        Json::array({
            mk_field("id", t_named("SCALAR", "ID")),
            mk_field("name", t_named("SCALAR", "String")),
            mk_field("description", t_named("SCALAR", "String")),
            mk_field("owner", t_named("OBJECT", "User")),
            mk_field("members", t_list(t_named("OBJECT", "User"))),
        })));

    types.push_back(mk_object(
        "User",
        Json::array({
            mk_field("id", t_named("SCALAR", "ID")),
            mk_field("name", t_named("SCALAR", "String")),
            mk_field("age", t_named("SCALAR", "Int")),
            mk_field("projects", t_list(t_named("OBJECT", "Project"))),
        })));

    types.push_back(mk_scalar("ID"));
    types.push_back(mk_scalar("String"));
    types.push_back(mk_scalar("Int"));
    types.push_back(mk_scalar("Boolean"));

    // Introspection meta types, compacted to the fields clients actually use.
    types.push_back(mk_object(
        "__Schema",
        Json::array({
            mk_field("types", t_non_null(t_list(t_non_null(t_named("OBJECT", "__Type"))))),
            mk_field("queryType", t_non_null(t_named("OBJECT", "__Type"))),
            mk_field("mutationType", t_named("OBJECT", "__Type")),
            mk_field("subscriptionType", t_named("OBJECT", "__Type")),
            mk_field("directives",
                     t_non_null(t_list(t_non_null(t_named("OBJECT", "__Directive"))))),
        })));
    types.push_back(mk_object(
        "__Type",
        Json::array({
            mk_field("kind", t_non_null(t_named("ENUM", "__TypeKind"))),
            mk_field("name", t_named("SCALAR", "String")),
            mk_field("description", t_named("SCALAR", "String")),
            mk_field("fields", t_list(t_non_null(t_named("OBJECT", "__Field"))),
                     Json::array({mk_arg("includeDeprecated", t_named("SCALAR", "Boolean"))})),
            mk_field("interfaces", t_list(t_non_null(t_named("OBJECT", "__Type")))),
            mk_field("possibleTypes", t_list(t_non_null(t_named("OBJECT", "__Type")))),
            mk_field("enumValues", t_list(t_non_null(t_named("OBJECT", "__EnumValue"))),
                     Json::array({mk_arg("includeDeprecated", t_named("SCALAR", "Boolean"))})),
            mk_field("inputFields", t_list(t_non_null(t_named("OBJECT", "__InputValue")))),
            mk_field("ofType", t_named("OBJECT", "__Type")),
        })));
    types.push_back(mk_object(
        "__Field",
        Json::array({
            mk_field("name", t_non_null(t_named("SCALAR", "String"))),
            mk_field("description", t_named("SCALAR", "String")),
            mk_field("args", t_non_null(t_list(t_non_null(t_named("OBJECT", "__InputValue"))))),
            mk_field("type", t_non_null(t_named("OBJECT", "__Type"))),
            mk_field("isDeprecated", t_non_null(t_named("SCALAR", "Boolean"))),
            mk_field("deprecationReason", t_named("SCALAR", "String")),
        })));
    types.push_back(mk_object(
        "__InputValue",
        Json::array({
            mk_field("name", t_non_null(t_named("SCALAR", "String"))),
            mk_field("description", t_named("SCALAR", "String")),
            mk_field("type", t_non_null(t_named("OBJECT", "__Type"))),
            mk_field("defaultValue", t_named("SCALAR", "String")),
        })));
    types.push_back(mk_object(
        "__EnumValue",
        Json::array({
            mk_field("name", t_non_null(t_named("SCALAR", "String"))),
            mk_field("description", t_named("SCALAR", "String")),
            mk_field("isDeprecated", t_non_null(t_named("SCALAR", "Boolean"))),
            mk_field("deprecationReason", t_named("SCALAR", "String")),
        })));
    types.push_back(mk_object(
        "__Directive",
        Json::array({
            mk_field("name", t_non_null(t_named("SCALAR", "String"))),
            mk_field("description", t_named("SCALAR", "String")),
            mk_field("locations",
                     t_non_null(t_list(t_non_null(t_named("ENUM", "__DirectiveLocation"))))),
            mk_field("args", t_non_null(t_list(t_non_null(t_named("OBJECT", "__InputValue"))))),
        })));
    types.push_back(mk_enum("__TypeKind", {"SCALAR", "OBJECT", "INTERFACE", "UNION", "ENUM",
                                           "INPUT_OBJECT", "LIST", "NON_NULL"}));
    types.push_back(mk_enum("__DirectiveLocation",
                            {"QUERY", "MUTATION", "FIELD", "FRAGMENT_DEFINITION",
                             "FRAGMENT_SPREAD", "INLINE_FRAGMENT"}));

    Json schema = Json{
        {"queryType", Json{{"name", "Query"}}},
        {"mutationType", Json{{"name", "Mutation"}}},
        {"subscriptionType", nullptr},
        {"types", std::move(types)},
        {"directives", Json::array()},
    };
    return Json{{"data", Json{{"__schema", std::move(schema)}}}};
}

bool all_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return c >= '0' && c <= '9'; });
}

bool all_alnum(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    });
}

std::string coerce_to_string(const Json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<std::int64_t>());
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<std::uint64_t>());
    }
    throw RequestInvalid{"argument cannot be coerced to a string"};
}

} // namespace

const char* to_string(FaultId fault) {
    switch (fault) {
        case FaultId::InputValidation1: return "input-validation-1";
        case FaultId::InputValidation2: return "input-validation-2";
        case FaultId::InputValidation3: return "input-validation-3";
        case FaultId::LogicProject: return "logic-project";
        case FaultId::LogicUser: return "logic-user";
        case FaultId::LogicOwner: return "logic-owner";
        case FaultId::LogicMembers: return "logic-members";
        case FaultId::WrongFieldProject: return "wrong-field-project";
        case FaultId::WrongFieldUser: return "wrong-field-user";
        case FaultId::WrongFieldOwner: return "wrong-field-owner";
        case FaultId::WrongFieldMembers: return "wrong-field-members";
        case FaultId::WrongTypeProject: return "wrong-type-project";
        case FaultId::WrongTypeUser: return "wrong-type-user";
        case FaultId::WrongTypeOwner: return "wrong-type-owner";
        case FaultId::WrongTypeMembers: return "wrong-type-members";
    }
    return "?";
}

const std::vector<FaultId>& all_faults() {
    static const std::vector<FaultId> faults = {
        FaultId::InputValidation1, FaultId::InputValidation2, FaultId::InputValidation3,
        FaultId::LogicProject,     FaultId::LogicUser,        FaultId::LogicOwner,
        FaultId::LogicMembers,     FaultId::WrongFieldProject, FaultId::WrongFieldUser,
        FaultId::WrongFieldOwner,  FaultId::WrongFieldMembers, FaultId::WrongTypeProject,
        FaultId::WrongTypeUser,    FaultId::WrongTypeOwner,    FaultId::WrongTypeMembers,
    };
    return faults;
}

std::optional<FaultId> fault_from_string(std::string_view name) {
    for (const FaultId fault : all_faults()) {
        if (name == to_string(fault)) {
            return fault;
        }
    }
    return std::nullopt;
}

const FixtureDataset& FixtureDataset::standard() {
    static const FixtureDataset dataset = [] {
        FixtureDataset d;
        d.users = {
            {"1", "Ada", 34},   {"2", "Brian", 28}, {"3", "Carol", 41}, {"4", "Deepak", 25},
            {"5", "Elena", 37}, {"6", "Farid", 30}, {"7", "Grace", 52}, {"8", "Hugo", 23},
        };
        d.projects = {
            {"1", "Alpha", "Build tooling", "1", {"2", "3"}},
            {"2", "Beta", "Service mesh", "2", {"3", "4", "5"}},
            {"3", "Gamma", "Data pipeline", "4", {"1", "6"}},
            {"4", "Delta", "Web frontend", "6", {"7"}},
            {"5", "Epsilon", "Ops dashboard", "8", {"5", "6", "7"}},
        };
        return d;
    }();
    return dataset;
}

GeneratorRegistry dataset_generator_recipe(const FixtureDataset& dataset) {
    std::vector<std::string> project_ids;
    for (const auto& p : dataset.projects) {
        project_ids.push_back(p.id);
    }
    std::vector<std::string> user_ids;
    for (const auto& u : dataset.users) {
        user_ids.push_back(u.id);
    }
    auto id_generator = [](std::vector<std::string> ids) -> CustomGenerator {
        return [ids = std::move(ids)](GenContext& ctx) -> Json {
            if (ctx.rng.chance(0.5)) {
                return ids[ctx.rng.below(ids.size())];
            }
            return gen_scalar("String", ctx);
        };
    };
    GeneratorRegistry registry;
    registry.by_field_path["Query.project.id"] = id_generator(project_ids);
    registry.by_field_path["Query.user.id"] = id_generator(user_ids);
    return registry;
}

struct FixtureService::Impl {
    const FixtureDataset& dataset;
    std::set<FaultId> faults;
    bool echo_headers = false;

    std::atomic<std::size_t> hits_project{0};
    std::atomic<std::size_t> hits_user{0};
    std::atomic<std::size_t> hits_owner{0};
    std::atomic<std::size_t> hits_members{0};

    Impl(std::set<FaultId> f, const FixtureDataset& d, bool echo)
        : dataset(d), faults(std::move(f)), echo_headers(echo) {}

    bool faulted(FaultId fault) const { return faults.count(fault) > 0; }

    const FixtureDataset::ProjectRow* project_by_id(const std::string& id) const {
        for (const auto& p : dataset.projects) {
            if (p.id == id) {
                return &p;
            }
        }
        return nullptr;
    }

    const FixtureDataset::ProjectRow* project_by_name(const std::string& name) const {
        for (const auto& p : dataset.projects) {
            if (p.name == name) {
                return &p;
            }
        }
        return nullptr;
    }

    const FixtureDataset::UserRow* user_by_id(const std::string& id) const {
        for (const auto& u : dataset.users) {
            if (u.id == id) {
                return &u;
            }
        }
        return nullptr;
    }

    const FixtureDataset::UserRow* user_by_name(const std::string& name) const {
        for (const auto& u : dataset.users) {
            if (u.name == name) {
                return &u;
            }
        }
        return nullptr;
    }

    // --- resolvers -------------------------------------------------------

    const FixtureDataset::ProjectRow* resolve_project(const std::string& id) {
        hits_project.fetch_add(1, std::memory_order_relaxed);
        if (faulted(FaultId::InputValidation1) && !all_digits(id)) {
            throw ResolverCrash{"project id must be numeric"};
        }
        if (faulted(FaultId::InputValidation2) && !all_alnum(id)) {
            throw ResolverCrash{"project id contains illegal characters"};
        }
        if (faulted(FaultId::InputValidation3) && id.size() > kOverlongIdLength) {
            throw ResolverCrash{"project id too long"};
        }
        if (faulted(FaultId::LogicProject)) {
            throw ResolverCrash{"project resolver failed"};
        }
        if (faulted(FaultId::WrongFieldProject)) {
            return project_by_name(id);
        }
        return project_by_id(id);
    }

    const FixtureDataset::UserRow* resolve_user(const std::string& id) {
        hits_user.fetch_add(1, std::memory_order_relaxed);
        if (faulted(FaultId::LogicUser)) {
            throw ResolverCrash{"user resolver failed"};
        }
        if (faulted(FaultId::WrongFieldUser)) {
            return user_by_name(id);
        }
        return user_by_id(id);
    }

    const FixtureDataset::UserRow* resolve_owner(const FixtureDataset::ProjectRow& project) {
        hits_owner.fetch_add(1, std::memory_order_relaxed);
        if (faulted(FaultId::LogicOwner)) {
            throw ResolverCrash{"owner resolver failed"};
        }
        if (faulted(FaultId::WrongFieldOwner)) {
            return user_by_name(project.owner_id);
        }
        return user_by_id(project.owner_id);
    }

    std::vector<const FixtureDataset::UserRow*> resolve_members(
        const FixtureDataset::ProjectRow& project) {
        hits_members.fetch_add(1, std::memory_order_relaxed);
        if (faulted(FaultId::LogicMembers)) {
            throw ResolverCrash{"members resolver failed"};
        }
        std::vector<const FixtureDataset::UserRow*> members;
        for (const auto& member_id : project.member_ids) {
            const auto* user = faulted(FaultId::WrongFieldMembers) ? user_by_name(member_id)
                                                                   : user_by_id(member_id);
            if (user) {
                members.push_back(user);
            }
        }
        return members;
    }

    // --- completion ------------------------------------------------------

    // Validates the shape a resolver returned against the declared field
    // shape. Mismatches become an errors entry and a null value, the way a
    // GraphQL execution layer reports them, with a 200 status.
    Json shape_checked(Json raw, bool list_expected, const std::string& field_path,
                       Json& errors) {
        if (raw.is_null()) {
            return raw;
        }
        if (list_expected && !raw.is_array()) {
            errors.push_back(Json{
                {"message", "Expected a list for field " + field_path},
                {"path", Json::array({field_path})},
            });
            return nullptr;
        }
        if (!list_expected && raw.is_array()) {
            errors.push_back(Json{
                {"message", "Cannot return a list for the single field " + field_path},
                {"path", Json::array({field_path})},
            });
            return nullptr;
        }
        return raw;
    }

    // Lifts inline-fragment children whose type condition matches into the
    // plain field list; non-matching fragments are skipped.
    static void flatten_selections(const std::vector<AstSelection>& in,
                                   const std::string& type_name,
                                   std::vector<const AstSelection*>& out) {
        for (const auto& sel : in) {
            if (sel.is_inline_fragment) {
                if (sel.name == type_name) {
                    flatten_selections(sel.children, type_name, out);
                }
            } else {
                out.push_back(&sel);
            }
        }
    }

    Json complete_project(const FixtureDataset::ProjectRow& project,
                          const std::vector<AstSelection>& raw_selections, Json& errors) {
        std::vector<const AstSelection*> selections;
        flatten_selections(raw_selections, "Project", selections);
        Json out = Json::object();
        for (const auto* sel_ptr : selections) {
            const AstSelection& sel = *sel_ptr;
            if (sel.name == "__typename") {
                out[sel.name] = "Project";
            } else if (sel.name == "id") {
                out[sel.name] = project.id;
            } else if (sel.name == "name") {
                out[sel.name] = project.name;
            } else if (sel.name == "description") {
                out[sel.name] = project.description;
            } else if (sel.name == "owner") {
                const auto* owner = resolve_owner(project);
                Json raw;
                if (owner) {
                    raw = complete_user(*owner, sel.children, errors);
                    if (faulted(FaultId::WrongTypeOwner)) {
                        raw = Json::array({std::move(raw)});
                    }
                }
                out[sel.name] = shape_checked(std::move(raw), false, "Project.owner", errors);
            } else if (sel.name == "members") {
                auto members = resolve_members(project);
                Json raw = Json::array();
                for (const auto* member : members) {
                    raw.push_back(complete_user(*member, sel.children, errors));
                }
                if (faulted(FaultId::WrongTypeMembers)) {
                    raw = raw.empty() ? Json(nullptr) : raw[0];
                }
                out[sel.name] = shape_checked(std::move(raw), true, "Project.members", errors);
            }
        }
        return out;
    }

    Json complete_user(const FixtureDataset::UserRow& user,
                       const std::vector<AstSelection>& raw_selections, Json& errors) {
        std::vector<const AstSelection*> selections;
        flatten_selections(raw_selections, "User", selections);
        Json out = Json::object();
        for (const auto* sel_ptr : selections) {
            const AstSelection& sel = *sel_ptr;
            if (sel.name == "__typename") {
                out[sel.name] = "User";
            } else if (sel.name == "id") {
                out[sel.name] = user.id;
            } else if (sel.name == "name") {
                out[sel.name] = user.name;
            } else if (sel.name == "age") {
                out[sel.name] = user.age;
            } else if (sel.name == "projects") {
                Json raw = Json::array();
                for (const auto& project : dataset.projects) {
                    const bool linked =
                        project.owner_id == user.id ||
                        std::find(project.member_ids.begin(), project.member_ids.end(),
                                  user.id) != project.member_ids.end();
                    if (linked) {
                        raw.push_back(complete_project(project, sel.children, errors));
                    }
                }
                out[sel.name] = shape_checked(std::move(raw), true, "User.projects", errors);
            }
        }
        return out;
    }

    Json resolve_root(const AstSelection& root, Operation op, Json& errors) {
        if (op == Operation::Mutation) {
            if (root.name == "noop") {
                return true;
            }
            throw RequestInvalid{"unknown mutation field \"" + root.name + "\""};
        }
        if (root.name == "project") {
            const std::string id = coerce_to_string(arg_value(root, "id"));
            const auto* project = resolve_project(id);
            Json raw;
            if (project) {
                raw = complete_project(*project, root.children, errors);
            }
            if (faulted(FaultId::WrongTypeProject)) {
                raw = raw.is_null() ? Json::array() : Json::array({std::move(raw)});
            }
            return shape_checked(std::move(raw), false, "Query.project", errors);
        }
        if (root.name == "projects") {
            std::optional<std::string> search;
            if (const Json* v = find_arg(root, "search"); v && !v->is_null()) {
                search = coerce_to_string(*v);
            }
            Json raw = Json::array();
            for (const auto& project : dataset.projects) {
                if (search && project.name.find(*search) == std::string::npos) {
                    continue;
                }
                raw.push_back(complete_project(project, root.children, errors));
            }
            return shape_checked(std::move(raw), true, "Query.projects", errors);
        }
        if (root.name == "user") {
            const std::string id = coerce_to_string(arg_value(root, "id"));
            const auto* user = resolve_user(id);
            Json raw;
            if (user) {
                raw = complete_user(*user, root.children, errors);
            }
            if (faulted(FaultId::WrongTypeUser)) {
                raw = raw.is_null() ? Json::array() : Json::array({std::move(raw)});
            }
            return shape_checked(std::move(raw), false, "Query.user", errors);
        }
        if (root.name == "users") {
            Json raw = Json::array();
            for (const auto& user : dataset.users) {
                raw.push_back(complete_user(user, root.children, errors));
            }
            return shape_checked(std::move(raw), true, "Query.users", errors);
        }
        throw RequestInvalid{"unknown query field \"" + root.name + "\""};
    }

    static const Json* find_arg(const AstSelection& sel, const std::string& name) {
        for (const auto& [arg_name, value] : sel.args) {
            if (arg_name == name) {
                return &value;
            }
        }
        return nullptr;
    }

    static const Json& arg_value(const AstSelection& sel, const std::string& name) {
        if (const Json* v = find_arg(sel, name)) {
            return *v;
        }
        throw RequestInvalid{"missing required argument \"" + name + "\" on field \"" +
                             sel.name + "\""};
    }

    // Structural validation against the fixture schema before any resolver
    // runs: unknown fields, missing selection sets and unknown arguments are
    // client errors.
    void validate_selection(const AstSelection& sel, const std::string& parent_type) const {
        if (sel.is_inline_fragment) {
            if (!FixtureService::schema().find_object(sel.name)) {
                throw RequestInvalid{"unknown type condition \"" + sel.name + "\""};
            }
            for (const auto& child : sel.children) {
                validate_selection(child, sel.name);
            }
            return;
        }
        if (sel.name == "__typename") {
            if (!sel.children.empty()) {
                throw RequestInvalid{"__typename takes no selection set"};
            }
            return;
        }
        const ObjectSpec* parent = FixtureService::schema().find_object(parent_type);
        const FieldSpec* field = parent ? parent->find_field(sel.name) : nullptr;
        if (!field) {
            throw RequestInvalid{"field \"" + sel.name + "\" is not defined on type " +
                                 parent_type};
        }
        for (const auto& [arg_name, unused] : sel.args) {
            bool known = false;
            for (const auto& arg : field->args) {
                known = known || arg.name == arg_name;
            }
            if (!known) {
                throw RequestInvalid{"unknown argument \"" + arg_name + "\" on field \"" +
                                     sel.name + "\""};
            }
        }
        for (const auto& arg : field->args) {
            if (arg.required && !find_arg(sel, arg.name)) {
                throw RequestInvalid{"missing required argument \"" + arg.name +
                                     "\" on field \"" + sel.name + "\""};
            }
        }
        const bool is_object = field->type.named().kind == TypeKind::Object;
        if (is_object && sel.children.empty()) {
            throw RequestInvalid{"field \"" + sel.name + "\" of object type requires a selection set"};
        }
        if (!is_object && !sel.children.empty()) {
            throw RequestInvalid{"field \"" + sel.name + "\" of scalar type takes no selection set"};
        }
        const std::string child_type = field->type.named().name.value_or("");
        for (const auto& child : sel.children) {
            validate_selection(child, child_type);
        }
    }
};

FixtureService::FixtureService(std::set<FaultId> faults, const FixtureDataset& dataset,
                               bool echo_headers)
    : impl_(std::make_shared<Impl>(faults, dataset, echo_headers)), faults_(std::move(faults)) {}

const Json& FixtureService::introspection() {
    static const Json doc = build_introspection();
    return doc;
}

const SchemaModel& FixtureService::schema() {
    static const SchemaModel model = parse_introspection(introspection());
    return model;
}

FixtureService::Counters FixtureService::counters() const {
    return Counters{
        impl_->hits_project.load(),
        impl_->hits_user.load(),
        impl_->hits_owner.load(),
        impl_->hits_members.load(),
    };
}

void FixtureService::reset_counters() {
    impl_->hits_project = 0;
    impl_->hits_user = 0;
    impl_->hits_owner = 0;
    impl_->hits_members = 0;
}

FixtureService::HttpReply FixtureService::handle(
    const std::string& body, const std::map<std::string, std::string>& headers) {
    auto reply = [&](int status, Json response) {
        if (impl_->echo_headers) {
            Json echoed = Json::object();
            for (const auto& [key, value] : headers) {
                echoed[key] = value;
            }
            response["extensions"] = Json{{"headers", std::move(echoed)}};
        }
        return HttpReply{status, std::move(response)};
    };

    const Json envelope = Json::parse(body, nullptr, false);
    if (envelope.is_discarded() || !envelope.is_object() || !envelope.contains("query") ||
        !envelope["query"].is_string()) {
        return reply(400, Json{{"errors", Json::array({Json{
                                   {"message", "request body must be {\"query\": \"...\"}"}}})}});
    }
    const std::string query_text = envelope["query"].get<std::string>();

    AstDocument doc;
    try {
        doc = parse_query(query_text);
    } catch (const QueryParseError& e) {
        // The canonical introspection request uses named fragments, which
        // this engine does not execute; it is answered with the prebuilt
        // introspection document instead.
        if (query_text.find("__schema") != std::string::npos) {
            return reply(200, introspection());
        }
        return reply(400, Json{{"errors", Json::array({Json{{"message", e.what()}}})}});
    }

    for (const auto& root : doc.roots) {
        if (!root.is_inline_fragment && root.name == "__schema") {
            return reply(200, introspection());
        }
    }

    try {
        const std::string root_type =
            doc.operation == Operation::Query ? "Query" : "Mutation";
        for (const auto& root : doc.roots) {
            impl_->validate_selection(root, root_type);
        }
        Json data = Json::object();
        Json errors = Json::array();
        for (const auto& root : doc.roots) {
            if (root.is_inline_fragment) {
                throw RequestInvalid{"inline fragments are not valid at the operation root"};
            }
            data[root.name] = impl_->resolve_root(root, doc.operation, errors);
        }
        Json response = Json{{"data", std::move(data)}};
        if (!errors.empty()) {
            response["errors"] = std::move(errors);
        }
        return reply(200, std::move(response));
    } catch (const RequestInvalid& e) {
        return reply(400, Json{{"errors", Json::array({Json{{"message", e.what}}})}});
    } catch (const ResolverCrash&) {
        return reply(500,
                     Json{{"errors", Json::array({Json{{"message", "Internal Server Error"}}})}});
    }
}

struct FixtureServer::Impl {
    FixtureService service;
    httplib::Server server;
    std::thread worker;
    int port = 0;

    explicit Impl(FixtureService s) : service(std::move(s)) {}
};

FixtureServer::FixtureServer(FixtureService service)
    : impl_(std::make_unique<Impl>(std::move(service))) {
    // httplib's default options include SO_REUSEPORT, which would let a
    // second server bind an occupied port instead of failing.
    impl_->server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes),
                   sizeof(yes));
    });
    impl_->server.Post("/graphql", [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> headers;
        for (const auto& [key, value] : req.headers) {
            headers[key] = value;
        }
        auto reply = impl_->service.handle(req.body, headers);
        res.status = reply.status;
        res.set_content(reply.body.dump(), "application/json");
    });
    impl_->server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });
}

FixtureServer::~FixtureServer() {
    stop();
}

bool FixtureServer::start(int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
        if (impl_->port <= 0) {
            return false;
        }
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port)) {
            return false;
        }
        impl_->port = port;
    }
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return true;
}

void FixtureServer::stop() {
    if (impl_->worker.joinable()) {
        impl_->server.stop();
        impl_->worker.join();
    }
}

int FixtureServer::port() const {
    return impl_->port;
}

std::string FixtureServer::endpoint() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + "/graphql";
}

FixtureService& FixtureServer::service() {
    return impl_->service;
}

} // namespace gqlcheck

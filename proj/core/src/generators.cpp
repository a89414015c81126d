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

#include "gqlcheck/generators.hpp"

#include <fstream>

namespace gqlcheck {

namespace {

constexpr char kAlnum[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr std::size_t kAlnumCount = sizeof(kAlnum) - 1;

void append_code_point(std::string& out, unsigned cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else {
        // Code points 0x80..0xFF as two-byte UTF-8; JSON cannot carry raw
        // bytes, so "any char value, 0-255" strings ride on code points.
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string random_string(GenContext& ctx, std::size_t length) {
    std::string s;
    s.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        if (ctx.charset == CharsetMode::FullByte) {
            append_code_point(s, static_cast<unsigned>(ctx.rng.below(256)));
        } else {
            s.push_back(kAlnum[ctx.rng.below(kAlnumCount)]);
        }
    }
    return s;
}

std::string random_alnum(GenContext& ctx, std::size_t length) {
    std::string s;
    s.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        s.push_back(kAlnum[ctx.rng.below(kAlnumCount)]);
    }
    return s;
}

// True when generating this type necessarily enters another input object.
bool reaches_input_object(const TypeRef& type, const SchemaModel& schema) {
    const TypeRef& base = type.named();
    return base.name && schema.input_objects.count(*base.name) > 0;
}

class ArgumentGenerator {
public:
    ArgumentGenerator(const SchemaModel& schema, const GeneratorRegistry& registry,
                      GenContext& ctx)
        : schema_(schema), registry_(registry), ctx_(ctx) {}

    Json value_for(const TypeRef& type, int depth) {
        switch (type.kind) {
            case TypeKind::NonNull:
                return value_for(*type.of_type, depth);
            case TypeKind::List: {
                const auto count = ctx_.rng.below(static_cast<std::uint64_t>(ctx_.size / 4 + 2));
                Json arr = Json::array();
                for (std::uint64_t i = 0; i < count; ++i) {
                    arr.push_back(value_for(*type.of_type, depth));
                }
                return arr;
            }
            default:
                break;
        }

        const std::string& name = *type.name;
        if (const CustomGenerator* custom = registry_.find_type(name)) {
            return (*custom)(ctx_);
        }
        if (auto it = schema_.enums.find(name); it != schema_.enums.end()) {
            if (it->second.empty()) {
                throw Error("enum type \"" + name + "\" declares no values");
            }
            return enum_value(it->second[ctx_.rng.below(it->second.size())]);
        }
        if (auto it = schema_.input_objects.find(name); it != schema_.input_objects.end()) {
            return input_object(name, it->second, depth + 1);
        }
        return gen_scalar(name, ctx_);
    }

private:
    Json input_object(const std::string& type_name, const std::vector<ArgSpec>& fields,
                      int depth) {
        Json obj = Json::object();
        for (const auto& field : fields) {
            const bool include =
                field.required || ctx_.rng.chance(kOptionalInclusionProbability);
            if (!include) {
                continue;
            }
            if (depth >= kInputDepthLimit && reaches_input_object(field.type, schema_)) {
                if (field.required) {
                    throw RecursionLimit("required input-object cycle through \"" + type_name +
                                         "." + field.name + "\" exceeds depth " +
                                         std::to_string(kInputDepthLimit));
                }
                continue;
            }
            obj[field.name] = value_for(field.type, depth);
        }
        return obj;
    }

    const SchemaModel& schema_;
    const GeneratorRegistry& registry_;
    GenContext& ctx_;
};

} // namespace

const char* to_string(CharsetMode mode) {
    return mode == CharsetMode::Alphanumeric ? "alnum" : "full-byte";
}

std::optional<CharsetMode> charset_from_string(std::string_view name) {
    if (name == "alnum" || name == "alphanumeric") {
        return CharsetMode::Alphanumeric;
    }
    if (name == "full-byte" || name == "full_byte" || name == "fullbyte") {
        return CharsetMode::FullByte;
    }
    return std::nullopt;
}

Json enum_value(std::string name) {
    return Json{{kEnumTag, std::move(name)}};
}

const std::string* as_enum(const Json& v) {
    if (v.is_object() && v.size() == 1 && v.contains(kEnumTag) && v[kEnumTag].is_string()) {
        return v[kEnumTag].get_ptr<const Json::string_t*>();
    }
    return nullptr;
}

const CustomGenerator* GeneratorRegistry::find_field_path(const std::string& path) const {
    auto it = by_field_path.find(path);
    return it == by_field_path.end() ? nullptr : &it->second;
}

const CustomGenerator* GeneratorRegistry::find_type(const std::string& type_name) const {
    auto it = by_type_name.find(type_name);
    return it == by_type_name.end() ? nullptr : &it->second;
}

Json gen_scalar(const std::string& kind, GenContext& ctx) {
    const std::int64_t span = static_cast<std::int64_t>(std::max(ctx.size, 0)) * kIntScale;
    if (kind == "Int") {
        return ctx.rng.between(-span, span);
    }
    if (kind == "Float") {
        return (ctx.rng.unit() * 2.0 - 1.0) * static_cast<double>(span);
    }
    if (kind == "Boolean") {
        return ctx.rng.below(2) == 1;
    }
    if (kind == "ID") {
        // Fixed-format token: the length stops tracking size beyond a cap.
        const int cap = std::min(std::max(ctx.size, 1), kIdLengthCap);
        return random_alnum(ctx, 1 + ctx.rng.below(static_cast<std::uint64_t>(cap)));
    }
    if (kind != "String") {
        // Custom scalar without a registered generator.
        if (ctx.strict) {
            throw UnknownScalar("no generator for scalar type \"" + kind + "\"");
        }
    }
    return random_string(ctx, ctx.rng.below(static_cast<std::uint64_t>(std::max(ctx.size, 0)) + 1));
}

std::optional<Json> gen_argument(const ArgSpec& arg, const SchemaModel& schema,
                                 const GeneratorRegistry& registry, GenContext& ctx,
                                 const std::string& field_path) {
    if (!arg.required && !ctx.rng.chance(kOptionalInclusionProbability)) {
        return std::nullopt;
    }
    if (const CustomGenerator* custom = registry.find_field_path(field_path)) {
        return (*custom)(ctx);
    }
    ArgumentGenerator gen(schema, registry, ctx);
    return gen.value_for(arg.type, 0);
}

CustomGenerator make_pattern_generator(const std::string& pattern) {
    struct Piece {
        enum class Kind { Literal, Int, Choice, Alnum } kind;
        std::string literal;
        std::vector<std::string> choices;
        int length = 0;
    };

    std::vector<Piece> pieces;
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        const std::size_t open = pattern.find('<', pos);
        if (open == std::string::npos) {
            pieces.push_back({Piece::Kind::Literal, pattern.substr(pos), {}, 0});
            break;
        }
        if (open > pos) {
            pieces.push_back({Piece::Kind::Literal, pattern.substr(pos, open - pos), {}, 0});
        }
        const std::size_t close = pattern.find('>', open);
        if (close == std::string::npos) {
            throw ConfigError("unterminated placeholder in pattern: " + pattern);
        }
        const std::string body = pattern.substr(open + 1, close - open - 1);
        if (body == "int") {
            pieces.push_back({Piece::Kind::Int, {}, {}, 0});
        } else if (body.rfind("choice:", 0) == 0) {
            Piece p{Piece::Kind::Choice, {}, {}, 0};
            std::string rest = body.substr(7);
            std::size_t start = 0;
            while (true) {
                const std::size_t bar = rest.find('|', start);
                p.choices.push_back(rest.substr(start, bar - start));
                if (bar == std::string::npos) {
                    break;
                }
                start = bar + 1;
            }
            if (p.choices.empty()) {
                throw ConfigError("empty <choice:...> in pattern: " + pattern);
            }
            pieces.push_back(std::move(p));
        } else if (body.rfind("alnum:", 0) == 0) {
            Piece p{Piece::Kind::Alnum, {}, {}, 0};
            try {
                p.length = std::stoi(body.substr(6));
            } catch (const std::exception&) {
                throw ConfigError("bad <alnum:n> length in pattern: " + pattern);
            }
            if (p.length < 0) {
                throw ConfigError("negative <alnum:n> length in pattern: " + pattern);
            }
            pieces.push_back(std::move(p));
        } else {
            throw ConfigError("unknown placeholder <" + body + "> in pattern: " + pattern);
        }
        pos = close + 1;
    }

    return [pieces](GenContext& ctx) -> Json {
        std::string out;
        for (const auto& piece : pieces) {
            switch (piece.kind) {
                case Piece::Kind::Literal:
                    out += piece.literal;
                    break;
                case Piece::Kind::Int:
                    out += std::to_string(ctx.rng.below(1000000));
                    break;
                case Piece::Kind::Choice:
                    out += piece.choices[ctx.rng.below(piece.choices.size())];
                    break;
                case Piece::Kind::Alnum:
                    out += random_alnum(ctx, static_cast<std::size_t>(piece.length));
                    break;
            }
        }
        return out;
    };
}

GeneratorRegistry load_generator_config(const Json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("generator config must be a JSON object");
    }
    GeneratorRegistry registry;
    if (doc.contains("by_type")) {
        for (const auto& [name, pattern] : doc["by_type"].items()) {
            if (!pattern.is_string()) {
                throw ConfigError("generator pattern for type \"" + name + "\" must be a string");
            }
            registry.by_type_name[name] = make_pattern_generator(pattern.get<std::string>());
        }
    }
    if (doc.contains("by_field_path")) {
        for (const auto& [path, pattern] : doc["by_field_path"].items()) {
            if (!pattern.is_string()) {
                throw ConfigError("generator pattern for path \"" + path + "\" must be a string");
            }
            registry.by_field_path[path] = make_pattern_generator(pattern.get<std::string>());
        }
    }
    return registry;
}

GeneratorRegistry load_generator_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open generator config: " + path);
    }
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("generator config is not valid JSON: " + path);
    }
    return load_generator_config(doc);
}

} // namespace gqlcheck

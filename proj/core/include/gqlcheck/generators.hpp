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

#include <functional>
#include <optional>

#include "gqlcheck/random.hpp"
#include "gqlcheck/schema.hpp"

namespace gqlcheck {

enum class CharsetMode { Alphanumeric, FullByte };

const char* to_string(CharsetMode mode);
std::optional<CharsetMode> charset_from_string(std::string_view name);

// Int arguments are drawn from [-size * kIntScale, size * kIntScale].
inline constexpr std::int64_t kIntScale = 1000;
// ID tokens stop growing with size beyond this length, like other
// fixed-format values.
inline constexpr int kIdLengthCap = 12;
// Probability that an optional argument or input field is included.
inline constexpr double kOptionalInclusionProbability = 0.5;
// Input-object nesting beyond this depth is cut off.
inline constexpr int kInputDepthLimit = 8;

// Enum values are tagged inside generated JSON so the serializer can emit
// them bare. GraphQL reserves the "__" prefix, so the tag cannot collide
// with user data.
inline constexpr const char* kEnumTag = "__enum";

Json enum_value(std::string name);
// Returns the enum name when v is an enum-tagged value, nullptr otherwise.
const std::string* as_enum(const Json& v);

struct GenContext {
    Rng rng;
    int size = 0;
    CharsetMode charset = CharsetMode::Alphanumeric;
    bool strict = false;
};

using CustomGenerator = std::function<Json(GenContext&)>;

// Custom generators by precedence: field path ("Object.field.arg") beats
// type name, which beats the built-ins.
struct GeneratorRegistry {
    std::map<std::string, CustomGenerator> by_type_name;
    std::map<std::string, CustomGenerator> by_field_path;

    const CustomGenerator* find_field_path(const std::string& path) const;
    const CustomGenerator* find_type(const std::string& type_name) const;
};

// Built-in scalar generation. String length is uniform in [0, size]; ID is
// a short alphanumeric token; unknown scalar names fall back to the String
// generator (UnknownScalar in strict mode).
Json gen_scalar(const std::string& kind, GenContext& ctx);

// Generates a value for one argument, or nullopt when an optional argument
// is omitted. field_path has the form "Object.field.arg".
std::optional<Json> gen_argument(const ArgSpec& arg, const SchemaModel& schema,
                                 const GeneratorRegistry& registry, GenContext& ctx,
                                 const std::string& field_path);

// Pattern recipes for config-file generators: literal text with <int>,
// <choice:a|b|c> and <alnum:n> placeholders.
CustomGenerator make_pattern_generator(const std::string& pattern);

// {"by_type": {"TypeName": "pattern"}, "by_field_path": {"Obj.field.arg": "pattern"}}
GeneratorRegistry load_generator_config(const Json& doc);
GeneratorRegistry load_generator_config_file(const std::string& path);

} // namespace gqlcheck

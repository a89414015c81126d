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

#include <stdexcept>

namespace gqlcheck {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The introspection document does not have the standard shape.
class MalformedIntrospection : public Error {
public:
    using Error::Error;
};

// A field or argument names a type that the schema does not define.
class DanglingTypeReference : public Error {
public:
    using Error::Error;
};

class NoQueryRoot : public Error {
public:
    using Error::Error;
};

// Strict mode only: a scalar name without a built-in or custom generator.
class UnknownScalar : public Error {
public:
    using Error::Error;
};

// Required input-object cycle that cannot terminate within the depth limit.
class RecursionLimit : public Error {
public:
    using Error::Error;
};

class EmptySchema : public Error {
public:
    using Error::Error;
};

// A flat-list node references an object id that does not exist.
class OrphanNode : public Error {
public:
    using Error::Error;
};

class UniverseMismatch : public Error {
public:
    using Error::Error;
};

class PayloadShapeMismatch : public Error {
public:
    using Error::Error;
};

class QueryParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace gqlcheck

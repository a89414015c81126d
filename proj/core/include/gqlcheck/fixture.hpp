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

#include <atomic>
#include <memory>

#include "gqlcheck/generators.hpp"
#include "gqlcheck/schema.hpp"

namespace gqlcheck {

// The 15 seedable faults, grouped by the resolver they live in.
// INPUT_VALIDATION faults crash on malformed project ids; LOGIC faults crash
// whenever their resolver runs; WRONG_FIELD faults silently filter by name
// instead of id; WRONG_TYPE faults return the wrong shape (list for a single
// value, or the reverse), which surfaces as an errors section.
enum class FaultId {
    InputValidation1, // project: crashes on a non-numeric id
    InputValidation2, // project: crashes on an id with non-alphanumeric chars
    InputValidation3, // project: crashes on an id longer than 24 chars
    LogicProject,
    LogicUser,
    LogicOwner,
    LogicMembers,
    WrongFieldProject,
    WrongFieldUser,
    WrongFieldOwner,
    WrongFieldMembers,
    WrongTypeProject,
    WrongTypeUser,
    WrongTypeOwner,
    WrongTypeMembers,
};

const char* to_string(FaultId fault);
std::optional<FaultId> fault_from_string(std::string_view name);
const std::vector<FaultId>& all_faults();

// Id longer than this crashes the project resolver under InputValidation3.
inline constexpr std::size_t kOverlongIdLength = 24;

struct FixtureDataset {
    struct ProjectRow {
        std::string id;
        std::string name;
        std::string description;
        std::string owner_id;
        std::vector<std::string> member_ids;
    };
    struct UserRow {
        std::string id;
        std::string name;
        int age = 0;
    };

    std::vector<ProjectRow> projects;
    std::vector<UserRow> users;

    // 5 projects, 8 users, fixed ids and links; the owner/members/projects
    // references form a cycle between the two types.
    static const FixtureDataset& standard();
};

// Field-path generators that draw Query.project.id / Query.user.id half of
// the time from the dataset (so nested resolvers actually execute) and
// otherwise fall back to the plain string generator (so malformed ids still
// reach the input-validation checks).
GeneratorRegistry dataset_generator_recipe(const FixtureDataset& dataset);

// In-process GraphQL engine for the fixture schema. Thread-safe: the
// dataset is read-only and the fault set is fixed at construction.
class FixtureService {
public:
    explicit FixtureService(std::set<FaultId> faults = {},
                            const FixtureDataset& dataset = FixtureDataset::standard(),
                            bool echo_headers = false);

    struct HttpReply {
        int status = 200;
        Json body;
    };

    // Handles one POST /graphql request body.
    HttpReply handle(const std::string& body,
                     const std::map<std::string, std::string>& headers = {});

    // Canonical introspection result: {"data": {"__schema": ...}}.
    static const Json& introspection();
    static const SchemaModel& schema();

    struct Counters {
        std::size_t project = 0;
        std::size_t user = 0;
        std::size_t owner = 0;
        std::size_t members = 0;
    };
    Counters counters() const;
    void reset_counters();

    const std::set<FaultId>& faults() const { return faults_; }

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    std::set<FaultId> faults_;
};

// HTTP wrapper around FixtureService: POST /graphql plus GET /health.
class FixtureServer {
public:
    explicit FixtureServer(FixtureService service);
    ~FixtureServer();

    FixtureServer(const FixtureServer&) = delete;
    FixtureServer& operator=(const FixtureServer&) = delete;

    // Binds and starts serving on a background thread. port 0 picks a free
    // port. Returns false when the port cannot be bound.
    bool start(int port = 0);
    void stop();

    int port() const;
    std::string endpoint() const; // http://127.0.0.1:<port>/graphql

    FixtureService& service();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace gqlcheck

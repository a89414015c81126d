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

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gqlcheck/fixture.hpp"

namespace {

std::atomic<bool> g_running{true};

void handle_signal(int) {
    g_running = false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixture GraphQL server with seedable faults"};

    int port = 8090;
    std::vector<std::string> fault_names;
    bool echo_headers = false;
    bool list_faults = false;
    app.add_option("--port", port, "Port to listen on (0 picks a free port)");
    app.add_option("--fault", fault_names, "Seed a fault by name (repeatable)");
    app.add_flag("--echo-headers", echo_headers,
                 "Echo request headers in response extensions");
    app.add_flag("--list-faults", list_faults, "List fault names and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_faults) {
        for (const auto fault : gqlcheck::all_faults()) {
            std::cout << gqlcheck::to_string(fault) << "\n";
        }
        return 0;
    }

    std::set<gqlcheck::FaultId> faults;
    for (const auto& name : fault_names) {
        const auto fault = gqlcheck::fault_from_string(name);
        if (!fault) {
            std::cerr << "error: unknown fault \"" << name << "\" (try --list-faults)\n";
            return 2;
        }
        faults.insert(*fault);
    }

    gqlcheck::FixtureServer server(
        gqlcheck::FixtureService(faults, gqlcheck::FixtureDataset::standard(), echo_headers));
    if (!server.start(port)) {
        std::cerr << "error: cannot bind to port " << port << "\n";
        return 2;
    }

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    std::cout << "fixture server listening on " << server.endpoint() << "\n";
    if (!faults.empty()) {
        std::cout << "active faults:";
        for (const auto fault : faults) {
            std::cout << " " << gqlcheck::to_string(fault);
        }
        std::cout << "\n";
    }

    while (g_running) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    return 0;
}

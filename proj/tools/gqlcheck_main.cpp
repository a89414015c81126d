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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "gqlcheck/coverage.hpp"
#include "gqlcheck/query_parser.hpp"
#include "gqlcheck/runner.hpp"
#include "gqlcheck/schema.hpp"

namespace fs = std::filesystem;
using namespace gqlcheck;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitConfig = 2;

std::map<std::string, std::string> parse_headers(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> headers;
    for (const auto& entry : raw) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos || colon == 0) {
            throw ConfigError("header must have the form \"Name: value\": " + entry);
        }
        std::string key = entry.substr(0, colon);
        std::string value = entry.substr(colon + 1);
        const auto start = value.find_first_not_of(' ');
        value = start == std::string::npos ? "" : value.substr(start);
        headers[key] = value;
    }
    return headers;
}

std::set<PropertyId> parse_properties(const std::string& list) {
    std::set<PropertyId> properties;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const std::string name =
            list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!name.empty()) {
            const auto property = property_from_string(name);
            if (!property) {
                throw ConfigError("unknown property \"" + name +
                                  "\" (expected no-server-error, schema-conformance, "
                                  "no-errors-section)");
            }
            properties.insert(*property);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (properties.empty()) {
        throw ConfigError("at least one property must be enabled");
    }
    return properties;
}

void write_or_print(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw ConfigError("cannot write to " + out_path);
    }
    out << content;
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Options shared between the command line and the config file.
struct RunOptions {
    std::string endpoint;
    std::string schema_path;
    int tests = 100;
    int max_size = 20;
    int size_fixed = 0; // 0 = ramp
    int max_fields = 2;
    int max_iterations = 10;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool include_mutations = false;
    std::string charset = "alnum";
    std::string properties = "no-server-error,schema-conformance,no-errors-section";
    std::string filter_tuples_path;
    bool include_roots = true;
    std::vector<std::string> headers;
    int workers = 1;
    int timeout_ms = 10000;
    std::string out_path;
    std::string repro_dir = "repros";
    int repeat = 1;
    bool merge_coverage = false;
    std::string generators_path;
    bool strict = false;
};

RunConfig to_run_config(const RunOptions& opt) {
    RunConfig cfg;
    cfg.endpoint = opt.endpoint;
    cfg.num_tests = opt.tests;
    cfg.max_size = opt.max_size;
    if (opt.size_fixed > 0) {
        cfg.fixed_size = opt.size_fixed;
    }
    cfg.max_fields = opt.max_fields;
    cfg.max_iterations = opt.max_iterations;
    cfg.seed = opt.seed;
    cfg.include_mutations = opt.include_mutations;
    const auto charset = charset_from_string(opt.charset);
    if (!charset) {
        throw ConfigError("unknown charset \"" + opt.charset + "\" (alnum or full-byte)");
    }
    cfg.charset = *charset;
    cfg.enabled_properties = parse_properties(opt.properties);
    cfg.headers = parse_headers(opt.headers);
    cfg.workers = std::max(1, opt.workers);
    cfg.timeout = std::chrono::milliseconds(opt.timeout_ms);
    cfg.include_roots = opt.include_roots;
    if (!opt.filter_tuples_path.empty()) {
        cfg.tuple_filters = load_tuple_filters(opt.filter_tuples_path);
    }
    cfg.strict = opt.strict;
    return cfg;
}

SchemaModel acquire_schema(const RunOptions& opt) {
    if (!opt.schema_path.empty()) {
        return parse_introspection_file(opt.schema_path);
    }
    if (opt.endpoint.empty()) {
        throw ConfigError("either --schema or --endpoint must supply the schema");
    }
    auto result = post_graphql(opt.endpoint, introspection_query(),
                               parse_headers(opt.headers),
                               std::chrono::milliseconds(opt.timeout_ms));
    if (result.transport_error) {
        throw ConfigError("introspection failed: " + *result.transport_error);
    }
    if (result.status < 200 || result.status >= 300) {
        throw ConfigError("introspection failed: HTTP " + std::to_string(result.status));
    }
    return parse_introspection(result.body);
}

void write_repro_files(const TestReport& report, const std::string& repro_dir,
                       std::uint64_t seed, int repeat_index) {
    if (report.failures.empty()) {
        return;
    }
    fs::create_directories(repro_dir);
    for (const auto& failure : report.failures) {
        const std::string file_name = std::string("repro-") + to_string(failure.property) +
                                      "-run" + std::to_string(repeat_index) + "-test" +
                                      std::to_string(failure.query_index) + ".graphql";
        std::ofstream out(fs::path(repro_dir) / file_name);
        out << "# property: " << to_string(failure.property) << "\n";
        out << "# seed: " << seed << ", test: " << failure.query_index << "\n";
        out << "# " << failure.detail << "\n";
        out << failure.shrunk_text;
    }
}

int cmd_introspect(const std::string& endpoint, const std::vector<std::string>& headers,
                   const std::string& out_path, int timeout_ms) {
    auto result = post_graphql(endpoint, introspection_query(), parse_headers(headers),
                               std::chrono::milliseconds(timeout_ms));
    if (result.transport_error) {
        std::cerr << "error: " << *result.transport_error << "\n";
        return kExitConfig;
    }
    if (result.status < 200 || result.status >= 300) {
        std::cerr << "error: HTTP " << result.status << "\n";
        return kExitConfig;
    }
    // Round-trip check before writing anything.
    parse_introspection(result.body);
    write_or_print(result.body.dump(2), out_path);
    return kExitOk;
}

int cmd_run(const RunOptions& opt_in) {
    RunOptions opt = opt_in;
    if (!opt.seed_given) {
        opt.seed = random_seed();
    }
    const SchemaModel schema = acquire_schema(opt);
    GeneratorRegistry registry;
    if (!opt.generators_path.empty()) {
        registry = load_generator_config_file(opt.generators_path);
    }
    if (opt.endpoint.empty()) {
        throw ConfigError("--endpoint is required to execute queries");
    }

    const int repeats = std::max(1, opt.repeat);
    std::vector<TestReport> reports;
    reports.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        RunConfig cfg = to_run_config(opt);
        cfg.seed = opt.seed + static_cast<std::uint64_t>(r);
        TestReport report = run(cfg, schema, registry);
        write_repro_files(report, opt.repro_dir, cfg.seed, r);
        reports.push_back(std::move(report));
    }

    bool any_failed = false;
    Json output;
    if (repeats == 1 && !opt.merge_coverage) {
        output = reports.front().to_json();
        any_failed = !reports.front().all_passed();
    } else {
        Json runs = Json::array();
        CoverageState merged = reports.front().coverage;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i > 0) {
                merged = merge(merged, reports[i].coverage);
            }
            any_failed = any_failed || !reports[i].all_passed();
            runs.push_back(reports[i].to_json());
        }
        output = Json{{"runs", std::move(runs)}};
        if (opt.merge_coverage) {
            output["merged_coverage"] = merged.to_json();
        }
    }
    write_or_print(output.dump(2), opt.out_path);
    if (!opt.out_path.empty() && opt.out_path != "-") {
        int executed = 0, failed = 0;
        for (const auto& report : reports) {
            executed += report.executed;
            failed += report.failed;
        }
        std::cout << "executed " << executed << " queries, " << failed << " failed; report at "
                  << opt.out_path << "\n";
    }
    return any_failed ? kExitFailures : kExitOk;
}

int cmd_coverage(const std::string& schema_path, const std::string& corpus_dir,
                 const std::string& filter_path, bool include_roots,
                 const std::string& out_path, const std::string& csv_path) {
    const SchemaModel schema = parse_introspection_file(schema_path);
    TupleSet filters;
    if (!filter_path.empty()) {
        filters = load_tuple_filters(filter_path);
    }
    CoverageState state = make_coverage_state(schema, filters, include_roots);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".graphql") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    int parsed_queries = 0;
    for (const auto& file : files) {
        std::ifstream in(file);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        AstDocument doc = parse_query(text);
        for (const auto& tree : ast_to_trees(doc)) {
            state.cover_all(query_tuples(tree, schema, doc.operation));
        }
        ++parsed_queries;
    }

    Json output = state.to_json();
    output["corpus_files"] = parsed_queries;
    write_or_print(output.dump(2), out_path);
    if (!csv_path.empty()) {
        write_or_print(tuples_csv(state), csv_path);
    }
    return kExitOk;
}

int cmd_report(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) {
        throw ConfigError("cannot open report: " + in_path);
    }
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("report is not valid JSON: " + in_path);
    }

    auto print_one = [](const Json& report) {
        const auto& counts = report["counts"];
        std::cout << "seed " << report["config"]["seed"] << ", " << counts["executed"]
                  << " executed: " << counts["passed"] << " passed, " << counts["failed"]
                  << " failed, " << counts["client_errors"] << " client errors";
        if (counts["skipped"].get<int>() > 0) {
            std::cout << ", " << counts["skipped"] << " skipped";
        }
        std::cout << "\n";
        const auto& coverage = report["coverage"];
        std::cout << "coverage: " << coverage["covered_size"] << "/"
                  << coverage["universe_size"] << " ("
                  << (coverage["percent"].get<double>() * 100.0) << "%)\n";
        for (const auto& failure : report["failures"]) {
            std::cout << "failure [" << failure["property"].get<std::string>()
                      << "] at test " << failure["query_index"] << ": "
                      << failure["detail"].get<std::string>() << "\n";
            std::cout << failure["shrunk_query"].get<std::string>() << "\n";
        }
    };

    if (doc.contains("runs")) {
        for (const auto& report : doc["runs"]) {
            print_one(report);
        }
        if (doc.contains("merged_coverage")) {
            const auto& merged = doc["merged_coverage"];
            std::cout << "merged coverage: " << merged["covered_size"] << "/"
                      << merged["universe_size"] << " ("
                      << (merged["percent"].get<double>() * 100.0) << "%)\n";
        }
    } else {
        print_one(doc);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Property-based black-box testing for GraphQL APIs"};
    app.require_subcommand(1);
    // Key=value config under a [run] section; command-line flags override.
    app.set_config("--config", "", "Config file with a [run] section of key=value lines");

    // introspect
    auto* introspect = app.add_subcommand("introspect", "Fetch a schema via introspection");
    std::string in_endpoint;
    std::vector<std::string> in_headers;
    std::string in_out;
    int in_timeout = 10000;
    introspect->add_option("--endpoint", in_endpoint, "GraphQL endpoint URL")->required();
    introspect->add_option("--header", in_headers, "Request header \"Name: value\"");
    introspect->add_option("--out", in_out, "Output file (default: stdout)");
    introspect->add_option("--timeout", in_timeout, "Request timeout in ms");

    // run
    auto* run_cmd = app.add_subcommand("run", "Generate, execute and check queries");
    run_cmd->fallthrough(true);
    RunOptions opt;
    run_cmd->add_option("--endpoint", opt.endpoint, "GraphQL endpoint URL");
    run_cmd->add_option("--schema", opt.schema_path, "Introspection JSON file");
    run_cmd->add_option("--tests", opt.tests, "Number of test queries");
    run_cmd->add_option("--max-size", opt.max_size, "Upper end of the size ramp");
    run_cmd->add_option("--size-fixed", opt.size_fixed, "Fixed size for every test (0 = ramp)");
    run_cmd->add_option("--max-fields", opt.max_fields, "Max fields drawn per object per iteration");
    run_cmd->add_option("--max-iterations", opt.max_iterations, "Cap on expansion iterations");
    auto* seed_opt = run_cmd->add_option("--seed", opt.seed, "Run seed (default: random)");
    run_cmd->add_flag("--include-mutations", opt.include_mutations,
                      "Also generate mutation queries (off by default: mutations change state)");
    run_cmd->add_option("--charset", opt.charset, "String charset: alnum or full-byte");
    run_cmd->add_option("--properties", opt.properties, "Comma-separated property list");
    run_cmd->add_option("--filter-tuples", opt.filter_tuples_path,
                        "File of Type.field tuples excluded from coverage");
    run_cmd->add_option("--include-roots", opt.include_roots,
                        "Count root operation fields in coverage");
    run_cmd->add_option("--header", opt.headers, "Request header \"Name: value\"");
    run_cmd->add_option("--workers", opt.workers, "Parallel execution workers");
    run_cmd->add_option("--timeout", opt.timeout_ms, "Request timeout in ms");
    run_cmd->add_option("--out", opt.out_path, "Report file (default: stdout)");
    run_cmd->add_option("--repro-dir", opt.repro_dir, "Directory for failing .graphql repros");
    run_cmd->add_option("--repeat", opt.repeat, "Repeat the run N times (seed, seed+1, ...)");
    run_cmd->add_flag("--merge-coverage", opt.merge_coverage,
                      "Report coverage aggregated over repeats");
    run_cmd->add_option("--generators", opt.generators_path,
                        "JSON file of custom generator patterns");
    run_cmd->add_flag("--strict", opt.strict, "Strict conformance mode");

    // coverage
    auto* coverage_cmd = app.add_subcommand("coverage", "Offline coverage of a query corpus");
    std::string cov_schema, cov_corpus, cov_filters, cov_out, cov_csv;
    bool cov_roots = true;
    coverage_cmd->add_option("--schema", cov_schema, "Introspection JSON file")->required();
    coverage_cmd->add_option("--corpus", cov_corpus, "Directory of .graphql files")->required();
    coverage_cmd->add_option("--filter-tuples", cov_filters, "Tuple filter file");
    coverage_cmd->add_option("--include-roots", cov_roots, "Count root operation fields");
    coverage_cmd->add_option("--out", cov_out, "Output file (default: stdout)");
    coverage_cmd->add_option("--csv", cov_csv, "Also write a tuple CSV");

    // report
    auto* report_cmd = app.add_subcommand("report", "Summarize a report JSON");
    std::string rep_in;
    report_cmd->add_option("--in", rep_in, "Report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (introspect->parsed()) {
            return cmd_introspect(in_endpoint, in_headers, in_out, in_timeout);
        }
        if (run_cmd->parsed()) {
            opt.seed_given = seed_opt->count() > 0;
            return cmd_run(opt);
        }
        if (coverage_cmd->parsed()) {
            return cmd_coverage(cov_schema, cov_corpus, cov_filters, cov_roots, cov_out,
                                cov_csv);
        }
        if (report_cmd->parsed()) {
            return cmd_report(rep_in);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

// Command-line front end for the experiment runners.
//
// Precedence: built-in defaults < --config file < --set key=value < dedicated flags.
// Exit codes: 0 success, 2 config error, 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pai/errors.hpp"
#include "pai/experiments.hpp"
#include "pai/parallel.hpp"

namespace ex = pai::experiments;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Options {
    std::string config_file;
    std::string out;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> angle;
    std::optional<int> bits;
    std::optional<std::string> grid_file;
};

ex::Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw pai::ConfigError("cannot open config file '" + path + "'");
    }
    ex::Json cfg;
    try {
        in >> cfg;
    } catch (const ex::Json::exception& e) {
        throw pai::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) {
        throw pai::ConfigError("cannot write '" + path + "'");
    }
}

int execute(const std::string& command, const Options& opt) {
    ex::Json overrides = ex::Json::object();
    if (!opt.config_file.empty()) {
        overrides = load_config(opt.config_file);
        if (!overrides.is_object()) {
            throw pai::ConfigError("config file must hold a JSON object");
        }
    }
    for (const auto& s : opt.sets) {
        ex::apply_override(overrides, s);
    }
    if (opt.seed) {
        overrides["master_seed"] = *opt.seed;
    }
    if (!opt.out.empty()) {
        overrides["output"] = opt.out;
    }
    if (opt.angle) {
        overrides["angle"] = *opt.angle;
    }
    if (opt.bits) {
        overrides["bits"] = *opt.bits;
    }
    if (opt.grid_file) {
        overrides["grid_file"] = *opt.grid_file;
    }
    const ex::Json cfg = ex::resolve_config(command, overrides);
    const unsigned threads = opt.threads ? *opt.threads : pai::default_threads();
    const ex::RunOutput result = ex::run(command, cfg, threads);
    for (const auto& f : result.files) {
        write_file(f.path, f.content);
        std::cerr << "wrote " << f.path << '\n';
    }
    std::cout << result.console;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic angle interpolation experiments"};
    app.set_version_flag("--version", ex::version());
    app.require_subcommand(1);

    Options opt;
    for (const auto& name : ex::command_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", opt.config_file, "JSON config file");
        sub->add_option("--set", opt.sets, "Override a config field, key=value (repeatable)");
        sub->add_option("--threads", opt.threads, "Worker threads (default: PAI_THREADS or hardware)")
            ->check(CLI::PositiveNumber);
        if (name == "decompose") {
            sub->add_option("--angle", opt.angle, "Target angle in radians");
            sub->add_option("--bits", opt.bits, "Uniform grid resolution");
            sub->add_option("--grid-file", opt.grid_file, "JSON array of notch angles");
        } else {
            sub->add_option("-o,--out", opt.out, "Output path prefix");
            if (name != "overhead") {
                sub->add_option("--seed", opt.seed, "Master seed");
                sub->add_option("--bits", opt.bits, "Uniform grid resolution");
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, opt);
    } catch (const pai::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const pai::StructuralError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const pai::DegenerateSettingsError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    } catch (const pai::RefusalError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    } catch (const pai::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

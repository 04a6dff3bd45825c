#include "wfs/commands.hpp"
#include "wfs/config.hpp"
#include "wfs/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw wfs::ConfigError("cannot write " + path.string());
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave front sets on lattices: weight checks, Fourier series and microlocal analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wfs::cli::kToolName) + " " + wfs::cli::kToolVersion);
    std::string config_path;
    std::string out_dir;
    bool quiet = false;
    for (const auto& name : wfs::cli::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("config", config_path, "YAML or JSON run config")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out_dir, "output directory (overrides output.dir)");
        sub->add_flag("-q,--quiet", quiet, "do not print the report to stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : wfs::cli::kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const auto cfg = wfs::config::load(config_path);
        wfs::cli::Artifacts files;
        const auto report = wfs::cli::run_command(command, cfg, files);
        const fs::path dir = out_dir.empty() ? fs::path(cfg.output.dir) : fs::path(out_dir);
        const std::string text = report.dump(2) + "\n";
        write_file(dir / cfg.output.json, text);
        for (const auto& [name, content] : files) write_file(dir / name, content);
        if (!quiet) std::cout << text;
        return wfs::cli::kOk;
    } catch (const wfs::SeparationError& e) {
        std::cerr << "separation error: " << e.what() << "\nwitness: " << e.witness() << '\n';
        return wfs::cli::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wfs::cli::exit_code_for(e);
    }
}

// Command-line driver: choquard CONFIG.json [--set key=value]...

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "choquard/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Symmetric ground states of Choquard equations: batch runs from a JSON configuration"};
    std::string config_path;
    std::vector<std::string> overrides;
    std::string command, output;
    app.add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override a configuration key, e.g. --set params.p=1.8")->take_all();
    app.add_option("--command", command, "Override the command of the configuration");
    app.add_option("-o,--output", output, "Override the output directory");
    app.set_version_flag("--version", choquard::kVersion);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : choquard::kExitError;
    }

    choquard::Json config;
    try {
        config = choquard::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return choquard::kExitError;
    }
    if (!command.empty()) overrides.push_back("command=\"" + command + "\"");
    if (!output.empty()) overrides.push_back("output_dir=" + choquard::Json(output).dump());
    return choquard::run_main(std::move(config), overrides, std::cout, std::cerr);
}

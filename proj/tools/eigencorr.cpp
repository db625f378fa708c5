// eigencorr.cpp — Command-line runner for configuration-driven analysis pipelines

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "eigencorr/config.hpp"
#include "eigencorr/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void apply_thread_env() {
    if (const char* value = std::getenv("EIGENCORR_THREADS")) {
        const int threads = std::atoi(value);
        if (threads > 0) Eigen::setNbThreads(threads);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenfunction correlation analysis for perturbed quantum chaotic models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Execute the analyses requested by a config file");
    run->add_option("--config", config_path, "Path to a JSON run configuration")->required();
    run->add_option("--out", out_dir, "Override the configured output directory");

    auto* validate = app.add_subcommand("validate", "Parse and validate a config file without running");
    validate->add_option("--config", config_path, "Path to a JSON run configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        apply_thread_env();
        eigencorr::RunConfig cfg = eigencorr::parse_config(read_file(config_path));
        if (validate->parsed()) {
            std::cout << "valid config: model " << eigencorr::model_name(cfg.model) << ", "
                      << cfg.analyses.size() << " analyses, output_dir " << cfg.output_dir << '\n';
            return 0;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        const auto result = eigencorr::run_pipeline(cfg);
        std::cout << "manifest: " << (result.output_dir / "manifest.json").string() << '\n';
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}

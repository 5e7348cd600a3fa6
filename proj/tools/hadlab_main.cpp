#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hadlab/config.hpp"
#include "hadlab/errors.hpp"
#include "hadlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hadlab: numerical laboratory for asymptotic Dirichlet problems on "
                 "negatively curved rotationally symmetric manifolds"};
    std::string config_path;
    std::string output_dir;
    bool quiet = false;
    app.add_option("--config", config_path, "config file (one [command] section)")
        ->required();
    app.add_option("--output", output_dir, "output directory (overrides output_dir key)");
    app.add_flag("--quiet", quiet, "suppress the one-line summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot read config file: " << config_path << "\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        hadlab::RunConfig cfg = hadlab::parse_config(ss.str());
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        return hadlab::run(cfg, quiet).exit_code;
    } catch (const hadlab::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

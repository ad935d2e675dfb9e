// Command line front end. Talks to the solver library exclusively
// through the C API in nehari.h.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nehari.h"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
};

int run(const std::string& command, const Options& opt) {
    nehari_config* cfg = nullptr;
    nehari_status st = nehari_config_parse_file(opt.config_path.c_str(), &cfg);
    if (st != NEHARI_OK) {
        std::fprintf(stderr, "nehari: %s: %s\n", nehari_status_name(st), nehari_last_error());
        return nehari_status_exit_code(st);
    }
    for (const auto& ov : opt.overrides) {
        st = nehari_config_override(cfg, ov.c_str());
        if (st != NEHARI_OK) {
            std::fprintf(stderr, "nehari: %s: %s\n", nehari_status_name(st),
                         nehari_last_error());
            nehari_config_free(cfg);
            return nehari_status_exit_code(st);
        }
    }
    char* report = nullptr;
    int exit_code = 0;
    st = nehari_run(cfg, command.c_str(), opt.out_dir.c_str(), &report, &exit_code);
    if (st != NEHARI_OK) {
        std::fprintf(stderr, "nehari: %s: %s\n", nehari_status_name(st), nehari_last_error());
        nehari_config_free(cfg);
        return nehari_status_exit_code(st);
    }
    if (report) {
        std::fputs(report, stdout);
        nehari_string_free(report);
    }
    nehari_config_free(cfg);
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-energy positive and nodal solutions of "
                 "-lap u = |u|^(p-2)u + mu|u|^(q-2)u on cylinder-type domains"};
    app.require_subcommand(1);

    Options opt;
    const char* commands[] = {"solve", "nodal", "eigen", "gap",
                              "decay", "instanton", "shoot", "report"};
    const char* descriptions[] = {
        "compute the least-energy positive solution (level c0)",
        "compute the least-energy sign-changing solution (level c1)",
        "principal Dirichlet eigenpair of the cross-section",
        "energy-gap experiment with the cutoff test-function pairs",
        "exponential decay-rate fit and Hopf lower bound",
        "instanton normalization study (radial + grid quadrature)",
        "radial shooting oracle on a ball",
        "combined inequality table from prior solve/nodal runs"};

    std::string chosen;
    for (int i = 0; i < 8; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
        sub->add_option("--config", opt.config_path, "key = value config file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (default: out)");
        sub->add_option("--override", opt.overrides,
                        "key=value override, repeatable")
            ->take_all();
        sub->callback([&chosen, name = std::string(commands[i])] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return run(chosen, opt);
}

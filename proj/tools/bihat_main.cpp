#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bihat/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bihat: inequality verification harness on periodic grids"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* verify = app.add_subcommand("verify", "run the experiment described by a JSON config");
    verify->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App* list = app.add_subcommand("list", "print the registries of inequalities, symbols, and families");

    std::string report_path;
    std::string format = "summary";
    CLI::App* report = app.add_subcommand("report", "re-serialize a verification report");
    report->add_option("report", report_path, "report file (JSON)")->required();
    report->add_option("--format", format, "csv, json, or summary")->default_val("summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (verify->parsed()) return bihat::cmd_verify(config_path, std::cout, std::cerr);
    if (list->parsed()) return bihat::cmd_list(std::cout);
    if (report->parsed()) return bihat::cmd_report(report_path, format, std::cout, std::cerr);
    return 2;
}

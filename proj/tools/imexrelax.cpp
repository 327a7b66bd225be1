#include "imexrelax/harness.hpp"
#include "imexrelax/tableau.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

using namespace imexrelax;

namespace {

const char* class_name(TableauClass k) {
    switch (k) {
        case TableauClass::TypeA: return "A";
        case TableauClass::TypeCK: return "CK";
        case TableauClass::ARS: return "ARS";
    }
    return "?";
}

int run_config(const std::string& path) {
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from(KeyValueConfig::from_file(path));
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    }
    ExperimentReport rep;
    try {
        rep = run_experiment(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    }
    if (cfg.output.empty() || cfg.output == "-") {
        write_csv(rep, std::cout);
    } else {
        std::ofstream out(cfg.output);
        if (!out) {
            std::cerr << "cannot write " << cfg.output << "\n";
            return 1;
        }
        write_csv(rep, out);
    }
    for (const auto& [k, v] : rep.metrics) std::fprintf(stderr, "%s = %.9g\n", k.c_str(), v);
    for (const auto& n : rep.notes) std::cerr << "note: " << n << "\n";
    return rep.aborted ? 2 : 0;
}

int check_tableau(const std::string& registry, const std::string& name) {
    ImexTableau tab;
    try {
        tab = TableauRegistry::from_file(registry).get(name);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    const auto val = validate(tab);
    for (const auto& v : val.violations) std::cout << "violation: " << v.what << "\n";
    if (!val.ok()) return 1;
    const auto cls = classify(tab);
    const auto props = check_order_conditions(tab, 3);
    std::cout << "name: " << tab.name << "\n"
              << "stages: " << tab.stages() << "\n"
              << "class: " << class_name(cls.kind) << "\n"
              << "stiffly_accurate: " << (props.stiffly_accurate ? "yes" : "no") << "\n"
              << "globally_stiffly_accurate: " << (props.globally_stiffly_accurate ? "yes" : "no") << "\n"
              << "order: " << props.satisfied_order << "\n";
    for (const auto& f : props.failed_conditions) std::cout << "failed: " << f.what << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IMEX Runge-Kutta experiments for stiff relaxation systems"};
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);

    std::string registry, name;
    auto* tableau = app.add_subcommand("tableau", "tableau utilities");
    auto* check = tableau->add_subcommand("check", "validate and classify a registry entry");
    tableau->require_subcommand(1);
    check->add_option("registry", registry, "registry file")->required();
    check->add_option("name", name, "scheme name")->required();

    auto* list = app.add_subcommand("list-models", "print the model ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (*run) return run_config(config);
    if (*check) return check_tableau(registry, name);
    if (*list) {
        for (const auto& id : model_ids()) std::cout << id << "\n";
        return 0;
    }
    return 1;
}

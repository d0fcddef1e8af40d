// cbf: command-line front end for simulations, certificates and checks.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cbf/fft.hpp"
#include "cbf/harness.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    bool deterministic = false;
    int threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "scenario JSON")->required();
    sub->add_option("--out", c.out, "output directory")->required();
    sub->add_flag("--deterministic", c.deterministic, "fixed FFT plans (bit-reproducible)");
    sub->add_option("--threads", c.threads, "FFT threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convective Brinkman-Forchheimer solver and regularity certificates"};
    app.require_subcommand(1);

    Common common;
    std::string checkpoint;
    const std::pair<const char*, cbf::ScenarioKind> commands[] = {
        {"simulate", cbf::ScenarioKind::simulate},
        {"certify", cbf::ScenarioKind::certify},
        {"perturb-sweep", cbf::ScenarioKind::perturb_sweep},
        {"inequality-suite", cbf::ScenarioKind::inequality_suite},
        {"exponent-sweep", cbf::ScenarioKind::exponent_sweep},
        {"twin-run", cbf::ScenarioKind::twin_run},
    };
    for (const auto& [name, kind] : commands) add_common(app.add_subcommand(name), common);
    CLI::App* resume = app.add_subcommand("resume", "continue a simulate run from a checkpoint");
    add_common(resume, common);
    resume->add_option("--checkpoint", checkpoint, "CBF1 checkpoint")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cbf::exit_code::config;
    }

    try {
        cbf::fft::configure(common.threads, common.deterministic);
        nlohmann::json j;
        {
            std::ifstream is(common.config);
            if (!is) {
                std::cerr << "io error: cannot read " << common.config << "\n";
                return cbf::exit_code::io;
            }
            j = nlohmann::json::parse(is);
        }
        const CLI::App* sub = app.get_subcommands().front();
        if (sub == resume) {
            if (!j.contains("kind")) j["kind"] = "simulate";
            cbf::ScenarioSpec spec = cbf::scenario_from_json(j);
            spec.output_dir = common.out;
            return cbf::resume(spec, checkpoint, std::cerr);
        }
        cbf::ScenarioKind kind{};
        for (const auto& [name, k] : commands)
            if (sub->get_name() == name) kind = k;
        if (j.contains("kind") && j.at("kind") != cbf::to_string(kind)) {
            std::cerr << "config error: config kind '" << j.at("kind").get<std::string>()
                      << "' does not match subcommand " << sub->get_name() << "\n";
            return cbf::exit_code::config;
        }
        j["kind"] = cbf::to_string(kind);
        cbf::ScenarioSpec spec = cbf::scenario_from_json(j);
        spec.output_dir = common.out;
        return cbf::run_scenario(spec, std::cerr);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cbf::exit_code::config;
    } catch (const cbf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cbf::exit_code::config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cbf::exit_code::config;
    }
}

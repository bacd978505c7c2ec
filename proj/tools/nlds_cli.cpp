// nlds command-line front end.
#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "nlds/config.hpp"
#include "nlds/errors.hpp"
#include "nlds/experiments.hpp"
#include "nlds/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Principal spectrum points of nonlocal dispersal operators"};
    app.require_subcommand(1);
    const std::map<std::string, nlds::Experiment> subs{
        {"spectrum", nlds::Experiment::Spectrum}, {"sweep-nu", nlds::Experiment::SweepNu},
        {"sweep-delta", nlds::Experiment::SweepDelta}, {"evolve", nlds::Experiment::Evolve},
        {"compete", nlds::Experiment::Compete}, {"verify", nlds::Experiment::Verify}};
    std::string config_path, out_dir, format = "csv";
    std::int64_t seed = -1;
    int workers = 0;
    bool list = false;
    for (const auto& [name, kind] : subs) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "JSON scenario file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for randomized trials")->check(CLI::NonNegativeNumber);
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "stdout flavour")->check(CLI::IsMember({"csv", "report"}));
        if (kind == nlds::Experiment::Verify) sub->add_flag("--list", list, "print the check names and exit");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (list) {
            for (const auto& c : nlds::list_checks()) std::cout << c.criterion << ' ' << c.name << ' ' << c.tag << '\n';
            return 0;
        }
        nlds::ScenarioConfig cfg = config_path.empty() ? nlds::ScenarioConfig{} : nlds::load_config(config_path);
        cfg.experiment = subs.at(sub);
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        nlds::RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.format = format;
        ctx.workers = workers;
        const auto outcome = nlds::run_scenario(cfg, ctx);
        for (const auto& f : outcome.files) std::cerr << "wrote " << f << '\n';
        return outcome.exit_code;
    } catch (const nlds::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nlds::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

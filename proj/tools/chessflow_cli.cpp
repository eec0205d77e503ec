#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chessflow/harness.hpp"

using namespace chessflow;

namespace {

RunConfig build_config(const std::string& file, const std::vector<std::string>& sets) {
    RunConfig cfg = file.empty() ? RunConfig{} : load_config(file);
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + kv + "'");
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crystalline curvature flow of polyrectangles in a chessboard medium"};
    app.require_subcommand(1);

    std::string file;
    std::vector<std::string> sets;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", file, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("-s,--set", sets, "override, key=value (repeatable)");
    };
    auto* sim = app.add_subcommand("simulate", "run the epsilon-flow, write trajectory.csv, events.log, frames/");
    auto* eff = app.add_subcommand("effective", "integrate the effective motion, write effective.csv");
    auto* cmp = app.add_subcommand("compare", "epsilon-flow against effective motion over an epsilon list");
    auto* swp = app.add_subcommand("sweep", "run the epsilon-flow for each epsilon in parallel");
    for (auto* s : {sim, eff, cmp, swp}) add_common(s);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = build_config(file, sets);
        if (*sim) {
            auto s = cmd_simulate(cfg);
            std::printf("termination %s at t = %.17g, %zu events, %zu samples%s\n", to_string(s.termination),
                        s.end_time, s.events, s.samples, s.non_unique ? " (non-unique)" : "");
        } else if (*eff) {
            std::printf("case %s\n", to_string(cmd_effective(cfg)));
        } else if (*cmp) {
            auto rep = cmd_compare(cfg);
            std::printf("%-12s %-14s %-10s %-14s %-14s\n", "epsilon", "sup_dH", "ratio", "terminal_dH", "align_dH");
            for (const auto& r : rep.rows)
                std::printf("%-12.6g %-14.8g %-10.4g %-14.8g %-14.8g\n", r.epsilon, r.sup_distance, r.ratio,
                            r.terminal_distance, r.alignment_distance);
        } else if (*swp) {
            auto eps = cfg.epsilon_list();
            auto out = cmd_sweep(cfg);
            for (std::size_t k = 0; k < out.size(); ++k)
                std::printf("epsilon %.6g: %s at t = %.10g, %zu events\n", eps[k], to_string(out[k].termination),
                            out[k].end_time, out[k].events);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

// qualisem: validate scenarios, run episodes, repair labels from logs and
// normalize decision terms.
//
// Exit codes: 0 success or goal reached, 1 validation or type failure,
// 2 unreadable or malformed input, 3 horizon exhausted, 4 stuck.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qualisem/qualisem.hpp"

namespace {

using namespace qualisem;

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
    const char* v = std::getenv("QUALISEM_LOG");
    if (!v) return Level::Warn;
    std::string s(v);
    if (s == "error") return Level::Error;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
}

void log(Level lvl, const std::string& msg) {
    static const Level threshold = log_level();
    static const char* names[] = {"error", "warning", "info", "debug"};
    if (lvl <= threshold) std::cerr << names[static_cast<int>(lvl)] << ": " << msg << "\n";
}

// Thrown for input that cannot be read or parsed; maps to exit 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

Scenario load_scenario(const std::string& ref) {
    std::string text;
    if (std::filesystem::exists(ref)) {
        text = read_file(ref);
    } else {
        auto it = builtin_scenarios().find(ref);
        if (it == builtin_scenarios().end()) throw InputError("no scenario file or built-in named '" + ref + "'");
        text = it->second;
        log(Level::Debug, "using built-in scenario '" + ref + "'");
    }
    try {
        return parse_scenario(text);
    } catch (const SyntaxError& e) {
        throw InputError(ref + ":" + e.what());
    } catch (const Error& e) {
        throw InputError(ref + ": " + e.what());
    }
}

int code_of(Episode::Outcome o) {
    switch (o) {
        case Episode::Outcome::Reached: return 0;
        case Episode::Outcome::HorizonExhausted: return 3;
        case Episode::Outcome::Stuck: return 4;
    }
    return 4;
}

int cmd_validate(const std::string& ref) {
    auto s = load_scenario(ref);
    auto rep = validate(s);
    std::cout << rep.str();
    std::cout << (rep.ok() ? "scenario " + s.name + " is valid\n" : "scenario " + s.name + " is invalid\n");
    return rep.ok() ? 0 : 1;
}

struct RunOptions {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> horizon;
    std::string trace;
    std::string log_out;
    std::uint32_t seeds = 0;
};

std::string seeded_path(const std::string& path, std::uint64_t seed) {
    std::filesystem::path p(path);
    auto stem = p.stem().string();
    auto ext = p.extension().string();
    return (p.parent_path() / (stem + ".seed" + std::to_string(seed) + ext)).string();
}

int run_one(const Scenario& s, std::uint64_t seed, const RunOptions& opt, const std::string& trace_path,
            const std::string& log_path) {
    std::optional<std::int64_t> horizon;
    if (opt.horizon) horizon = *opt.horizon;
    auto w = instantiate(s, seed, horizon);
    auto res = run_episode(*w.env, w.agent, w.initial, w.goal, w.horizon);
    if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw InputError("cannot write '" + trace_path + "'");
        write_trace(out, res.trace);
    }
    if (!log_path.empty()) write_file(log_path, print(res.agent.log) + "\n");
    std::cout << s.name << " seed " << seed << ": " << outcome_name(res.episode.outcome);
    if (res.episode.outcome != Episode::Outcome::Stuck) std::cout << " at tick " << res.episode.ticks;
    std::cout << "\n";
    if (!res.episode.error.empty()) log(Level::Warn, "stuck at tick " + std::to_string(res.episode.ticks) + ": " +
                                                         res.episode.error);
    return code_of(res.episode.outcome);
}

int cmd_run(const RunOptions& opt) {
    auto s = load_scenario(opt.scenario);
    auto rep = validate(s);
    if (!rep.ok()) {
        std::cerr << rep.str();
        return 1;
    }
    auto base = opt.seed.value_or(s.seed);
    if (opt.seeds == 0) return run_one(s, base, opt, opt.trace, opt.log_out);
    int worst = 0;
    for (std::uint64_t k = 0; k < opt.seeds; ++k) {
        auto seed = base + k;
        int code = run_one(s, seed, opt, opt.trace.empty() ? "" : seeded_path(opt.trace, seed),
                           opt.log_out.empty() ? "" : seeded_path(opt.log_out, seed));
        if (code == 4 || (code == 3 && worst == 0)) worst = code;
    }
    return worst;
}

int cmd_learn(const std::string& ref, const std::string& log_path, const std::string& out_path) {
    auto s = load_scenario(ref);
    Formula log_formula;
    try {
        log_formula = parse_formula(read_file(log_path), s.vocab.get());
    } catch (const SyntaxError& e) {
        throw InputError(log_path + ":" + e.what());
    } catch (const Error& e) {
        throw InputError(log_path + ": " + e.what());
    }
    if (log_formula.mode != Mode::Log) throw InputError(log_path + ": expected a log formula");
    if (log_formula.steps.empty()) {
        log(Level::Warn, "log has no steps; scenario copied unchanged");
        write_file(out_path, print(s));
        return 0;
    }
    auto res = learn(scenario_agent(s), log_formula);
    for (const auto& r : res.relabels)
        std::cout << "relabel " << r.action << " on " << r.property << ": " << r.from << " -> " << r.to << " (effect "
                  << r.old_effect << " -> " << r.new_effect << ", " << r.majority_count << "/" << r.support
                  << " observations)\n";
    if (res.relabels.empty()) std::cout << "no labels changed\n";
    for (const auto& i : res.insufficient)
        log(Level::Warn, "insufficient evidence for " + i.action + " on " + i.property + " (" +
                             std::to_string(i.support) + " observations)");
    for (const auto& n : res.notes) log(Level::Warn, n);
    write_file(out_path, print(with_actions(s, res.state.actions)));
    return 0;
}

TermPtr parse_with_free_constants(const std::string& text, TypeContext constants, bool open) {
    for (;;) {
        try {
            return parse_term(text, constants);
        } catch (const UnboundVariable& e) {
            if (!open) throw;
            constants[e.name()] = ground(GroundType::Iu);
        }
    }
}

int cmd_normalize(const std::string& term_path, const std::string& scenario_ref,
                  const std::vector<std::string>& extra) {
    TypeContext constants;
    std::set<std::string> declared;
    if (!scenario_ref.empty()) {
        auto s = load_scenario(scenario_ref);
        for (const auto& a : s.actions) {
            constants[a.name] = ground(GroundType::Iu);
            declared.insert(a.name);
        }
    }
    for (const auto& c : extra) {
        auto colon = c.find(':');
        if (colon == std::string::npos) throw InputError("constant '" + c + "' must be name:Type");
        try {
            constants[c.substr(0, colon)] = parse_type(c.substr(colon + 1));
        } catch (const SyntaxError& e) {
            throw InputError("constant '" + c + "': " + e.what());
        }
    }
    auto text = read_file(term_path);
    TermPtr term;
    try {
        // Without a scenario, free identifiers are read as action constants.
        term = parse_with_free_constants(text, constants, scenario_ref.empty());
    } catch (const SyntaxError& e) {
        throw InputError(term_path + ":" + e.what());
    } catch (const UnboundVariable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    Normalized nf;
    try {
        nf = normalize_counted(term);
    } catch (const NotWellTyped& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << print(nf.term) << "\n";
    log(Level::Info, std::to_string(nf.steps) + " reduction steps");
    try {
        auto seq = extract_actions(nf.term, scenario_ref.empty() ? nullptr : &declared);
        std::string joined;
        for (const auto& a : seq.actions) joined += (joined.empty() ? "" : " ") + a;
        log(Level::Info, "actions: " + joined);
    } catch (const NotAnActionSequence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qualitative-semantics agent engine"};
    app.require_subcommand(1);

    std::string validate_ref;
    auto* validate_cmd = app.add_subcommand("validate", "Check alphabets and action labels of a scenario");
    validate_cmd->add_option("scenario", validate_ref, "Scenario file or built-in name")->required();

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run a closed-loop episode");
    run_cmd->add_option("scenario", run.scenario, "Scenario file or built-in name")->required();
    run_cmd->add_option("--seed", run.seed, "RNG seed (default: the scenario's)");
    run_cmd->add_option("--horizon", run.horizon, "Maximum number of ticks")->check(CLI::PositiveNumber);
    run_cmd->add_option("--trace", run.trace, "Write the JSONL trace here");
    run_cmd->add_option("--log-out", run.log_out, "Write the log formula here");
    run_cmd->add_option("--seeds", run.seeds, "Run this many consecutive seeds, one trace file each");

    std::string learn_ref, learn_log, learn_out;
    auto* learn_cmd = app.add_subcommand("learn", "Relabel actions from a log formula");
    learn_cmd->add_option("scenario", learn_ref, "Scenario file or built-in name")->required();
    learn_cmd->add_option("--log", learn_log, "Log formula file")->required();
    learn_cmd->add_option("--out", learn_out, "Repaired scenario file")->required();

    std::string term_path, term_scenario;
    std::vector<std::string> term_consts;
    auto* norm_cmd = app.add_subcommand("normalize", "Typecheck and normalize a term");
    norm_cmd->add_option("--term", term_path, "File holding the term")->required();
    norm_cmd->add_option("--scenario", term_scenario, "Declare the scenario's actions as constants");
    norm_cmd->add_option("--const", term_consts, "Extra constant as name:Type");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate_cmd) return cmd_validate(validate_ref);
        if (*run_cmd) return cmd_run(run);
        if (*learn_cmd) return cmd_learn(learn_ref, learn_log, learn_out);
        if (*norm_cmd) return cmd_normalize(term_path, term_scenario, term_consts);
    } catch (const InputError& e) {
        log(Level::Error, e.what());
        return 2;
    } catch (const std::exception& e) {
        log(Level::Error, e.what());
        return 2;
    }
    return 2;
}

// Command-line harness: circuit runs on the dense and path-sum backends,
// majority decisions in all modes, probe-sweep figure data, ledger decisions,
// variant-rule pipelines, and an in-process selftest.
//
// Exit codes: 0 success, 1 input error, 2 zero-probability postselection,
// 3 resource cap exceeded.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "postsim/dense.hpp"
#include "postsim/errors.hpp"
#include "postsim/gadgets.hpp"
#include "postsim/majority.hpp"
#include "postsim/parse.hpp"
#include "postsim/pathsum.hpp"
#include "postsim/rewrite.hpp"

namespace {

using namespace postsim;

struct RunConfig {
    std::string circuit_path;
    std::string table_path;
    std::string backend = "dense";
    std::string mode = "analytic";
    std::string format = "text";
    std::string gadget = "auto";
    double p = 2.0;
    int q_poly = 20;
    std::uint64_t reps = 100;
    std::uint64_t seed = 1;
    std::uint64_t input = 0;
    std::optional<int> i_override;
    bool pad = false;
    std::string output;
};

void emit(const RunConfig &config, const std::string &text) {
    if (config.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + config.output);
    out << text;
}

std::string bits_of(std::uint64_t z, int n) {
    std::string s(n, '0');
    for (int q = 0; q < n; ++q) {
        if ((z >> (n - 1 - q)) & 1u) s[q] = '1';
    }
    return s;
}

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

MajorityInstance load_instance(const RunConfig &config) {
    MajorityInstance inst = parse_truth_table(read_file(config.table_path));
    return config.pad ? pad_instance(inst) : inst;
}

std::string report_json_lines(const DecisionReport &report) {
    std::string out;
    for (const auto &[i, v] : report.overlaps) {
        nlohmann::json row{{"i", i}, {"overlap", v}};
        out += row.dump() + "\n";
    }
    nlohmann::json summary{{"mode", decide_mode_name(report.mode)},
                           {"n", report.n},
                           {"s", report.ones},
                           {"verdict", report.verdict},
                           {"max_overlap", report.max_overlap()}};
    if (report.mode == DecideMode::Sampled) {
        summary["reps_per_i"] = report.repetitions;
        summary["seed"] = report.seed;
    }
    out += summary.dump() + "\n";
    return out;
}

std::string format_report(const RunConfig &config, const DecisionReport &report,
                          const std::string &text_prefix = "") {
    if (config.format == "csv") return report.to_csv();
    if (config.format == "json-lines") return report_json_lines(report);
    return text_prefix + report.to_text();
}

void restrict_to_override(const RunConfig &config, DecisionReport &report) {
    if (!config.i_override) return;
    const int i = *config.i_override;
    auto it = report.overlaps.find(i);
    if (it == report.overlaps.end()) {
        throw PreconditionViolated("--i must lie in [-n, n]");
    }
    const double value = it->second;
    report.overlaps = {{i, value}};
    report.verdict = value >= (report.mode == DecideMode::Sampled ? kWitnessFrequencyThreshold
                                                                  : kOverlapVerdictThreshold);
}

int cmd_run(const RunConfig &config) {
    Circuit circuit = parse_circuit(read_file(config.circuit_path));
    std::ostringstream out;
    if (config.backend == "pathsum") {
        PathLedger ledger = enumerate_ledger(circuit, config.input);
        out << "backend pathsum\n";
        out << "h " << ledger.hadamard_count << "\n";
        for (const auto &[z, c] : ledger.sums) {
            out << "c " << bits_of(z, circuit.num_qubits) << " " << c << "\n";
        }
    } else {
        StateVector final_state = run_circuit(circuit, config.input);
        out << "backend dense\n";
        for (std::uint64_t z = 0; z < final_state.amps.size(); ++z) {
            const Amplitude &a = final_state.amps[z];
            if (a == Amplitude(0.0, 0.0)) continue;
            out << "amp " << bits_of(z, circuit.num_qubits) << " " << fmt10(a.real()) << " "
                << fmt10(a.imag()) << "\n";
        }
    }
    emit(config, out.str());
    return 0;
}

int cmd_majority(const RunConfig &config) {
    MajorityInstance inst = load_instance(config);
    DecisionReport report;
    if (config.mode == "analytic") {
        report = decide_majority_analytic(inst);
    } else if (config.mode == "circuit") {
        report = decide_majority_circuit(inst);
    } else if (config.mode == "sampled") {
        report = decide_majority_sampled(inst, config.reps, config.seed);
    } else {
        throw PreconditionViolated("mode must be analytic, circuit, or sampled");
    }
    restrict_to_override(config, report);
    emit(config, format_report(config, report));
    return 0;
}

int cmd_fig1(const RunConfig &config) {
    MajorityInstance inst = load_instance(config);
    emit(config, probe_sweep_csv(inst));
    return 0;
}

int cmd_pp_decide(const RunConfig &config) {
    Circuit circuit = parse_circuit(read_file(config.circuit_path));
    const int original_qubits = circuit.num_qubits;
    std::uint64_t input = config.input;
    const bool normalized = !is_normal_form(circuit);
    if (normalized) {
        circuit = normalize_postselections(circuit);
        input = lift_basis_index(input, original_qubits, circuit.num_qubits);
    }
    LedgerDecision d = ledger_decide(circuit, input);
    std::ostringstream out;
    out << "normalized " << (normalized ? "true" : "false") << "\n";
    out << "S0 " << d.reject_weight << "\n";
    out << "S1 " << d.accept_weight << "\n";
    out << "tie " << (d.tie ? "true" : "false") << "\n";
    out << "accept " << (d.accept ? "true" : "false") << "\n";
    emit(config, out.str());
    return 0;
}

int cmd_fantasy(const RunConfig &config) {
    MajorityInstance inst = load_instance(config);
    std::string gadget = config.gadget;
    if (gadget == "auto") gadget = config.p == 2.0 ? "nonunitary" : "boost";
    DecisionReport report;
    if (gadget == "nonunitary") {
        if (config.p != 2.0) {
            throw PreconditionViolated("the nonunitary pipeline runs under the standard rule; use --p 2");
        }
        report = decide_majority_nonunitary(inst, config.q_poly, config.reps, config.seed);
    } else if (gadget == "boost") {
        report = decide_majority_boosted(inst, MeasurementRule(config.p), config.reps, config.seed,
                                         config.q_poly);
    } else {
        throw PreconditionViolated("gadget must be nonunitary or boost");
    }
    restrict_to_override(config, report);
    std::ostringstream prefix;
    prefix << "gadget " << gadget << "\n";
    prefix << "p " << config.p << "\n";
    prefix << "q_poly " << config.q_poly << "\n";
    emit(config, format_report(config, report, prefix.str()));
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](const char *name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
        failures += ok ? 0 : 1;
    };

    bool verdicts_ok = true, bounds_ok = true;
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t tables = std::uint64_t{1} << (std::uint64_t{1} << n);
        for (std::uint64_t bits = 0; bits < tables; ++bits) {
            MajorityInstance inst = MajorityInstance::from_mask(n, bits);
            if (inst.ones == 0) continue;
            DecisionReport report = decide_majority_analytic(inst);
            verdicts_ok &= report.verdict == inst.majority_below_half();
            if (inst.majority_below_half()) {
                bounds_ok &= report.max_overlap() >= kCloseOverlapBound - 1e-12;
            } else {
                bounds_ok &= report.max_overlap() <= kFarOverlapBound + 1e-12;
            }
        }
    }
    check("dichotomy verdicts, all tables n <= 3 with s >= 1", verdicts_ok);
    check("dichotomy overlap bounds, all tables n <= 3 with s >= 1", bounds_ok);

    bool padding_ok = true;
    for (int n = 1; n <= 2; ++n) {
        const std::uint64_t tables = std::uint64_t{1} << (std::uint64_t{1} << n);
        for (std::uint64_t bits = 0; bits < tables; ++bits) {
            MajorityInstance inst = MajorityInstance::from_mask(n, bits);
            padding_ok &=
                decide_majority_analytic(pad_instance(inst)).verdict == inst.majority_below_half();
        }
    }
    check("padding soundness, all tables n <= 2", padding_ok);

    bool circuit_ok = true;
    for (std::uint64_t bits = 1; bits < 16; ++bits) {
        MajorityInstance inst = MajorityInstance::from_mask(2, bits);
        DecisionReport a = decide_majority_analytic(inst);
        DecisionReport c = decide_majority_circuit(inst);
        for (const auto &[i, v] : a.overlaps) circuit_ok &= std::abs(v - c.overlaps.at(i)) <= 1e-9;
    }
    check("circuit/analytic overlap agreement, all tables n = 2", circuit_ok);

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"postsim - simulation suite for postselected quantum computation"};
    app.require_subcommand(1);
    RunConfig config;
    std::function<int()> action;

    CLI::App *run = app.add_subcommand("run", "run a circuit file on a backend");
    run->add_option("circuit", config.circuit_path, "circuit file")->required();
    run->add_option("--backend", config.backend, "dense or pathsum")
        ->check(CLI::IsMember({"dense", "pathsum"}));
    run->add_option("--input", config.input, "input basis index (default 0)");
    run->add_option("--output", config.output, "output file (default stdout)");
    run->callback([&] { action = [&] { return cmd_run(config); }; });

    CLI::App *majority = app.add_subcommand("majority", "decide s < 2^(n-1) for a truth table");
    majority->add_option("table", config.table_path, "truth table file")->required();
    majority->add_option("--mode", config.mode, "analytic, circuit, or sampled")
        ->check(CLI::IsMember({"analytic", "circuit", "sampled"}));
    majority->add_flag("--pad", config.pad, "pad the instance so s >= 2^(n-1) > 0");
    majority->add_option("--reps", config.reps, "repetitions per i (sampled mode)");
    majority->add_option("--seed", config.seed, "PRNG seed (sampled mode)");
    majority->add_option("--i", config.i_override, "restrict the sweep to one exponent");
    majority->add_option("--format", config.format, "text, csv, or json-lines")
        ->check(CLI::IsMember({"text", "csv", "json-lines"}));
    majority->add_option("--output", config.output, "output file (default stdout)");
    majority->callback([&] { action = [&] { return cmd_majority(config); }; });

    CLI::App *fig1 = app.add_subcommand("fig1", "emit probe-sweep CSV data for a truth table");
    fig1->add_option("table", config.table_path, "truth table file")->required();
    fig1->add_flag("--pad", config.pad, "pad the instance first");
    fig1->add_option("--output", config.output, "output file (default stdout)");
    fig1->callback([&] { action = [&] { return cmd_fig1(config); }; });

    CLI::App *ppd = app.add_subcommand("pp-decide", "exact ledger acceptance decision");
    ppd->add_option("circuit", config.circuit_path, "circuit file (restricted gate set)")->required();
    ppd->add_option("--input", config.input, "input basis index (default 0)");
    ppd->add_option("--output", config.output, "output file (default stdout)");
    ppd->callback([&] { action = [&] { return cmd_pp_decide(config); }; });

    CLI::App *fantasy = app.add_subcommand("fantasy", "majority decision under variant rules");
    fantasy->add_option("table", config.table_path, "truth table file")->required();
    fantasy->add_option("--p", config.p, "measurement exponent (2 = standard rule)");
    fantasy->add_option("--q", config.q_poly, "gadget strength q_poly");
    fantasy->add_option("--gadget", config.gadget, "nonunitary, boost, or auto")
        ->check(CLI::IsMember({"auto", "nonunitary", "boost"}));
    fantasy->add_flag("--pad", config.pad, "pad the instance so s >= 2^(n-1) > 0");
    fantasy->add_option("--reps", config.reps, "repetitions per i");
    fantasy->add_option("--seed", config.seed, "PRNG seed");
    fantasy->add_option("--i", config.i_override, "restrict the sweep to one exponent");
    fantasy->add_option("--format", config.format, "text, csv, or json-lines")
        ->check(CLI::IsMember({"text", "csv", "json-lines"}));
    fantasy->add_option("--output", config.output, "output file (default stdout)");
    fantasy->callback([&] { action = [&] { return cmd_fantasy(config); }; });

    CLI::App *selftest = app.add_subcommand("selftest", "run the built-in exhaustive checks");
    selftest->callback([&] { action = [] { return cmd_selftest(); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        return action();
    } catch (const PathBudgetExceeded &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ZeroProbability &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

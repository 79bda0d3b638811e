#include "walshprep/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "walshprep/error.hpp"
#include "walshprep/reproduce.hpp"

namespace walshprep {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json(const json &j, const fs::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

void write_text(const std::string &text, const fs::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

json target_json(const TargetSpec &t) {
    return {{"spec", t.to_string()}, {"n_qubits", t.n_qubits}, {"seed", t.seed}};
}

json provenance(int threads) {
    return {{"tool", "walsh_prep"}, {"version", kVersion}, {"threads", threads}};
}

json checks_json(const std::vector<Check> &checks) {
    bool all = true;
    for (const auto &c : checks) all = all && c.passed;
    return {{"checks", checks}, {"all_passed", all}};
}

void print_checks(const std::vector<Check> &checks, std::ostream &out) {
    for (const auto &c : checks) {
        out << fmt::format("  [{}] {} = {:.6g} ({} {:.6g})\n", c.passed ? "pass" : "FAIL",
                           c.name, c.value, c.comparison, c.threshold);
    }
}

} // namespace

void to_json(json &j, const RunConfig &c) {
    j = {{"target", target_json(c.target)},
         {"pipeline", c.pipeline},
         {"train", c.train},
         {"terms", c.terms},
         {"topology", c.topology},
         {"out_dir", c.out_dir.string()},
         {"threads", c.threads}};
}

RunConfig run_config_from_json(const json &j) {
    try {
        RunConfig c;
        const auto &t = j.at("target");
        c.target = TargetSpec::parse(t.at("spec").get<std::string>(), t.at("n_qubits").get<int>(),
                                     t.at("seed").get<std::uint64_t>());
        c.pipeline = pipeline_config_from_json(j.at("pipeline"));
        c.train = train_config_from_json(j.at("train"));
        c.terms = j.at("terms").get<std::string>();
        c.topology = j.at("topology").get<std::string>();
        c.out_dir = j.at("out_dir").get<std::string>();
        c.threads = j.at("threads").get<int>();
        return c;
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed run config: ") + e.what());
    }
}

TermSet build_term_set(int n_qubits, const std::string &terms, const std::string &topology) {
    if (terms == "two-local") return select_terms(n_qubits, TermSelection::k_local(2));
    if (terms == "full") return select_terms(n_qubits, TermSelection::full());
    if (terms == "hardware-efficient") {
        if (topology.empty() || topology == "ladder") {
            return select_terms(n_qubits, TermSelection::topology(ladder_graph(n_qubits)));
        }
        if (topology.starts_with("file:")) {
            auto graph = topology_from_json(read_json(topology.substr(5)));
            return select_terms(n_qubits, TermSelection::topology(std::move(graph)));
        }
        throw ValidationError("unknown topology '" + topology + "'");
    }
    throw ValidationError(
        "unknown term set '" + terms + "' (expected two-local, hardware-efficient, full)");
}

fs::path default_output_root() {
    if (const char *env = std::getenv("WALSH_PREP_OUT"); env && *env) return env;
    return "runs";
}

json params_json(const PipelineConfig &config, const ParameterVector &params,
                 double phase_eps) {
    const ParameterLayout layout(config);
    json j = {{"method", method_name(config.method)},
              {"n_qubits", config.n_qubits},
              {"layers", config.layers}};
    if (config.method == Method::full_oracle) {
        auto hams = json::array();
        for (std::size_t k = 0; k < layout.blocks(); ++k) {
            const auto b = params.block(layout, k);
            hams.push_back(std::vector<double>(b.begin(), b.end()));
        }
        j["hamiltonians"] = std::move(hams);
        const auto correction = phase_correction(forward(params, config), phase_eps);
        j["phase_correction"] =
            std::vector<double>(correction.coeffs().begin(), correction.coeffs().end());
    } else {
        j["term_set"] = *config.term_set;
        auto evolutions = json::array();
        for (std::size_t k = 0; k < layout.blocks(); ++k) {
            WalshSpectrum s(config.n_qubits);
            const auto b = params.block(layout, k);
            const auto &indices = config.term_set->indices();
            for (std::size_t t = 0; t < indices.size(); ++t) s.set(indices[t], b[t]);
            evolutions.push_back(s);
        }
        j["evolutions"] = std::move(evolutions);
    }
    return j;
}

GateList circuit_from_params(const json &params) {
    try {
        const auto method = parse_method(params.at("method").get<std::string>());
        if (method == Method::full_oracle) {
            throw UnsupportedError(
                "full-method parameters need a phase oracle; only Walsh-method runs can be "
                "emitted as gates");
        }
        const int n = params.at("n_qubits").get<int>();
        const int layers = params.at("layers").get<int>();
        const auto &evolutions = params.at("evolutions");
        if (layers < 1 || layers > 2 || evolutions.size() != std::size_t(layers) + 1) {
            throw ValidationError("params.json has an inconsistent number of evolutions");
        }
        GateList gates = hadamard_layer(n);
        for (std::size_t k = 0; k < evolutions.size(); ++k) {
            const auto spectrum = walsh_spectrum_from_json(evolutions[k]);
            if (spectrum.n_qubits() != n) throw ValidationError("evolution register mismatch");
            gates.append(synthesize_evolution(spectrum));
            if (k + 1 < evolutions.size()) gates.append(hadamard_layer(n));
        }
        return gates;
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed params file: ") + e.what());
    }
}

int report_failure(const std::exception &e, std::ostream &err) {
    err << "error: " << e.what() << '\n';
    if (dynamic_cast<const ValidationError *>(&e) || dynamic_cast<const ParseError *>(&e) ||
        dynamic_cast<const SizeError *>(&e) || dynamic_cast<const TopologyError *>(&e) ||
        dynamic_cast<const UnsupportedError *>(&e)) {
        return kExitUsage;
    }
    return kExitRuntime;
}

TrainReport run_training(const RunConfig &config, std::ostream &log) {
    config.pipeline.validate();
    config.train.validate();
    const StateVector target = config.target.build();
    if (target.n_qubits() != config.pipeline.n_qubits) {
        throw ValidationError(fmt::format("target has {} qubits, pipeline expects {}",
                                          target.n_qubits(), config.pipeline.n_qubits));
    }
    ensure_dir(config.out_dir);
    write_json(json(config), config.out_dir / "config.json");

    TrainReport report = fit(target, config.pipeline, config.train);

    json rj = report;
    rj["config"] = config;
    rj["provenance"] = provenance(config.threads);
    write_json(rj, config.out_dir / "report.json");
    write_loss_csv(report, config.out_dir / "loss.csv");
    write_json(params_json(config.pipeline, report.final_params, config.train.phase_eps),
               config.out_dir / "params.json");
    save_state_binary(prepared_state(report.final_params, config.pipeline, config.train.phase_eps),
                      config.out_dir / "prepared_state.bin");
    log << fmt::format("final_loss {:.6e}\nfinal_infidelity {:.6e}\nepochs {}\noutput {}\n",
                       report.final_loss, report.final_infidelity, report.epochs_run,
                       config.out_dir.string());
    return report;
}

int cmd_train(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        run_training(config, out);
        return kExitOk;
    } catch (const std::exception &e) {
        return report_failure(e, err);
    }
}

int cmd_generate(const TargetSpec &target, const fs::path &path, std::ostream &out,
                 std::ostream &err) {
    try {
        const StateVector s = target.build();
        if (path.has_parent_path()) ensure_dir(path.parent_path());
        save_amplitudes(s, path);
        out << fmt::format("wrote {} amplitudes to {}\n", s.size(), path.string());
        return kExitOk;
    } catch (const std::exception &e) {
        return report_failure(e, err);
    }
}

namespace {

void reproduce_table1_files(const fs::path &dir, std::ostream &out) {
    const auto r = reproduce_table1(8);
    const json counts = {{"two_local", r.two_local}, {"hardware_efficient", r.hardware_efficient},
                         {"scope", "one evolution layer"}};
    write_json(counts, dir / "table1.json");
    write_json(checks_json(r.checks), dir / "checks.json");
    out << fmt::format("table1: two-local {}/{}, hardware-efficient {}/{}\n",
                       r.two_local.one_qubit, r.two_local.two_qubit,
                       r.hardware_efficient.one_qubit, r.hardware_efficient.two_qubit);
    print_checks(r.checks, out);
}

void reproduce_table2_files(const fs::path &dir, std::ostream &out) {
    const Table2Options opts;
    const auto r = reproduce_table2(opts);
    std::string csv = "dataset,terms,infidelity,final_loss,epochs_run,wall_clock_s\n";
    std::string text = fmt::format("{:<8} {:>20} {:>20}\n", "dataset", "two_local",
                                   "hardware_efficient");
    for (const auto &e : r.entries) {
        csv += fmt::format("{},{},{:.6e},{:.6e},{},{:.3f}\n", e.dataset, e.terms, e.infidelity,
                           e.final_loss, e.epochs_run, e.wall_clock_seconds);
        write_loss_csv(e.report, dir / fmt::format("loss_{}_{}.csv", e.dataset, e.terms));
    }
    for (const char *ds : {"linear", "sine"}) {
        double tl = NAN, hw = NAN;
        for (const auto &e : r.entries) {
            if (e.dataset != ds) continue;
            (e.terms == "two_local" ? tl : hw) = e.infidelity;
        }
        text += fmt::format("{:<8} {:>20.3e} {:>20.3e}\n", ds, tl, hw);
    }
    write_text(csv, dir / "table2.csv");
    write_text(text, dir / "table2.txt");
    json cj = checks_json(r.checks);
    cj["settings"] = {{"n_qubits", opts.n_qubits}, {"epochs", opts.epochs},
                      {"learning_rate", opts.learning_rate}, {"restarts", opts.restarts},
                      {"seed", opts.seed}, {"loss", loss_name(opts.loss.type)}};
    write_json(cj, dir / "checks.json");
    out << "table2: infidelity (1 - F)\n" << text;
    print_checks(r.checks, out);
}

void reproduce_layers_files(const fs::path &dir, int only_layers, std::ostream &out) {
    const auto r = reproduce_layer_comparison();
    std::vector<Check> checks;
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        const auto &run = r.runs[i];
        if (run.layers != only_layers) continue;
        write_loss_csv(run.report,
                       dir / fmt::format("loss_layers{}_trial{}.csv", run.layers, run.trial));
        checks.push_back(r.checks[i]);
    }
    write_json(checks_json(checks), dir / "checks.json");
    out << fmt::format("{}-layer training, final losses:\n", only_layers);
    print_checks(checks, out);
}

void reproduce_fig4c_files(const fs::path &dir, int threads, std::ostream &out) {
    DatasetSizeOptions opts;
    opts.threads = threads;
    const auto r = reproduce_dataset_sizes(opts);
    write_sweep_csv(r.sweep, dir / "fig4c.csv");
    std::string summary = "n_qubits,N,distribution,mean_final_loss,stddev_final_loss,failed\n";
    for (const auto &s : r.sweep.summaries) {
        summary += fmt::format("{},{},{},{:.6e},{:.6e},{}\n", s.n_qubits,
                               std::uint64_t{1} << s.n_qubits, distribution_name(s.distribution),
                               s.mean_loss, s.stddev_loss, s.failed_trials);
    }
    write_text(summary, dir / "fig4c_summary.csv");
    write_json(checks_json(r.checks), dir / "checks.json");
    out << "fig4c: mean final loss after 500 epochs\n" << summary;
    print_checks(r.checks, out);
}

} // namespace

int cmd_reproduce(const std::string &figure, const fs::path &out_dir, int threads,
                  std::ostream &out, std::ostream &err) {
    try {
        const fs::path dir = out_dir / figure;
        if (figure == "table1") {
            ensure_dir(dir);
            reproduce_table1_files(dir, out);
        } else if (figure == "table2") {
            ensure_dir(dir);
            reproduce_table2_files(dir, out);
        } else if (figure == "fig4a" || figure == "fig4b") {
            ensure_dir(dir);
            reproduce_layers_files(dir, figure == "fig4a" ? 1 : 2, out);
        } else if (figure == "fig4c") {
            ensure_dir(dir);
            reproduce_fig4c_files(dir, threads, out);
        } else {
            throw ValidationError("unknown reproduction '" + figure +
                                  "' (expected fig4a, fig4b, fig4c, table1, table2)");
        }
        write_json(provenance(threads), dir / "provenance.json");
        return kExitOk;
    } catch (const std::exception &e) {
        return report_failure(e, err);
    }
}

int cmd_bench(const std::vector<int> &n_list, int epochs, const fs::path &csv,
              std::ostream &out, std::ostream &err) {
    try {
        if (n_list.empty()) throw ValidationError("bench needs at least one size");
        if (epochs < 1) throw ValidationError("epochs must be at least 1");
        std::string text = "N,seconds\n";
        std::vector<double> xs, ys;
        for (int n : n_list) {
            if (n < 1 || n > kDefaultMaxQubits) {
                throw ValidationError(fmt::format("bench size {} outside [1, {}]", n,
                                                  kDefaultMaxQubits));
            }
            const StateVector target = random_state(Distribution::uniform, n, 1);
            const PipelineConfig pc{n, Method::full_oracle, 2, std::nullopt};
            TrainConfig tc;
            tc.epochs = epochs;
            tc.target_loss.reset();
            tc.log_every = epochs;
            tc.loss = LossKind::amplitude();
            const auto start = std::chrono::steady_clock::now();
            fit(target, pc, tc);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const double big_n = std::ldexp(1.0, n);
            text += fmt::format("{},{:.6f}\n", std::uint64_t{1} << n, seconds);
            out << fmt::format("N={:<10} {:.6f} s\n", std::uint64_t{1} << n, seconds);
            xs.push_back(std::log(big_n * double(n)));
            ys.push_back(std::log(std::max(seconds, 1e-12)));
        }
        if (csv.has_parent_path()) ensure_dir(csv.parent_path());
        write_text(text, csv);
        if (xs.size() >= 2) {
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= double(xs.size());
            my /= double(xs.size());
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxy += (xs[i] - mx) * (ys[i] - my);
                sxx += (xs[i] - mx) * (xs[i] - mx);
            }
            const double slope = sxx > 0 ? sxy / sxx : NAN;
            out << fmt::format("log(seconds) vs log(N log2 N): slope {:.3f}, "
                               "prefactor {:.3e} (informational)\n",
                               slope, std::exp(my - slope * mx));
        }
        return kExitOk;
    } catch (const std::exception &e) {
        return report_failure(e, err);
    }
}

int cmd_emit_circuit(const fs::path &params_path, const fs::path &out_path, std::ostream &out,
                     std::ostream &err) {
    try {
        const GateList gates = circuit_from_params(read_json(params_path));
        if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
        export_qasm(gates, out_path);
        const auto counts = count_gates(gates);
        out << fmt::format("wrote {} gates ({} one-qubit, {} two-qubit) to {}\n", gates.size(),
                           counts.one_qubit, counts.two_qubit, out_path.string());
        return kExitOk;
    } catch (const std::exception &e) {
        return report_failure(e, err);
    }
}

} // namespace walshprep

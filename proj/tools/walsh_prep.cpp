// walsh_prep: learn diagonal-Hamiltonian state-preparation circuits.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "walshprep/cli.hpp"
#include "walshprep/error.hpp"

using namespace walshprep;

namespace {

struct TrainFlags {
    std::string target = "uniform";
    int n = 4;
    std::string method = "full";
    int layers = 2;
    std::string terms;
    std::string topology = "ladder";
    int epochs = 500;
    double lr = 0.05;
    std::uint64_t seed = 0;
    std::string loss;
    double phase_weight = 1.0;
    std::string optimizer = "adam";
    int log_every = 1;
    double target_loss = 1e-14;
    double init_std = 0.1;
    int restarts = 1;
    std::string out;
    int threads = 1;
};

RunConfig to_run_config(const TrainFlags &f) {
    RunConfig c;
    c.target = TargetSpec::parse(f.target, f.n, f.seed);
    c.pipeline.n_qubits = f.n;
    c.pipeline.method = parse_method(f.method);
    c.pipeline.layers = f.layers;
    c.terms = f.terms;
    c.topology = f.topology;
    if (c.pipeline.method == Method::walsh_truncated) {
        if (f.terms.empty()) {
            throw ValidationError("--method walsh requires --terms "
                                  "{two-local,hardware-efficient,full}");
        }
        c.pipeline.term_set = build_term_set(f.n, f.terms, f.topology);
    } else if (!f.terms.empty()) {
        throw ValidationError("--terms applies to --method walsh only");
    }
    c.train.epochs = f.epochs;
    c.train.learning_rate = f.lr;
    // The target keeps the user seed; the initial parameters draw from a derived stream.
    c.train.seed = mix_seed(f.seed, 1);
    // Full-method phases are removed analytically, so only moduli are trained there.
    const std::string loss =
        !f.loss.empty() ? f.loss : (c.pipeline.method == Method::full_oracle ? "sse" : "complex");
    c.train.loss = parse_loss(loss, f.phase_weight);
    if (f.optimizer == "adam") {
        c.train.optimizer.type = OptimizerType::adam;
    } else if (f.optimizer == "gd") {
        c.train.optimizer.type = OptimizerType::gradient_descent;
    } else {
        throw ValidationError("unknown optimizer '" + f.optimizer + "'");
    }
    c.train.log_every = f.log_every;
    if (f.target_loss > 0.0) {
        c.train.target_loss = f.target_loss;
    } else {
        c.train.target_loss.reset();
    }
    c.train.init_stddev = f.init_std;
    c.train.restarts = f.restarts;
    c.threads = f.threads;
    c.out_dir = f.out.empty()
                    ? default_output_root() /
                          fmt::format("train-{}-n{}-{}-L{}-s{}",
                                      f.target.starts_with("file:") ? "file" : f.target, f.n,
                                      f.method, f.layers, f.seed)
                    : std::filesystem::path(f.out);
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Learn diagonal Hamiltonians that prepare amplitude-encoded states"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    TrainFlags tf;
    std::string config_path;
    auto *train = app.add_subcommand("train", "train a state-preparation circuit");
    train->add_option("--config", config_path, "run-config JSON (overrides other flags)");
    train->add_option("--target", tf.target, "uniform, normal, linear, sine or file:<path>");
    train->add_option("--n", tf.n, "number of qubits");
    train->add_option("--method", tf.method, "full or walsh");
    train->add_option("--layers", tf.layers, "evolution layers before readout (1 or 2)");
    train->add_option("--terms", tf.terms, "two-local, hardware-efficient or full (walsh)");
    train->add_option("--topology", tf.topology, "ladder or file:<graph.json>");
    train->add_option("--epochs", tf.epochs);
    train->add_option("--lr", tf.lr, "learning rate");
    train->add_option("--seed", tf.seed);
    train->add_option("--loss", tf.loss, "sse, sse+phase or complex (default: sse for full, complex for walsh)");
    train->add_option("--phase-weight", tf.phase_weight, "weight of the phase penalty");
    train->add_option("--optimizer", tf.optimizer, "adam or gd");
    train->add_option("--log-every", tf.log_every);
    train->add_option("--target-loss", tf.target_loss, "early-stop loss, <= 0 disables");
    train->add_option("--init-std", tf.init_std, "stddev of the initial parameters");
    train->add_option("--restarts", tf.restarts, "seeded restarts, best one is kept");
    train->add_option("--out", tf.out, "output directory");
    train->add_option("--threads", tf.threads);

    std::string gen_target = "sine", gen_out = "target.txt";
    int gen_n = 4;
    std::uint64_t gen_seed = 0;
    auto *generate = app.add_subcommand("generate", "write a target amplitude file");
    generate->add_option("--target", gen_target);
    generate->add_option("--n", gen_n);
    generate->add_option("--seed", gen_seed);
    generate->add_option("--out", gen_out);

    std::string figure, repro_out;
    int repro_threads = 1;
    auto *reproduce = app.add_subcommand("reproduce", "regenerate a published table or figure");
    reproduce->add_option("figure", figure, "fig4a, fig4b, fig4c, table1 or table2")->required();
    reproduce->add_option("--out", repro_out);
    reproduce->add_option("--threads", repro_threads);

    std::vector<int> bench_n{10, 12, 14, 16};
    int bench_epochs = 500;
    std::string bench_out;
    auto *bench = app.add_subcommand("bench", "time fixed-epoch training against N");
    bench->add_option("--n", bench_n, "qubit counts")->delimiter(',');
    bench->add_option("--epochs", bench_epochs);
    bench->add_option("--out", bench_out, "CSV path");

    std::string emit_params, emit_out = "circuit.qasm";
    auto *emit = app.add_subcommand("emit-circuit", "export a Walsh-method run as OpenQASM 2.0");
    emit->add_option("params", emit_params, "params.json of a walsh run")->required();
    emit->add_option("--out", emit_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    if (train->parsed()) {
        RunConfig rc;
        try {
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw IoError("cannot open " + config_path);
                rc = run_config_from_json(nlohmann::json::parse(in));
                if (!tf.out.empty()) rc.out_dir = tf.out;
            } else {
                rc = to_run_config(tf);
            }
        } catch (const std::exception &e) {
            return report_failure(e, std::cerr);
        }
        return cmd_train(rc, std::cout, std::cerr);
    }
    if (generate->parsed()) {
        try {
            return cmd_generate(TargetSpec::parse(gen_target, gen_n, gen_seed), gen_out,
                                std::cout, std::cerr);
        } catch (const std::exception &e) {
            return report_failure(e, std::cerr);
        }
    }
    if (reproduce->parsed()) {
        const auto root = repro_out.empty() ? default_output_root() : std::filesystem::path(repro_out);
        return cmd_reproduce(figure, root, repro_threads, std::cout, std::cerr);
    }
    if (bench->parsed()) {
        const auto csv = bench_out.empty() ? default_output_root() / "bench.csv"
                                           : std::filesystem::path(bench_out);
        return cmd_bench(bench_n, bench_epochs, csv, std::cout, std::cerr);
    }
    if (emit->parsed()) return cmd_emit_circuit(emit_params, emit_out, std::cout, std::cerr);
    return kExitUsage;
}

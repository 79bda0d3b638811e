#include "walshprep/reproduce.hpp"

#include <algorithm>
#include <cmath>

#include "walshprep/datasets.hpp"
#include "walshprep/error.hpp"

namespace walshprep {

Check Check::make(std::string name, double value, std::string comparison,
                  double threshold) {
    bool passed = false;
    if (comparison == "<=") {
        passed = value <= threshold;
    } else if (comparison == ">=") {
        passed = value >= threshold;
    } else if (comparison == "<") {
        passed = value < threshold;
    } else if (comparison == "==") {
        passed = value == threshold;
    } else {
        throw ValidationError("unknown comparison '" + comparison + "'");
    }
    // NaN never passes.
    passed = passed && !std::isnan(value);
    return {std::move(name), value, std::move(comparison), threshold, passed};
}

void to_json(nlohmann::json &j, const Check &c) {
    j = {{"name", c.name},
         {"value", c.value},
         {"comparison", c.comparison},
         {"threshold", c.threshold},
         {"passed", c.passed}};
}

namespace {

GateCounts layer_counts(const TermSet &terms) {
    WalshSpectrum spectrum(terms.n_qubits());
    // Coefficients do not change the gate structure.
    for (WalshIndex r : terms.indices()) spectrum.set(r, 0.1);
    return count_gates(synthesize_evolution(spectrum));
}

} // namespace

Table1Result reproduce_table1(int n_qubits) {
    Table1Result out;
    out.two_local = layer_counts(select_terms(n_qubits, TermSelection::k_local(2)));
    out.hardware_efficient =
        layer_counts(select_terms(n_qubits, TermSelection::topology(ladder_graph(n_qubits))));
    if (n_qubits == 8) {
        out.checks.push_back(Check::make("two_local.one_qubit", out.two_local.one_qubit, "==", 36));
        out.checks.push_back(Check::make("two_local.two_qubit", out.two_local.two_qubit, "==", 56));
        out.checks.push_back(Check::make("hardware_efficient.one_qubit",
                                         out.hardware_efficient.one_qubit, "==", 18));
        out.checks.push_back(Check::make("hardware_efficient.two_qubit",
                                         out.hardware_efficient.two_qubit, "==", 20));
    }
    return out;
}

Table2Result reproduce_table2(const Table2Options &options) {
    Table2Result out;
    const int n = options.n_qubits;
    struct Dataset {
        const char *name;
        StateVector state;
    };
    const Dataset datasets[] = {{"linear", linear_state(n)}, {"sine", sine_state(n)}};
    struct Terms {
        const char *name;
        TermSet set;
        double threshold;
    };
    const Terms term_sets[] = {
        {"two_local", select_terms(n, TermSelection::k_local(2)), 1e-4},
        {"hardware_efficient", select_terms(n, TermSelection::topology(ladder_graph(n))), 1e-3},
    };

    TrainConfig tc;
    tc.epochs = options.epochs;
    tc.learning_rate = options.learning_rate;
    tc.restarts = options.restarts;
    tc.seed = options.seed;
    tc.loss = options.loss;
    tc.log_every = 10;

    for (const auto &d : datasets) {
        for (const auto &t : term_sets) {
            PipelineConfig pc{n, Method::walsh_truncated, 2, t.set};
            Table2Entry e;
            e.dataset = d.name;
            e.terms = t.name;
            e.report = fit(d.state, pc, tc);
            e.infidelity = e.report.final_infidelity;
            e.final_loss = e.report.final_loss;
            e.epochs_run = e.report.epochs_run;
            e.wall_clock_seconds = e.report.wall_clock_seconds;
            out.checks.push_back(Check::make(std::string(d.name) + "." + t.name + ".infidelity",
                                             e.infidelity, "<=", t.threshold));
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

LayerComparisonResult reproduce_layer_comparison(const LayerComparisonOptions &options) {
    LayerComparisonResult out;
    for (int trial = 0; trial < options.trials; ++trial) {
        const std::uint64_t cell = mix_seed(options.seed, std::uint64_t(trial));
        const StateVector target = random_state(Distribution::uniform, options.n_qubits, cell);
        for (int layers : {1, 2}) {
            PipelineConfig pc{options.n_qubits, Method::full_oracle, layers, std::nullopt};
            TrainConfig tc;
            tc.epochs = options.epochs;
            tc.learning_rate = options.learning_rate;
            tc.seed = mix_seed(cell, 1);
            tc.loss = LossKind::amplitude();
            tc.log_every = 1;
            LayerRun run{layers, trial, fit(target, pc, tc)};
            const std::string name = "trial" + std::to_string(trial) + ".layers" +
                                     std::to_string(layers) + ".final_loss";
            out.checks.push_back(layers == 2
                                     ? Check::make(name, run.report.final_loss, "<=", 1e-10)
                                     : Check::make(name, run.report.final_loss, ">=", 1e-6));
            out.runs.push_back(std::move(run));
        }
    }
    return out;
}

DatasetSizeResult reproduce_dataset_sizes(const DatasetSizeOptions &options) {
    SweepOptions so;
    so.sizes = options.sizes;
    so.trials = options.trials;
    so.method = Method::full_oracle;
    so.layers = 2;
    so.train.epochs = options.epochs;
    so.train.learning_rate = options.learning_rate;
    so.train.seed = options.seed;
    so.train.loss = LossKind::amplitude();
    so.train.log_every = options.epochs;
    so.threads = options.threads;

    DatasetSizeResult out{sweep_dataset_sizes(so), {}};
    for (int n : options.sizes) {
        double uniform = std::nan(""), normal = std::nan("");
        for (const auto &s : out.sweep.summaries) {
            if (s.n_qubits != n) continue;
            const bool clean = s.failed_trials == 0 && std::isfinite(s.mean_loss);
            const double mean = clean ? s.mean_loss : std::nan("");
            (s.distribution == Distribution::uniform ? uniform : normal) = mean;
        }
        const double hi = std::max(uniform, normal);
        const double lo = std::min(uniform, normal);
        // Both exactly zero counts as equal.
        const double ratio = hi == 0.0 ? 1.0 : (lo > 0.0 ? hi / lo : INFINITY);
        const std::string prefix = "n" + std::to_string(n);
        // Finite with no failed trials; NaN marks a divergence.
        out.checks.push_back(Check::make(prefix + ".uniform.mean_final_loss", uniform, "<", INFINITY));
        out.checks.push_back(Check::make(prefix + ".normal.mean_final_loss", normal, "<", INFINITY));
        out.checks.push_back(Check::make(prefix + ".ratio", std::isnan(uniform + normal) ? NAN : ratio,
                                         "<", 10.0));
    }
    return out;
}

} // namespace walshprep

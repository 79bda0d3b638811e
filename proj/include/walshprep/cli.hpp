#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walshprep/circuit.hpp"
#include "walshprep/datasets.hpp"
#include "walshprep/pipeline.hpp"
#include "walshprep/train.hpp"

namespace walshprep {

inline constexpr const char *kVersion = "0.1.0";

/// Process exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Everything needed to reproduce one training run.
struct RunConfig {
    TargetSpec target;
    PipelineConfig pipeline;
    TrainConfig train;
    /// "two-local", "hardware-efficient", "full" or empty (full method).
    std::string terms;
    /// "ladder" or "file:<path>"; used by hardware-efficient terms.
    std::string topology = "ladder";
    std::filesystem::path out_dir;
    int threads = 1;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

void to_json(nlohmann::json &j, const RunConfig &c);
RunConfig run_config_from_json(const nlohmann::json &j);

/// Term set named on the command line for an n-qubit register.
TermSet build_term_set(int n_qubits, const std::string &terms, const std::string &topology);

/// Output root: $WALSH_PREP_OUT when set, else "runs".
std::filesystem::path default_output_root();

/**
 * Train and write config.json, report.json, loss.csv, params.json and
 * prepared_state.bin into config.out_dir.
 */
TrainReport run_training(const RunConfig &config, std::ostream &log);

/// Parameter file contents for a finished run.
nlohmann::json params_json(const PipelineConfig &config, const ParameterVector &params,
                           double phase_eps);

/// Gate list of the whole prepared-state circuit described by a Walsh params.json.
GateList circuit_from_params(const nlohmann::json &params);

/// Map an exception escaping a command to its exit code, printing a diagnostic.
int report_failure(const std::exception &e, std::ostream &err);

int cmd_train(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_generate(const TargetSpec &target, const std::filesystem::path &path,
                 std::ostream &out, std::ostream &err);
int cmd_reproduce(const std::string &figure, const std::filesystem::path &out_dir,
                  int threads, std::ostream &out, std::ostream &err);
int cmd_bench(const std::vector<int> &n_list, int epochs, const std::filesystem::path &csv,
              std::ostream &out, std::ostream &err);
int cmd_emit_circuit(const std::filesystem::path &params_path,
                     const std::filesystem::path &out_path, std::ostream &out,
                     std::ostream &err);

} // namespace walshprep

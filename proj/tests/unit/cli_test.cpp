#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "walshprep/cli.hpp"
#include "walshprep/error.hpp"

using namespace walshprep;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "walshprep_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path &p) { return nlohmann::json::parse(slurp(p)); }

/// Run the CLI binary, returning its exit status.
int run_cli(const std::string &args) {
    const std::string cmd = std::string(WALSH_PREP_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig walsh_run(const fs::path &out) {
    RunConfig c;
    c.target = TargetSpec::parse("sine", 8, 0);
    c.pipeline = {8, Method::walsh_truncated, 2, build_term_set(8, "hardware-efficient", "ladder")};
    c.train.epochs = 30;
    c.terms = "hardware-efficient";
    c.out_dir = out;
    return c;
}

} // namespace

TEST(RunConfig, JsonRoundTrip) {
    auto c = walsh_run("/tmp/x");
    c.train.loss = LossKind::amplitude_plus_phase(0.5);
    c.train.restarts = 2;
    c.threads = 3;
    const nlohmann::json j = c;
    EXPECT_EQ(run_config_from_json(nlohmann::json::parse(j.dump())), c);

    RunConfig full;
    full.target = TargetSpec::parse("uniform", 4, 7);
    full.pipeline = {4, Method::full_oracle, 1, std::nullopt};
    full.out_dir = "runs/a";
    EXPECT_EQ(run_config_from_json(nlohmann::json::parse(nlohmann::json(full).dump())), full);
    EXPECT_THROW(run_config_from_json(nlohmann::json::parse("{}")), ParseError);
}

TEST(BuildTermSet, NamesAndTopologyFile) {
    EXPECT_EQ(build_term_set(6, "two-local", "").size(), 21u);
    EXPECT_EQ(build_term_set(6, "full", "").size(), 63u);
    EXPECT_EQ(build_term_set(6, "hardware-efficient", "ladder").size(), 13u);
    const auto dir = scratch("topology");
    std::ofstream(dir / "ring.json") << R"({"n_qubits": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]})";
    EXPECT_EQ(build_term_set(4, "hardware-efficient", "file:" + (dir / "ring.json").string()).size(), 8u);
    EXPECT_THROW(build_term_set(4, "three-local", ""), ValidationError);
    EXPECT_THROW(build_term_set(4, "hardware-efficient", "grid"), ValidationError);
}

TEST(CmdTrain, FullMethodExampleConverges) {
    const auto dir = scratch("train_full");
    ASSERT_EQ(run_cli("train --target uniform --n 4 --method full --layers 2 --epochs 200 --seed 7 --out " +
                      dir.string()),
              0);
    for (const char *f : {"config.json", "report.json", "loss.csv", "params.json", "prepared_state.bin"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    const auto report = read_json(dir / "report.json");
    EXPECT_LE(report.at("final_loss").get<double>(), 1e-10);
    const auto config = run_config_from_json(report.at("config"));
    EXPECT_EQ(run_config_from_json(read_json(dir / "config.json")), config);
    EXPECT_EQ(config.train.loss, LossKind::amplitude());
    const auto params = read_json(dir / "params.json");
    EXPECT_EQ(params.at("hamiltonians").size(), 2u);
    EXPECT_EQ(params.at("phase_correction").size(), 16u);
    const auto prepared = load_state_binary(dir / "prepared_state.bin");
    EXPECT_NEAR(infidelity(prepared, config.target.build()), report.at("final_infidelity").get<double>(), 1e-15);
}

TEST(CmdTrain, LibraryEntryPointWritesConfig) {
    const auto dir = scratch("train_lib");
    RunConfig c;
    c.target = TargetSpec::parse("normal", 3, 2);
    c.pipeline = {3, Method::full_oracle, 1, std::nullopt};
    c.train.epochs = 10;
    c.out_dir = dir;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_train(c, out, err), kExitOk) << err.str();
    EXPECT_EQ(run_config_from_json(read_json(dir / "config.json")), c);
    EXPECT_NE(out.str().find("final_loss"), std::string::npos);
}

TEST(CmdTrain, RerunIsByteIdentical) {
    const auto a = scratch("rerun_a"), b = scratch("rerun_b");
    auto c = walsh_run(a);
    std::ostringstream out, err;
    ASSERT_EQ(cmd_train(c, out, err), kExitOk) << err.str();
    c.out_dir = b;
    ASSERT_EQ(cmd_train(c, out, err), kExitOk) << err.str();
    EXPECT_EQ(slurp(a / "loss.csv"), slurp(b / "loss.csv"));
    EXPECT_EQ(slurp(a / "params.json"), slurp(b / "params.json"));
}

TEST(CmdTrain, ValidationFailureIsUsageError) {
    RunConfig c;
    c.target = TargetSpec::parse("sine", 4, 0);
    c.pipeline = {4, Method::walsh_truncated, 2, std::nullopt};
    c.out_dir = scratch("invalid");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_train(c, out, err), kExitUsage);
    EXPECT_FALSE(err.str().empty());
}

TEST(ReportFailure, ExitCodes) {
    std::ostringstream err;
    EXPECT_EQ(report_failure(ValidationError("x"), err), kExitUsage);
    EXPECT_EQ(report_failure(UnsupportedError("x"), err), kExitUsage);
    EXPECT_EQ(report_failure(IoError("x"), err), kExitRuntime);
    EXPECT_EQ(report_failure(DivergenceError(3, 0.5), err), kExitRuntime);
}

TEST(CmdEmitCircuit, HardwareEfficientCounts) {
    const auto dir = scratch("emit");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_train(walsh_run(dir), out, err), kExitOk) << err.str();
    ASSERT_EQ(cmd_emit_circuit(dir / "params.json", dir / "circuit.qasm", out, err), kExitOk) << err.str();
    std::ifstream in(dir / "circuit.qasm");
    std::string line;
    int h = 0, rz = 0, cx = 0, lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        h += line.rfind("h ", 0) == 0;
        rz += line.rfind("rz(", 0) == 0;
        cx += line.rfind("cx ", 0) == 0;
    }
    EXPECT_EQ(h, 24);
    EXPECT_EQ(rz, 54);
    EXPECT_EQ(cx, 60);
    EXPECT_EQ(lines, 3 + 24 + 54 + 60);
}

TEST(CmdEmitCircuit, CircuitReproducesTrainedState) {
    const auto dir = scratch("emit_state");
    std::ostringstream out, err;
    auto c = walsh_run(dir);
    c.target = TargetSpec::parse("linear", 3, 0);
    c.pipeline = {3, Method::walsh_truncated, 2, build_term_set(3, "full", "")};
    ASSERT_EQ(cmd_train(c, out, err), kExitOk);
    const auto gates = circuit_from_params(read_json(dir / "params.json"));
    // Simulate the gate list directly on the statevector.
    std::vector<Complex> psi(8, 0.0);
    psi[0] = 1.0;
    for (const auto &g : gates.gates()) {
        const std::size_t bit = std::size_t{1} << g.target;
        for (std::size_t j = 0; j < 8; ++j) {
            if (j & bit) continue;
            auto &a = psi[j];
            auto &b = psi[j | bit];
            if (g.kind == GateKind::hadamard) {
                const Complex s = (a + b) / std::sqrt(2.0), d = (a - b) / std::sqrt(2.0);
                a = s;
                b = d;
            } else if (g.kind == GateKind::rz) {
                a *= std::polar(1.0, -g.angle / 2);
                b *= std::polar(1.0, g.angle / 2);
            } else if ((j >> g.control) & 1u) {
                std::swap(a, b);
            }
        }
    }
    const auto prepared = load_state_binary(dir / "prepared_state.bin");
    EXPECT_NEAR(fidelity(StateVector(psi), prepared), 1.0, 1e-12);
}

TEST(CmdEmitCircuit, FullMethodRejected) {
    const auto dir = scratch("emit_full");
    RunConfig c;
    c.target = TargetSpec::parse("sine", 3, 0);
    c.pipeline = {3, Method::full_oracle, 2, std::nullopt};
    c.train.epochs = 5;
    c.out_dir = dir;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_train(c, out, err), kExitOk);
    EXPECT_EQ(cmd_emit_circuit(dir / "params.json", dir / "c.qasm", out, err), kExitUsage);
    EXPECT_NE(err.str().find("oracle"), std::string::npos);
}

TEST(CmdReproduce, Table1) {
    const auto dir = scratch("repro");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_reproduce("table1", dir, 1, out, err), kExitOk);
    const auto t = read_json(dir / "table1" / "table1.json");
    EXPECT_EQ(t.at("two_local").at("one_qubit"), 36);
    EXPECT_EQ(t.at("two_local").at("two_qubit"), 56);
    EXPECT_EQ(t.at("hardware_efficient").at("one_qubit"), 18);
    EXPECT_EQ(t.at("hardware_efficient").at("two_qubit"), 20);
    EXPECT_TRUE(read_json(dir / "table1" / "checks.json").at("all_passed").get<bool>());
    EXPECT_TRUE(fs::exists(dir / "table1" / "provenance.json"));
    EXPECT_EQ(cmd_reproduce("fig9", dir, 1, out, err), kExitUsage);
}

TEST(CmdBench, SingleRow) {
    const auto dir = scratch("bench");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_bench({4}, 5, dir / "bench.csv", out, err), kExitOk);
    std::ifstream in(dir / "bench.csv");
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "N,seconds");
    EXPECT_FALSE(std::getline(in, extra));
    std::smatch m;
    ASSERT_TRUE(std::regex_match(row, m, std::regex(R"(16,([0-9.]+))")));
    EXPECT_GT(std::stod(m[1]), 0.0);
}

TEST(CmdGenerate, WritesLoadableFile) {
    const auto dir = scratch("generate");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_generate(TargetSpec::parse("sine", 4, 0), dir / "t.txt", out, err), kExitOk);
    EXPECT_EQ(load_amplitudes(dir / "t.txt").size(), 16u);
}

TEST(DefaultOutputRoot, EnvironmentOverride) {
    ::setenv("WALSH_PREP_OUT", "/tmp/elsewhere", 1);
    EXPECT_EQ(default_output_root(), fs::path("/tmp/elsewhere"));
    ::unsetenv("WALSH_PREP_OUT");
    EXPECT_EQ(default_output_root(), fs::path("runs"));
}

TEST(Binary, ExitCodes) {
    const auto dir = scratch("binary");
    EXPECT_EQ(run_cli("train --n 4 --method walsh --out " + (dir / "a").string()), 2);
    EXPECT_EQ(run_cli("train --n 4 --target uniform --epochs 20 --out " + (dir / "b").string()), 0);
    EXPECT_EQ(run_cli("train --n 4 --layers 3 --out " + (dir / "c").string()), 2);
    EXPECT_EQ(run_cli("train --n 4 --target file:/nonexistent --out " + (dir / "d").string()), 1);
    EXPECT_EQ(run_cli("train --bogus-flag"), 2);
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("reproduce table1 --out " + dir.string()), 0);
    EXPECT_EQ(run_cli("--version"), 0);
}

TEST(Binary, ConfigFileReplaysRun) {
    const auto dir = scratch("replay");
    ASSERT_EQ(run_cli("train --n 3 --target sine --method walsh --terms two-local --epochs 25 --seed 4 --out " +
                      (dir / "a").string()),
              0);
    ASSERT_EQ(run_cli("train --config " + (dir / "a" / "config.json").string() + " --out " + (dir / "b").string()), 0);
    EXPECT_EQ(slurp(dir / "a" / "loss.csv"), slurp(dir / "b" / "loss.csv"));
}

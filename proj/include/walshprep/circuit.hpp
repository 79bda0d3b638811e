#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walshprep/walsh.hpp"

namespace walshprep {

enum class GateKind { hadamard, rz, cnot };

/**
 * One gate. rz(theta) is diag(e^{-i theta/2}, e^{+i theta/2}) on `target`;
 * cnot uses `control`; hadamard only `target`.
 */
struct Gate {
    GateKind kind;
    int target;
    int control = -1;
    double angle = 0.0;

    static Gate h(int q) { return {GateKind::hadamard, q}; }
    static Gate rz(int q, double theta) { return {GateKind::rz, q, -1, theta}; }
    static Gate cx(int control, int target) { return {GateKind::cnot, target, control}; }

    friend bool operator==(const Gate &, const Gate &) = default;
};

class GateList {
  public:
    explicit GateList(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Gate> &gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }
    bool empty() const noexcept { return gates_.empty(); }

    /// Throws ValidationError on bad qubit indices or a non-finite angle.
    void push(const Gate &g);
    void append(const GateList &other);

  private:
    int n_qubits_;
    std::vector<Gate> gates_;
};

struct GateCounts {
    int one_qubit = 0;
    int two_qubit = 0;

    friend bool operator==(const GateCounts &, const GateCounts &) = default;
};

/**
 * exp(-i c W_r) as a CNOT parity ladder onto the highest set qubit of r, an
 * rz(2c) there, and the mirrored ladder. Uses 2(popcount(r) - 1) CNOTs.
 */
GateList synthesize_walsh_term(WalshIndex r, double c, int n_qubits);

/// All terms in ascending r. Every term must have r != 0.
GateList synthesize_evolution(const WalshSpectrum &spectrum);

/// h on every qubit.
GateList hadamard_layer(int n_qubits);

/// rz and h count as one-qubit gates, cnot as two-qubit.
GateCounts count_gates(const GateList &gates);

/// OpenQASM 2.0 text using h, rz and cx on a single register q.
std::string to_qasm(const GateList &gates);
void export_qasm(const GateList &gates, const std::filesystem::path &path);

void to_json(nlohmann::json &j, const GateCounts &c);

} // namespace walshprep

#include "walshprep/circuit.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "walshprep/error.hpp"

namespace walshprep {

GateList::GateList(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 62) {
        throw SizeError(fmt::format("n_qubits {} out of range", n_qubits));
    }
}

void GateList::push(const Gate &g) {
    auto in_range = [&](int q) { return q >= 0 && q < n_qubits_; };
    if (!in_range(g.target)) {
        throw ValidationError(fmt::format("gate target {} out of range", g.target));
    }
    if (g.kind == GateKind::cnot && (!in_range(g.control) || g.control == g.target)) {
        throw ValidationError(fmt::format("invalid cnot control {}", g.control));
    }
    if (!std::isfinite(g.angle)) throw ValidationError("non-finite rotation angle");
    gates_.push_back(g);
}

void GateList::append(const GateList &other) {
    if (other.n_qubits_ != n_qubits_) throw ShapeError("gate lists on different registers");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

GateList synthesize_walsh_term(WalshIndex r, double c, int n_qubits) {
    GateList out(n_qubits);
    if (r == 0) {
        throw UnsupportedError("W_0 is a global phase and has no circuit");
    }
    if (r >= (WalshIndex{1} << n_qubits)) {
        throw SizeError(fmt::format("Walsh index {} out of range for {} qubits", r, n_qubits));
    }
    std::vector<int> qubits;
    for (int q = 0; q < n_qubits; ++q) {
        if ((r >> q) & 1U) qubits.push_back(q);
    }
    for (std::size_t i = 0; i + 1 < qubits.size(); ++i) {
        out.push(Gate::cx(qubits[i], qubits[i + 1]));
    }
    out.push(Gate::rz(qubits.back(), 2.0 * c));
    for (std::size_t i = qubits.size() - 1; i > 0; --i) {
        out.push(Gate::cx(qubits[i - 1], qubits[i]));
    }
    return out;
}

GateList synthesize_evolution(const WalshSpectrum &spectrum) {
    GateList out(spectrum.n_qubits());
    for (const auto &[r, c] : spectrum.terms()) {
        if (r == 0) {
            throw UnsupportedError("spectrum contains the identity term W_0");
        }
        out.append(synthesize_walsh_term(r, c, spectrum.n_qubits()));
    }
    return out;
}

GateList hadamard_layer(int n_qubits) {
    GateList out(n_qubits);
    for (int q = 0; q < n_qubits; ++q) out.push(Gate::h(q));
    return out;
}

GateCounts count_gates(const GateList &gates) {
    GateCounts counts;
    for (const auto &g : gates.gates()) {
        if (g.kind == GateKind::cnot) {
            ++counts.two_qubit;
        } else {
            ++counts.one_qubit;
        }
    }
    return counts;
}

std::string to_qasm(const GateList &gates) {
    std::string out = fmt::format("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n",
                                  gates.n_qubits());
    for (const auto &g : gates.gates()) {
        switch (g.kind) {
        case GateKind::hadamard:
            out += fmt::format("h q[{}];\n", g.target);
            break;
        case GateKind::rz:
            out += fmt::format("rz({:.17g}) q[{}];\n", g.angle, g.target);
            break;
        case GateKind::cnot:
            out += fmt::format("cx q[{}],q[{}];\n", g.control, g.target);
            break;
        }
    }
    return out;
}

void export_qasm(const GateList &gates, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << to_qasm(gates);
    if (!out) throw IoError("write failed for " + path.string());
}

void to_json(nlohmann::json &j, const GateCounts &c) {
    j = {{"one_qubit", c.one_qubit}, {"two_qubit", c.two_qubit}};
}

} // namespace walshprep

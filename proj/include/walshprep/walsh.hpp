#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "walshprep/statevec.hpp"

namespace walshprep {

using WalshIndex = std::uint64_t;

/// (-1)^{popcount(r & j)}: the j-th diagonal entry of the Walsh operator W_r.
int walsh_sign(WalshIndex r, std::uint64_t j) noexcept;

/**
 * Sparse expansion H = sum_r c_r W_r of a diagonal Hamiltonian over the Walsh
 * operators W_r = Z^{r_{n-1}} (x) ... (x) Z^{r_0}. Bit q of r selects a Z on
 * qubit q.
 */
class WalshSpectrum {
  public:
    explicit WalshSpectrum(int n_qubits);
    WalshSpectrum(int n_qubits, std::map<WalshIndex, double> terms);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return std::size_t{1} << n_qubits_; }

    const std::map<WalshIndex, double> &terms() const noexcept { return terms_; }

    /// Set (or overwrite) the coefficient of W_r.
    void set(WalshIndex r, double c);

    /// Coefficient of W_r, zero when absent.
    double coefficient(WalshIndex r) const noexcept;

    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    friend bool operator==(const WalshSpectrum &, const WalshSpectrum &) = default;

  private:
    int n_qubits_;
    std::map<WalshIndex, double> terms_;
};

/// Full spectrum c_r = (1/N) sum_j (-1)^{r.j} h_j, in O(N log N).
WalshSpectrum walsh_coefficients(const DiagonalHamiltonian &h);

/// h_j = sum_r c_r (-1)^{r.j}.
DiagonalHamiltonian expand_diagonal(const WalshSpectrum &spectrum);

/**
 * Same expansion for coefficients given as parallel (indices, coeffs) arrays,
 * written into @p out (length 2^n). Uses a direct sum for a handful of terms
 * and a dense transform otherwise.
 */
void expand_diagonal(std::span<const WalshIndex> indices,
                     std::span<const double> coeffs, std::span<double> out);

/// Undirected qubit connectivity graph.
class TopologyGraph {
  public:
    /// Throws TopologyError on self loops, duplicates or out-of-range qubits.
    TopologyGraph(int n_qubits, std::vector<std::pair<int, int>> edges);

    int n_qubits() const noexcept { return n_qubits_; }

    /// Edges with first < second, sorted.
    const std::vector<std::pair<int, int>> &edges() const noexcept { return edges_; }

    bool has_edge(int a, int b) const noexcept;

    friend bool operator==(const TopologyGraph &, const TopologyGraph &) = default;

  private:
    int n_qubits_;
    std::vector<std::pair<int, int>> edges_;
};

/**
 * Two rails of n/2 qubits: rail A is 0..n/2-1, rail B is n/2..n-1, with
 * neighbours along each rail connected and rung i joining i and i + n/2.
 */
TopologyGraph ladder_graph(int n_qubits);

enum class SelectionKind { full, k_local, topology };

/// How a trainable Walsh support is chosen.
struct TermSelection {
    SelectionKind kind = SelectionKind::full;
    int locality = 0;                     // k for k_local
    std::optional<TopologyGraph> graph;   // for topology

    static TermSelection full() { return {}; }
    static TermSelection k_local(int k) { return {SelectionKind::k_local, k, {}}; }
    static TermSelection topology(TopologyGraph g) {
        return {SelectionKind::topology, 0, std::move(g)};
    }

    friend bool operator==(const TermSelection &, const TermSelection &) = default;
};

/// Sorted, distinct Walsh indices forming a trainable support. Never holds 0.
class TermSet {
  public:
    TermSet(int n_qubits, TermSelection selection, std::vector<WalshIndex> indices);

    int n_qubits() const noexcept { return n_qubits_; }
    const TermSelection &selection() const noexcept { return selection_; }
    const std::vector<WalshIndex> &indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

    /// Position of r in indices(), if present.
    std::optional<std::size_t> position(WalshIndex r) const noexcept;

    friend bool operator==(const TermSet &, const TermSet &) = default;

  private:
    int n_qubits_;
    TermSelection selection_;
    std::vector<WalshIndex> indices_;
};

/**
 * full: every r in [1, N). k_local(k): popcount(r) in [1, k].
 * topology: all single-qubit masks plus pair masks on graph edges.
 */
TermSet select_terms(int n_qubits, const TermSelection &selection);

/**
 * Fixed-point model of the phase oracle register: each coefficient is reduced
 * into [0, 2*pi) and snapped to the nearest point (on the circle) of the grid
 * k * 2^-m, which fits in 3 integer bits plus @p fraction_bits fractional bits.
 */
DiagonalHamiltonian quantize_hamiltonian(const DiagonalHamiltonian &h,
                                         int fraction_bits);

void to_json(nlohmann::json &j, const WalshSpectrum &s);
WalshSpectrum walsh_spectrum_from_json(const nlohmann::json &j);

void to_json(nlohmann::json &j, const TopologyGraph &g);
TopologyGraph topology_from_json(const nlohmann::json &j);

void to_json(nlohmann::json &j, const TermSet &t);
TermSet term_set_from_json(const nlohmann::json &j);

} // namespace walshprep

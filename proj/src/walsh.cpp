#include "walshprep/walsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "walshprep/error.hpp"

namespace walshprep {

int walsh_sign(WalshIndex r, std::uint64_t j) noexcept {
    return (std::popcount(r & j) & 1) ? -1 : 1;
}

namespace {

void check_qubits(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 62) {
        throw SizeError(fmt::format("n_qubits {} out of range", n_qubits));
    }
}

} // namespace

WalshSpectrum::WalshSpectrum(int n_qubits) : n_qubits_(n_qubits) {
    check_qubits(n_qubits);
}

WalshSpectrum::WalshSpectrum(int n_qubits, std::map<WalshIndex, double> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
    check_qubits(n_qubits);
    if (!terms_.empty() && terms_.rbegin()->first >= dimension()) {
        throw SizeError(fmt::format("Walsh index {} out of range for {} qubits",
                                    terms_.rbegin()->first, n_qubits));
    }
}

void WalshSpectrum::set(WalshIndex r, double c) {
    if (r >= dimension()) {
        throw SizeError(
            fmt::format("Walsh index {} out of range for {} qubits", r, n_qubits_));
    }
    terms_[r] = c;
}

double WalshSpectrum::coefficient(WalshIndex r) const noexcept {
    const auto it = terms_.find(r);
    return it == terms_.end() ? 0.0 : it->second;
}

WalshSpectrum walsh_coefficients(const DiagonalHamiltonian &h) {
    std::vector<double> c(h.coeffs().begin(), h.coeffs().end());
    fwht_unnormalized(c);
    const double scale = 1.0 / double(c.size());
    std::map<WalshIndex, double> terms;
    for (std::size_t r = 0; r < c.size(); ++r) terms.emplace_hint(terms.end(), r, c[r] * scale);
    return WalshSpectrum(h.n_qubits(), std::move(terms));
}

void expand_diagonal(std::span<const WalshIndex> indices,
                     std::span<const double> coeffs, std::span<double> out) {
    if (indices.size() != coeffs.size()) {
        throw ShapeError("Walsh index and coefficient arrays differ in length");
    }
    const std::size_t n = out.size();
    const auto log_n = std::size_t(std::countr_zero(n));
    std::fill(out.begin(), out.end(), 0.0);
    if (indices.size() <= 4 * log_n) {
        for (std::size_t t = 0; t < indices.size(); ++t) {
            const WalshIndex r = indices[t];
            const double c = coeffs[t];
            for (std::size_t j = 0; j < n; ++j) {
                out[j] += (std::popcount(r & j) & 1) ? -c : c;
            }
        }
        return;
    }
    for (std::size_t t = 0; t < indices.size(); ++t) out[indices[t]] += coeffs[t];
    fwht_unnormalized(out);
}

DiagonalHamiltonian expand_diagonal(const WalshSpectrum &spectrum) {
    std::vector<WalshIndex> indices;
    std::vector<double> coeffs;
    indices.reserve(spectrum.size());
    coeffs.reserve(spectrum.size());
    for (const auto &[r, c] : spectrum.terms()) {
        indices.push_back(r);
        coeffs.push_back(c);
    }
    std::vector<double> h(spectrum.dimension());
    expand_diagonal(indices, coeffs, h);
    return DiagonalHamiltonian(std::move(h));
}

TopologyGraph::TopologyGraph(int n_qubits, std::vector<std::pair<int, int>> edges)
    : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 62) {
        throw TopologyError(fmt::format("graph n_qubits {} out of range", n_qubits));
    }
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n_qubits || b >= n_qubits) {
            throw TopologyError(fmt::format("edge ({}, {}) out of range", a, b));
        }
        if (a == b) throw TopologyError(fmt::format("self loop on qubit {}", a));
        edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw TopologyError("duplicate edge in topology graph");
    }
}

bool TopologyGraph::has_edge(int a, int b) const noexcept {
    const std::pair<int, int> e{std::min(a, b), std::max(a, b)};
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

TopologyGraph ladder_graph(int n_qubits) {
    if (n_qubits < 4 || n_qubits % 2 != 0) {
        throw TopologyError(fmt::format(
            "ladder topology needs an even qubit count >= 4, got {}", n_qubits));
    }
    const int rail = n_qubits / 2;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < rail; ++i) {
        edges.emplace_back(i, i + 1);
        edges.emplace_back(rail + i, rail + i + 1);
    }
    for (int i = 0; i < rail; ++i) edges.emplace_back(i, rail + i);
    return TopologyGraph(n_qubits, std::move(edges));
}

TermSet::TermSet(int n_qubits, TermSelection selection,
                 std::vector<WalshIndex> indices)
    : n_qubits_(n_qubits), selection_(std::move(selection)),
      indices_(std::move(indices)) {
    check_qubits(n_qubits);
    if (!std::is_sorted(indices_.begin(), indices_.end()) ||
        std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw ValidationError("term indices must be sorted and distinct");
    }
    const WalshIndex n = WalshIndex{1} << n_qubits;
    for (WalshIndex r : indices_) {
        if (r == 0) throw ValidationError("term set may not contain the identity index 0");
        if (r >= n) {
            throw SizeError(fmt::format("Walsh index {} out of range for {} qubits",
                                        r, n_qubits));
        }
        switch (selection_.kind) {
        case SelectionKind::full:
            break;
        case SelectionKind::k_local:
            if (std::popcount(r) > selection_.locality) {
                throw ValidationError(fmt::format(
                    "index {} exceeds locality {}", r, selection_.locality));
            }
            break;
        case SelectionKind::topology:
            if (std::popcount(r) > 2) {
                throw ValidationError(fmt::format("index {} is not one- or two-local", r));
            }
            if (std::popcount(r) == 2) {
                const int a = std::countr_zero(r);
                const int b = 63 - std::countl_zero(r);
                if (!selection_.graph || !selection_.graph->has_edge(a, b)) {
                    throw ValidationError(fmt::format(
                        "index {} couples qubits {} and {} without a graph edge", r, a, b));
                }
            }
            break;
        }
    }
}

std::optional<std::size_t> TermSet::position(WalshIndex r) const noexcept {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), r);
    if (it == indices_.end() || *it != r) return std::nullopt;
    return std::size_t(it - indices_.begin());
}

TermSet select_terms(int n_qubits, const TermSelection &selection) {
    check_qubits(n_qubits);
    if (n_qubits > 30 && selection.kind == SelectionKind::full) {
        throw SizeError("full term set too large to enumerate");
    }
    const WalshIndex n = WalshIndex{1} << n_qubits;
    std::vector<WalshIndex> indices;
    switch (selection.kind) {
    case SelectionKind::full:
        indices.reserve(n - 1);
        for (WalshIndex r = 1; r < n; ++r) indices.push_back(r);
        break;
    case SelectionKind::k_local: {
        if (selection.locality < 1) {
            throw ValidationError("locality must be at least 1");
        }
        // Enumerate all masks up to popcount k without scanning [0, N).
        std::vector<WalshIndex> frontier{0};
        for (int level = 1; level <= std::min(selection.locality, n_qubits); ++level) {
            std::vector<WalshIndex> next;
            for (WalshIndex base : frontier) {
                const int start = base == 0 ? 0 : 64 - std::countl_zero(base);
                for (int q = start; q < n_qubits; ++q) next.push_back(base | (WalshIndex{1} << q));
            }
            indices.insert(indices.end(), next.begin(), next.end());
            frontier = std::move(next);
        }
        std::sort(indices.begin(), indices.end());
        break;
    }
    case SelectionKind::topology: {
        if (!selection.graph) throw TopologyError("topology selection without a graph");
        if (selection.graph->n_qubits() != n_qubits) {
            throw TopologyError(fmt::format("graph has {} qubits, register has {}",
                                            selection.graph->n_qubits(), n_qubits));
        }
        for (int q = 0; q < n_qubits; ++q) indices.push_back(WalshIndex{1} << q);
        for (auto [a, b] : selection.graph->edges()) {
            indices.push_back((WalshIndex{1} << a) | (WalshIndex{1} << b));
        }
        std::sort(indices.begin(), indices.end());
        break;
    }
    }
    return TermSet(n_qubits, selection, std::move(indices));
}

DiagonalHamiltonian quantize_hamiltonian(const DiagonalHamiltonian &h,
                                         int fraction_bits) {
    if (fraction_bits < 0 || fraction_bits > 40) {
        throw ValidationError(fmt::format("fraction bits {} out of range", fraction_bits));
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double scale = std::ldexp(1.0, fraction_bits);
    // Largest grid point strictly below 2*pi.
    const double top = std::ceil(two_pi * scale) - 1.0;
    std::vector<double> out(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double x = wrap_two_pi(h[j]) * scale;
        double k = std::nearbyint(x);
        if (k > top) {
            // Between the top grid point and 2*pi, which aliases to 0.
            k = (x - top) <= (two_pi * scale - x) ? top : 0.0;
        }
        out[j] = k / scale;
    }
    return DiagonalHamiltonian(std::move(out));
}

void to_json(nlohmann::json &j, const WalshSpectrum &s) {
    auto terms = nlohmann::json::array();
    for (const auto &[r, c] : s.terms()) terms.push_back({{"r", r}, {"c", c}});
    j = {{"n_qubits", s.n_qubits()}, {"terms", std::move(terms)}};
}

WalshSpectrum walsh_spectrum_from_json(const nlohmann::json &j) {
    try {
        WalshSpectrum s(j.at("n_qubits").get<int>());
        for (const auto &t : j.at("terms")) {
            const auto r = t.at("r").get<WalshIndex>();
            if (s.terms().count(r)) {
                throw ParseError(fmt::format("duplicate Walsh index {}", r));
            }
            s.set(r, t.at("c").get<double>());
        }
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed Walsh spectrum: ") + e.what());
    }
}

void to_json(nlohmann::json &j, const TopologyGraph &g) {
    auto edges = nlohmann::json::array();
    for (auto [a, b] : g.edges()) edges.push_back({a, b});
    j = {{"n_qubits", g.n_qubits()}, {"edges", std::move(edges)}};
}

TopologyGraph topology_from_json(const nlohmann::json &j) {
    try {
        std::vector<std::pair<int, int>> edges;
        for (const auto &e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return TopologyGraph(j.at("n_qubits").get<int>(), std::move(edges));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed topology graph: ") + e.what());
    }
}

namespace {

const char *selection_name(SelectionKind kind) {
    switch (kind) {
    case SelectionKind::full: return "full";
    case SelectionKind::k_local: return "k_local";
    case SelectionKind::topology: return "topology";
    }
    return "?";
}

} // namespace

void to_json(nlohmann::json &j, const TermSet &t) {
    j = {{"n_qubits", t.n_qubits()},
         {"selection", selection_name(t.selection().kind)},
         {"indices", t.indices()}};
    if (t.selection().kind == SelectionKind::k_local) j["k"] = t.selection().locality;
    if (t.selection().graph) j["graph"] = *t.selection().graph;
}

TermSet term_set_from_json(const nlohmann::json &j) {
    try {
        TermSelection sel;
        const auto kind = j.at("selection").get<std::string>();
        if (kind == "full") {
            sel = TermSelection::full();
        } else if (kind == "k_local") {
            sel = TermSelection::k_local(j.at("k").get<int>());
        } else if (kind == "topology") {
            sel = TermSelection::topology(topology_from_json(j.at("graph")));
        } else {
            throw ParseError("unknown term selection '" + kind + "'");
        }
        return TermSet(j.at("n_qubits").get<int>(), std::move(sel),
                       j.at("indices").get<std::vector<WalshIndex>>());
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed term set: ") + e.what());
    }
}

} // namespace walshprep

#pragma once

// Slow, independent reference implementations used only by the tests.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Matrix = std::vector<std::vector<C>>;

inline Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<C>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Matrix multiply(const Matrix &a, const Matrix &b) {
    const std::size_t n = a.size();
    Matrix out(n, std::vector<C>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == C(0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline std::vector<C> apply_matrix(const Matrix &m, const std::vector<C> &v) {
    std::vector<C> out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t na = a.size(), nb = b.size();
    Matrix out(na * nb, std::vector<C>(na * nb, 0.0));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return out;
}

/// H^{(x)n} built by repeated Kronecker products.
inline Matrix hadamard_power(int n) {
    const double s = 1.0 / std::sqrt(2.0);
    const Matrix h{{s, s}, {s, -s}};
    Matrix out{{1.0}};
    for (int q = 0; q < n; ++q) out = kron(out, h);
    return out;
}

/// Embed a single-qubit matrix acting on qubit q (bit q of the index).
inline Matrix single_qubit(const Matrix &u, int q, int n) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix out(dim, std::vector<C>(dim, 0.0));
    for (std::size_t col = 0; col < dim; ++col) {
        const int b = int((col >> q) & 1u);
        for (int a = 0; a < 2; ++a) {
            const std::size_t row = (col & ~(std::size_t{1} << q)) | (std::size_t(a) << q);
            out[row][col] += u[a][b];
        }
    }
    return out;
}

inline Matrix rz_matrix(int q, double theta, int n) {
    const Matrix u{{std::polar(1.0, -theta / 2), 0.0}, {0.0, std::polar(1.0, theta / 2)}};
    return single_qubit(u, q, n);
}

inline Matrix h_matrix(int q, int n) {
    const double s = 1.0 / std::sqrt(2.0);
    return single_qubit({{s, s}, {s, -s}}, q, n);
}

inline Matrix cx_matrix(int control, int target, int n) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix out(dim, std::vector<C>(dim, 0.0));
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t row = col;
        if ((col >> control) & 1u) row ^= std::size_t{1} << target;
        out[row][col] = 1.0;
    }
    return out;
}

inline int parity_sign(std::uint64_t r, std::uint64_t j) {
    return (std::popcount(r & j) & 1) ? -1 : 1;
}

/// h_j = sum over r of c_r (-1)^{r.j}, by the double loop.
inline std::vector<double> walsh_expand(const std::vector<std::uint64_t> &r,
                                        const std::vector<double> &c, std::size_t dim) {
    std::vector<double> h(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t t = 0; t < r.size(); ++t) h[j] += c[t] * parity_sign(r[t], j);
    return h;
}

/// c_r = (1/N) sum_j (-1)^{r.j} h_j, by the double loop.
inline std::vector<double> walsh_analyze(const std::vector<double> &h) {
    const std::size_t dim = h.size();
    std::vector<double> c(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t j = 0; j < dim; ++j) c[r] += parity_sign(r, j) * h[j];
        c[r] /= double(dim);
    }
    return c;
}

/// Dense statevector circuit simulation: H^n, then per layer diag and H^n.
inline std::vector<C> circuit_state(const std::vector<std::vector<double>> &diagonals,
                                    bool final_hadamard, int n) {
    const std::size_t dim = std::size_t{1} << n;
    const Matrix hn = hadamard_power(n);
    std::vector<C> psi(dim, 0.0);
    psi[0] = 1.0;
    psi = apply_matrix(hn, psi);
    for (std::size_t k = 0; k < diagonals.size(); ++k) {
        for (std::size_t j = 0; j < dim; ++j) psi[j] *= std::polar(1.0, -diagonals[k][j]);
        if (final_hadamard || k + 1 < diagonals.size()) psi = apply_matrix(hn, psi);
    }
    return psi;
}

/// Central finite difference of f at x, coordinate by coordinate.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double> &)> &f,
                                              std::vector<double> x, double step) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + step;
        const double up = f(x);
        x[i] = saved - step;
        const double down = f(x);
        x[i] = saved;
        g[i] = (up - down) / (2.0 * step);
    }
    return g;
}

inline std::vector<C> random_unit(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> d;
    std::vector<C> v(dim);
    double s = 0.0;
    for (auto &x : v) {
        x = C(d(rng), d(rng));
        s += std::norm(x);
    }
    for (auto &x : v) x /= std::sqrt(s);
    return v;
}

/// Largest |a_j - e^{i phi} b_j| after removing the best global phase.
inline double distance_up_to_phase(const std::vector<C> &a, const std::vector<C> &b) {
    C overlap = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) overlap += std::conj(b[j]) * a[j];
    const C phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : C(1.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - phase * b[j]));
    return worst;
}

} // namespace oracle

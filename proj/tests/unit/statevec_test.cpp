#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "walshprep/error.hpp"
#include "walshprep/statevec.hpp"

using namespace walshprep;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector random_state_c(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return StateVector(oracle::random_unit(std::size_t{1} << n, rng));
}

void expect_amps_near(const StateVector &s, const std::vector<Complex> &want, double tol) {
    ASSERT_EQ(s.size(), want.size());
    for (std::size_t j = 0; j < want.size(); ++j) {
        EXPECT_NEAR(s[j].real(), want[j].real(), tol) << "j=" << j;
        EXPECT_NEAR(s[j].imag(), want[j].imag(), tol) << "j=" << j;
    }
}

} // namespace

TEST(StateVector, RejectsNonPowerOfTwo) {
    EXPECT_THROW(StateVector(std::vector<Complex>(3)), SizeError);
    EXPECT_THROW(StateVector(std::vector<Complex>(1)), SizeError);
    EXPECT_NO_THROW(StateVector(std::vector<Complex>(2)));
}

TEST(UniformState, SmallRegisters) {
    expect_amps_near(uniform_state(1), {0.70710678118654752, 0.70710678118654752}, 1e-15);
    expect_amps_near(uniform_state(2), {0.5, 0.5, 0.5, 0.5}, 1e-15);
    const auto s3 = uniform_state(3);
    for (std::size_t j = 0; j < 8; ++j) {
        EXPECT_NEAR(s3[j].real(), 0.35355339059327376, 1e-15);
        EXPECT_EQ(s3[j].imag(), 0.0);
    }
}

TEST(UniformState, SizeCap) {
    EXPECT_THROW(uniform_state(0), SizeError);
    EXPECT_THROW(uniform_state(27), SizeError);
    EXPECT_THROW(uniform_state(5, 4), SizeError);
}

TEST(Fwht, BasisZeroBecomesUniform) {
    auto s = StateVector::basis(2, 0);
    fwht(s);
    expect_amps_near(s, {0.5, 0.5, 0.5, 0.5}, 1e-15);
}

TEST(Fwht, UniformBecomesBasisZero) {
    auto s = uniform_state(2);
    fwht(s);
    expect_amps_near(s, {1.0, 0.0, 0.0, 0.0}, 1e-15);
}

TEST(Fwht, TwiceIsIdentityOnBasis) {
    auto s = StateVector::basis(3, 0);
    fwht(s);
    fwht(s);
    expect_amps_near(s, {1, 0, 0, 0, 0, 0, 0, 0}, 1e-12);
}

TEST(Fwht, InvolutionOnRandomStates) {
    for (int n = 1; n <= 12; ++n) {
        const auto original = random_state_c(n, 100 + n);
        auto s = original;
        fwht(s);
        fwht(s);
        for (std::size_t j = 0; j < s.size(); ++j) ASSERT_LT(std::abs(s[j] - original[j]), 1e-12);
    }
}

TEST(Fwht, MatchesDenseKroneckerHadamard) {
    for (int n = 1; n <= 6; ++n) {
        const auto original = random_state_c(n, 200 + n);
        std::vector<Complex> v(original.amps().begin(), original.amps().end());
        const auto want = oracle::apply_matrix(oracle::hadamard_power(n), v);
        auto s = original;
        fwht(s);
        for (std::size_t j = 0; j < s.size(); ++j) ASSERT_LT(std::abs(s[j] - want[j]), 1e-12);
    }
}

TEST(Fwht, UnnormalizedMatchesSignSum) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> h(32);
    for (auto &x : h) x = d(rng);
    auto got = h;
    fwht_unnormalized(got);
    const auto c = oracle::walsh_analyze(h);
    for (std::size_t r = 0; r < h.size(); ++r) EXPECT_NEAR(got[r], c[r] * 32.0, 1e-12);
}

TEST(EvolveDiagonal, ZeroIsIdentity) {
    const auto original = random_state_c(3, 1);
    auto s = original;
    evolve_diagonal(s, DiagonalHamiltonian::zeros(3));
    EXPECT_EQ(s, original);
}

TEST(EvolveDiagonal, PiFlipsSign) {
    auto s = uniform_state(1);
    evolve_diagonal(s, DiagonalHamiltonian({0.0, kPi}));
    expect_amps_near(s, {0.70710678118654752, -0.70710678118654752}, 1e-12);
}

TEST(EvolveDiagonal, TwoPiPeriodic) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.0, 2 * kPi);
    std::vector<double> h(16), shifted(16);
    for (std::size_t j = 0; j < h.size(); ++j) {
        h[j] = d(rng);
        shifted[j] = h[j] + 2 * kPi;
    }
    auto a = random_state_c(4, 9), b = a;
    evolve_diagonal(a, DiagonalHamiltonian(h));
    evolve_diagonal(b, DiagonalHamiltonian(shifted));
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LT(std::abs(a[j] - b[j]), 1e-12);
}

TEST(EvolveDiagonal, Composes) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    std::vector<double> h1(32), h2(32), sum(32);
    for (std::size_t j = 0; j < 32; ++j) {
        h1[j] = d(rng);
        h2[j] = d(rng);
        sum[j] = h1[j] + h2[j];
    }
    auto a = random_state_c(5, 2), b = a;
    evolve_diagonal(a, DiagonalHamiltonian(h1));
    evolve_diagonal(a, DiagonalHamiltonian(h2));
    evolve_diagonal(b, DiagonalHamiltonian(sum));
    for (std::size_t j = 0; j < 32; ++j) EXPECT_LT(std::abs(a[j] - b[j]), 1e-12);
}

TEST(EvolveDiagonal, LengthMismatch) {
    auto s = uniform_state(2);
    EXPECT_THROW(evolve_diagonal(s, DiagonalHamiltonian::zeros(3)), ShapeError);
}

TEST(Norm, PreservedUnderAlternatingLayers) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(0.0, 2 * kPi);
    auto s = random_state_c(10, 4);
    for (int layer = 0; layer < 6; ++layer) {
        std::vector<double> h(s.size());
        for (auto &x : h) x = d(rng);
        evolve_diagonal(s, DiagonalHamiltonian(h));
        fwht(s);
        EXPECT_LT(std::abs(s.norm_squared() - 1.0), 1e-12);
    }
}

TEST(DiagonalHamiltonian, CanonicalizedRange) {
    const DiagonalHamiltonian h({-0.5, 7.0, 2 * kPi, 0.0});
    const auto c = h.canonicalized();
    for (double v : c.coeffs()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 2 * kPi);
    }
    EXPECT_NEAR(c[0], 2 * kPi - 0.5, 1e-15);
    EXPECT_NEAR(c[1], 7.0 - 2 * kPi, 1e-15);
    EXPECT_EQ(c[2], 0.0);
}

TEST(Fidelity, Examples) {
    const auto u = uniform_state(2);
    EXPECT_NEAR(fidelity(u, u), 1.0, 1e-15);
    EXPECT_EQ(fidelity(StateVector::basis(1, 0), StateVector::basis(1, 1)), 0.0);
    EXPECT_NEAR(fidelity(StateVector::basis(2, 0), u), 0.25, 1e-15);
    EXPECT_THROW(fidelity(u, uniform_state(3)), ShapeError);
}

TEST(Fidelity, SymmetricAndGlobalPhaseInvariant) {
    const auto a = random_state_c(4, 11), b = random_state_c(4, 12);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
    for (double phi : {0.3, 1.7, -2.9}) {
        auto rotated = b;
        for (auto &x : rotated.amps()) x *= std::polar(1.0, phi);
        EXPECT_NEAR(fidelity(a, rotated), fidelity(a, b), 1e-12);
    }
    EXPECT_NEAR(infidelity(a, b), 1.0 - fidelity(a, b), 1e-15);
}

TEST(Phases, Examples) {
    EXPECT_EQ(phases(uniform_state(3)), std::vector<double>(8, 0.0));
    const StateVector s({std::polar(0.5, -kPi / 3), std::sqrt(0.75)});
    EXPECT_NEAR(phases(s)[0], 1.0471975511965976, 1e-12);
    EXPECT_EQ(residual_phase(Complex(1e-15, 1e-16), 1e-12), 0.0);
}

TEST(Phases, PrincipalRange) {
    EXPECT_NEAR(residual_phase(Complex(-1.0, 0.0)), kPi, 1e-15);
    EXPECT_NEAR(residual_phase(Complex(-1.0, -1e-300)), kPi, 1e-15);
    const auto s = random_state_c(6, 13);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double t = residual_phase(s[j]);
        EXPECT_GT(t, -kPi);
        EXPECT_LE(t, kPi);
        EXPECT_LT(std::abs(std::polar(std::abs(s[j]), -t) - s[j]), 1e-14);
    }
}

TEST(StateIo, BinaryRoundTripAndLayout) {
    const auto dir = std::filesystem::temp_directory_path() / "walshprep_statevec_test";
    std::filesystem::create_directories(dir);
    const auto s = random_state_c(3, 21);
    save_state_binary(s, dir / "s.bin");
    EXPECT_EQ(std::filesystem::file_size(dir / "s.bin"), 8u + 8u * 16u);
    EXPECT_EQ(load_state_binary(dir / "s.bin"), s);

    std::ifstream in(dir / "s.bin", std::ios::binary);
    unsigned char head[8];
    in.read(reinterpret_cast<char *>(head), 8);
    EXPECT_EQ(head[0], 8);
    for (int i = 1; i < 8; ++i) EXPECT_EQ(head[i], 0);

    std::ofstream(dir / "bad.bin", std::ios::binary) << "xyz";
    EXPECT_THROW(load_state_binary(dir / "bad.bin"), ParseError);
}

TEST(StateIo, CsvHeaderAndRows) {
    const auto dir = std::filesystem::temp_directory_path() / "walshprep_statevec_test";
    std::filesystem::create_directories(dir);
    save_state_csv(uniform_state(1), dir / "s.csv");
    std::ifstream in(dir / "s.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "index,re,im,modulus,phase");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 2);
}

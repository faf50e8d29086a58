#include "objbound/gibbs.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace objbound;

TEST(partition_function, harmonic_closed_form) {
    for (double b : {0.01, 0.5, 1.0, 3.0}) {
        EXPECT_NEAR(partition_function(Spectrum::harmonic(), b), std::exp(-b) / (1.0 - std::exp(-b)),
                    1e-13 * std::exp(-b) / (1.0 - std::exp(-b)));
    }
}

TEST(partition_function, box_and_custom) {
    EXPECT_NEAR(partition_function(Spectrum::box(), 1.0), 0.3863186024133261, 1e-15);
    EXPECT_NEAR(partition_function(Spectrum::custom({1, 1}), 0.7), 2.0 * std::exp(-0.7), 1e-15);
    EXPECT_THROW(partition_function(Spectrum::box(), 0.0), std::invalid_argument);
    EXPECT_THROW(partition_function(Spectrum::box(), -1.0), std::invalid_argument);
}

TEST(partition_function, bridge_direct_sum) {
    auto b = Spectrum::bridge(2, 1.0);
    double z = 0.0;
    for (std::size_t j = 0; j < 12; ++j) z += std::exp(-0.3 * b.eigenvalue(j));
    EXPECT_NEAR(partition_function(b, 0.3), z, 1e-14);
}

TEST(solve_beta, harmonic_closed_form) {
    auto s = solve_beta(Spectrum::harmonic(), 2.0);
    EXPECT_NEAR(s.beta, std::numbers::ln2, 1e-10);
    EXPECT_NEAR(s.entropy_bits, 2.0, 1e-10);
    for (double E : {1.01, 1.5, 3.0, 10.0, 404.0, 1e3, 1e5, 1e6}) {
        auto sol = solve_beta(Spectrum::harmonic(), E);
        EXPECT_NEAR(sol.beta, -std::log1p(-1.0 / E), 1e-9) << E;
        EXPECT_NEAR(sol.mean_energy, E, 1e-10 * E);
    }
    EXPECT_NEAR(gibbs_entropy(Spectrum::harmonic(), 404.0), 10.099119534954224, 1e-9);
}

TEST(solve_beta, finite_spectra) {
    auto mid = solve_beta(Spectrum::custom({1, 2}), 1.5);
    EXPECT_NEAR(mid.beta, 0.0, 1e-10);
    EXPECT_NEAR(mid.entropy_bits, 1.0, 1e-12);
    auto deg = solve_beta(Spectrum::custom({1, 1}), 1.0);
    EXPECT_EQ(deg.beta, 0.0);
    EXPECT_NEAR(deg.entropy_bits, 1.0, 1e-15);
    EXPECT_THROW(solve_beta(Spectrum::custom({1, 1}), 1.5), EnergyTooLow);
    auto hot = solve_beta(Spectrum::custom({1, 2, 4}), 3.0);
    EXPECT_LT(hot.beta, 0.0);
    EXPECT_NEAR(hot.mean_energy, 3.0, 3e-10);
    EXPECT_THROW(solve_beta(Spectrum::custom({1, 2, 4}), 4.0), std::domain_error);
}

TEST(solve_beta, energy_too_low) {
    EXPECT_THROW(solve_beta(Spectrum::box(), 1.0), EnergyTooLow);
    EXPECT_THROW(solve_beta(Spectrum::harmonic(), 0.5), EnergyTooLow);
    EXPECT_THROW(solve_beta(Spectrum::bridge(3, 1.0), 1.0), EnergyTooLow);
}

TEST(solve_beta, entropy_identity_and_monotone_beta) {
    for (auto spec : {Spectrum::box(), Spectrum::harmonic(), Spectrum::bridge(2, 0.8), Spectrum::custom({1, 2, 3, 5})}) {
        double prev_beta = INFINITY;
        for (double E : {1.2, 1.7, 2.5, 4.0}) {
            if (spec.is_finite() && E >= spec.custom_levels().back()) continue;
            auto sol = solve_beta(spec, E);
            const double identity = std::log2(sol.Z) + sol.beta * E * std::numbers::log2e;
            EXPECT_NEAR(sol.entropy_bits, identity, 1e-9) << spec.name() << " E=" << E;
            EXPECT_NEAR(sol.mean_energy, E, 1e-10 * E);
            EXPECT_LT(sol.beta, prev_beta);
            prev_beta = sol.beta;
        }
    }
}

TEST(solve_beta, box_large_energy) {
    auto sol = solve_beta(Spectrum::box(), 1e6);
    EXPECT_NEAR(sol.mean_energy, 1e6, 1e-4);
    // Continuum limit: <j^2> = 1/(2 beta).
    EXPECT_NEAR(sol.beta * 2e6, 1.0, 1e-3);
}

TEST(gibbs_entropy, sublinear) {
    for (auto spec : {Spectrum::harmonic(), Spectrum::box()}) {
        double prev = INFINITY;
        for (double E = 10.0; E <= 1e6; E *= 10.0) {
            const double ratio = gibbs_entropy(spec, E) / E;
            EXPECT_LT(ratio, prev);
            prev = ratio;
        }
    }
}

TEST(binary_entropy, values) {
    EXPECT_EQ(binary_entropy(0.5), 1.0);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.009901), 0.08013611311202238, 1e-14);
    for (double x : {0.01, 0.1, 0.3, 0.45}) EXPECT_NEAR(binary_entropy(x), binary_entropy(1.0 - x), 1e-15);
    for (double x = 0.05; x < 0.95; x += 0.05) {
        EXPECT_GE(binary_entropy(x), 0.5 * (binary_entropy(x - 0.05) + binary_entropy(x + 0.05)));
    }
    EXPECT_THROW(binary_entropy(-0.1), std::invalid_argument);
    EXPECT_THROW(binary_entropy(1.1), std::invalid_argument);
}

TEST(gibbs_entropy, finite_spectrum_saturates) {
    auto spec = Spectrum::custom({1.0, 2.0, 4.0, 8.0});
    EXPECT_DOUBLE_EQ(gibbs_entropy(spec, 3.75), 2.0);
    EXPECT_DOUBLE_EQ(gibbs_entropy(spec, 100.0), 2.0);
    EXPECT_LT(gibbs_entropy(spec, 3.0), 2.0);
    EXPECT_NEAR(gibbs_entropy(spec, 3.0), solve_beta(spec, 3.0).entropy_bits, 1e-15);
}

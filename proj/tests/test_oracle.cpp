#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "objbound/oracle/bosonic.hpp"
#include "objbound/oracle/channels.hpp"
#include "objbound/oracle/choi.hpp"
#include "objbound/oracle/discord_numeric.hpp"
#include "objbound/oracle/measure_prepare.hpp"
#include "objbound/pureloss.hpp"

using namespace objbound;
using namespace objbound::oracle;

namespace {

Matrix bell_projector() {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v * v.adjoint();
}

Matrix classical_pair() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = 0.5;
    return m;
}

Spectrum doubling(std::size_t n) {
    std::vector<double> f;
    for (std::size_t k = 0; k < n; ++k) f.push_back(std::ldexp(1.0, static_cast<int>(k)));
    return Spectrum::custom(f);
}

}  // namespace

TEST(linalg, trace_norm_examples) {
    EXPECT_NEAR(trace_norm(Matrix::Identity(2, 2)), 2.0, 1e-15);
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    EXPECT_NEAR(trace_norm(z), 2.0, 1e-15);
    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    EXPECT_NEAR(trace_norm(nil), 1.0, 1e-15);
    EXPECT_THROW(trace_norm(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST(linalg, partial_trace_of_product) {
    CounterRng rng(5);
    Vector a = random_pure_state(2, rng), b = random_pure_state(3, rng), c = random_pure_state(2, rng);
    Matrix ra = a * a.adjoint(), rb = b * b.adjoint(), rc = c * c.adjoint();
    Matrix all = kron(kron(ra, rb), rc);
    EXPECT_LT((partial_trace(all, {2, 3, 2}, {1}) - rb).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((partial_trace(all, {2, 3, 2}, {0, 2}) - kron(ra, rc)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(quantum, invariants_enforced) {
    EXPECT_THROW(DensityOperator(Matrix::Identity(2, 2)), InvariantViolation);
    EXPECT_THROW(KrausChannel({Matrix::Identity(2, 2) * 0.9}), InvariantViolation);
    EXPECT_THROW(Povm({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}), InvariantViolation);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityOperator{neg}, InvariantViolation);
}

TEST(random_channel, complete_and_deterministic) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto ch = random_channel(3, 2, 4, seed);
        Matrix sum = Matrix::Zero(3, 3);
        for (const auto& k : ch.kraus()) sum += k.adjoint() * k;
        EXPECT_LT((sum - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    }
    auto a = random_channel(3, 3, 2, 17), b = random_channel(3, 3, 2, 17), c = random_channel(3, 3, 2, 17, 1);
    for (std::size_t k = 0; k < a.kraus().size(); ++k) EXPECT_EQ(a.kraus()[k], b.kraus()[k]);
    EXPECT_NE(a.kraus()[0], c.kraus()[0]);
    EXPECT_THROW(random_channel(5, 2, 2, 1), std::invalid_argument);
}

TEST(random_channel, unitary_when_env_trivial) {
    auto ch = random_channel(4, 4, 1, 9);
    ASSERT_EQ(ch.kraus().size(), 1u);
    EXPECT_LT((ch.kraus()[0] * ch.kraus()[0].adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(f_choi, identity_and_dephasing) {
    auto flat = Spectrum::custom({1.0, 1.0});
    auto id = f_choi(identity_channel(2), flat);
    EXPECT_LT((id.state.matrix() - bell_projector()).cwiseAbs().maxCoeff(), 1e-15);
    auto deph = f_choi(dephasing_channel(2), flat);
    EXPECT_LT((deph.state.matrix() - classical_pair()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(f_choi, marginal_is_weighted) {
    auto spec = Spectrum::custom({1.0, 2.0, 4.0});
    auto j = f_choi(random_channel(3, 2, 3, 4), spec);
    Matrix a = trace_second(j.state.matrix(), 3, 2);
    EXPECT_NEAR(a(0, 0).real(), 4.0 / 7.0, 1e-12);
    EXPECT_NEAR(a(1, 1).real(), 2.0 / 7.0, 1e-12);
    EXPECT_NEAR(a(2, 2).real(), 1.0 / 7.0, 1e-12);
    EXPECT_THROW(f_choi(random_channel(4, 2, 2, 1), spec), DimensionMismatch);
}

TEST(truncation, full_dimension_is_exact) {
    auto r = truncation_check(random_channel(3, 3, 2, 2), doubling(3), 3);
    EXPECT_NEAR(r.lhs, 0.0, 1e-14);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(truncation, identity_two_levels) {
    // phi = (a, 0, 0, b) with a^2 = 2/3, b^2 = 1/3; rho - rho_1 is [[0, ab], [ab, b^2]]
    // on {|00>, |11>}, trace norm sqrt(b^4 + 4 a^2 b^2) = 1.
    auto r = truncation_check(identity_channel(2), Spectrum::custom({1.0, 2.0}), 1);
    EXPECT_NEAR(r.lhs, 1.0, 1e-14);
    EXPECT_NEAR(r.rhs, 2.0 / std::sqrt(3.0), 1e-14);
    EXPECT_TRUE(r.pass);
}

TEST(truncation, random_channels) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t din = 2 + seed % 7, dout = 2 + (seed / 7) % 7;
        auto r = truncation_check(random_channel(din, dout, din, seed), doubling(din), 1 + seed % din);
        EXPECT_TRUE(r.pass) << seed << " " << r.lhs << " " << r.rhs;
    }
}

TEST(diamond, equal_channels_zero) {
    auto ch = random_channel(3, 2, 2, 1);
    EXPECT_NEAR(sampled_diamond_lower(ch, ch, doubling(3), 2.0, 50, 3), 0.0, 1e-13);
}

TEST(diamond, identity_versus_dephasing) {
    auto v = sampled_diamond_lower(identity_channel(2), dephasing_channel(2), Spectrum::custom({1.0, 1.0}), 1.0, 20, 1);
    EXPECT_GE(v, 1.0 - 1e-12);
    EXPECT_THROW(sampled_diamond_lower(identity_channel(2), dephasing_channel(2), Spectrum::custom({1.0, 1.0}), 0.5, 5, 1),
                 EnergyTooLow);
}

TEST(diamond, choi_distance_random_pairs) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t din = 2 + seed % 5, dout = 2 + (seed / 5) % 5;
        auto spec = doubling(din);
        auto r = choi_distance_check(random_channel(din, dout, din, seed, 0), random_channel(din, dout, din, seed, 1),
                                     spec, 2.0, 40, seed);
        EXPECT_TRUE(r.pass) << seed << " " << r.lhs << " " << r.rhs;
    }
}

TEST(lemma_a1, trivial_and_wide_margin) {
    auto flat = Spectrum::custom({1.0, 1.0});
    auto same = lemma_a1_probe(identity_channel(2), identity_channel(2), flat, 1, 2, 1);
    EXPECT_NEAR(same.lhs, 0.0, 1e-14);
    EXPECT_TRUE(same.pass);
    auto r = lemma_a1_probe(identity_channel(2), dephasing_channel(2), flat, 2, 4, 1);
    EXPECT_NEAR(r.lhs, 1.0, 1e-12);
    EXPECT_NEAR(r.epsilon_d, 0.0, 1e-15);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.rhs, 5.0 * r.lhs);
    EXPECT_THROW(lemma_a1_probe(identity_channel(3), identity_channel(3), doubling(3), 1, 1, 1), DimensionMismatch);
}

TEST(measure_prepare, no_measurement_gives_identity_povm) {
    auto spec = Spectrum::custom({1.0, 2.0, 4.0});
    auto lam = random_channel(3, 8, 1, 21);
    auto r = mp_construct(lam, spec, {2, 2, 2}, {}, {}, 1);
    ASSERT_EQ(r.povm.elements().size(), 1u);
    EXPECT_LT((r.povm.elements()[0] - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    auto choi = f_choi(lam, spec);
    Matrix tr_a = partial_trace(choi.state.matrix(), {3, 2, 2, 2}, {2});
    EXPECT_LT((r.prepared[0].matrix() - tr_a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(measure_prepare, random_isometry_instances) {
    auto spec = Spectrum::custom({1.0, 2.0, 4.0});
    const std::vector<Matrix> basis{Matrix::Identity(2, 2)};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto lam = random_channel(3, 8, 1, seed);
        auto a = mp_construct(lam, spec, {2, 2, 2}, {0}, basis, 1);
        auto b = mp_construct(lam, spec, {2, 2, 2}, {0}, basis, 2);
        EXPECT_LT(a.completeness_error, 1e-10);
        EXPECT_LT(a.choi_error, 1e-10);
        EXPECT_LT(b.choi_error, 1e-10);
        EXPECT_LT(povm_difference(a.povm, b.povm), 1e-12);
        EXPECT_GE(a.fragment_distance, 0.0);
    }
}

TEST(measure_prepare, rejects_target_in_measured_set) {
    auto lam = random_channel(3, 8, 1, 1);
    const std::vector<Matrix> basis{Matrix::Identity(2, 2)};
    EXPECT_THROW(mp_construct(lam, Spectrum::custom({1.0, 2.0, 4.0}), {2, 2, 2}, {1}, basis, 1), std::invalid_argument);
    EXPECT_THROW(mp_construct(lam, Spectrum::custom({1.0, 2.0, 4.0}), {2, 2}, {0}, basis, 1), DimensionMismatch);
}

TEST(measure_prepare, fragment_probe_runs) {
    auto rep = fragment_probe(random_channel(3, 8, 1, 3), Spectrum::custom({1.0, 2.0, 4.0}), 3, 2);
    EXPECT_EQ(rep.sets_tried, 4u);
    EXPECT_GT(rep.bound, 0.0);
    EXPECT_TRUE(std::isfinite(rep.best_lhs));
}

TEST(attenuator, examples) {
    Matrix vac = Matrix::Zero(4, 4);
    vac(0, 0) = 1.0;
    EXPECT_LT((attenuator(0.3, 4).apply(vac) - vac).cwiseAbs().maxCoeff(), 1e-15);
    Matrix one = Matrix::Zero(2, 2);
    one(1, 1) = 1.0;
    Matrix out = attenuator(0.3, 2).apply(one);
    EXPECT_NEAR(out(0, 0).real(), 0.7, 1e-15);
    EXPECT_NEAR(out(1, 1).real(), 0.3, 1e-15);
    auto id = attenuator(1.0, 5);
    ASSERT_EQ(id.kraus().size(), 1u);
    EXPECT_LT((id.kraus()[0] - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(attenuator(0.0, 4), std::invalid_argument);
    EXPECT_THROW(attenuator(1.2, 4), std::invalid_argument);
}

TEST(nsplitter, isometry) {
    Matrix w = nsplitter_isometry(3, 5);
    EXPECT_LT((w.adjoint() * w - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_THROW(nsplitter_isometry(3, 20), DimensionMismatch);
}

TEST(nsplitter, vacuum_and_single_photon) {
    Matrix vac = Matrix::Zero(3, 3);
    vac(0, 0) = 1.0;
    auto r = nsplitter_reduce(DensityOperator(vac), 3, 3);
    for (const auto& o : r.outputs) EXPECT_LT((o.matrix() - vac).cwiseAbs().maxCoeff(), 1e-15);

    Matrix one = Matrix::Zero(2, 2);
    one(1, 1) = 1.0;
    auto s = nsplitter_reduce(DensityOperator(one), 2, 2);
    for (const auto& o : s.outputs) {
        EXPECT_NEAR(o.matrix()(0, 0).real(), 0.5, 1e-14);
        EXPECT_NEAR(o.matrix()(1, 1).real(), 0.5, 1e-14);
    }
}

TEST(nsplitter, coherent_state_dual_path) {
    const std::size_t cutoff = 6;
    Vector psi(cutoff);
    const cd alpha(0.6, 0.3);
    for (std::size_t n = 0; n < cutoff; ++n) {
        psi(static_cast<Eigen::Index>(n)) = std::pow(alpha, static_cast<double>(n)) / std::sqrt(std::tgamma(n + 1.0));
    }
    psi /= psi.norm();
    auto r = nsplitter_reduce(DensityOperator::pure(psi), 3, cutoff);
    ASSERT_TRUE(r.path_error.has_value());
    EXPECT_LT(*r.path_error, 1e-8);
    EXPECT_LT(r.symmetry_error, 1e-10);
}

TEST(tmsv, matches_closed_form) {
    EXPECT_NEAR(tmsv_overlap_check(2, 0.0, 0.0, 10), 1.0, 1e-12);
    EXPECT_NEAR(tmsv_overlap_check(2, 0.3, 0.2, 40), 0.9556112192668658, 1e-12);
    for (std::size_t N : {2u, 3u}) {
        for (double r : {0.1, 0.3, 0.5}) {
            for (double s : {0.1, 0.3, 0.5}) {
                EXPECT_NEAR(tmsv_overlap_check(N, r, s, 60), objbound::tmsv_overlap(double(N), r, s), 1e-12);
            }
        }
    }
    EXPECT_THROW(tmsv_overlap_check(2, 0.5, 0.5, 5), std::invalid_argument);
}

TEST(information, mutual_information_examples) {
    EXPECT_NEAR(mutual_information(DensityOperator(bell_projector()), 2), 2.0, 1e-12);
    EXPECT_NEAR(mutual_information(DensityOperator(classical_pair()), 2), 1.0, 1e-12);
    CounterRng rng(1);
    Vector a = random_pure_state(2, rng), b = random_pure_state(3, rng);
    EXPECT_NEAR(mutual_information(DensityOperator(kron(Matrix(a * a.adjoint()), Matrix(b * b.adjoint()))), 2), 0.0, 1e-10);
    EXPECT_THROW(mutual_information(DensityOperator(bell_projector()), 3), DimensionMismatch);
}

TEST(information, discord_examples) {
    EXPECT_NEAR(discord_numeric(DensityOperator(bell_projector()), 2), 1.0, 1e-6);
    EXPECT_NEAR(discord_numeric(DensityOperator(classical_pair()), 2), 0.0, 1e-6);
    Matrix plus = Matrix::Constant(2, 2, 0.5);
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    EXPECT_NEAR(discord_numeric(DensityOperator(kron(zero, plus)), 2), 0.0, 1e-6);
    EXPECT_THROW(discord_numeric(DensityOperator(Matrix::Identity(6, 6) / 6.0), 2), DimensionMismatch);
}

#include "ses/ocp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ses;
using namespace ses::ocp;

TEST(Saddle, HalfDiscountExample)
{
    const Saddle s = saddle_point(0.5);
    EXPECT_NEAR(s.z_hat, 4.0, 1e-15);
    EXPECT_NEAR(s.lambda_hat, -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.y_hat, 0.75, 1e-15);
    EXPECT_NEAR(1.0 / s.z_hat, (1.0 - 0.5) / 2.0, 1e-15);
}

TEST(Saddle, EigenvaluesMatchJacobianAndHaveOppositeSigns)
{
    for (double delta : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
        const Saddle s = saddle_point(delta);
        const double root = std::sqrt(2.0 - delta * delta) / 2.0;
        EXPECT_NEAR(s.sigma_stable, delta / 2.0 - root, 1e-12);
        EXPECT_NEAR(s.sigma_unstable, delta / 2.0 + root, 1e-12);
        EXPECT_NEAR(s.sigma_stable * s.sigma_unstable, (delta * delta - 1.0) / 2.0, 1e-12);
        Eigen::EigenSolver<Mat> es(hamiltonian_jacobian(s.z_hat, s.lambda_hat, delta));
        std::vector<double> ev{es.eigenvalues()[0].real(), es.eigenvalues()[1].real()};
        std::sort(ev.begin(), ev.end());
        EXPECT_NEAR(ev[0], s.sigma_stable, 1e-10);
        EXPECT_NEAR(ev[1], s.sigma_unstable, 1e-10);
        const auto f = hamiltonian_rhs(s.z_hat, s.lambda_hat, delta);
        EXPECT_NEAR(f[0], 0.0, 1e-14 * s.z_hat);
        EXPECT_NEAR(f[1], 0.0, 1e-14 * s.z_hat);
    }
    const Saddle tiny = saddle_point(1e-9);
    EXPECT_NEAR(tiny.sigma_stable, -1.0 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(tiny.sigma_unstable, 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(Saddle, StableEigenvectorSlope)
{
    const double delta = 0.4;
    const Saddle s = saddle_point(delta);
    const Mat J = hamiltonian_jacobian(s.z_hat, s.lambda_hat, delta);
    Vec v(2);
    v << 1.0, s.slope;
    EXPECT_LT((J * v - s.sigma_stable * v).norm(), 1e-12);
}

TEST(Saddle, RejectsUnsustainableDiscount)
{
    EXPECT_THROW(saddle_point(1.0), DomainError);
    EXPECT_THROW(saddle_point(2.0), DomainError);
    EXPECT_THROW(saddle_point(0.0), DomainError);
}

TEST(LambdaOde, HandValueAndQuotientIdentity)
{
    // delta = 0.5, z = 2, lambda = -0.5: numerator -0.5 (1.5 * -1 + 2) = -0.25,
    // denominator 2 (1 - 1 - 0.5) = -1.
    EXPECT_NEAR(lambda_ode_rhs(2.0, -0.5, 0.5), 0.25, 1e-15);
    const auto f = hamiltonian_rhs(2.0, -0.5, 0.5);
    EXPECT_NEAR(f[1] / f[0], 0.25, 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const double delta = 0.05 + 3 * u(rng);
        const double z = std::exp(8 * u(rng) - 4);
        const double lambda = -u(rng) / (delta * z);
        const auto h = hamiltonian_rhs(z, lambda, delta);
        if (std::abs(h[0]) < 1e-3)
            continue;
        const double q = h[1] / h[0];
        EXPECT_NEAR(lambda_ode_rhs(z, lambda, delta), q, 1e-12 * std::max(1.0, std::abs(q)));
        ++checked;
    }
}

TEST(LambdaOde, SaddleIsRemovableSingularity)
{
    // Both the numerator and z' vanish at the saddle; the slope tends to the
    // stable eigenvector slope along the manifold.
    const double delta = 0.3;
    const Saddle s = saddle_point(delta);
    const auto f = hamiltonian_rhs(s.z_hat, s.lambda_hat, delta);
    EXPECT_NEAR(f[0], 0.0, 1e-14);
    EXPECT_NEAR(f[1], 0.0, 1e-14);
    EXPECT_THROW(lambda_ode_rhs(s.z_hat, s.lambda_hat, delta), DomainError);
    for (double h : {1e-3, -1e-3}) {
        const double z = s.z_hat + h;
        EXPECT_NEAR(lambda_ode_rhs(z, s.lambda_hat + s.slope * h, delta), s.slope, 1e-2 * std::abs(s.slope));
    }
    // z' = 0 where lambda = 1 / (1 - z).
    EXPECT_THROW(lambda_ode_rhs(3.0, -0.5, 0.3), DomainError);
}

TEST(Hamiltonian, MonotoneInLambdaWhereDerivativePositive)
{
    for (double delta : {0.3, 0.7}) {
        for (double z : {0.2, 1.0, 3.0, 10.0}) {
            const double lo = -1.0 / (delta * z);
            const bool everywhere = z * (1.0 - delta) <= 1.0;
            auto slope = [&](double lambda) { return -1.0 / lambda + (1.0 - z); };
            double prev_lambda = lo * (1.0 - 1.0 / 400.0);
            double prev = current_value_hamiltonian(z, prev_lambda, delta);
            for (int k = 2; k < 400; ++k) {
                const double lambda = lo * (1.0 - k / 400.0);
                const double m = current_value_hamiltonian(z, lambda, delta);
                if (everywhere)
                    EXPECT_GT(slope(lambda), 0.0);
                if (slope(lambda) > 0.0 && slope(prev_lambda) > 0.0)
                    EXPECT_GT(m, prev);
                else if (slope(lambda) < 0.0 && slope(prev_lambda) < 0.0)
                    EXPECT_LT(m, prev);
                prev = m;
                prev_lambda = lambda;
            }
        }
    }
    const double delta = 0.7;
    EXPECT_THROW(current_value_hamiltonian(1.0, 0.1, delta), DomainError);
    EXPECT_THROW(current_value_hamiltonian(1.0, -2.0, delta), DomainError);
    const Saddle s = saddle_point(delta);
    EXPECT_TRUE(std::isfinite(current_value_hamiltonian(s.z_hat, s.lambda_hat, delta)));
    EXPECT_NEAR(s.lambda_hat * s.z_hat, -2.0 / (1.0 + delta), 1e-14);
}

class SustainableSynthesis : public ::testing::TestWithParam<double> {};

TEST_P(SustainableSynthesis, TableSatisfiesTransversalityAndBounds)
{
    const double delta = GetParam();
    const FeedbackLaw law = synthesize_feedback(delta);
    ASSERT_EQ(law.regime, Regime::sustainable);
    EXPECT_NEAR(law.y_star(law.z_hat), (1.0 + delta) / 2.0, 1e-9);
    for (const FeedbackSample& f : law.table) {
        const double phi = -f.lambda * f.z;
        EXPECT_LT(f.lambda, 0.0);
        EXPECT_GT(phi, 0.0);
        EXPECT_LT(phi, 1.0 / delta);
        EXPECT_GT(f.y_star, delta);
    }
}

TEST_P(SustainableSynthesis, RegionSignsAndMonotoneBranches)
{
    const double delta = GetParam();
    const FeedbackLaw law = synthesize_feedback(delta);
    double prev_left = -std::numeric_limits<double>::infinity();
    for (const FeedbackSample& f : law.table) {
        if (std::abs(f.z - law.z_hat) < 1e-3 * law.z_hat)
            continue;
        const auto h = hamiltonian_rhs(f.z, f.lambda, delta);
        if (f.z < law.z_hat) {
            EXPECT_EQ(f.branch, Branch::left_manifold);
            EXPECT_GT(h[0], 0.0);
            EXPECT_GT(h[1], 0.0);
            EXPECT_GT(f.lambda, prev_left);
            prev_left = f.lambda;
        } else {
            EXPECT_EQ(f.branch, Branch::right_manifold);
            EXPECT_LT(h[0], 0.0);
            EXPECT_LT(h[1], 0.0);
        }
    }
}

TEST_P(SustainableSynthesis, ClosedLoopConvergesFromSeveralStarts)
{
    const double delta = GetParam();
    const FeedbackLaw law = synthesize_feedback(delta);
    const double x_hat = (1.0 - delta) / 2.0;
    for (double x0 : {0.05, x_hat, 0.9}) {
        OcpParams p;
        p.delta = delta;
        p.x0 = x0;
        const OptimalPath path = simulate_optimal(p, law, 1000.0, 1.0);
        EXPECT_NEAR(path.samples.back().x, x_hat, 1e-4) << "x0 = " << x0;
        EXPECT_NEAR(path.samples.back().y, (1.0 + delta) / 2.0, 1e-4) << "x0 = " << x0;
        for (const OptimalSample& s : path.samples)
            EXPECT_GT(s.x, std::min(x0, x_hat) * 0.5);
    }
}

TEST_P(SustainableSynthesis, StationarityOfDiscountedUtility)
{
    const double delta = GetParam();
    const FeedbackLaw law = synthesize_feedback(delta);
    OcpParams p;
    p.delta = delta;
    p.x0 = 0.1;
    const double t_end = std::min(4000.0, 60.0 / delta);
    const OptimalPath path = simulate_optimal(p, law, t_end, 0.5);
    const double z0 = 1.0 / p.x0;
    const double M = current_value_hamiltonian(z0, law.lambda(z0), delta);
    EXPECT_NEAR(delta * path.discounted_utility, M, 1e-6 * std::max(1.0, std::abs(M)));
}

TEST_P(SustainableSynthesis, HamiltonianFlowTracksManifoldOverAttainableHorizon)
{
    const double delta = GetParam();
    const FeedbackLaw law = synthesize_feedback(delta);
    for (double z0 : {0.5 * law.z_hat, 3.0 * law.z_hat}) {
        const auto path = simulate_hamiltonian(z0, law.lambda(z0), delta, 10.0, 0.5);
        for (const HamiltonianSample& s : path)
            EXPECT_NEAR(s.lambda, law.lambda(s.z), 1e-4) << "t = " << s.t << ", z0 = " << z0;
    }
}

INSTANTIATE_TEST_SUITE_P(Deltas, SustainableSynthesis, ::testing::Values(0.01, 0.5, 0.9));

TEST(Synthesis, HalvingSeedOffsetLeavesLawUnchanged)
{
    SynthesisOptions a, b;
    b.eps = a.eps / 2;
    const FeedbackLaw la = synthesize_feedback(0.5, a);
    const FeedbackLaw lb = synthesize_feedback(0.5, b);
    for (double z : {0.05, 0.5, 2.0, 3.9, 4.1, 10.0, 500.0})
        EXPECT_NEAR(la.lambda(z), lb.lambda(z), 1e-7 * std::abs(la.lambda(z))) << "z = " << z;
}

TEST(Synthesis, StartingAtSteadyStockStaysThere)
{
    const FeedbackLaw law = synthesize_feedback(0.5);
    OcpParams p;
    p.delta = 0.5;
    p.x0 = 0.25;
    const OptimalPath path = simulate_optimal(p, law, 50.0);
    for (const OptimalSample& s : path.samples)
        EXPECT_NEAR(s.x, 0.25, 1e-8);
}

class UnsustainableSynthesis : public ::testing::TestWithParam<double> {};

TEST_P(UnsustainableSynthesis, HotellingAsymptotics)
{
    const double delta = GetParam();
    const FeedbackLaw law = synthesize_feedback(delta);
    ASSERT_EQ(law.regime, Regime::unsustainable);
    for (const FeedbackSample& f : law.table) {
        EXPECT_GT(-f.lambda * f.z, 0.0);
        EXPECT_LT(-f.lambda * f.z, 1.0 / delta);
        EXPECT_GT(f.y_star, delta);
    }
    OcpParams p;
    p.delta = delta;
    p.x0 = 0.5;
    const OptimalPath path = simulate_optimal(p, law, 100.0, 0.5);
    const OptimalSample& end = path.samples.back();
    const OptimalSample& before = path.samples[path.samples.size() - 21];
    EXPECT_NEAR(end.y / delta, 1.0, 0.01);
    const double slope = (end.log_x - before.log_x) / (end.t - before.t);
    if (delta == 1.0)
        EXPECT_NEAR(slope, 0.0, 0.05);
    else
        EXPECT_NEAR(slope / (1.0 - delta), 1.0, 0.05);
    for (std::size_t k = 1; k < path.samples.size(); ++k)
        EXPECT_LT(path.samples[k].log_x, path.samples[k - 1].log_x);
}

INSTANTIATE_TEST_SUITE_P(Deltas, UnsustainableSynthesis, ::testing::Values(1.0, 2.0, 10.0));

TEST(Sustainability, TruthTableExamples)
{
    auto check = [](double d, double mu, double beta) {
        OcpParams p;
        p.delta = d;
        p.mu = mu;
        p.beta_el = beta;
        return sustainability_check(p);
    };
    EXPECT_EQ(check(0.5, 0.0, 1.0), Sustainability::strongly_sustainable);
    EXPECT_EQ(check(0.5, 3.0, 0.2), Sustainability::strongly_sustainable);
    EXPECT_EQ(check(2.0, 1.0, 0.5), Sustainability::sustainable);
    EXPECT_EQ(check(2.0, 0.0, 0.5), Sustainability::unsustainable);
    EXPECT_EQ(check(1.0, 0.0, 1.0), Sustainability::sustainable);
}

TEST(Sustainability, RejectsInvalidParameters)
{
    OcpParams p;
    p.delta = -1;
    EXPECT_THROW(validate(p), DomainError);
    p = OcpParams{};
    p.beta_el = 1.5;
    EXPECT_THROW(validate(p), DomainError);
    p = OcpParams{};
    p.x0 = 0;
    EXPECT_THROW(validate(p), DomainError);
    p = OcpParams{};
    p.mu = -0.1;
    EXPECT_THROW(validate(p), DomainError);
}

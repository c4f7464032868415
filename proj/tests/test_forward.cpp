#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pafour/forward.hpp"
#include "pafour/harness.hpp"

using namespace pafour;
using std::numbers::pi;

namespace {

double max_abs(const RealGrid2D& g)
{
    double m = 0.0;
    for (double v : g.values()) {
        m = std::max(m, std::fabs(v));
    }
    return m;
}

} // namespace

TEST(Circle, CentreValueIsTwo)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    EXPECT_DOUBLE_EQ(p(0.5, 0.5), 2.0);
}

TEST(Circle, BoundaryValueIsZero)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    EXPECT_NEAR(p(0.6, 0.5), 0.0, 1e-6);
    EXPECT_EQ(p(0.7, 0.5), 0.0);
}

TEST(Circle, HalfRadiusValue)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    EXPECT_NEAR(p(0.55, 0.5), std::sqrt(3.0), 1e-12);
}

TEST(Circle, SamplesPeakAtCentre)
{
    const auto f = sample_circle(CirclePhantom{0.5, 0.5, 0.1}, GridSpec::unit_square(64));
    EXPECT_DOUBLE_EQ(f(32, 32), 2.0);
    EXPECT_DOUBLE_EQ(max_abs(f), 2.0);
    EXPECT_EQ(f(0, 0), 0.0);
    EXPECT_EQ(f.kind(), AxisKind::image);
}

TEST(Circle, RejectsGeometryOutsideDomain)
{
    const auto spec = GridSpec::unit_square(32);
    EXPECT_THROW(sample_circle(CirclePhantom{0.5, 0.05, 0.1}, spec), ValidationError);
    EXPECT_THROW(sample_circle(CirclePhantom{0.95, 0.5, 0.1}, spec), ValidationError);
    EXPECT_THROW(sample_circle(CirclePhantom{0.5, 0.5, -0.1}, spec), ValidationError);
    EXPECT_THROW(circle_data(CirclePhantom{0.5, 0.5, 0.1}, GridSpec{31, 1.0 / 31}), ValidationError);
}

TEST(CircleData, ZeroAtTimeZero)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    for (double x : {0.0, 0.2, 0.5, 0.9}) {
        EXPECT_EQ(circle_forward_analytic(p, x, 0.0), 0.0);
    }
}

TEST(CircleData, DecaysAtLateTimes)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    EXPECT_LT(std::fabs(circle_forward_analytic(p, 0.5, 100.0)), 1e-6);
}

TEST(CircleData, VanishesBeforeArrival)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    EXPECT_NEAR(circle_forward_analytic(p, 0.5, 0.39), 0.0, 1e-14);
    EXPECT_GT(circle_forward_analytic(p, 0.5, 0.45), 0.0);
}

// The d'Alembert integral for the same phantom, evaluated with an adaptive
// 1D quadrature of the exact spherical mean (no grids involved).
TEST(CircleData, MatchesExactAbelIntegral)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    const double x = 0.55;
    auto mean = [&](double r) {
        const std::size_t m = 4000;
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double th = pi * (static_cast<double>(k) + 0.5) / m;
            s += p(x + r * std::cos(th), r * std::sin(th));
        }
        return s / (2.0 * m);
    };
    auto abel = [&](double t) {
        const std::size_t m = 4000;
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double u = 0.5 * pi * (static_cast<double>(k) + 0.5) / m;
            s += std::sin(u) * mean(t * std::sin(u));
        }
        return t * s * 0.5 * pi / m;
    };
    for (double t : {0.47, 0.55, 0.62, 0.8}) {
        const double h = 1e-3;
        const double numeric = (abel(t + h) - abel(t - h)) / (2.0 * h);
        EXPECT_NEAR(circle_forward_analytic(p, x, t), numeric, 2e-3) << "t = " << t;
    }
}

TEST(CircleData, AgreesWithDalembertQuadrature)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    const auto spec = GridSpec::unit_square(256);
    const auto analytic = circle_data(p, spec);
    const auto numeric = dalembert_forward(sample_circle(p, spec));
    EXPECT_LE(rel_l2_error(numeric, analytic), 0.02);
}

TEST(SheppLogan, EmptySetGivesZero)
{
    const auto f = sample_shepp_logan({}, GridSpec::unit_square(32));
    EXPECT_EQ(max_abs(f), 0.0);
}

TEST(SheppLogan, SingleDiskIsIndicator)
{
    const EllipseSet disk{{0.5, 0.5, 0.2, 0.2, 0.0, 1.0}};
    const auto spec = GridSpec::unit_square(32);
    const auto f = sample_shepp_logan(disk, spec);
    for (std::size_t i = 0; i < 32; ++i) {
        for (std::size_t j = 0; j < 32; ++j) {
            const double r = std::hypot(spec.coord(i) - 0.5, spec.coord(j) - 0.5);
            EXPECT_EQ(f(i, j), r <= 0.2 ? 1.0 : 0.0);
        }
    }
}

TEST(SheppLogan, StandardTableInsideDisplayRange)
{
    const auto set = shepp_logan();
    EXPECT_EQ(set.size(), 10u);
    EXPECT_NO_THROW(validate_ellipses(set, 1.0));
    const auto f = sample_shepp_logan(set, GridSpec::unit_square(256));
    const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
    EXPECT_GT(*hi, 0.0);
    EXPECT_GE(*lo, -0.4 * *hi);
    for (const auto& e : set) {
        EXPECT_GE(e.cx - e.half_extent_x(), 0.15 - 1e-12);
        EXPECT_LE(e.cx + e.half_extent_x(), 0.85 + 1e-12);
        EXPECT_GE(e.cy - e.half_extent_y(), 0.2 - 1e-12);
        EXPECT_LE(e.cy + e.half_extent_y(), 0.9 + 1e-12);
    }
}

TEST(SheppLogan, RejectsEllipseOutsideDomain)
{
    const EllipseSet bad{{0.5, 0.05, 0.2, 0.1, 0.0, 1.0}};
    EXPECT_THROW(sample_shepp_logan(bad, GridSpec::unit_square(16)), ValidationError);
}

TEST(SphericalMean, ZeroRadiusReadsDetectorLine)
{
    const auto f = sample_circle(CirclePhantom{0.5, 0.5, 0.1}, GridSpec::unit_square(64));
    EXPECT_EQ(spherical_mean(f, 0.5, 0.0), 0.0);
}

TEST(SphericalMean, ConstantImageGivesOneHalf)
{
    RealGrid2D f(64, 64, 1.0 / 64, AxisKind::image);
    std::fill(f.values().begin(), f.values().end(), 1.0);
    EXPECT_NEAR(spherical_mean(f, 0.5, 0.3), 0.5, 1e-12);
}

TEST(SphericalMean, MatchesRadialQuadrature)
{
    const CirclePhantom p{0.5, 0.5, 0.1};
    const auto f = sample_circle(p, GridSpec::unit_square(512));
    for (double r : {0.42, 0.5, 0.58}) {
        const std::size_t m = 20000;
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double th = pi * (static_cast<double>(k) + 0.5) / m;
            s += p(0.5 + r * std::cos(th), r * std::sin(th));
        }
        const double oracle = s / (2.0 * m);
        EXPECT_NEAR(spherical_mean(f, 0.5, r), oracle, 1e-4) << "r = " << r;
    }
}

TEST(SphericalMean, BoundedByMaximum)
{
    const auto f = sample_shepp_logan(shepp_logan(), GridSpec::unit_square(64));
    const double top = *std::max_element(f.values().begin(), f.values().end());
    for (double x = 0.0; x < 1.0; x += 0.07) {
        for (double r = 0.0; r < 1.4; r += 0.05) {
            EXPECT_LE(spherical_mean(f, x, r), top + 1e-12);
        }
    }
}

TEST(Dalembert, ZeroImageGivesZeroData)
{
    const RealGrid2D f(32, 32, 1.0 / 32, AxisKind::image);
    const auto g = dalembert_forward(f);
    EXPECT_EQ(max_abs(g), 0.0);
    EXPECT_EQ(g.kind(), AxisKind::data);
}

TEST(Dalembert, LinearInThePhantom)
{
    const auto spec = GridSpec::unit_square(64);
    const auto f1 = sample_circle(CirclePhantom{0.4, 0.5, 0.1}, spec);
    const auto f2 = sample_shepp_logan(shepp_logan(), spec);
    RealGrid2D sum = f1;
    for (std::size_t k = 0; k < sum.values().size(); ++k) {
        sum.values()[k] += f2.values()[k];
    }
    const auto g1 = dalembert_forward(f1);
    const auto g2 = dalembert_forward(f2);
    const auto gs = dalembert_forward(sum);
    for (std::size_t k = 0; k < gs.values().size(); ++k) {
        EXPECT_NEAR(gs.values()[k], g1.values()[k] + g2.values()[k], 1e-10);
    }
}

TEST(Dalembert, FirstRowIsZeroAndEnergyFinite)
{
    const auto g = dalembert_forward(sample_shepp_logan(shepp_logan(), GridSpec::unit_square(64)));
    double energy = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
        EXPECT_EQ(g(i, 0), 0.0);
    }
    for (double v : g.values()) {
        energy += v * v;
    }
    EXPECT_TRUE(std::isfinite(energy));
    EXPECT_GT(energy, 0.0);
}

TEST(Dalembert, RejectsNonSquareImage)
{
    const RealGrid2D f(32, 16, 1.0 / 32, AxisKind::image);
    EXPECT_THROW(dalembert_forward(f), ValidationError);
}

TEST(Cutoff, InteriorIsOneAndRangeIsUnit)
{
    const auto spec = GridSpec::unit_square(64);
    const CutoffSpec cutoff = CutoffSpec::from_step(spec.step);
    const auto w = build_cutoff(cutoff, spec);
    const double rho = std::sqrt(cutoff.epsilon);
    EXPECT_EQ(w(32, 32), 1.0);
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = 0; j < 64; ++j) {
            EXPECT_GE(w(i, j), 0.0);
            EXPECT_LE(w(i, j), 1.0);
            const double x = spec.coord(i);
            const double t = spec.coord(j);
            if (std::min({x, 1.0 - x, t, 1.0 - t}) >= rho) {
                EXPECT_EQ(w(i, j), 1.0);
            }
        }
    }
}

TEST(Cutoff, EdgeMidpointCarriesHalfMass)
{
    const auto spec = GridSpec::unit_square(64);
    const auto w = build_cutoff(CutoffSpec::from_step(spec.step), spec);
    EXPECT_NEAR(w(0, 32), 0.5, 2e-2);
    EXPECT_NEAR(w(32, 0), 0.5, 2e-2);
    EXPECT_NEAR(w(0, 0), 0.25, 2e-2);
}

TEST(Cutoff, ZeroFarOutsideAperture)
{
    const detail::CutoffIntegrator integrator(0.01);
    EXPECT_EQ(integrator.weight(-0.2, 0.5, 1.0), 0.0);
    EXPECT_EQ(integrator.weight(0.5, 1.3, 1.0), 0.0);
    EXPECT_NEAR(integrator.weight(0.5, 0.5, 1.0), 1.0, 1e-12);
}

TEST(Cutoff, AttenuatesMonotonicallyTowardsEdge)
{
    const auto spec = GridSpec::unit_square(128);
    const auto w = build_cutoff(CutoffSpec::from_step(spec.step), spec);
    for (std::size_t j = 1; j < 10; ++j) {
        EXPECT_GE(w(64, j), w(64, j - 1));
        EXPECT_GE(w(j, 64), w(j - 1, 64));
    }
    for (std::size_t i = 120; i < 127; ++i) {
        EXPECT_GE(w(i, 64), w(i + 1, 64));
    }
}

TEST(Cutoff, RejectsNonPositiveEpsilon)
{
    EXPECT_THROW(build_cutoff(CutoffSpec{0.0, 1.0}, GridSpec::unit_square(16)), ValidationError);
}

TEST(ApplyCutoff, IdentityZeroAndShapeCheck)
{
    const auto g = circle_data(CirclePhantom{}, GridSpec::unit_square(32));
    RealGrid2D ones(32, 32, 1.0 / 32, AxisKind::data);
    std::fill(ones.values().begin(), ones.values().end(), 1.0);
    EXPECT_EQ(apply_cutoff(g, ones), g);
    const RealGrid2D zeros(32, 32, 1.0 / 32, AxisKind::data);
    EXPECT_EQ(max_abs(apply_cutoff(g, zeros)), 0.0);
    const RealGrid2D other(16, 16, 1.0 / 16, AxisKind::data);
    EXPECT_THROW(apply_cutoff(g, other), ValidationError);
}

TEST(Noise, ZeroLevelIsIdentity)
{
    const auto g = circle_data(CirclePhantom{}, GridSpec::unit_square(32));
    EXPECT_EQ(add_gaussian_noise(g, 0.0, 1), g);
}

TEST(Noise, DeterministicForSeed)
{
    const auto g = circle_data(CirclePhantom{}, GridSpec::unit_square(32));
    EXPECT_EQ(add_gaussian_noise(g, 0.2, 7), add_gaussian_noise(g, 0.2, 7));
    EXPECT_NE(add_gaussian_noise(g, 0.2, 7), add_gaussian_noise(g, 0.2, 8));
}

TEST(Noise, StandardDeviationIsFractionOfPeak)
{
    const auto g = circle_data(CirclePhantom{}, GridSpec::unit_square(512));
    const auto noisy = add_gaussian_noise(g, 0.2, 3);
    const double sigma = 0.2 * max_abs(g);
    double sum = 0.0;
    double sum2 = 0.0;
    const std::size_t count = g.values().size();
    for (std::size_t k = 0; k < count; ++k) {
        const double e = noisy.values()[k] - g.values()[k];
        sum += e;
        sum2 += e * e;
    }
    const double mean = sum / count;
    const double sd = std::sqrt(sum2 / count - mean * mean);
    EXPECT_NEAR(sd, sigma, 0.02 * sigma);
}

TEST(Noise, RejectsNegativeLevel)
{
    const auto g = circle_data(CirclePhantom{}, GridSpec::unit_square(16));
    EXPECT_THROW(add_gaussian_noise(g, -0.1, 1), ValidationError);
}

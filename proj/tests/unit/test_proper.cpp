#include <doctest.h>

#include <cmath>

#include "indexlab/proper.hpp"
#include "indexlab/rng.hpp"

using namespace indexlab;
using proper::Cutoff;
using proper::ProperActionData;

namespace {
ProperActionData line_action(double spacing = 0.125, int radius = 64) {
    ProperActionData a;
    a.n = 1;
    a.spacing = spacing;
    a.box_radius = radius;
    a.slice_weights = {1.0};
    return a;
}

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}
}  // namespace

TEST_CASE("make_cutoff: triangle bump on the line") {
    const auto action = line_action();
    // h = 1 at 0, linear to 0 at distance 1 (width-2 triangle bump).
    auto h = [](const Eigen::VectorXd& x, int) { return std::max(0.0, 1.0 - std::abs(x[0])); };
    const Cutoff chi = proper::make_cutoff(h, 1.0, action);
    for (double x : {-1.0, 0.0, 1.0, 0.3, -0.77})
        CHECK(proper::cutoff_normalization(chi, vec1(x), 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("make_cutoff: already normalized bump is returned pointwise") {
    const auto action = line_action();
    // Lattice hat function: translates sum to exactly 1 after weighting.
    const double a = action.spacing;
    auto h = [a](const Eigen::VectorXd& x, int) {
        return std::max(0.0, 1.0 - std::abs(x[0]) / a) / a;
    };
    const Cutoff chi = proper::make_cutoff(h, a, action);
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const double x = rng.uniform(-2.0, 2.0);
        CHECK(chi.value(vec1(x), 0) == doctest::Approx(h(vec1(x), 0)).epsilon(1e-12));
    }
}

TEST_CASE("cutoff normalization holds at 50 random points") {
    const auto action = line_action();
    const Cutoff chi = proper::cutoff_family(0.5, action);
    Rng rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double x = rng.uniform(-3.0, 3.0);
        worst = std::max(worst, std::abs(proper::cutoff_normalization(chi, vec1(x), 0) - 1.0));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("cutoff_family: distributional limit onto the slice") {
    auto action = line_action(0.02, 128);
    // Non-invariant test function with nonvanishing gradient on the slice.
    auto f = [](const Eigen::VectorXd& x, int) { return std::exp(0.8 * x[0]); };
    const double slice_value = 1.0;  // f(0) * w

    std::vector<double> eps{0.4, 0.2, 0.1};
    std::vector<double> err;
    for (double e : eps) {
        const Cutoff chi = proper::cutoff_family(e, action);
        err.push_back(std::abs(proper::invariant_integral(f, chi) - slice_value));
    }
    CHECK(err[0] > err[1]);
    CHECK(err[1] > err[2]);
    // Observed order from the two extreme eps values.
    const double order = std::log(err[0] / err[2]) / std::log(eps[0] / eps[2]);
    CHECK(order >= 0.9);
    // |integral - slice value| <= C eps with a modest constant.
    for (std::size_t i = 0; i < eps.size(); ++i) CHECK(err[i] <= 2.0 * eps[i]);

    // f = 0 integrates to 0 for every eps.
    auto zero = [](const Eigen::VectorXd&, int) { return 0.0; };
    for (double e : eps)
        CHECK(proper::invariant_integral(zero, proper::cutoff_family(e, action)) == 0.0);

    // Monotone support shrinkage.
    const Cutoff small = proper::cutoff_family(0.1, action);
    const Cutoff large = proper::cutoff_family(0.4, action);
    Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const double x = rng.uniform(-0.5, 0.5);
        if (small.value(vec1(x), 0) != 0.0) CHECK(large.value(vec1(x), 0) != 0.0);
    }
}

TEST_CASE("invariant_integral: cut-off independence for invariant densities") {
    const auto action = line_action();
    auto invariant_one = [](const Eigen::VectorXd&, int) { return 1.0; };

    const Cutoff chi_eps = proper::cutoff_family(0.6, action);
    const Cutoff chi_spline = proper::spline_cutoff(action);
    const Cutoff chi_slice = proper::slice_cutoff(action);

    // Normalized invariant volume: the fundamental domain has volume 1.
    const double v1 = proper::invariant_integral(invariant_one, chi_eps);
    const double v2 = proper::invariant_integral(invariant_one, chi_spline);
    const double v3 = proper::invariant_integral(invariant_one, chi_slice);
    CHECK(v1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(v2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(v3 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(v1 - v2) <= 2e-6);

    // Translate test: a cut-off built from a shifted bump integrates an
    // invariant density to the same value.
    auto h = [](const Eigen::VectorXd& x, int) { return std::max(0.0, 1.0 - std::abs(x[0])); };
    auto h_shift = [](const Eigen::VectorXd& x, int) {
        return std::max(0.0, 1.0 - std::abs(x[0] - 0.7));
    };
    const Cutoff chi_a = proper::make_cutoff(h, 1.0, action);
    const Cutoff chi_b = proper::make_cutoff(h_shift, 1.8, action);
    CHECK(std::abs(proper::invariant_integral(invariant_one, chi_a) -
                   proper::invariant_integral(invariant_one, chi_b)) <= 1e-6);
}

TEST_CASE("slice weights scale the invariant integral") {
    auto action = line_action();
    action.slice_weights = {0.5, 1.5, 2.0};
    const Cutoff chi = proper::spline_cutoff(action);
    auto invariant_one = [](const Eigen::VectorXd&, int) { return 1.0; };
    CHECK(proper::invariant_integral(invariant_one, chi) ==
          doctest::Approx(action.slice_volume()).epsilon(1e-9));
}

TEST_CASE("zero denominator is rejected") {
    const auto action = line_action(1.0, 8);
    // Bump with a denormal-scale fringe: at fringe points the normalization
    // integral collapses below threshold.
    auto h = [](const Eigen::VectorXd& x, int) {
        const double a = std::abs(x[0]);
        if (a <= 0.1) return 1.0;
        if (a <= 0.45) return 1e-13;
        return 0.0;
    };
    const Cutoff chi = proper::make_cutoff(h, 0.45, action);
    CHECK_THROWS_AS(chi.value(vec1(0.3), 0), ZeroDenominatorError);
    CHECK(chi.value(vec1(0.05), 0) > 0.0);
}

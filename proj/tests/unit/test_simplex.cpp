#include <doctest.h>

#include <cmath>

#include "indexlab/rng.hpp"
#include "indexlab/simplex.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace indexlab;
using geom::GroupElement;
using geom::Point;
using geom::SymmetricSpaceModel;
using simplex::GeodesicSimplex;
using simplex::QuadratureRule;

namespace {
Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

GeodesicSimplex euclidean_triangle(Eigen::Vector2d a, Eigen::Vector2d b, Eigen::Vector2d c) {
    const auto model = SymmetricSpaceModel::euclidean(2);
    return GeodesicSimplex{model,
                           {GroupElement::translation(a), GroupElement::translation(b),
                            GroupElement::translation(c)}};
}

// Group element moving i to the given point (upper triangular transport).
GroupElement transport_to(std::complex<double> z) {
    Eigen::Matrix2d m;
    const double s = std::sqrt(z.imag());
    m << s, z.real() / s, 0.0, 1.0 / s;
    return GroupElement::sl2(m);
}

GeodesicSimplex hyperbolic_triangle(std::complex<double> a, std::complex<double> b,
                                    std::complex<double> c) {
    const auto model = SymmetricSpaceModel::hyperbolic_plane();
    return GeodesicSimplex{model, {transport_to(a), transport_to(b), transport_to(c)}};
}
}  // namespace

TEST_CASE("quadrature rules: weights sum to 1/k! and monomial exactness") {
    for (int k = 1; k <= 4; ++k) {
        const auto rule = QuadratureRule::for_simplex(k, 6);
        double total = 0.0;
        for (double w : rule.weights) total += w;
        double factorial = 1.0;
        for (int j = 2; j <= k; ++j) factorial *= j;
        CHECK(total == doctest::Approx(1.0 / factorial).epsilon(1e-13));
    }

    // Exactness up to the stated order against the Dirichlet integral oracle.
    Rng rng(21);
    for (int k = 1; k <= 3; ++k) {
        const int order = 6;
        const auto rule = QuadratureRule::for_simplex(k, order);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> expo(static_cast<std::size_t>(k) + 1, 0);
            int budget = order;
            for (auto& e : expo) {
                e = static_cast<int>(rng.uniform(0.0, budget + 0.999));
                budget -= e;
                if (budget <= 0) break;
            }
            double acc = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                double v = 1.0;
                for (int j = 0; j <= k; ++j)
                    v *= std::pow(rule.nodes[q][static_cast<std::size_t>(j)],
                                  expo[static_cast<std::size_t>(j)]);
                acc += rule.weights[q] * v;
            }
            CHECK(acc == doctest::Approx(oracles::simplex_monomial_integral(expo)).epsilon(1e-11));
        }
    }
}

TEST_CASE("simplex_point: vertices, centroid, midpoint") {
    const auto tri = euclidean_triangle({0, 0}, {1, 0}, {0, 1});
    const std::vector<double> centroid{1.0 / 3, 1.0 / 3, 1.0 / 3};
    const auto c = simplex_point(tri, centroid);
    CHECK(c.vector()[0] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(c.vector()[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));

    // Vertex indicator coordinates hit the vertices (tip convention t0 = 1).
    const auto h = SymmetricSpaceModel::hyperbolic_plane();
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const auto verts = fixtures::random_tuple(h, 3, rng);
        const GeodesicSimplex s{h, verts};
        for (int i = 0; i <= 2; ++i) {
            std::vector<double> t(3, 0.0);
            t[static_cast<std::size_t>(i)] = 1.0;
            const auto p = simplex_point(s, t);
            const auto vertex = h.act(verts[static_cast<std::size_t>(i)], h.basepoint());
            CHECK(h.distance(p, vertex) < 1e-10);
        }
    }

    // Midpoint of a 1-simplex matches the translated contraction.
    const auto g = fixtures::random_element(h, rng);
    const GeodesicSimplex seg{h, {GroupElement::identity(geom::ModelKind::HyperbolicPlane), g}};
    const std::vector<double> mid{0.5, 0.5};
    const auto m = simplex_point(seg, mid);
    const auto expected = h.contraction(0.5, h.act(g, h.basepoint()));
    CHECK(h.distance(m, expected) < 1e-12);

    const std::vector<double> bad{0.7, 0.7};
    CHECK_THROWS_AS(simplex_point(seg, bad), DegenerateCoordinateError);
}

TEST_CASE("euclidean integration is shoelace-exact at any order") {
    const auto vol = geom::InvariantForm::euclidean_volume(2);
    const auto tri = euclidean_triangle({0, 0}, {2, 0}, {0, 2});
    for (int order : {1, 3, 8}) {
        const auto rule = QuadratureRule::for_simplex(2, order);
        CHECK(simplex::integrate_form(vol, tri, rule) == doctest::Approx(2.0).epsilon(1e-12));
    }
    // Signed: swapping two vertices flips the sign.
    const auto rule = QuadratureRule::for_simplex(2, 4);
    const auto swapped = euclidean_triangle({0, 0}, {0, 2}, {2, 0});
    CHECK(simplex::integrate_form(vol, swapped, rule) == doctest::Approx(-2.0).epsilon(1e-12));

    // Degenerate simplex integrates to zero.
    const auto degen = euclidean_triangle({1, 1}, {1, 1}, {0, 2});
    CHECK(std::abs(simplex::integrate_form(vol, degen, rule)) < 1e-13);

    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::Vector2d a{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        Eigen::Vector2d b{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        Eigen::Vector2d c{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double expected = oracles::shoelace({a, b, c});
        CHECK(simplex::integrate_form(vol, euclidean_triangle(a, b, c), rule) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("hyperbolic area matches the Gauss-Bonnet oracle") {
    const auto h = SymmetricSpaceModel::hyperbolic_plane();
    const auto area = geom::InvariantForm::hyperbolic_area();
    const auto rule = QuadratureRule::for_simplex(2, 16);

    const std::complex<double> i{0, 1};
    const auto tri = hyperbolic_triangle(i, {1.0, 1.0}, {-1.0, 1.0});
    const double value = simplex::integrate_form(area, tri, rule);
    const double gb = oracles::gauss_bonnet_area(h, Point::half_plane(i),
                                                 Point::half_plane({1.0, 1.0}),
                                                 Point::half_plane({-1.0, 1.0}));
    CHECK(std::abs(value) > 0.0);
    CHECK(std::abs(value) < M_PI);
    CHECK(std::abs(std::abs(value) - gb) < 1e-6);

    const auto tri2 = hyperbolic_triangle(i, {0.0, 2.0}, {1.0, 1.0});
    const double v2 = simplex::simplex_volume(tri2, rule);
    const double gb2 = oracles::gauss_bonnet_area(h, Point::half_plane(i),
                                                  Point::half_plane({0.0, 2.0}),
                                                  Point::half_plane({1.0, 1.0}));
    CHECK(v2 == doctest::Approx(gb2).epsilon(1e-6));

    // Repeated vertex: zero volume.
    const auto degen = hyperbolic_triangle(i, i, {1.0, 1.0});
    CHECK(simplex::simplex_volume(degen, rule) < 1e-10);

    // Unit right triangle volume in the Euclidean model.
    const auto e2tri = euclidean_triangle({0, 0}, {1, 0}, {0, 1});
    CHECK(simplex::simplex_volume(e2tri, QuadratureRule::for_simplex(2, 2)) ==
          doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("equivariance of the simplex integral") {
    const auto h = SymmetricSpaceModel::hyperbolic_plane();
    const auto area = geom::InvariantForm::hyperbolic_area();
    const auto rule = QuadratureRule::for_simplex(2, 12);
    Rng rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        auto verts = fixtures::random_tuple(h, 3, rng);
        const GeodesicSimplex s{h, verts};
        const double base = simplex::integrate_form(area, s, rule);
        const auto g = fixtures::random_element(h, rng);
        std::vector<GroupElement> moved;
        for (const auto& v : verts) moved.push_back(g.compose(v));
        const GeodesicSimplex gs{h, moved};
        CHECK(simplex::integrate_form(area, gs, rule) == doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("quadrature convergence indicator") {
    const auto h = SymmetricSpaceModel::hyperbolic_plane();
    const auto area = geom::InvariantForm::hyperbolic_area();
    Rng rng(25);
    for (int trial = 0; trial < 5; ++trial) {
        const auto verts = fixtures::random_tuple(h, 3, rng, 2.5);
        const GeodesicSimplex s{h, verts};
        const auto q1 = QuadratureRule::for_simplex(2, 8);
        const auto q2 = QuadratureRule::for_simplex(2, 16);
        const double v1 = simplex::integrate_form(area, s, q1);
        const double v2 = simplex::integrate_form(area, s, q2);
        const double est = simplex::integrate_form_error_estimate(area, s, q1);
        CHECK(std::abs(v2 - v1) <= 10.0 * est + 1e-12);
    }
}

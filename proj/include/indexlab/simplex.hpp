#pragma once

#include <span>
#include <vector>

#include "indexlab/geom.hpp"

namespace indexlab::simplex {

// Geodesic simplex Delta^k(g0 K, ..., gk K), vertices interpreted as the
// points gi * basepoint. Desk-scale cap: 0 <= k <= 4.
struct GeodesicSimplex {
    geom::SymmetricSpaceModel model;
    std::vector<geom::GroupElement> vertices;

    int degree() const { return static_cast<int>(vertices.size()) - 1; }
};

// Nodes and weights on the standard simplex {t_i >= 0, sum t_i = 1}, stored
// in barycentric coordinates; the weights integrate against dt_1...dt_k and
// sum to 1/k!. Built from a Gauss-Legendre rule per cone level, exact for
// polynomials up to the stated order. refinement > 0 adds composite panels:
// geometric toward the tip parameter u = 1 and uniform along the base, for
// the boundary layers of long-edge curved simplices (edge length L wants
// refinement ~ log2(L) + 2).
struct QuadratureRule {
    int degree = 0;
    int order = 1;
    int refinement = 0;
    std::vector<std::vector<double>> nodes;  // barycentric, size k+1 each
    std::vector<double> weights;

    static QuadratureRule for_simplex(int k, int order, int refinement = 0);
};

struct IntegrateOptions {
    double fd_step = 1e-5;     // central-difference step for chart tangents
    bool richardson = false;   // one Richardson extrapolation level
};

// The cone chart of the inductive simplex recursion, with u = 1 - t0 so that
// t0 = 1 is the tip g0 K and t0 = 0 the opposite face.
geom::Point simplex_point(const GeodesicSimplex& s, std::span<const double> t);

// Signed integral of a degree-k invariant form over a degree-k simplex;
// orientation induced by the vertex order.
double integrate_form(const geom::InvariantForm& alpha, const GeodesicSimplex& s,
                      const QuadratureRule& q, const IntegrateOptions& opts = {});

// |integral - same integral at a coarser rule|: a quadrature error indicator.
double integrate_form_error_estimate(const geom::InvariantForm& alpha,
                                     const GeodesicSimplex& s, const QuadratureRule& q,
                                     const IntegrateOptions& opts = {});

// Unsigned volume of a top-degree simplex.
double simplex_volume(const GeodesicSimplex& s, const QuadratureRule& q,
                      const IntegrateOptions& opts = {});

// Gauss-Legendre nodes/weights on [0, 1] (exposed for the van Est grids).
void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace indexlab::simplex

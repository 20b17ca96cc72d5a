#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "indexlab/geom.hpp"
#include "indexlab/proper.hpp"
#include "indexlab/rng.hpp"
#include "indexlab/simplex.hpp"

namespace indexlab::groupcoh {

// Homogeneous smooth group k-cochain, evaluated numerically on k+1 group
// elements.
struct GroupCochain {
    int degree = 0;
    bool homogeneous = true;
    std::function<double(std::span<const geom::GroupElement>)> eval;
};

// (delta c)(g0,...,g_{k+1}) = sum_i (-1)^i c(..., g_i omitted, ...).
GroupCochain delta(const GroupCochain& c);

// J(alpha)(g0,...,gk) = integral of alpha over the geodesic simplex
// Delta^k(g0 K,...,gk K); a cochain morphism for closed alpha.
GroupCochain j_map(const geom::InvariantForm& alpha, const geom::SymmetricSpaceModel& model,
                   const simplex::QuadratureRule& q, const simplex::IntegrateOptions& opts = {});

// Cyclic projection c_lambda = (1/(k+1)) sum_j (-1)^{kj} t^j c with
// (t c)(g0,...,gk) = c(gk, g0,...,g_{k-1}).
GroupCochain cyclic_symmetrize(const GroupCochain& c);

struct VanEstParams {
    double fd_step = 1e-4;         // base central-difference step
    bool scale_step_with_x = true;  // h = fd_step * (1 + |x|)
    bool richardson = false;
};

// The van Est form omega_c(x)(v_1,...,v_k): smeared function
// f_c(x_0,...,x_k) = integral of prod chi(g_i^{-1} x_i) c(g_0,...,g_k) dg,
// differentiated in slots 1..k and restricted to the diagonal. The
// derivative is the diagonal pullback of d_1...d_k f_c, i.e. the signed sum
// over assignments of the directions to the differentiated slots; each
// directional derivative is a central difference and the G-integrals are
// lattice sums over supp chi. Only Euclidean models carry the cut-off
// lattice.
double vanest_form(const GroupCochain& c, const proper::Cutoff& chi, const geom::Point& x,
                   std::span<const geom::TangentVector> dirs, const VanEstParams& params = {});

struct GrowthReport {
    std::vector<double> radii;
    std::vector<double> max_ratio;  // max |c| / prod (1 + d(g_i))^k per shell
    std::vector<double> max_abs;    // max |c| per shell
    double fitted_exponent = 0.0;   // slope of log max|c| vs log prod(1+d(g_i))
};

// Samples (k+1)-tuples on fixed-distance shells d(g_i) = R with uniform
// directions and a per-radius substream of the seeded generator.
GrowthReport growth_profile(const GroupCochain& c, const geom::SymmetricSpaceModel& model,
                            std::span<const double> radii, int samples_per_radius,
                            std::uint64_t seed);

// Group element at distance exactly `radius` from the basepoint, direction
// drawn from rng (shell sampling).
geom::GroupElement random_shell_element(const geom::SymmetricSpaceModel& model, double radius,
                                        indexlab::Rng& rng);

}  // namespace indexlab::groupcoh

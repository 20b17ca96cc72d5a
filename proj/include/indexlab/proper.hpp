#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "indexlab/errors.hpp"

namespace indexlab::proper {

// Desk-scale presentation of a proper cocompact action: M = G x S with
// G = R^n sampled on a lattice (spacing * [-box_radius, box_radius]^n) and S
// a finite sample of the compact slice with positive weights. K is trivial,
// so G-integrals are lattice Riemann sums with Haar weight spacing^n.
struct ProperActionData {
    int n = 1;
    double spacing = 0.25;
    int box_radius = 16;
    std::vector<double> slice_weights = {1.0};

    double haar_weight() const;                  // spacing^n
    double box_extent() const;                   // box_radius * spacing
    int slice_size() const { return static_cast<int>(slice_weights.size()); }
    double slice_volume() const;
    void validate() const;
};

// Cut-off function chi on M with sum_gamma chi(x - gamma, s) h^n = 1 for all
// x. The normalization is exact by construction: the denominator
// N(x) = sum_gamma h(x - gamma) h^n satisfies N(x - gamma0) = N(x) for every
// lattice vector gamma0, so the lattice translates of chi always sum to 1.
struct Cutoff {
    ProperActionData action;
    double support_radius = 1.0;  // sup-norm radius on the G factor
    std::function<double(const Eigen::VectorXd& g, int s)> value;

    double operator()(const Eigen::VectorXd& g, int s) const { return value(g, s); }
};

// chi(x) = h(x) / (sum_gamma h(x - gamma) h^n) for a bump h >= 0 that equals
// 1 on the slice {0} x S. Throws ZeroDenominatorError where the normalization
// integral is below 1e-12.
Cutoff make_cutoff(std::function<double(const Eigen::VectorXd&, int)> h,
                   double support_radius, const ProperActionData& action);

// The family chi_eps from the radially rescaled mollifier bump
// h_eps(x) = psi(|x|/eps), psi(r) = exp(1 - 1/(1 - r^2)): h_eps = 1 on S and
// 0 at distance > eps from S.
Cutoff cutoff_family(double eps, const ProperActionData& action);

// Tensor cubic B-spline bump on the lattice. Besides the (always exact)
// normalization, this cut-off reproduces first moments of the lattice
// exactly, which the van Est round trip relies on.
Cutoff spline_cutoff(const ProperActionData& action);

// The eps -> 0 distributional limit chi_S: mass 1/h^n at the lattice origin.
// On lattice points this is a legitimate cut-off of the discrete model.
Cutoff slice_cutoff(const ProperActionData& action);

// sum_gamma chi(x - gamma, s) h^n over the lattice window around x; the
// defining normalization functional of a cut-off.
double cutoff_normalization(const Cutoff& chi, const Eigen::VectorXd& x, int s);

// Quadrature of chi * density over supp chi x S. For a G-invariant density
// the value is independent of the cut-off.
double invariant_integral(const std::function<double(const Eigen::VectorXd&, int)>& density,
                          const Cutoff& chi);

}  // namespace indexlab::proper

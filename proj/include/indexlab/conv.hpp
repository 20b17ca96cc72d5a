#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "indexlab/groupcoh.hpp"

namespace indexlab::conv {

// Finite sampling lattice for G = R^n: sites with integer coordinates in
// [-radius, radius]^n, spacing h_G, Haar weight h_G^n. In periodic mode the
// box is a finite torus group (cyclic addition), which is exactly closed
// under the group law; otherwise sums escaping the box raise
// BoxOverflowError where exactness is required.
struct LatticeGroup {
    int n = 1;
    double spacing = 0.5;
    int radius = 16;
    bool periodic = false;

    int side() const { return 2 * radius + 1; }
    std::int64_t site_count() const;
    double haar_weight() const;
    bool compatible(const LatticeGroup& other) const;
};

// Finitely supported real function on the lattice; the Haar weight is
// implicit in all integrals.
class ConvElement {
  public:
    explicit ConvElement(const LatticeGroup& lat);

    const LatticeGroup& lattice() const { return lat_; }
    double& at(std::span<const int> m);
    double value(std::span<const int> m) const;  // 0 outside the box
    const std::vector<double>& raw() const { return v_; }
    std::vector<double>& raw() { return v_; }

    std::int64_t flatten(std::span<const int> m) const;
    void unflatten(std::int64_t idx, std::span<int> m) const;

    // Support bounding box in integer coordinates, or false if zero.
    bool support_bounds(std::vector<int>& lo, std::vector<int>& hi) const;

    // Discrete unit delta_0 / h^n.
    static ConvElement delta_unit(const LatticeGroup& lat);

  private:
    LatticeGroup lat_;
    std::vector<double> v_;
};

// (a * b)(g) = sum_{g'} a(g') b(g - g') h^n.
ConvElement convolve(const ConvElement& a, const ConvElement& b);

// Plancherel trace tau^G(a) = a(e).
double plancherel_trace(const ConvElement& a);

// nu_k(a) = (sum_g (1 + |g|)^{2k} |a(g)|^2 h^n)^{1/2}.
double seminorm(int k, const ConvElement& a);

// tau^G_c(a_0,...,a_k) = sum over (g_1,...,g_k) of
//   c(e, g_1, g_1+g_2, ..., g_1+...+g_k) a_0(-(g_1+...+g_k))
//   a_1(g_1) ... a_k(g_k) h^{nk}.
// The sum ranges over the stored supports of a_1..a_k and a_0 is evaluated
// pointwise (zero off its support), so no truncation occurs.
double tau_g(const groupcoh::GroupCochain& c, std::span<const ConvElement> args);

// Both sides of the R^2 Fourier identity: the lattice value of tau^G with
// the Euclidean area cocycle, and the spectral-side integral
// -1/(8 pi^2) * integral of  f0hat (d1 f1hat d2 f2hat - d2 f1hat d1 f2hat),
// computed by discrete Fourier transform with spectral differentiation
// (convention fhat(xi) = integral f(x) e^{-i<x,xi>} dx).
std::pair<double, double> fourier_check(const ConvElement& a0, const ConvElement& a1,
                                        const ConvElement& a2);

// Sampled centered Gaussian exp(-|g - mu|^2 / (2 sigma^2)) * amp.
ConvElement gaussian(const LatticeGroup& lat, double sigma, std::span<const double> mu,
                     double amp = 1.0);

}  // namespace indexlab::conv

#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "indexlab/conv.hpp"
#include "indexlab/proper.hpp"

namespace indexlab::kernels {

// Invariant smoothing kernel on M = G x S at desk scale, stored as
// ktilde(g, s, s') = k((0, s), (g, s')) over the sampling lattice of G and
// the finite slice sample. Slice weights w(s) carry the S-integrals.
class InvariantKernel {
  public:
    InvariantKernel(const conv::LatticeGroup& lat, std::vector<double> slice_weights);

    const conv::LatticeGroup& lattice() const { return lat_; }
    int slice_size() const { return static_cast<int>(w_.size()); }
    const std::vector<double>& slice_weights() const { return w_; }

    double& at(std::span<const int> m, int s, int sp);
    double value(std::span<const int> m, int s, int sp) const;  // 0 outside box

    // ktilde(g, s, s') = f(g) * e2(s, s').
    static InvariantKernel simple_tensor(const conv::ConvElement& f,
                                         const Eigen::MatrixXd& e2,
                                         std::vector<double> slice_weights);

    // Unit of the kernel algebra: delta_0/h^n on G tensor delta_{s s'}/w(s).
    static InvariantKernel identity(const conv::LatticeGroup& lat,
                                    std::vector<double> slice_weights);

  private:
    conv::LatticeGroup lat_;
    std::vector<double> w_;
    std::vector<double> data_;  // [site][s][sp]
    std::int64_t cell(std::int64_t site, int s, int sp) const;
};

// (k * k')(g, s, s'') = sum_{g', s'} ktilde(g', s, s') ktilde'(g - g', s', s'')
//                       * h^n * w(s').
InvariantKernel kernel_convolve(const InvariantKernel& k, const InvariantKernel& kp);

// Tr_S(ktilde)(g) = sum_s ktilde(g, s, s) w(s).
conv::ConvElement partial_trace(const InvariantKernel& k);

// tau^M_c: the discretized value of
//   int int chi(x_0)...chi(x_k) k_0(x_0, g_1 x_1) ... k_k(x_k, (g_1...g_k)^{-1} x_0)
//           c(e, g_1, ..., g_1...g_k),
// all M-integrals as weighted sums over (lattice G) x S, G-integrals over the
// lattice. The cut-off must live on the same lattice as all kernels.
double tau_m(const groupcoh::GroupCochain& c, const proper::Cutoff& chi,
             std::span<const InvariantKernel> ks);

// Independent pairing computation on both sides of the Morita isomorphism:
// (<[e1 (x) e2], tau^M_c>, <[Tr_S(e1 (x) e2)], tau^G_c>). Requires
// e1 * e1 = e1 on the lattice and e2 idempotent as an S-operator (w-weighted),
// within 1e-10.
std::pair<double, double> morita_check(const conv::ConvElement& e1, const Eigen::MatrixXd& e2,
                                       const groupcoh::GroupCochain& c,
                                       const proper::Cutoff& chi,
                                       std::vector<double> slice_weights);

// Exactly idempotent convolution element on a periodic lattice: the Fourier
// mask indicator { |ahat(theta)| > 1/2 } of a real even element a.
conv::ConvElement fourier_mask_idempotent(const conv::ConvElement& a);

// Rank-1 S-operator idempotent (orthogonal projection for the w-weighted
// inner product); its S-trace is 1.
Eigen::MatrixXd rank_one_slice_projection(const Eigen::VectorXd& v,
                                          std::span<const double> w);

// ||k * k - k|| in the weighted l1 norm; used by idempotency preconditions.
double kernel_idempotency_defect(const InvariantKernel& k);
double conv_idempotency_defect(const conv::ConvElement& e);
double slice_idempotency_defect(const Eigen::MatrixXd& e2, std::span<const double> w);

}  // namespace indexlab::kernels

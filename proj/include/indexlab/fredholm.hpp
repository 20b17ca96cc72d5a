#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "indexlab/errors.hpp"

namespace indexlab::fredholm {

// Finite-dimensional model of an odd Z_2-graded Dirac operator:
// D+ : E+ -> E- is a q x p matrix, D- = (D+)^T.
struct GradedDirac {
    Eigen::MatrixXd dplus;  // q x p

    int p() const { return static_cast<int>(dplus.cols()); }
    int q() const { return static_cast<int>(dplus.rows()); }
    Eigen::MatrixXd dminus() const { return dplus.transpose(); }
};

// 2x2 block idempotent over E+ (+) E-, with the reference idempotent
// e1 = diag(0, I_q).
struct IndexProjector {
    Eigen::MatrixXd matrix;  // (p+q) x (p+q)
    std::string tag;         // CS, CM, Graph, MW
    int p = 0;
    int q = 0;
};

// Connes-Skandalis idempotent for a parametrix Q of D+ (default: the
// Moore-Penrose pseudoinverse, which makes the remainders orthogonal
// projections onto kernel and cokernel):
//   S+ = I - Q D+, S- = I - D+ Q,
//   P  = [ S+^2, S+ (I + S+) Q ; S- D+, I - S-^2 ].
IndexProjector cs_projector(const GradedDirac& d,
                            std::optional<Eigen::MatrixXd> parametrix = std::nullopt);

// Connes-Moscovici idempotent V_D built from heat factors e^{-D-+D+-} and the
// entire function (1 - e^{-x})/x.
IndexProjector cm_idempotent(const GradedDirac& d);

// Graph projection e_D built from (I + D- D+)^{-1}.
IndexProjector graph_projection(const GradedDirac& d);

// Moscovici-Wu projector: CS shape with parametrix P = u(D- D+) D-, where
// w(y) = 1 - y u(y) decays. Default u(y) = (1 - e^{-y})/y. At finite
// dimension the compact-Fourier-support condition on u is vacuous.
IndexProjector mw_projector(const GradedDirac& d,
                            std::function<double(double)> u = {});

// Tr(P) - Tr(e1): equals the index of D+ for every projector above. Throws
// NotIdempotentError if ||P^2 - P|| > 1e-9 and checks the value is within
// 1e-8 of an integer.
double trace_pairing(const IndexProjector& proj);

// Supertrace of the heat operator, Tr e^{-t D- D+} - Tr e^{-t D+ D-};
// t-independent and equal to the index (McKean-Singer).
double mckean_singer_supertrace(const GradedDirac& d, double t);

// phi(x) = (1 - e^{-x})/x with the removable singularity handled by series
// for |x| < 1e-6.
double phi1(double x);

// f(H) for symmetric positive semidefinite H via eigendecomposition.
Eigen::MatrixXd sym_matrix_function(const Eigen::MatrixXd& h,
                                    const std::function<double(double)>& f);

}  // namespace indexlab::fredholm

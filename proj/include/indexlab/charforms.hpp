#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "indexlab/geom.hpp"
#include "indexlab/proper.hpp"

namespace indexlab::charforms {

// Constant-coefficient differential form on R^n (n <= 4), one coefficient per
// basis subset dx_I, I a bitmask. Invariant forms on the flat desk models are
// exactly the constant-coefficient ones.
struct ConstForm {
    int n = 0;
    std::array<double, 16> c{};  // indexed by bitmask over axes

    static ConstForm zero(int n);
    static ConstForm constant(int n, double value);
    // dx_{axes[0]} ^ ... with unit coefficient.
    static ConstForm basis(int n, std::vector<int> axes, double coeff = 1.0);

    bool homogeneous_of_degree(int k) const;
    int top_mask() const { return (1 << n) - 1; }
};

ConstForm wedge(const ConstForm& a, const ConstForm& b);
ConstForm add(const ConstForm& a, const ConstForm& b);
ConstForm scale(double s, const ConstForm& a);

// Multilinear alternating evaluator for the geometry-module invariance tests.
geom::InvariantForm to_invariant_form(const ConstForm& f, int degree);

// Curvature samples: matrix-valued coefficients of the curvature 2-form at
// sample points. Riemannian blocks are skew-symmetric real (so(r)), bundle
// blocks skew-Hermitian. Invariance on the flat desk models means the
// samples agree across points (checked to 1e-9).
struct CurvatureSample {
    std::map<std::pair<int, int>, Eigen::MatrixXd> riemann;    // a < b
    std::map<std::pair<int, int>, Eigen::MatrixXcd> bundle;    // a < b
};

struct CurvatureData {
    int n = 2;       // dimension of the G-factor of M
    int rank_e = 1;  // rank of the coefficient bundle
    std::vector<CurvatureSample> samples;

    static CurvatureData flat(int n, int rank_e);
};

// Graded characteristic form, degrees 0..n.
struct CharacteristicForm {
    ConstForm form;
};

// A-hat = 1 - p1/24 + ..., truncated after the 4-form term (desk cap
// dim M <= 4); p1 = -tr(R ^ R) / (8 pi^2).
CharacteristicForm a_hat_form(const CurvatureData& c);

// L = 1 + p1/3 + ..., same truncation.
CharacteristicForm l_form(const CurvatureData& c);

// Ch' = rk(E) + tr(iF/2pi) + (1/2) tr((iF/2pi)^2), truncated to dim M.
CharacteristicForm chern_character(const CurvatureData& c);

CharacteristicForm wedge(const CharacteristicForm& a, const CharacteristicForm& b);

// int_M chi (AS ^ alpha)_top over the proper-module quadrature; alpha is an
// invariant form pulled back from G/K (constant along the slice).
double higher_index_rhs(const CharacteristicForm& as, const proper::Cutoff& chi,
                        const ConstForm& alpha);
double higher_signature(const CharacteristicForm& l, const proper::Cutoff& chi,
                        const ConstForm& alpha);
double higher_a_hat(const CharacteristicForm& a_hat, const proper::Cutoff& chi,
                    const ConstForm& alpha);

// Exterior derivative of a (possibly point-dependent) 1-form given by
// coefficient functions, by central differences; used to verify numerically
// that exact invariant forms pair to zero.
ConstForm numerical_exterior_derivative(
    int n, const std::function<double(const Eigen::VectorXd&, int axis)>& coeff,
    const Eigen::VectorXd& at, double step = 1e-5);

}  // namespace indexlab::charforms

#include "indexlab/fredholm.hpp"

#include <cmath>

namespace indexlab::fredholm {

namespace {

IndexProjector assemble(const GradedDirac& d, const Eigen::MatrixXd& a11,
                        const Eigen::MatrixXd& a12, const Eigen::MatrixXd& a21,
                        const Eigen::MatrixXd& a22, std::string tag) {
    IndexProjector proj;
    proj.p = d.p();
    proj.q = d.q();
    proj.tag = std::move(tag);
    proj.matrix.setZero(proj.p + proj.q, proj.p + proj.q);
    proj.matrix.topLeftCorner(proj.p, proj.p) = a11;
    proj.matrix.topRightCorner(proj.p, proj.q) = a12;
    proj.matrix.bottomLeftCorner(proj.q, proj.p) = a21;
    proj.matrix.bottomRightCorner(proj.q, proj.q) = a22;
    return proj;
}

IndexProjector cs_shape(const GradedDirac& d, const Eigen::MatrixXd& q_mat, std::string tag) {
    const Eigen::MatrixXd dp = d.dplus;
    const Eigen::MatrixXd sp = Eigen::MatrixXd::Identity(d.p(), d.p()) - q_mat * dp;
    const Eigen::MatrixXd sm = Eigen::MatrixXd::Identity(d.q(), d.q()) - dp * q_mat;
    return assemble(d, sp * sp, sp * (Eigen::MatrixXd::Identity(d.p(), d.p()) + sp) * q_mat,
                    sm * dp, Eigen::MatrixXd::Identity(d.q(), d.q()) - sm * sm, std::move(tag));
}

}  // namespace

double phi1(double x) {
    if (std::abs(x) < 1e-6) return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
    return (1.0 - std::exp(-x)) / x;
}

Eigen::MatrixXd sym_matrix_function(const Eigen::MatrixXd& h,
                                    const std::function<double(double)>& f) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXd vals = es.eigenvalues();
    for (int i = 0; i < vals.size(); ++i) vals[i] = f(vals[i]);
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

IndexProjector cs_projector(const GradedDirac& d, std::optional<Eigen::MatrixXd> parametrix) {
    Eigen::MatrixXd q_mat;
    if (parametrix) {
        q_mat = *parametrix;
        if (q_mat.rows() != d.p() || q_mat.cols() != d.q())
            throw DomainError("parametrix must map E- to E+");
    } else {
        q_mat = d.dplus.completeOrthogonalDecomposition().pseudoInverse();
    }
    return cs_shape(d, q_mat, "CS");
}

IndexProjector cm_idempotent(const GradedDirac& d) {
    const Eigen::MatrixXd dp = d.dplus;
    const Eigen::MatrixXd dm = d.dminus();
    const Eigen::MatrixXd hp = dm * dp;  // on E+
    const Eigen::MatrixXd hm = dp * dm;  // on E-
    const auto exp_full = [](double x) { return std::exp(-x); };
    const auto exp_half = [](double x) { return std::exp(-0.5 * x); };
    const Eigen::MatrixXd ep = sym_matrix_function(hp, exp_full);
    const Eigen::MatrixXd ep_half = sym_matrix_function(hp, exp_half);
    const Eigen::MatrixXd em = sym_matrix_function(hm, exp_full);
    const Eigen::MatrixXd em_half = sym_matrix_function(hm, exp_half);
    const Eigen::MatrixXd fp = sym_matrix_function(hp, phi1);  // (I - e^{-H})/H
    return assemble(d, ep, ep_half * fp * dm, em_half * dp,
                    Eigen::MatrixXd::Identity(d.q(), d.q()) - em, "CM");
}

IndexProjector graph_projection(const GradedDirac& d) {
    const Eigen::MatrixXd dp = d.dplus;
    const Eigen::MatrixXd dm = d.dminus();
    const Eigen::MatrixXd r =
        (Eigen::MatrixXd::Identity(d.p(), d.p()) + dm * dp).ldlt().solve(
            Eigen::MatrixXd::Identity(d.p(), d.p()));
    return assemble(d, r, r * dm, dp * r, dp * r * dm, "Graph");
}

IndexProjector mw_projector(const GradedDirac& d, std::function<double(double)> u) {
    if (!u) u = phi1;
    const Eigen::MatrixXd dm = d.dminus();
    const Eigen::MatrixXd hp = dm * d.dplus;
    const Eigen::MatrixXd script_p = sym_matrix_function(hp, u) * dm;
    IndexProjector proj = cs_shape(d, script_p, "MW");
    return proj;
}

double trace_pairing(const IndexProjector& proj) {
    const Eigen::MatrixXd& P = proj.matrix;
    const double defect = (P * P - P).cwiseAbs().rowwise().sum().maxCoeff();
    if (defect > 1e-9)
        throw NotIdempotentError("projector fails ||P^2 - P|| <= 1e-9: defect = " +
                                 std::to_string(defect));
    const double value = P.trace() - proj.q;
    if (std::abs(value - std::round(value)) > 1e-8)
        throw DomainError("trace pairing is not an integer: " + std::to_string(value));
    return value;
}

double mckean_singer_supertrace(const GradedDirac& d, double t) {
    const Eigen::MatrixXd dm = d.dminus();
    const Eigen::MatrixXd hp = dm * d.dplus;
    const Eigen::MatrixXd hm = d.dplus * dm;
    const auto heat = [t](double x) { return std::exp(-t * x); };
    return sym_matrix_function(hp, heat).trace() - sym_matrix_function(hm, heat).trace();
}

}  // namespace indexlab::fredholm

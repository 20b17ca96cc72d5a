#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "indexlab/errors.hpp"

namespace indexlab::geom {

using Complex = std::complex<double>;

enum class ModelKind { Euclidean, HyperbolicPlane };

// Group element: a translation vector for G = R^n, a real 2x2 matrix with
// det = 1 for G = SL(2,R). Construction renormalizes g <- g/sqrt(det g) when
// |det - 1| <= 1e-8 and rejects larger drift.
class GroupElement {
  public:
    static GroupElement translation(Eigen::VectorXd v);
    static GroupElement sl2(const Eigen::Matrix2d& m);
    static GroupElement identity(ModelKind kind, int n = 2);

    ModelKind kind() const { return kind_; }
    const Eigen::VectorXd& vector() const { return v_; }
    Eigen::VectorXd& mutable_vector() { return v_; }
    const Eigen::Matrix2d& matrix() const { return m_; }

    GroupElement compose(const GroupElement& other) const;  // this * other
    GroupElement inverse() const;

  private:
    GroupElement() = default;
    ModelKind kind_ = ModelKind::Euclidean;
    Eigen::VectorXd v_;
    Eigen::Matrix2d m_ = Eigen::Matrix2d::Identity();
};

// Point of the model space: a vector of R^n, or z in the upper half-plane
// (Im z > 0 strictly, rejected at 1e-14).
class Point {
  public:
    static Point euclidean(Eigen::VectorXd v);
    static Point half_plane(Complex z);

    ModelKind kind() const { return kind_; }
    const Eigen::VectorXd& vector() const { return v_; }
    Complex z() const { return z_; }

  private:
    Point() = default;
    ModelKind kind_ = ModelKind::Euclidean;
    Eigen::VectorXd v_;
    Complex z_{0.0, 1.0};
};

// Tangent vector in chart coordinates: a vector of R^n, or a complex number
// attached to a point of the half-plane.
struct TangentVector {
    Eigen::VectorXd v;  // Euclidean component
    Complex w{0.0, 0.0};

    static TangentVector euclidean(Eigen::VectorXd v);
    static TangentVector half_plane(Complex w);
};

// Concrete model of G/K with nonpositive curvature. Euclidean(n): G = R^n
// acting on itself, K trivial. HyperbolicPlane: G = SL(2,R) acting on the
// upper half-plane by Mobius transformations, K = SO(2), basepoint i.
class SymmetricSpaceModel {
  public:
    static SymmetricSpaceModel euclidean(int n);
    static SymmetricSpaceModel hyperbolic_plane();

    ModelKind kind() const { return kind_; }
    int dimension() const { return kind_ == ModelKind::Euclidean ? n_ : 2; }

    Point basepoint() const;
    Point act(const GroupElement& g, const Point& x) const;
    double distance(const Point& x, const Point& y) const;

    // Geodesic contraction phi_s(x) = exp(s log(x)) toward the basepoint.
    Point contraction(double s, const Point& x) const;

    // Inverse of the radial exponential map at the basepoint: the tangent
    // vector v with contraction(s, x) = exp(s v) and |v| = d(basepoint, x).
    TangentVector log_base(const Point& x) const;
    Point exp_base(const TangentVector& v) const;

    // Initial tangent at `base` of the geodesic from `base` to `x`; its metric
    // norm equals d(base, x). Used for angle measurements at simplex vertices.
    TangentVector log_at(const Point& base, const Point& x) const;

    // Derivative pushforward of the action: identity for translations,
    // dz -> dz/(cz+d)^2 for Mobius maps.
    TangentVector push_forward(const GroupElement& g, const Point& at,
                               const TangentVector& v) const;

    // Metric norm of a tangent vector at a point.
    double tangent_norm(const Point& at, const TangentVector& v) const;

  private:
    ModelKind kind_ = ModelKind::Euclidean;
    int n_ = 2;
};

// Invariant differential form, evaluated pointwise on tangent arguments in
// chart coordinates. Multilinearity/alternation and G-invariance of the
// builtins are covered by the module tests.
struct InvariantForm {
    int degree = 0;
    std::function<double(const Point&, std::span<const TangentVector>)> eval;

    // dx1 ^ ... ^ dxn on the Euclidean model (n = 2: dx ^ dy).
    static InvariantForm euclidean_volume(int n);
    // dx ^ dy / y^2 on the upper half-plane.
    static InvariantForm hyperbolic_area();
    static InvariantForm constant(double value);
};

}  // namespace indexlab::geom

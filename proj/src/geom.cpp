#include "indexlab/geom.hpp"

#include <cmath>

namespace indexlab::geom {

namespace {
constexpr double kDetTolerance = 1e-8;
constexpr double kImTolerance = 1e-14;

Complex mobius(const Eigen::Matrix2d& m, Complex z) {
    const Complex num = m(0, 0) * z + Complex(m(0, 1), 0.0);
    const Complex den = m(1, 0) * z + Complex(m(1, 1), 0.0);
    return num / den;
}

// Rotation k_theta in SO(2) fixing i; rotates tangents at i by 2*theta.
Eigen::Matrix2d so2(double theta) {
    Eigen::Matrix2d k;
    k << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return k;
}
}  // namespace

GroupElement GroupElement::translation(Eigen::VectorXd v) {
    GroupElement g;
    g.kind_ = ModelKind::Euclidean;
    g.v_ = std::move(v);
    return g;
}

GroupElement GroupElement::sl2(const Eigen::Matrix2d& m) {
    const double det = m.determinant();
    if (std::abs(det - 1.0) > kDetTolerance || det <= 0.0) {
        throw DomainError("group element determinant drifted from 1: det = " +
                          std::to_string(det));
    }
    GroupElement g;
    g.kind_ = ModelKind::HyperbolicPlane;
    g.m_ = m / std::sqrt(det);
    return g;
}

GroupElement GroupElement::identity(ModelKind kind, int n) {
    if (kind == ModelKind::Euclidean)
        return translation(Eigen::VectorXd::Zero(n));
    return sl2(Eigen::Matrix2d::Identity());
}

GroupElement GroupElement::compose(const GroupElement& other) const {
    if (kind_ == ModelKind::Euclidean)
        return translation(v_ + other.v_);
    return sl2(m_ * other.m_);
}

GroupElement GroupElement::inverse() const {
    if (kind_ == ModelKind::Euclidean) return translation(-v_);
    Eigen::Matrix2d inv;
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return sl2(inv);
}

Point Point::euclidean(Eigen::VectorXd v) {
    Point p;
    p.kind_ = ModelKind::Euclidean;
    p.v_ = std::move(v);
    return p;
}

Point Point::half_plane(Complex z) {
    if (!(z.imag() > kImTolerance)) {
        throw HyperbolicDomainError("point is not in the upper half-plane: Im z = " +
                                    std::to_string(z.imag()));
    }
    Point p;
    p.kind_ = ModelKind::HyperbolicPlane;
    p.z_ = z;
    return p;
}

TangentVector TangentVector::euclidean(Eigen::VectorXd v) {
    TangentVector t;
    t.v = std::move(v);
    return t;
}

TangentVector TangentVector::half_plane(Complex w) {
    TangentVector t;
    t.w = w;
    return t;
}

SymmetricSpaceModel SymmetricSpaceModel::euclidean(int n) {
    SymmetricSpaceModel m;
    m.kind_ = ModelKind::Euclidean;
    m.n_ = n;
    return m;
}

SymmetricSpaceModel SymmetricSpaceModel::hyperbolic_plane() {
    SymmetricSpaceModel m;
    m.kind_ = ModelKind::HyperbolicPlane;
    return m;
}

Point SymmetricSpaceModel::basepoint() const {
    if (kind_ == ModelKind::Euclidean)
        return Point::euclidean(Eigen::VectorXd::Zero(n_));
    return Point::half_plane(Complex(0.0, 1.0));
}

Point SymmetricSpaceModel::act(const GroupElement& g, const Point& x) const {
    if (kind_ == ModelKind::Euclidean)
        return Point::euclidean(x.vector() + g.vector());
    const Complex image = mobius(g.matrix(), x.z());
    if (!(image.imag() > kImTolerance) || !std::isfinite(image.real()) ||
        !std::isfinite(image.imag())) {
        throw HyperbolicDomainError("Mobius action left the upper half-plane");
    }
    return Point::half_plane(image);
}

double SymmetricSpaceModel::distance(const Point& x, const Point& y) const {
    if (kind_ == ModelKind::Euclidean) return (x.vector() - y.vector()).norm();
    const Complex z = x.z(), w = y.z();
    const double d2 = std::norm(z - w);
    if (d2 == 0.0) return 0.0;
    const double arg = 1.0 + d2 / (2.0 * z.imag() * w.imag());
    return std::acosh(arg);
}

Point SymmetricSpaceModel::contraction(double s, const Point& x) const {
    if (kind_ == ModelKind::Euclidean)
        return Point::euclidean(s * x.vector());
    TangentVector v = log_base(x);
    v.w *= s;
    return exp_base(v);
}

TangentVector SymmetricSpaceModel::log_base(const Point& x) const {
    if (kind_ == ModelKind::Euclidean)
        return TangentVector::euclidean(x.vector());

    const Complex z = x.z();
    const double t = distance(basepoint(), x);
    if (t < 1e-15) return TangentVector::half_plane(Complex(0.0, 0.0));
    if (std::abs(z.real()) < 1e-14) {
        // Vertical geodesic through i; up for |z| > 1, down otherwise.
        const double sign = z.imag() > 1.0 ? 1.0 : -1.0;
        return TangentVector::half_plane(Complex(0.0, sign * t));
    }
    // The geodesic from i to z is the half-circle centered at x0 on the real
    // axis; the initial tangent is perpendicular to the radius i - x0.
    const double x0 = (std::norm(z) - 1.0) / (2.0 * z.real());
    Complex dir = Complex(-1.0, -x0) / std::sqrt(1.0 + x0 * x0);
    if (z.real() > 0.0) dir = -dir;
    return TangentVector::half_plane(t * dir);
}

Point SymmetricSpaceModel::exp_base(const TangentVector& v) const {
    if (kind_ == ModelKind::Euclidean) return Point::euclidean(v.v);
    const double t = std::abs(v.w);
    if (t < 1e-300) return basepoint();
    // Rotate the unit-speed vertical geodesic i e^t into direction arg(v).
    const double theta = 0.5 * (std::arg(v.w) - 1.5707963267948966);
    const Eigen::Matrix2d k = so2(theta);
    return Point::half_plane(mobius(k, Complex(0.0, std::exp(t))));
}

TangentVector SymmetricSpaceModel::log_at(const Point& base, const Point& x) const {
    if (kind_ == ModelKind::Euclidean)
        return TangentVector::euclidean(x.vector() - base.vector());
    // Translate base to i with T = [[1,-a],[0,b]]/sqrt(b), pull the tangent
    // back through the analytic derivative of T.
    const Complex zb = base.z();
    const double b = zb.imag();
    Eigen::Matrix2d m;
    const double s = std::sqrt(b);
    m << 1.0 / s, -zb.real() / s, 0.0, b / s;
    const GroupElement T = GroupElement::sl2(m);
    const TangentVector vi = log_base(act(T, x));
    // dT/dz at base is 1/(c z + d)^2 with c = 0, d = b/sqrt(b): equals 1/b.
    return TangentVector::half_plane(vi.w * b);
}

TangentVector SymmetricSpaceModel::push_forward(const GroupElement& g, const Point& at,
                                                const TangentVector& v) const {
    if (kind_ == ModelKind::Euclidean) return v;
    const Eigen::Matrix2d& m = g.matrix();
    const Complex den = m(1, 0) * at.z() + Complex(m(1, 1), 0.0);
    return TangentVector::half_plane(v.w / (den * den));
}

double SymmetricSpaceModel::tangent_norm(const Point& at, const TangentVector& v) const {
    if (kind_ == ModelKind::Euclidean) return v.v.norm();
    return std::abs(v.w) / at.z().imag();
}

InvariantForm InvariantForm::euclidean_volume(int n) {
    InvariantForm f;
    f.degree = n;
    f.eval = [n](const Point&, std::span<const TangentVector> vs) {
        Eigen::MatrixXd m(n, n);
        for (int j = 0; j < n; ++j) m.col(j) = vs[static_cast<std::size_t>(j)].v;
        return m.determinant();
    };
    return f;
}

InvariantForm InvariantForm::hyperbolic_area() {
    InvariantForm f;
    f.degree = 2;
    f.eval = [](const Point& p, std::span<const TangentVector> vs) {
        const double cross = vs[0].w.real() * vs[1].w.imag() -
                             vs[0].w.imag() * vs[1].w.real();
        const double y = p.z().imag();
        return cross / (y * y);
    };
    return f;
}

InvariantForm InvariantForm::constant(double value) {
    InvariantForm f;
    f.degree = 0;
    f.eval = [value](const Point&, std::span<const TangentVector>) { return value; };
    return f;
}

}  // namespace indexlab::geom

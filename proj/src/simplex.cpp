#include "indexlab/simplex.hpp"

#include <cmath>
#include <complex>
#include <numeric>

#include "indexlab/errors.hpp"

namespace indexlab::simplex {

namespace {

constexpr double kTipEps = 1e-14;

// Long-double arithmetic for the upper half-plane chart. Chart coordinates of
// points at metric distance D from the basepoint only encode the point to
// ~eps * e^D metric precision, and the central differences of the chart
// divide that noise by the step; the extended mantissa keeps the tangents
// usable out to the desk-scale distances.
namespace hypld {

using C = std::complex<long double>;
using M = Eigen::Matrix<long double, 2, 2>;

const C kI(0.0L, 1.0L);

C mobius(const M& m, C z) { return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1)); }

M normalized(M m) {
    const long double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m / std::sqrt(det);
}

long double dist_i(C z) {
    const long double d2 = std::norm(z - kI);
    if (d2 == 0.0L) return 0.0L;
    return std::acosh(1.0L + d2 / (2.0L * z.imag()));
}

C log_i(C z) {
    const long double t = dist_i(z);
    if (t < 1e-18L) return C(0.0L, 0.0L);
    if (std::abs(z.real()) < 1e-17L) {
        const long double sign = z.imag() > 1.0L ? 1.0L : -1.0L;
        return C(0.0L, sign * t);
    }
    const long double x0 = (std::norm(z) - 1.0L) / (2.0L * z.real());
    C dir = C(-1.0L, -x0) / std::sqrt(1.0L + x0 * x0);
    if (z.real() > 0.0L) dir = -dir;
    return t * dir;
}

C exp_i(C v) {
    const long double t = std::abs(v);
    if (t < 1e-300L) return kI;
    const long double theta = 0.5L * (std::arg(v) - 1.5707963267948966192313216916398L);
    M k;
    k << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return mobius(k, C(0.0L, std::exp(t)));
}

C contraction(long double u, C z) { return exp_i(u * log_i(z)); }

}  // namespace hypld

// Relative vertex tables of the cone recursion: level l holds the vertices
// rebased at the running tip. Euclidean charts evaluate in double (the chart
// is affine); hyperbolic charts evaluate in long double.
struct PreparedChart {
    const geom::SymmetricSpaceModel* model;
    std::vector<std::vector<geom::GroupElement>> levels;
    std::vector<std::vector<hypld::M>> levels_ld;

    explicit PreparedChart(const GeodesicSimplex& s) : model(&s.model) {
        levels.push_back(s.vertices);
        while (levels.back().size() > 1) {
            const auto& cur = levels.back();
            const geom::GroupElement inv0 = cur[0].inverse();
            std::vector<geom::GroupElement> next;
            next.reserve(cur.size() - 1);
            for (std::size_t i = 1; i < cur.size(); ++i)
                next.push_back(inv0.compose(cur[i]));
            levels.push_back(std::move(next));
        }
        if (model->kind() == geom::ModelKind::HyperbolicPlane) {
            levels_ld.reserve(levels.size());
            for (const auto& lvl : levels) {
                std::vector<hypld::M> row;
                row.reserve(lvl.size());
                for (const auto& g : lvl)
                    row.push_back(hypld::normalized(g.matrix().cast<long double>()));
                levels_ld.push_back(std::move(row));
            }
        }
    }

    geom::Point eval(std::size_t level, std::span<const double> t) const {
        const auto& verts = levels[level];
        const geom::Point tip = model->act(verts[0], model->basepoint());
        if (t.size() == 1) return tip;
        const double u = 1.0 - t[0];
        if (u < kTipEps) return tip;
        // Base coordinates s_j = t_j / u; at u -> 0 the value is the tip
        // regardless, handled above (removable singularity).
        std::vector<double> s(t.size() - 1);
        for (std::size_t j = 0; j + 1 < t.size(); ++j) s[j] = t[j + 1] / u;
        const geom::Point base = eval(level + 1, s);
        return model->act(verts[0], model->contraction(u, base));
    }

    hypld::C eval_ld(std::size_t level, std::span<const long double> t) const {
        const auto& verts = levels_ld[level];
        if (t.size() == 1) return hypld::mobius(verts[0], hypld::kI);
        const long double u = 1.0L - t[0];
        if (u < static_cast<long double>(kTipEps)) return hypld::mobius(verts[0], hypld::kI);
        std::vector<long double> s(t.size() - 1);
        for (std::size_t j = 0; j + 1 < t.size(); ++j) s[j] = t[j + 1] / u;
        const hypld::C base = eval_ld(level + 1, s);
        return hypld::mobius(verts[0], hypld::contraction(u, base));
    }
};

void check_barycentric(std::span<const double> t, int expected) {
    if (static_cast<int>(t.size()) != expected + 1)
        throw DegenerateCoordinateError("barycentric coordinate count mismatch");
    double sum = 0.0;
    for (double ti : t) sum += ti;
    if (std::abs(sum - 1.0) > 1e-12)
        throw DegenerateCoordinateError("barycentric coordinates do not sum to 1");
}

// Pullback of the form at one interior node. Euclidean: the chart is affine
// and the tangents are exact. Hyperbolic: central differences of the
// long-double chart, with point and tangents moved to the basepoint frame
// (the form is invariant) so the evaluation stays well-scaled.
double eval_pullback(const geom::InvariantForm& alpha, const PreparedChart& chart,
                     std::span<const double> t, int k, double h,
                     std::span<const geom::TangentVector> affine_tangents) {
    if (!affine_tangents.empty()) {
        const geom::Point x = chart.eval(0, t);
        return alpha.eval(x, affine_tangents);
    }

    std::vector<long double> tl(t.begin(), t.end());
    const hypld::C z0 = chart.eval_ld(0, tl);
    const long double y0 = z0.imag();

    std::vector<geom::TangentVector> tangents(static_cast<std::size_t>(k));
    std::vector<long double> tp(t.begin(), t.end()), tm(t.begin(), t.end());
    for (int i = 1; i <= k; ++i) {
        // Direction e_i - e_0 stays on the simplex; clamp to the interior.
        double hi = h;
        hi = std::min(hi, 0.45 * t[static_cast<std::size_t>(i)]);
        hi = std::min(hi, 0.45 * t[0]);
        const long double hl = static_cast<long double>(hi);
        tp.assign(t.begin(), t.end());
        tm.assign(t.begin(), t.end());
        tp[static_cast<std::size_t>(i)] += hl;
        tp[0] -= hl;
        tm[static_cast<std::size_t>(i)] -= hl;
        tm[0] += hl;
        const hypld::C zp = chart.eval_ld(0, tp);
        const hypld::C zm = chart.eval_ld(0, tm);
        // Tangent transported to the basepoint frame by z -> (z - x0)/y0.
        const hypld::C tau = (zp - zm) / (2.0L * hl * y0);
        tangents[static_cast<std::size_t>(i - 1)] = geom::TangentVector::half_plane(
            std::complex<double>(static_cast<double>(tau.real()), static_cast<double>(tau.imag())));
    }
    return alpha.eval(geom::Point::half_plane({0.0, 1.0}), tangents);
}

double integrate_with_rule(const geom::InvariantForm& alpha, const GeodesicSimplex& s,
                           const QuadratureRule& q, const IntegrateOptions& opts) {
    const int k = s.degree();
    const PreparedChart chart(s);
    std::vector<geom::TangentVector> affine;
    if (s.model.kind() == geom::ModelKind::Euclidean) {
        affine.reserve(static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i)
            affine.push_back(geom::TangentVector::euclidean(
                s.vertices[static_cast<std::size_t>(i)].vector() - s.vertices[0].vector()));
    }
    auto value_at = [&](double h) {
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            acc += q.weights[i] * eval_pullback(alpha, chart, q.nodes[i], k, h, affine);
        return acc;
    };
    if (!opts.richardson || s.model.kind() == geom::ModelKind::Euclidean)
        return value_at(opts.fd_step);
    const double coarse = value_at(opts.fd_step);
    const double fine = value_at(0.5 * opts.fd_step);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(static_cast<std::size_t>(m));
    weights.resize(static_cast<std::size_t>(m));
    // Newton iteration on P_m over [-1, 1], then affine map to [0, 1].
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pm = (m == 1) ? x : p1;
            const double pm1 = (m == 1) ? 1.0 : p0;
            const double dp = m * (x * pm - pm1) / (x * x - 1.0);
            const double dx = pm / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= m; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        const double pm = (m == 1) ? x : p1;
        const double pm1 = (m == 1) ? 1.0 : p0;
        const double dp = m * (x * pm - pm1) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(m - 1 - i)] = 0.5 * (x + 1.0);
        weights[static_cast<std::size_t>(m - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

QuadratureRule QuadratureRule::for_simplex(int k, int order, int refinement) {
    if (k < 0 || k > 4) throw DomainError("simplex degree outside the desk-scale cap 0..4");
    if (order < 1) throw DomainError("quadrature order must be positive");
    if (refinement < 0) throw DomainError("refinement must be nonnegative");
    QuadratureRule rule;
    rule.degree = k;
    rule.order = order;
    rule.refinement = refinement;
    if (k == 0) {
        rule.nodes = {{1.0}};
        rule.weights = {1.0};
        return rule;
    }
    // Per-level Gauss-Legendre with enough points to keep the Duffy map exact
    // for total degree <= order after the u^(k-1) cone factor.
    const int m = std::max(2, (order + k + 1) / 2);
    std::vector<double> gl_x, gl_w;
    gauss_legendre_01(m, gl_x, gl_w);

    // Panels of the cone parameter: geometric refinement toward u = 1, where
    // curved simplices develop a boundary layer of width ~1/edge-length.
    std::vector<double> breaks{0.0};
    for (int l = 1; l <= refinement; ++l) breaks.push_back(1.0 - std::pow(2.0, -l));
    breaks.push_back(1.0);

    // Base simplex: uniform refinement (the layer location along the base is
    // not known a priori).
    QuadratureRule base = for_simplex(k - 1, order, 0);
    if (refinement > 0 && k >= 2) {
        const int panels = 2 * refinement;
        QuadratureRule rebase;
        rebase.degree = base.degree;
        rebase.order = base.order;
        const QuadratureRule unit = base;
        // Refine the leading base coordinate (the cone parameter of the next
        // level) uniformly; deeper levels inherit the plain rule.
        for (int p = 0; p < panels; ++p) {
            const double a = static_cast<double>(p) / panels;
            const double b = static_cast<double>(p + 1) / panels;
            for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
                std::vector<double> node = unit.nodes[i];
                const double lead = 1.0 - node[0];
                const double scaled = a + (b - a) * lead;  // new cone parameter
                // Rescale all coordinates consistently: node = (1-u, u*s...).
                std::vector<double> out(node.size());
                out[0] = 1.0 - scaled;
                const double ratio = lead > 0.0 ? scaled / lead : 0.0;
                for (std::size_t j = 1; j < node.size(); ++j) out[j] = node[j] * ratio;
                // Keep the simplex constraint exact.
                double sum = 0.0;
                for (std::size_t j = 1; j < out.size(); ++j) sum += out[j];
                out[0] = 1.0 - sum;
                rebase.nodes.push_back(std::move(out));
                // d(scaled)/d(lead) = (b - a), and the cone factor of the
                // base level rescales by (scaled/lead)^{k-2}.
                double w = unit.weights[i] * (b - a);
                if (k - 2 > 0) w *= std::pow(ratio, k - 2);
                rebase.weights.push_back(w);
            }
        }
        base = std::move(rebase);
    }

    for (std::size_t panel = 0; panel + 1 < breaks.size(); ++panel) {
        const double ua = breaks[panel];
        const double ub = breaks[panel + 1];
        for (int a = 0; a < m; ++a) {
            const double u = ua + (ub - ua) * gl_x[static_cast<std::size_t>(a)];
            const double wu =
                (ub - ua) * gl_w[static_cast<std::size_t>(a)] * std::pow(u, k - 1);
            for (std::size_t b = 0; b < base.nodes.size(); ++b) {
                std::vector<double> t(static_cast<std::size_t>(k) + 1);
                t[0] = 1.0 - u;
                for (std::size_t j = 0; j < base.nodes[b].size(); ++j)
                    t[j + 1] = u * base.nodes[b][j];
                rule.nodes.push_back(std::move(t));
                rule.weights.push_back(wu * base.weights[b]);
            }
        }
    }
    return rule;
}

geom::Point simplex_point(const GeodesicSimplex& s, std::span<const double> t) {
    check_barycentric(t, s.degree());
    const PreparedChart chart(s);
    return chart.eval(0, t);
}

double integrate_form(const geom::InvariantForm& alpha, const GeodesicSimplex& s,
                      const QuadratureRule& q, const IntegrateOptions& opts) {
    if (alpha.degree != s.degree())
        throw DegreeMismatchError("form degree must equal simplex degree");
    if (q.degree != s.degree())
        throw DegreeMismatchError("quadrature rule degree must equal simplex degree");
    return integrate_with_rule(alpha, s, q, opts);
}

double integrate_form_error_estimate(const geom::InvariantForm& alpha,
                                     const GeodesicSimplex& s, const QuadratureRule& q,
                                     const IntegrateOptions& opts) {
    const int coarse_order = std::max(1, q.order / 2);
    const QuadratureRule coarse =
        QuadratureRule::for_simplex(q.degree, coarse_order, q.refinement);
    const double fine_val = integrate_form(alpha, s, q, opts);
    const double coarse_val = integrate_with_rule(alpha, s, coarse, opts);
    return std::abs(fine_val - coarse_val);
}

double simplex_volume(const GeodesicSimplex& s, const QuadratureRule& q,
                      const IntegrateOptions& opts) {
    const int k = s.degree();
    if (k != s.model.dimension())
        throw DegreeMismatchError("simplex_volume needs a top-degree simplex");
    const geom::InvariantForm vol = s.model.kind() == geom::ModelKind::Euclidean
                                        ? geom::InvariantForm::euclidean_volume(k)
                                        : geom::InvariantForm::hyperbolic_area();
    return std::abs(integrate_form(vol, s, q, opts));
}

}  // namespace indexlab::simplex

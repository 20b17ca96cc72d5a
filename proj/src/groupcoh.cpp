#include "indexlab/groupcoh.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "indexlab/errors.hpp"

namespace indexlab::groupcoh {

namespace {

// Lattice sites gamma with chi(x - gamma) != 0, together with the cut-off
// values; one window per van Est slot.
struct SlotWindow {
    std::vector<Eigen::VectorXd> sites;
    std::vector<double> weights;  // chi(x - gamma) * h^n
};

SlotWindow slot_window(const proper::Cutoff& chi, const Eigen::VectorXd& x) {
    const double a = chi.action.spacing;
    const double r = chi.support_radius;
    const double extent = chi.action.box_extent();
    const int n = chi.action.n;
    for (int d = 0; d < n; ++d) {
        if (std::abs(x[d]) + r > extent + 1e-12)
            throw TruncationError("cut-off support translated to the evaluation point "
                                  "escapes the lattice box");
    }
    SlotWindow win;
    std::vector<int> lo(n), hi(n), idx(n);
    for (int d = 0; d < n; ++d) {
        lo[d] = static_cast<int>(std::ceil((x[d] - r) / a - 1e-12));
        hi[d] = static_cast<int>(std::floor((x[d] + r) / a + 1e-12));
        idx[d] = lo[d];
    }
    const double haar = chi.action.haar_weight();
    Eigen::VectorXd gamma(n);
    for (;;) {
        for (int d = 0; d < n; ++d) gamma[d] = a * idx[d];
        const double c = chi.value(x - gamma, 0);
        if (c != 0.0) {
            win.sites.push_back(gamma);
            win.weights.push_back(c * haar);
        }
        int d = 0;
        while (d < n) {
            if (++idx[d] <= hi[d]) break;
            idx[d] = lo[d];
            ++d;
        }
        if (d == n) break;
    }
    return win;
}

// f_c(x_0,...,x_k) = sum over lattice windows of prod chi(x_i - g_i) c(g).
double smeared_cochain(const GroupCochain& c, const proper::Cutoff& chi,
                       std::span<const Eigen::VectorXd> xs) {
    const std::size_t slots = xs.size();
    std::vector<SlotWindow> windows;
    windows.reserve(slots);
    for (const auto& x : xs) windows.push_back(slot_window(chi, x));

    std::vector<geom::GroupElement> args(
        slots, geom::GroupElement::identity(geom::ModelKind::Euclidean, chi.action.n));
    double total = 0.0;
    std::vector<std::size_t> pick(slots, 0);
    for (;;) {
        double w = 1.0;
        for (std::size_t i = 0; i < slots; ++i) {
            w *= windows[i].weights[pick[i]];
            args[i].mutable_vector() = windows[i].sites[pick[i]];
        }
        total += w * c.eval(args);
        std::size_t i = 0;
        while (i < slots) {
            if (++pick[i] < windows[i].sites.size()) break;
            pick[i] = 0;
            ++i;
        }
        if (i == slots) break;
    }
    return total;
}

int permutation_sign(std::span<const int> perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

// Mixed central difference of f_c over slots 1..k with direction v_{perm[i]}
// in slot i+1, evaluated at the diagonal point x.
double mixed_difference(const GroupCochain& c, const proper::Cutoff& chi,
                        const Eigen::VectorXd& x, std::span<const Eigen::VectorXd> dirs,
                        std::span<const int> perm, double h) {
    const int k = static_cast<int>(dirs.size());
    std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(k) + 1, x);
    double acc = 0.0;
    for (int mask = 0; mask < (1 << k); ++mask) {
        int sign = 1;
        for (int i = 0; i < k; ++i) {
            const double s = (mask >> i) & 1 ? -1.0 : 1.0;
            if (s < 0.0) sign = -sign;
            xs[static_cast<std::size_t>(i) + 1] =
                x + s * h * dirs[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        }
        acc += sign * smeared_cochain(c, chi, xs);
    }
    return acc / std::pow(2.0 * h, k);
}

double vanest_at_step(const GroupCochain& c, const proper::Cutoff& chi,
                      const Eigen::VectorXd& x, std::span<const Eigen::VectorXd> dirs,
                      double h) {
    const int k = static_cast<int>(dirs.size());
    if (k == 0) {
        std::array<Eigen::VectorXd, 1> xs{x};
        return smeared_cochain(c, chi, xs);
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    double acc = 0.0;
    do {
        acc += permutation_sign(perm) * mixed_difference(c, chi, x, dirs, perm, h);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace

GroupCochain delta(const GroupCochain& c) {
    GroupCochain out;
    out.degree = c.degree + 1;
    out.homogeneous = c.homogeneous;
    out.eval = [c](std::span<const geom::GroupElement> g) {
        std::vector<geom::GroupElement> face;
        face.reserve(g.size() - 1);
        double acc = 0.0;
        double sign = 1.0;
        for (std::size_t omit = 0; omit < g.size(); ++omit) {
            face.clear();
            for (std::size_t i = 0; i < g.size(); ++i)
                if (i != omit) face.push_back(g[i]);
            acc += sign * c.eval(face);
            sign = -sign;
        }
        return acc;
    };
    return out;
}

GroupCochain j_map(const geom::InvariantForm& alpha, const geom::SymmetricSpaceModel& model,
                   const simplex::QuadratureRule& q, const simplex::IntegrateOptions& opts) {
    GroupCochain out;
    out.degree = alpha.degree;
    out.homogeneous = true;
    out.eval = [alpha, model, q, opts](std::span<const geom::GroupElement> g) {
        simplex::GeodesicSimplex s{model, {g.begin(), g.end()}};
        return simplex::integrate_form(alpha, s, q, opts);
    };
    return out;
}

GroupCochain cyclic_symmetrize(const GroupCochain& c) {
    GroupCochain out;
    out.degree = c.degree;
    out.homogeneous = c.homogeneous;
    const int k = c.degree;
    out.eval = [c, k](std::span<const geom::GroupElement> g) {
        std::vector<geom::GroupElement> rotated(g.begin(), g.end());
        double acc = 0.0;
        double sign = 1.0;  // (-1)^{k j} for rotation power j
        for (int j = 0; j <= k; ++j) {
            acc += sign * c.eval(rotated);
            std::rotate(rotated.begin(), rotated.begin() + k, rotated.end());
            if (k % 2 == 1) sign = -sign;
        }
        return acc / (k + 1);
    };
    return out;
}

double vanest_form(const GroupCochain& c, const proper::Cutoff& chi, const geom::Point& x,
                   std::span<const geom::TangentVector> dirs, const VanEstParams& params) {
    if (x.kind() != geom::ModelKind::Euclidean)
        throw DomainError("vanest_form works on the Euclidean lattice models");
    if (static_cast<int>(dirs.size()) != c.degree)
        throw DegreeMismatchError("vanest_form needs one direction per cochain degree");
    const Eigen::VectorXd& x0 = x.vector();
    std::vector<Eigen::VectorXd> vs;
    vs.reserve(dirs.size());
    for (const auto& d : dirs) vs.push_back(d.v);
    double h = params.fd_step;
    if (params.scale_step_with_x) h *= 1.0 + x0.norm();
    const double coarse = vanest_at_step(c, chi, x0, vs, h);
    if (!params.richardson || c.degree == 0) return coarse;
    const double fine = vanest_at_step(c, chi, x0, vs, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

geom::GroupElement random_shell_element(const geom::SymmetricSpaceModel& model, double radius,
                                        indexlab::Rng& rng) {
    if (model.kind() == geom::ModelKind::Euclidean) {
        const int n = model.dimension();
        Eigen::VectorXd dir(n);
        double norm2 = 0.0;
        do {
            for (int d = 0; d < n; ++d) dir[d] = rng.normal();
            norm2 = dir.squaredNorm();
        } while (norm2 < 1e-12);
        return geom::GroupElement::translation(radius / std::sqrt(norm2) * dir);
    }
    // Rotation times boost: k_theta a_R with a_R i = e^R i, so d(e, g) = R.
    const double theta = rng.uniform(0.0, M_PI);
    Eigen::Matrix2d rot;
    rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    Eigen::Matrix2d boost;
    const double e = std::exp(0.5 * radius);
    boost << e, 0.0, 0.0, 1.0 / e;
    return geom::GroupElement::sl2(rot * boost);
}

GrowthReport growth_profile(const GroupCochain& c, const geom::SymmetricSpaceModel& model,
                            std::span<const double> radii, int samples_per_radius,
                            std::uint64_t seed) {
    GrowthReport report;
    report.radii.assign(radii.begin(), radii.end());
    report.max_ratio.resize(radii.size(), 0.0);
    report.max_abs.resize(radii.size(), 0.0);
    const int k = c.degree;
    const Rng root(seed);

    std::vector<double> log_abs(radii.size());
    std::vector<double> log_prod(radii.size());
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        Rng rng = root.split(ri);
        const double r = radii[ri];
        double max_ratio = 0.0, max_abs = 0.0;
        for (int s = 0; s < samples_per_radius; ++s) {
            std::vector<geom::GroupElement> tuple;
            tuple.reserve(static_cast<std::size_t>(k) + 1);
            for (int i = 0; i <= k; ++i)
                tuple.push_back(random_shell_element(model, r, rng));
            const double value = std::abs(c.eval(tuple));
            const double denom = std::pow(1.0 + r, k * (k + 1));
            max_abs = std::max(max_abs, value);
            max_ratio = std::max(max_ratio, value / denom);
        }
        report.max_ratio[ri] = max_ratio;
        report.max_abs[ri] = max_abs;
        log_abs[ri] = std::log(std::max(max_abs, 1e-300));
        log_prod[ri] = (k + 1) * std::log(1.0 + r);
    }

    // Least-squares slope of log max|c| against log prod_i (1 + d(g_i)).
    const double m = static_cast<double>(radii.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        sx += log_prod[i];
        sy += log_abs[i];
        sxx += log_prod[i] * log_prod[i];
        sxy += log_prod[i] * log_abs[i];
    }
    const double denom = m * sxx - sx * sx;
    report.fitted_exponent = std::abs(denom) < 1e-12 ? 0.0 : (m * sxy - sx * sy) / denom;
    return report;
}

}  // namespace indexlab::groupcoh

#include "indexlab/proper.hpp"

#include <cmath>

namespace indexlab::proper {

namespace {

// Centered cubic B-spline, support (-2, 2), partition of unity and linear
// reproduction over the integer lattice.
double bspline3(double x) {
    const double a = std::abs(x);
    if (a >= 2.0) return 0.0;
    if (a >= 1.0) {
        const double t = 2.0 - a;
        return t * t * t / 6.0;
    }
    return 2.0 / 3.0 - a * a + a * a * a / 2.0;
}

double mollifier(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

// Applies fn(gamma) to every lattice point gamma with |x - gamma|_inf <=
// radius. The lattice is infinite for normalization purposes; consumers
// enforce their own truncation boxes.
template <class Fn>
void for_lattice_window(const Eigen::VectorXd& x, double radius, double spacing, Fn&& fn) {
    const int n = static_cast<int>(x.size());
    std::vector<int> lo(n), hi(n), idx(n);
    for (int d = 0; d < n; ++d) {
        lo[d] = static_cast<int>(std::ceil((x[d] - radius) / spacing - 1e-12));
        hi[d] = static_cast<int>(std::floor((x[d] + radius) / spacing + 1e-12));
        idx[d] = lo[d];
    }
    Eigen::VectorXd gamma(n);
    for (;;) {
        for (int d = 0; d < n; ++d) gamma[d] = spacing * idx[d];
        fn(gamma);
        int d = 0;
        while (d < n) {
            if (++idx[d] <= hi[d]) break;
            idx[d] = lo[d];
            ++d;
        }
        if (d == n) return;
    }
}

}  // namespace

double ProperActionData::haar_weight() const { return std::pow(spacing, n); }

double ProperActionData::box_extent() const { return box_radius * spacing; }

double ProperActionData::slice_volume() const {
    double v = 0.0;
    for (double w : slice_weights) v += w;
    return v;
}

void ProperActionData::validate() const {
    if (n < 1 || spacing <= 0.0 || box_radius < 1)
        throw DomainError("invalid lattice parameters");
    if (slice_weights.empty()) throw DomainError("slice sample is empty");
    for (double w : slice_weights)
        if (!(w > 0.0)) throw DomainError("slice weights must be positive");
}

Cutoff make_cutoff(std::function<double(const Eigen::VectorXd&, int)> h,
                   double support_radius, const ProperActionData& action) {
    action.validate();
    if (support_radius <= 0.0) throw DomainError("cut-off support radius must be positive");
    Cutoff chi;
    chi.action = action;
    chi.support_radius = support_radius;
    const double haar = action.haar_weight();
    const double spacing = action.spacing;
    chi.value = [h = std::move(h), support_radius, haar, spacing](const Eigen::VectorXd& x,
                                                                  int s) {
        const double hx = h(x, s);
        if (hx == 0.0) return 0.0;
        double denom = 0.0;
        for_lattice_window(x, support_radius, spacing,
                           [&](const Eigen::VectorXd& gamma) { denom += h(x - gamma, s); });
        denom *= haar;
        if (denom < 1e-12)
            throw ZeroDenominatorError("cut-off normalization integral below 1e-12");
        return hx / denom;
    };
    return chi;
}

Cutoff cutoff_family(double eps, const ProperActionData& action) {
    if (!(eps > 0.0)) throw DomainError("cut-off family needs eps > 0");
    auto h = [eps](const Eigen::VectorXd& x, int) { return mollifier(x.norm() / eps); };
    return make_cutoff(h, eps, action);
}

Cutoff spline_cutoff(const ProperActionData& action) {
    action.validate();
    Cutoff chi;
    chi.action = action;
    chi.support_radius = 2.0 * action.spacing;
    const double spacing = action.spacing;
    const double haar = action.haar_weight();
    // Lattice translates of the tensor B-spline already sum to 1, so the
    // normalized cut-off has the closed form below.
    chi.value = [spacing, haar](const Eigen::VectorXd& x, int) {
        double prod = 1.0;
        for (int d = 0; d < x.size(); ++d) {
            prod *= bspline3(x[d] / spacing);
            if (prod == 0.0) return 0.0;
        }
        return prod / haar;
    };
    return chi;
}

Cutoff slice_cutoff(const ProperActionData& action) {
    action.validate();
    Cutoff chi;
    chi.action = action;
    chi.support_radius = 0.49 * action.spacing;
    const double spacing = action.spacing;
    const double haar = action.haar_weight();
    chi.value = [spacing, haar](const Eigen::VectorXd& x, int) {
        for (int d = 0; d < x.size(); ++d)
            if (std::abs(x[d]) >= 0.5 * spacing) return 0.0;
        return 1.0 / haar;
    };
    return chi;
}

double cutoff_normalization(const Cutoff& chi, const Eigen::VectorXd& x, int s) {
    double acc = 0.0;
    for_lattice_window(x, chi.support_radius, chi.action.spacing,
                       [&](const Eigen::VectorXd& gamma) { acc += chi.value(x - gamma, s); });
    return acc * chi.action.haar_weight();
}

double invariant_integral(const std::function<double(const Eigen::VectorXd&, int)>& density,
                          const Cutoff& chi) {
    const ProperActionData& a = chi.action;
    if (chi.support_radius > a.box_extent() + 1e-12)
        throw TruncationError("cut-off support exceeds the lattice box");
    double acc = 0.0;
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(a.n);
    for_lattice_window(origin, chi.support_radius, a.spacing,
                       [&](const Eigen::VectorXd& gamma) {
                           for (int s = 0; s < a.slice_size(); ++s) {
                               const double c = chi.value(gamma, s);
                               if (c == 0.0) continue;
                               acc += c * density(gamma, s) *
                                      a.slice_weights[static_cast<std::size_t>(s)];
                           }
                       });
    return acc * a.haar_weight();
}

}  // namespace indexlab::proper

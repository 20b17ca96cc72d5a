#include "indexlab/conv.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "indexlab/errors.hpp"
#include "indexlab/parallel.hpp"

namespace indexlab::conv {

namespace {

// Iterates integer multi-indices in [lo, hi] (inclusive, per axis).
template <class Fn>
void for_box(std::span<const int> lo, std::span<const int> hi, Fn&& fn) {
    const int n = static_cast<int>(lo.size());
    std::vector<int> idx(lo.begin(), lo.end());
    for (int d = 0; d < n; ++d)
        if (lo[d] > hi[d]) return;
    for (;;) {
        fn(std::span<const int>(idx));
        int d = 0;
        while (d < n) {
            if (++idx[d] <= hi[d]) break;
            idx[d] = lo[d];
            ++d;
        }
        if (d == n) return;
    }
}

int wrap_coord(int m, int radius) {
    const int side = 2 * radius + 1;
    int r = (m + radius) % side;
    if (r < 0) r += side;
    return r - radius;
}

}  // namespace

std::int64_t LatticeGroup::site_count() const {
    std::int64_t c = 1;
    for (int d = 0; d < n; ++d) c *= side();
    return c;
}

double LatticeGroup::haar_weight() const { return std::pow(spacing, n); }

bool LatticeGroup::compatible(const LatticeGroup& other) const {
    return n == other.n && spacing == other.spacing && radius == other.radius &&
           periodic == other.periodic;
}

ConvElement::ConvElement(const LatticeGroup& lat) : lat_(lat) {
    if (lat.n < 1 || lat.radius < 1 || lat.spacing <= 0.0)
        throw DomainError("invalid lattice parameters");
    v_.assign(static_cast<std::size_t>(lat.site_count()), 0.0);
}

std::int64_t ConvElement::flatten(std::span<const int> m) const {
    std::int64_t idx = 0;
    for (int d = 0; d < lat_.n; ++d) {
        const int c = m[static_cast<std::size_t>(d)] + lat_.radius;
        idx = idx * lat_.side() + c;
    }
    return idx;
}

void ConvElement::unflatten(std::int64_t idx, std::span<int> m) const {
    for (int d = lat_.n - 1; d >= 0; --d) {
        m[static_cast<std::size_t>(d)] = static_cast<int>(idx % lat_.side()) - lat_.radius;
        idx /= lat_.side();
    }
}

double& ConvElement::at(std::span<const int> m) {
    for (int d = 0; d < lat_.n; ++d)
        if (std::abs(m[static_cast<std::size_t>(d)]) > lat_.radius)
            throw BoxOverflowError("site outside the lattice box");
    return v_[static_cast<std::size_t>(flatten(m))];
}

double ConvElement::value(std::span<const int> m) const {
    std::int64_t idx = 0;
    for (int d = 0; d < lat_.n; ++d) {
        int c = m[static_cast<std::size_t>(d)];
        if (lat_.periodic) {
            c = wrap_coord(c, lat_.radius);
        } else if (std::abs(c) > lat_.radius) {
            return 0.0;
        }
        idx = idx * lat_.side() + (c + lat_.radius);
    }
    return v_[static_cast<std::size_t>(idx)];
}

bool ConvElement::support_bounds(std::vector<int>& lo, std::vector<int>& hi) const {
    lo.assign(static_cast<std::size_t>(lat_.n), lat_.radius + 1);
    hi.assign(static_cast<std::size_t>(lat_.n), -lat_.radius - 1);
    std::vector<int> m(static_cast<std::size_t>(lat_.n));
    bool any = false;
    for (std::int64_t idx = 0; idx < lat_.site_count(); ++idx) {
        if (v_[static_cast<std::size_t>(idx)] == 0.0) continue;
        any = true;
        unflatten(idx, m);
        for (int d = 0; d < lat_.n; ++d) {
            lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], m[static_cast<std::size_t>(d)]);
            hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], m[static_cast<std::size_t>(d)]);
        }
    }
    return any;
}

ConvElement ConvElement::delta_unit(const LatticeGroup& lat) {
    ConvElement e(lat);
    std::vector<int> zero(static_cast<std::size_t>(lat.n), 0);
    e.at(zero) = 1.0 / lat.haar_weight();
    return e;
}

ConvElement convolve(const ConvElement& a, const ConvElement& b) {
    if (!a.lattice().compatible(b.lattice()))
        throw DomainError("convolve: incompatible lattices");
    const LatticeGroup& lat = a.lattice();
    std::vector<int> alo, ahi, blo, bhi;
    const bool a_any = a.support_bounds(alo, ahi);
    const bool b_any = b.support_bounds(blo, bhi);
    ConvElement out(lat);
    if (!a_any || !b_any) return out;
    if (!lat.periodic) {
        for (int d = 0; d < lat.n; ++d) {
            if (alo[static_cast<std::size_t>(d)] + blo[static_cast<std::size_t>(d)] < -lat.radius ||
                ahi[static_cast<std::size_t>(d)] + bhi[static_cast<std::size_t>(d)] > lat.radius)
                throw BoxOverflowError("convolution support escapes the lattice box");
        }
    }
    const double haar = lat.haar_weight();
    std::vector<int> g(static_cast<std::size_t>(lat.n));
    for_box(alo, ahi, [&](std::span<const int> ga) {
        const double va = a.value(ga);
        if (va == 0.0) return;
        for_box(blo, bhi, [&](std::span<const int> gb) {
            const double vb = b.value(gb);
            if (vb == 0.0) return;
            for (int d = 0; d < lat.n; ++d) {
                int s = ga[static_cast<std::size_t>(d)] + gb[static_cast<std::size_t>(d)];
                if (lat.periodic) s = wrap_coord(s, lat.radius);
                g[static_cast<std::size_t>(d)] = s;
            }
            out.at(g) += va * vb * haar;
        });
    });
    return out;
}

double plancherel_trace(const ConvElement& a) {
    std::vector<int> zero(static_cast<std::size_t>(a.lattice().n), 0);
    return a.value(zero);
}

double seminorm(int k, const ConvElement& a) {
    const LatticeGroup& lat = a.lattice();
    const double haar = lat.haar_weight();
    std::vector<int> m(static_cast<std::size_t>(lat.n));
    double acc = 0.0;
    for (std::int64_t idx = 0; idx < lat.site_count(); ++idx) {
        const double v = a.raw()[static_cast<std::size_t>(idx)];
        if (v == 0.0) continue;
        a.unflatten(idx, m);
        double r2 = 0.0;
        for (int d = 0; d < lat.n; ++d) {
            const double x = lat.spacing * m[static_cast<std::size_t>(d)];
            r2 += x * x;
        }
        const double w = std::pow(1.0 + std::sqrt(r2), 2 * k);
        acc += w * v * v * haar;
    }
    return std::sqrt(acc);
}

double tau_g(const groupcoh::GroupCochain& c, std::span<const ConvElement> args) {
    const int k = c.degree;
    if (static_cast<int>(args.size()) != k + 1)
        throw DegreeMismatchError("tau_g needs degree + 1 algebra elements");
    const LatticeGroup& lat = args[0].lattice();
    for (const auto& a : args)
        if (!a.lattice().compatible(lat)) throw DomainError("tau_g: incompatible lattices");

    if (k == 0) {
        std::vector<geom::GroupElement> e{geom::GroupElement::identity(geom::ModelKind::Euclidean, lat.n)};
        return c.eval(e) * plancherel_trace(args[0]);
    }

    // Support bounds per integrated slot 1..k.
    std::vector<std::vector<int>> lo(static_cast<std::size_t>(k)), hi(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
        if (!args[static_cast<std::size_t>(i)].support_bounds(lo[static_cast<std::size_t>(i - 1)],
                                                              hi[static_cast<std::size_t>(i - 1)]))
            return 0.0;
    }

    const double haar_k = std::pow(lat.haar_weight(), k);
    const int n = lat.n;

    // Outermost slot iterated via parallel chunks; inner slots recursively.
    std::vector<std::int64_t> outer_sites;
    {
        std::vector<int> m(static_cast<std::size_t>(n));
        const ConvElement& a1 = args[1];
        for_box(lo[0], hi[0], [&](std::span<const int> g1) {
            if (a1.value(g1) != 0.0) outer_sites.push_back(a1.flatten(g1));
        });
    }

    auto term = [&](std::size_t outer_idx) -> double {
        std::vector<int> g1(static_cast<std::size_t>(n));
        args[1].unflatten(outer_sites[outer_idx], g1);
        const double v1 = args[1].value(g1);

        // Scratch group elements: prefix points (e, h_1, ..., h_k).
        std::vector<geom::GroupElement> pts(
            static_cast<std::size_t>(k) + 1,
            geom::GroupElement::identity(geom::ModelKind::Euclidean, n));
        std::vector<std::vector<int>> prefix(static_cast<std::size_t>(k) + 1,
                                             std::vector<int>(static_cast<std::size_t>(n), 0));
        for (int d = 0; d < n; ++d) {
            prefix[1][static_cast<std::size_t>(d)] = g1[static_cast<std::size_t>(d)];
            pts[1].mutable_vector()[d] = lat.spacing * g1[static_cast<std::size_t>(d)];
        }

        double acc = 0.0;
        std::vector<int> neg(static_cast<std::size_t>(n));
        // Recursive walk over slots 2..k.
        auto walk = [&](auto&& self, int slot, double prod) -> void {
            if (slot > k) {
                for (int d = 0; d < n; ++d) {
                    int hk = prefix[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
                    if (lat.periodic) hk = wrap_coord(hk, lat.radius);
                    neg[static_cast<std::size_t>(d)] = -hk;
                }
                const double v0 = args[0].value(neg);
                if (v0 == 0.0) return;
                acc += prod * v0 * c.eval(pts);
                return;
            }
            const auto& slo = lo[static_cast<std::size_t>(slot - 1)];
            const auto& shi = hi[static_cast<std::size_t>(slot - 1)];
            for_box(slo, shi, [&](std::span<const int> g) {
                const double v = args[static_cast<std::size_t>(slot)].value(g);
                if (v == 0.0) return;
                for (int d = 0; d < n; ++d) {
                    int h = prefix[static_cast<std::size_t>(slot - 1)][static_cast<std::size_t>(d)] +
                            g[static_cast<std::size_t>(d)];
                    if (lat.periodic) h = wrap_coord(h, lat.radius);
                    prefix[static_cast<std::size_t>(slot)][static_cast<std::size_t>(d)] = h;
                    pts[static_cast<std::size_t>(slot)].mutable_vector()[d] = lat.spacing * h;
                }
                self(self, slot + 1, prod * v);
            });
        };
        walk(walk, 2, v1);
        return acc;
    };

    const double total = parallel_sum(outer_sites.size(), term, 64);
    return total * haar_k;
}

std::pair<double, double> fourier_check(const ConvElement& a0, const ConvElement& a1,
                                        const ConvElement& a2) {
    const LatticeGroup& lat = a0.lattice();
    if (lat.n != 2) throw DomainError("fourier_check is an R^2 identity");
    if (!a1.lattice().compatible(lat) || !a2.lattice().compatible(lat))
        throw DomainError("fourier_check: incompatible lattices");

    // Lattice side: the Euclidean area cochain evaluated through tau_g.
    groupcoh::GroupCochain area;
    area.degree = 2;
    area.eval = [](std::span<const geom::GroupElement> g) {
        const auto& p0 = g[0].vector();
        const auto& p1 = g[1].vector();
        const auto& p2 = g[2].vector();
        return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]));
    };
    std::vector<ConvElement> args{a0, a1, a2};
    const double lattice_side = tau_g(area, args);

    // Spectral side via dense DFT matrices.
    const int N = lat.side();
    const int R = lat.radius;
    const double a = lat.spacing;
    using CMat = Eigen::MatrixXcd;
    CMat W(N, N);
    const std::complex<double> I(0.0, 1.0);
    for (int p = 0; p < N; ++p)
        for (int m = 0; m < N; ++m)
            W(p, m) = std::exp(-2.0 * M_PI * I * (double((p - R) * (m - R)) / N));

    auto grid = [&](const ConvElement& f, int moment_axis) {
        CMat g = CMat::Zero(N, N);
        std::vector<int> m(2);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                m[0] = i - R;
                m[1] = j - R;
                double v = f.value(m);
                if (moment_axis == 0) v *= a * m[0];
                if (moment_axis == 1) v *= a * m[1];
                g(i, j) = v;
            }
        return g;
    };
    auto dft = [&](const CMat& g) { return (W * g * W.transpose()) * (a * a); };

    const CMat f0 = dft(grid(a0, -1));
    // Spectral differentiation: d fhat / d xi_j = DFT(-i x_j f).
    const CMat d1f1 = dft(grid(a1, 0)) * (-I);
    const CMat d2f1 = dft(grid(a1, 1)) * (-I);
    const CMat d1f2 = dft(grid(a2, 0)) * (-I);
    const CMat d2f2 = dft(grid(a2, 1)) * (-I);

    const double dxi = 2.0 * M_PI / (N * a);
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            acc += f0(i, j) * (d1f1(i, j) * d2f2(i, j) - d2f1(i, j) * d1f2(i, j));
    acc *= dxi * dxi;
    const double spectral_side = -acc.real() / (8.0 * M_PI * M_PI);
    return {lattice_side, spectral_side};
}

ConvElement gaussian(const LatticeGroup& lat, double sigma, std::span<const double> mu,
                     double amp) {
    ConvElement out(lat);
    std::vector<int> m(static_cast<std::size_t>(lat.n));
    for (std::int64_t idx = 0; idx < lat.site_count(); ++idx) {
        out.unflatten(idx, m);
        double r2 = 0.0;
        for (int d = 0; d < lat.n; ++d) {
            const double x = lat.spacing * m[static_cast<std::size_t>(d)] - mu[static_cast<std::size_t>(d)];
            r2 += x * x;
        }
        const double v = amp * std::exp(-r2 / (2.0 * sigma * sigma));
        out.raw()[static_cast<std::size_t>(idx)] = std::abs(v) < 1e-20 * std::abs(amp) ? 0.0 : v;
    }
    return out;
}

}  // namespace indexlab::conv

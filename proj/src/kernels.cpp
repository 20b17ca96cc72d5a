#include "indexlab/kernels.hpp"

#include <cmath>
#include <complex>

#include "indexlab/errors.hpp"
#include "indexlab/parallel.hpp"

namespace indexlab::kernels {

namespace {

template <class Fn>
void for_box(std::span<const int> lo, std::span<const int> hi, Fn&& fn) {
    const int n = static_cast<int>(lo.size());
    for (int d = 0; d < n; ++d)
        if (lo[d] > hi[d]) return;
    std::vector<int> idx(lo.begin(), lo.end());
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

// Sites of the lattice box where the cut-off is nonzero for some slice index,
// with per-slice values cached.
struct CutoffTable {
    std::vector<std::vector<int>> sites;
    std::vector<std::vector<double>> values;  // [site][s]
};

CutoffTable tabulate_cutoff(const proper::Cutoff& chi, const conv::LatticeGroup& lat,
                            int slice) {
    if (chi.action.n != lat.n || chi.action.spacing != lat.spacing)
        throw DomainError("cut-off lattice does not match the kernel lattice");
    if (chi.support_radius > lat.radius * lat.spacing + 1e-12)
        throw TruncationError("cut-off support exceeds the kernel lattice box");
    CutoffTable table;
    const int reach = static_cast<int>(std::floor(chi.support_radius / lat.spacing + 1e-9));
    std::vector<int> lo(static_cast<std::size_t>(lat.n), -reach);
    std::vector<int> hi(static_cast<std::size_t>(lat.n), reach);
    Eigen::VectorXd x(lat.n);
    for_box(lo, hi, [&](std::span<const int> m) {
        for (int d = 0; d < lat.n; ++d) x[d] = lat.spacing * m[static_cast<std::size_t>(d)];
        std::vector<double> vals(static_cast<std::size_t>(slice));
        bool any = false;
        for (int s = 0; s < slice; ++s) {
            vals[static_cast<std::size_t>(s)] = chi.value(x, s);
            any = any || vals[static_cast<std::size_t>(s)] != 0.0;
        }
        if (any) {
            table.sites.emplace_back(m.begin(), m.end());
            table.values.push_back(std::move(vals));
        }
    });
    return table;
}

}  // namespace

InvariantKernel::InvariantKernel(const conv::LatticeGroup& lat, std::vector<double> slice_weights)
    : lat_(lat), w_(std::move(slice_weights)) {
    if (w_.empty()) throw DomainError("kernel slice sample is empty");
    for (double w : w_)
        if (!(w > 0.0)) throw DomainError("slice weights must be positive");
    data_.assign(static_cast<std::size_t>(lat_.site_count()) * w_.size() * w_.size(), 0.0);
}

std::int64_t InvariantKernel::cell(std::int64_t site, int s, int sp) const {
    const std::int64_t m = static_cast<std::int64_t>(w_.size());
    return (site * m + s) * m + sp;
}

double& InvariantKernel::at(std::span<const int> m, int s, int sp) {
    for (int d = 0; d < lat_.n; ++d)
        if (std::abs(m[static_cast<std::size_t>(d)]) > lat_.radius)
            throw BoxOverflowError("kernel site outside the lattice box");
    std::int64_t site = 0;
    for (int d = 0; d < lat_.n; ++d)
        site = site * lat_.side() + (m[static_cast<std::size_t>(d)] + lat_.radius);
    return data_[static_cast<std::size_t>(cell(site, s, sp))];
}

double InvariantKernel::value(std::span<const int> m, int s, int sp) const {
    std::int64_t site = 0;
    for (int d = 0; d < lat_.n; ++d) {
        int c = m[static_cast<std::size_t>(d)];
        if (lat_.periodic) {
            c = wrap_coord(c, lat_.radius);
        } else if (std::abs(c) > lat_.radius) {
            return 0.0;
        }
        site = site * lat_.side() + (c + lat_.radius);
    }
    return data_[static_cast<std::size_t>(cell(site, s, sp))];
}

InvariantKernel InvariantKernel::simple_tensor(const conv::ConvElement& f,
                                               const Eigen::MatrixXd& e2,
                                               std::vector<double> slice_weights) {
    InvariantKernel k(f.lattice(), std::move(slice_weights));
    const int m = k.slice_size();
    if (e2.rows() != m || e2.cols() != m)
        throw DomainError("slice factor dimension mismatch");
    std::vector<int> idx(static_cast<std::size_t>(f.lattice().n));
    for (std::int64_t site = 0; site < f.lattice().site_count(); ++site) {
        f.unflatten(site, idx);
        const double v = f.raw()[static_cast<std::size_t>(site)];
        if (v == 0.0) continue;
        for (int s = 0; s < m; ++s)
            for (int sp = 0; sp < m; ++sp)
                if (e2(s, sp) != 0.0) k.at(idx, s, sp) = v * e2(s, sp);
    }
    return k;
}

InvariantKernel InvariantKernel::identity(const conv::LatticeGroup& lat,
                                          std::vector<double> slice_weights) {
    InvariantKernel k(lat, std::move(slice_weights));
    std::vector<int> zero(static_cast<std::size_t>(lat.n), 0);
    for (int s = 0; s < k.slice_size(); ++s)
        k.at(zero, s, s) = 1.0 / (lat.haar_weight() * k.slice_weights()[static_cast<std::size_t>(s)]);
    return k;
}

InvariantKernel kernel_convolve(const InvariantKernel& k, const InvariantKernel& kp) {
    if (!k.lattice().compatible(kp.lattice()) || k.slice_size() != kp.slice_size())
        throw DomainError("kernel_convolve: incompatible kernels");
    const conv::LatticeGroup& lat = k.lattice();
    const int m = k.slice_size();

    // G-support bounding boxes (over all slice pairs).
    auto bounds = [&](const InvariantKernel& kk, std::vector<int>& lo, std::vector<int>& hi) {
        lo.assign(static_cast<std::size_t>(lat.n), lat.radius + 1);
        hi.assign(static_cast<std::size_t>(lat.n), -lat.radius - 1);
        std::vector<int> full_lo(static_cast<std::size_t>(lat.n), -lat.radius);
        std::vector<int> full_hi(static_cast<std::size_t>(lat.n), lat.radius);
        bool any = false;
        for_box(full_lo, full_hi, [&](std::span<const int> g) {
            for (int s = 0; s < m; ++s)
                for (int sp = 0; sp < m; ++sp) {
                    if (kk.value(g, s, sp) == 0.0) continue;
                    any = true;
                    for (int d = 0; d < lat.n; ++d) {
                        lo[static_cast<std::size_t>(d)] =
                            std::min(lo[static_cast<std::size_t>(d)], g[static_cast<std::size_t>(d)]);
                        hi[static_cast<std::size_t>(d)] =
                            std::max(hi[static_cast<std::size_t>(d)], g[static_cast<std::size_t>(d)]);
                    }
                    return;
                }
        });
        return any;
    };
    std::vector<int> alo, ahi, blo, bhi;
    InvariantKernel out(lat, std::vector<double>(k.slice_weights()));
    if (!bounds(k, alo, ahi) || !bounds(kp, blo, bhi)) return out;
    if (!lat.periodic) {
        for (int d = 0; d < lat.n; ++d)
            if (alo[static_cast<std::size_t>(d)] + blo[static_cast<std::size_t>(d)] < -lat.radius ||
                ahi[static_cast<std::size_t>(d)] + bhi[static_cast<std::size_t>(d)] > lat.radius)
                throw BoxOverflowError("kernel convolution support escapes the lattice box");
    }

    const double haar = lat.haar_weight();
    std::vector<int> g(static_cast<std::size_t>(lat.n));
    for_box(alo, ahi, [&](std::span<const int> ga) {
        for_box(blo, bhi, [&](std::span<const int> gb) {
            for (int d = 0; d < lat.n; ++d) {
                int s = ga[static_cast<std::size_t>(d)] + gb[static_cast<std::size_t>(d)];
                if (lat.periodic) s = wrap_coord(s, lat.radius);
                g[static_cast<std::size_t>(d)] = s;
            }
            for (int s = 0; s < m; ++s)
                for (int spp = 0; spp < m; ++spp) {
                    double acc = 0.0;
                    for (int sp = 0; sp < m; ++sp) {
                        const double va = k.value(ga, s, sp);
                        if (va == 0.0) continue;
                        acc += va * kp.value(gb, sp, spp) *
                               k.slice_weights()[static_cast<std::size_t>(sp)];
                    }
                    if (acc != 0.0) out.at(g, s, spp) += acc * haar;
                }
        });
    });
    return out;
}

conv::ConvElement partial_trace(const InvariantKernel& k) {
    conv::ConvElement out(k.lattice());
    std::vector<int> idx(static_cast<std::size_t>(k.lattice().n));
    std::vector<int> full_lo(static_cast<std::size_t>(k.lattice().n), -k.lattice().radius);
    std::vector<int> full_hi(static_cast<std::size_t>(k.lattice().n), k.lattice().radius);
    for_box(full_lo, full_hi, [&](std::span<const int> g) {
        double acc = 0.0;
        for (int s = 0; s < k.slice_size(); ++s)
            acc += k.value(g, s, s) * k.slice_weights()[static_cast<std::size_t>(s)];
        if (acc != 0.0) out.at(g) = acc;
    });
    return out;
}

double tau_m(const groupcoh::GroupCochain& c, const proper::Cutoff& chi,
             std::span<const InvariantKernel> ks) {
    const int k = c.degree;
    if (static_cast<int>(ks.size()) != k + 1)
        throw DegreeMismatchError("tau_m needs degree + 1 kernels");
    const conv::LatticeGroup& lat = ks[0].lattice();
    const int slice = ks[0].slice_size();
    for (const auto& kk : ks)
        if (!kk.lattice().compatible(lat) || kk.slice_size() != slice)
            throw DomainError("tau_m: incompatible kernels");
    const CutoffTable chi_table = tabulate_cutoff(chi, lat, slice);
    const auto& w = ks[0].slice_weights();
    const int n = lat.n;

    if (k == 0) {
        // tau^M(k0) = sum_{x0} chi(x0) k0(x0, x0) dx0, and k0(x0, x0) is the
        // zero-offset diagonal ktilde(0, s, s).
        double acc = 0.0;
        std::vector<geom::GroupElement> e{geom::GroupElement::identity(geom::ModelKind::Euclidean, n)};
        const double ce = c.eval(e);
        const std::vector<int> zero(static_cast<std::size_t>(n), 0);
        for (std::size_t t = 0; t < chi_table.sites.size(); ++t)
            for (int s = 0; s < slice; ++s) {
                const double cv = chi_table.values[t][static_cast<std::size_t>(s)];
                if (cv == 0.0) continue;
                acc += cv * ks[0].value(zero, s, s) * w[static_cast<std::size_t>(s)];
            }
        return acc * ce * lat.haar_weight();
    }

    // G-support bounding boxes of the first k kernels (the closing kernel is
    // looked up pointwise).
    std::vector<std::vector<int>> klo(static_cast<std::size_t>(k)), khi(static_cast<std::size_t>(k));
    {
        std::vector<int> full_lo(static_cast<std::size_t>(n), -lat.radius);
        std::vector<int> full_hi(static_cast<std::size_t>(n), lat.radius);
        for (int i = 0; i < k; ++i) {
            auto& lo = klo[static_cast<std::size_t>(i)];
            auto& hi = khi[static_cast<std::size_t>(i)];
            lo.assign(static_cast<std::size_t>(n), lat.radius + 1);
            hi.assign(static_cast<std::size_t>(n), -lat.radius - 1);
            for_box(full_lo, full_hi, [&](std::span<const int> g) {
                for (int s = 0; s < slice; ++s)
                    for (int sp = 0; sp < slice; ++sp) {
                        if (ks[static_cast<std::size_t>(i)].value(g, s, sp) == 0.0) continue;
                        for (int d = 0; d < n; ++d) {
                            lo[static_cast<std::size_t>(d)] = std::min(
                                lo[static_cast<std::size_t>(d)], g[static_cast<std::size_t>(d)]);
                            hi[static_cast<std::size_t>(d)] = std::max(
                                hi[static_cast<std::size_t>(d)], g[static_cast<std::size_t>(d)]);
                        }
                        return;
                    }
            });
            if (lo[0] > hi[0]) return 0.0;
        }
    }

    const double haar = lat.haar_weight();
    // Measures: h^n w(s_i) per M-integral (k+1 of them), h^n per G-integral.
    const double measure = std::pow(haar, 2 * k + 1);

    struct Frame {
        std::vector<int> gamma;
        int s = 0;
        std::vector<int> prefix;  // H_i
    };

    const std::size_t outer = chi_table.sites.size() * static_cast<std::size_t>(slice);
    auto term = [&](std::size_t outer_idx) -> double {
        const std::size_t t0 = outer_idx / static_cast<std::size_t>(slice);
        const int s0 = static_cast<int>(outer_idx % static_cast<std::size_t>(slice));
        const double chi0 = chi_table.values[t0][static_cast<std::size_t>(s0)];
        if (chi0 == 0.0) return 0.0;
        const std::vector<int>& gamma0 = chi_table.sites[t0];

        std::vector<Frame> frames(static_cast<std::size_t>(k) + 1);
        frames[0].gamma = gamma0;
        frames[0].s = s0;
        frames[0].prefix.assign(static_cast<std::size_t>(n), 0);

        std::vector<geom::GroupElement> pts(
            static_cast<std::size_t>(k) + 1,
            geom::GroupElement::identity(geom::ModelKind::Euclidean, n));
        std::vector<int> close_arg(static_cast<std::size_t>(n));
        double acc = 0.0;

        auto walk = [&](auto&& self, int slot, double prod) -> void {
            if (slot > k) {
                const Frame& last = frames[static_cast<std::size_t>(k)];
                for (int d = 0; d < n; ++d) {
                    int v = -last.prefix[static_cast<std::size_t>(d)] +
                            gamma0[static_cast<std::size_t>(d)] -
                            last.gamma[static_cast<std::size_t>(d)];
                    if (lat.periodic) v = wrap_coord(v, lat.radius);
                    close_arg[static_cast<std::size_t>(d)] = v;
                }
                const double vclose = ks[static_cast<std::size_t>(k)].value(close_arg, last.s, s0);
                if (vclose == 0.0) return;
                acc += prod * vclose * c.eval(pts);
                return;
            }
            const Frame& prev = frames[static_cast<std::size_t>(slot - 1)];
            Frame& cur = frames[static_cast<std::size_t>(slot)];
            cur.prefix.assign(static_cast<std::size_t>(n), 0);
            for (std::size_t t = 0; t < chi_table.sites.size(); ++t) {
                cur.gamma = chi_table.sites[t];
                for (int s = 0; s < slice; ++s) {
                    const double chiv = chi_table.values[t][static_cast<std::size_t>(s)];
                    if (chiv == 0.0) continue;
                    cur.s = s;
                    const double ws = w[static_cast<std::size_t>(s)];
                    for_box(klo[static_cast<std::size_t>(slot - 1)],
                            khi[static_cast<std::size_t>(slot - 1)], [&](std::span<const int> u) {
                                const double kv = ks[static_cast<std::size_t>(slot - 1)].value(
                                    u, prev.s, s);
                                if (kv == 0.0) return;
                                // g_slot = u - gamma_slot + gamma_{slot-1}
                                for (int d = 0; d < n; ++d) {
                                    int g = u[static_cast<std::size_t>(d)] -
                                            cur.gamma[static_cast<std::size_t>(d)] +
                                            prev.gamma[static_cast<std::size_t>(d)];
                                    int h = prev.prefix[static_cast<std::size_t>(d)] + g;
                                    if (lat.periodic) h = wrap_coord(h, lat.radius);
                                    cur.prefix[static_cast<std::size_t>(d)] = h;
                                    pts[static_cast<std::size_t>(slot)].mutable_vector()[d] =
                                        lat.spacing * h;
                                }
                                self(self, slot + 1, prod * kv * chiv * ws);
                            });
                }
            }
        };
        walk(walk, 1, chi0 * w[static_cast<std::size_t>(s0)]);
        return acc;
    };

    const double total = parallel_sum(outer, term, 1);
    return total * measure;
}

double conv_idempotency_defect(const conv::ConvElement& e) {
    const conv::ConvElement sq = conv::convolve(e, e);
    double acc = 0.0;
    for (std::size_t i = 0; i < e.raw().size(); ++i)
        acc += std::abs(sq.raw()[i] - e.raw()[i]);
    return acc * e.lattice().haar_weight();
}

double slice_idempotency_defect(const Eigen::MatrixXd& e2, std::span<const double> w) {
    const int m = static_cast<int>(e2.rows());
    double worst = 0.0;
    for (int s = 0; s < m; ++s)
        for (int spp = 0; spp < m; ++spp) {
            double acc = 0.0;
            for (int sp = 0; sp < m; ++sp)
                acc += e2(s, sp) * e2(sp, spp) * w[static_cast<std::size_t>(sp)];
            worst = std::max(worst, std::abs(acc - e2(s, spp)));
        }
    return worst;
}

double kernel_idempotency_defect(const InvariantKernel& k) {
    const InvariantKernel sq = kernel_convolve(k, k);
    const conv::LatticeGroup& lat = k.lattice();
    std::vector<int> full_lo(static_cast<std::size_t>(lat.n), -lat.radius);
    std::vector<int> full_hi(static_cast<std::size_t>(lat.n), lat.radius);
    double acc = 0.0;
    for_box(full_lo, full_hi, [&](std::span<const int> g) {
        for (int s = 0; s < k.slice_size(); ++s)
            for (int sp = 0; sp < k.slice_size(); ++sp)
                acc += std::abs(sq.value(g, s, sp) - k.value(g, s, sp)) *
                       k.slice_weights()[static_cast<std::size_t>(s)] *
                       k.slice_weights()[static_cast<std::size_t>(sp)];
    });
    return acc * lat.haar_weight();
}

std::pair<double, double> morita_check(const conv::ConvElement& e1, const Eigen::MatrixXd& e2,
                                       const groupcoh::GroupCochain& c,
                                       const proper::Cutoff& chi,
                                       std::vector<double> slice_weights) {
    if (c.degree % 2 != 0) throw DomainError("morita_check pairs even cocycles");
    if (conv_idempotency_defect(e1) > 1e-10)
        throw NotIdempotentError("morita_check: e1 * e1 != e1");
    if (slice_idempotency_defect(e2, slice_weights) > 1e-10)
        throw NotIdempotentError("morita_check: e2 is not an S-operator idempotent");

    double t2 = 0.0;  // S-trace of e2
    for (int s = 0; s < e2.rows(); ++s)
        t2 += e2(s, s) * slice_weights[static_cast<std::size_t>(s)];
    if (c.degree > 0 && std::abs(t2) > 1e-12 && std::abs(t2 - 1.0) > 1e-10)
        throw DomainError(
            "morita_check in positive degree needs an S-factor of trace 0 or 1 so that "
            "Tr_S(e) is itself an idempotent");

    const int m = c.degree / 2;
    double coeff = m % 2 == 0 ? 1.0 : -1.0;  // (-1)^m (2m)!/m!
    for (int j = m + 1; j <= 2 * m; ++j) coeff *= j;

    // Kernel side.
    const InvariantKernel e = InvariantKernel::simple_tensor(e1, e2, slice_weights);
    std::vector<InvariantKernel> ks(static_cast<std::size_t>(c.degree) + 1, e);
    const double lhs = coeff * tau_m(c, chi, ks);

    // Group side through the partial trace.
    conv::ConvElement tr = partial_trace(e);
    std::vector<conv::ConvElement> as(static_cast<std::size_t>(c.degree) + 1, tr);
    const double rhs = coeff * conv::tau_g(c, as);
    return {lhs, rhs};
}

conv::ConvElement fourier_mask_idempotent(const conv::ConvElement& a) {
    const conv::LatticeGroup& lat = a.lattice();
    if (!lat.periodic)
        throw DomainError("fourier_mask_idempotent needs a periodic lattice");
    if (lat.n > 2) throw DomainError("fourier_mask_idempotent supports n <= 2");
    const int N = lat.side();
    const int R = lat.radius;
    const std::complex<double> I(0.0, 1.0);
    const double haar = lat.haar_weight();

    if (lat.n == 1) {
        Eigen::VectorXcd sample(N);
        std::vector<int> idx(1);
        for (int i = 0; i < N; ++i) {
            idx[0] = i - R;
            sample(i) = a.value(idx);
        }
        Eigen::VectorXcd spec(N);
        for (int p = 0; p < N; ++p) {
            std::complex<double> acc(0.0, 0.0);
            for (int i = 0; i < N; ++i)
                acc += sample(i) * std::exp(-2.0 * M_PI * I * (double((p - R) * (i - R)) / N));
            spec(p) = acc * haar;
        }
        conv::ConvElement out(lat);
        for (int i = 0; i < N; ++i) {
            idx[0] = i - R;
            std::complex<double> acc(0.0, 0.0);
            for (int p = 0; p < N; ++p)
                if (spec(p).real() > 0.5)
                    acc += std::exp(2.0 * M_PI * I * (double((p - R) * (i - R)) / N));
            out.at(idx) = acc.real() / (N * haar);
        }
        return out;
    }

    Eigen::MatrixXcd W(N, N);
    for (int p = 0; p < N; ++p)
        for (int i = 0; i < N; ++i)
            W(p, i) = std::exp(-2.0 * M_PI * I * (double((p - R) * (i - R)) / N));
    Eigen::MatrixXcd sample(N, N);
    std::vector<int> idx(2);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            idx[0] = i - R;
            idx[1] = j - R;
            sample(i, j) = a.value(idx);
        }
    const Eigen::MatrixXcd spec = W * sample * W.transpose() * haar;
    Eigen::MatrixXcd mask = Eigen::MatrixXcd::Zero(N, N);
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q) mask(p, q) = spec(p, q).real() > 0.5 ? 1.0 : 0.0;
    const Eigen::MatrixXcd back = W.conjugate() * mask * W.adjoint();
    conv::ConvElement out(lat);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            idx[0] = i - R;
            idx[1] = j - R;
            out.at(idx) = back(i, j).real() / (N * N * haar);
        }
    return out;
}

Eigen::MatrixXd rank_one_slice_projection(const Eigen::VectorXd& v, std::span<const double> w) {
    double norm2 = 0.0;
    for (int s = 0; s < v.size(); ++s) norm2 += v[s] * v[s] * w[static_cast<std::size_t>(s)];
    if (norm2 < 1e-14) throw DomainError("rank_one_slice_projection: zero vector");
    return v * v.transpose() / norm2;
}

}  // namespace indexlab::kernels

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "indexlab/conv.hpp"
#include "indexlab/errors.hpp"

namespace indexlab::cyclic {

// Algebra adapters. An adapter instance carries the context needed to build
// elements (matrix dimension, lattice, ...) and provides:
//   Elem, mul, add, scale, zero, norm.
// Cochains are reduced: they see only the algebra part of arguments past
// slot 0; slot 0 is an element of the unitization.

struct MatrixAlgebra {
    using Elem = Eigen::MatrixXd;
    int dim = 2;

    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem scale(double s, const Elem& a) const { return s * a; }
    Elem zero() const { return Eigen::MatrixXd::Zero(dim, dim); }
    double norm(const Elem& a) const { return a.cwiseAbs().rowwise().sum().maxCoeff(); }
};

struct ConvAlgebra {
    using Elem = conv::ConvElement;
    conv::LatticeGroup lattice;

    Elem mul(const Elem& a, const Elem& b) const { return conv::convolve(a, b); }
    Elem add(const Elem& a, const Elem& b) const {
        Elem out = a;
        for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] += b.raw()[i];
        return out;
    }
    Elem scale(double s, const Elem& a) const {
        Elem out = a;
        for (auto& v : out.raw()) v *= s;
        return out;
    }
    Elem zero() const { return conv::ConvElement(lattice); }
    double norm(const Elem& a) const {
        double acc = 0.0;
        for (double v : a.raw()) acc += std::abs(v);
        return acc * lattice.haar_weight();
    }
};

// Element of the unitization A + C: scalar * 1 + part.
template <class Alg>
struct Unitized {
    double scalar = 0.0;
    typename Alg::Elem part;
};

template <class Alg>
Unitized<Alg> pure(typename Alg::Elem a) {
    return Unitized<Alg>{0.0, std::move(a)};
}

template <class Alg>
Unitized<Alg> unit(const Alg& alg, double s = 1.0) {
    return Unitized<Alg>{s, alg.zero()};
}

// Reduced multilinear cochain: evaluator on one unitized slot plus `degree`
// algebra elements.
template <class Alg>
struct CyclicCochain {
    int degree = 0;
    bool reduced = true;
    std::function<double(const Unitized<Alg>&, std::span<const typename Alg::Elem>)> eval;
};

// b tau (a0,...,a_{k+1}) = sum_i (-1)^i tau(a0,...,a_i a_{i+1},...)
//                        + (-1)^{k+1} tau(a_{k+1} a0, a1,...,a_k).
template <class Alg>
CyclicCochain<Alg> hochschild_b(const Alg& alg, const CyclicCochain<Alg>& tau) {
    CyclicCochain<Alg> out;
    out.degree = tau.degree + 1;
    out.reduced = tau.reduced;
    const int k = tau.degree;
    out.eval = [alg, tau, k](const Unitized<Alg>& a0,
                             std::span<const typename Alg::Elem> rest) {
        double acc = 0.0;
        double sign = 1.0;
        std::vector<typename Alg::Elem> args;
        // i = 0: slot-0 product a0 * a1 stays in the unitization.
        {
            Unitized<Alg> head{0.0, alg.add(alg.scale(a0.scalar, rest[0]),
                                            alg.mul(a0.part, rest[0]))};
            args.assign(rest.begin() + 1, rest.end());
            acc += sign * tau.eval(head, args);
        }
        for (int i = 1; i <= k; ++i) {
            sign = -sign;
            args.clear();
            for (int j = 0; j < i - 1; ++j) args.push_back(rest[static_cast<std::size_t>(j)]);
            args.push_back(alg.mul(rest[static_cast<std::size_t>(i - 1)],
                                   rest[static_cast<std::size_t>(i)]));
            for (int j = i + 1; j <= k; ++j) args.push_back(rest[static_cast<std::size_t>(j)]);
            acc += sign * tau.eval(a0, args);
        }
        sign = -sign;  // (-1)^{k+1}
        {
            Unitized<Alg> head{0.0, alg.add(alg.scale(a0.scalar, rest[static_cast<std::size_t>(k)]),
                                            alg.mul(rest[static_cast<std::size_t>(k)], a0.part))};
            args.assign(rest.begin(), rest.begin() + k);
            acc += sign * tau.eval(head, args);
        }
        return acc;
    };
    return out;
}

// B tau (a0,...,a_{k-1}) = sum_i (-1)^{(k-1) i} tau(1, a_i,...,a_{k-1},
// a_0,...,a_{i-1}); for reduced tau the unit parts of rest slots vanish, so
// the scalar component of a0 drops out.
template <class Alg>
CyclicCochain<Alg> connes_B(const Alg& alg, const CyclicCochain<Alg>& tau) {
    if (tau.degree < 1) throw DomainError("connes_B needs degree >= 1");
    if (!tau.reduced) throw DomainError("connes_B is defined on reduced cochains");
    CyclicCochain<Alg> out;
    out.degree = tau.degree - 1;
    out.reduced = true;
    const int k = tau.degree;
    out.eval = [alg, tau, k](const Unitized<Alg>& a0,
                             std::span<const typename Alg::Elem> rest) {
        std::vector<typename Alg::Elem> cycle;
        cycle.reserve(static_cast<std::size_t>(k));
        cycle.push_back(a0.part);
        for (const auto& r : rest) cycle.push_back(r);

        const Unitized<Alg> one = unit(alg);
        std::vector<typename Alg::Elem> args(static_cast<std::size_t>(k), alg.zero());
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j)
                args[static_cast<std::size_t>(j)] =
                    cycle[static_cast<std::size_t>((i + j) % k)];
            const double sign = ((k - 1) * i) % 2 == 0 ? 1.0 : -1.0;
            acc += sign * tau.eval(one, args);
        }
        return acc;
    };
    return out;
}

// N x N matrix over the unitization; scalar and algebra parts stored
// separately.
template <class Alg>
struct IdempotentMatrix {
    int size = 0;
    Eigen::MatrixXd scalar;                    // N x N
    std::vector<typename Alg::Elem> part;      // row-major N x N

    static IdempotentMatrix zero(const Alg& alg, int n) {
        IdempotentMatrix m;
        m.size = n;
        m.scalar = Eigen::MatrixXd::Zero(n, n);
        m.part.assign(static_cast<std::size_t>(n) * n, alg.zero());
        return m;
    }

    const typename Alg::Elem& p(int i, int j) const {
        return part[static_cast<std::size_t>(i) * size + j];
    }
    typename Alg::Elem& p(int i, int j) { return part[static_cast<std::size_t>(i) * size + j]; }
};

template <class Alg>
IdempotentMatrix<Alg> matmul(const Alg& alg, const IdempotentMatrix<Alg>& a,
                             const IdempotentMatrix<Alg>& b) {
    IdempotentMatrix<Alg> out = IdempotentMatrix<Alg>::zero(alg, a.size);
    out.scalar = a.scalar * b.scalar;
    for (int i = 0; i < a.size; ++i)
        for (int j = 0; j < a.size; ++j) {
            auto acc = alg.zero();
            for (int l = 0; l < a.size; ++l) {
                acc = alg.add(acc, alg.scale(a.scalar(i, l), b.p(l, j)));
                acc = alg.add(acc, alg.scale(b.scalar(l, j), a.p(i, l)));
                acc = alg.add(acc, alg.mul(a.p(i, l), b.p(l, j)));
            }
            out.p(i, j) = acc;
        }
    return out;
}

// Max row sum of entrywise norms, |scalar| + ||part||.
template <class Alg>
double matrix_norm(const Alg& alg, const IdempotentMatrix<Alg>& m) {
    double worst = 0.0;
    for (int i = 0; i < m.size; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.size; ++j)
            row += std::abs(m.scalar(i, j)) + alg.norm(m.p(i, j));
        worst = std::max(worst, row);
    }
    return worst;
}

template <class Alg>
double idempotency_defect(const Alg& alg, const IdempotentMatrix<Alg>& m) {
    IdempotentMatrix<Alg> sq = matmul(alg, m, m);
    sq.scalar -= m.scalar;
    for (int i = 0; i < m.size; ++i)
        for (int j = 0; j < m.size; ++j)
            sq.p(i, j) = alg.add(sq.p(i, j), alg.scale(-1.0, m.p(i, j)));
    return matrix_norm(alg, sq);
}

// <[p] - [q], tau> for a single cyclic cocycle of even degree 2m:
// (-1)^m (2m)!/m! [ tau#tr((p - 1/2), p, ..., p) - same for q ].
// For reduced tau of degree > 0 the -1/2 insertion contributes nothing; at
// degree 0 it cancels between p and q of equal size.
template <class Alg>
double chern_pairing(const Alg& alg, const IdempotentMatrix<Alg>& p,
                     const IdempotentMatrix<Alg>& q, const CyclicCochain<Alg>& tau,
                     double idem_tol = 1e-10) {
    if (tau.degree % 2 != 0) throw DomainError("chern_pairing needs an even-degree cocycle");
    if (idempotency_defect(alg, p) > idem_tol || idempotency_defect(alg, q) > idem_tol)
        throw NotIdempotentError("chern_pairing: ||p^2 - p|| above tolerance");
    const int m = tau.degree / 2;
    double coeff = m % 2 == 0 ? 1.0 : -1.0;  // (-1)^m (2m)!/m!
    for (int j = m + 1; j <= 2 * m; ++j) coeff *= j;

    auto tr_pairing = [&](const IdempotentMatrix<Alg>& e) {
        const int N = e.size;
        const int slots = 2 * m + 1;
        double acc = 0.0;
        std::vector<int> idx(static_cast<std::size_t>(slots), 0);
        std::vector<typename Alg::Elem> rest;
        for (;;) {
            // tau(e - 1/2 at (i0,i1), e at (i1,i2), ..., e at (i_{2m}, i0))
            Unitized<Alg> head{e.scalar(idx[0], idx[1 % slots]) -
                                   (idx[0] == idx[1 % slots] ? 0.5 : 0.0),
                               e.p(idx[0], idx[1 % slots])};
            rest.clear();
            for (int s = 1; s < slots; ++s)
                rest.push_back(e.p(idx[static_cast<std::size_t>(s)],
                                   idx[static_cast<std::size_t>((s + 1) % slots)]));
            acc += tau.eval(head, rest);
            int d = 0;
            while (d < slots) {
                if (++idx[static_cast<std::size_t>(d)] < N) break;
                idx[static_cast<std::size_t>(d)] = 0;
                ++d;
            }
            if (d == slots) break;
        }
        return acc;
    };

    return coeff * (tr_pairing(p) - tr_pairing(q));
}

// Test-fixture factories: discretized idempotent paths for the homotopy
// invariance checks.
enum class PathKind { Constant, Rotation, PerturbNewton };

// Newton re-idempotentization p <- 3 p^2 - 2 p^3; contraction for
// ||p^2 - p|| < 1/4.
template <class Alg>
IdempotentMatrix<Alg> newton_reidempotent(const Alg& alg, IdempotentMatrix<Alg> p,
                                          double tol = 1e-12, int max_iter = 60) {
    for (int it = 0; it < max_iter; ++it) {
        if (idempotency_defect(alg, p) <= tol) return p;
        IdempotentMatrix<Alg> p2 = matmul(alg, p, p);
        IdempotentMatrix<Alg> p3 = matmul(alg, p2, p);
        IdempotentMatrix<Alg> next = IdempotentMatrix<Alg>::zero(alg, p.size);
        next.scalar = 3.0 * p2.scalar - 2.0 * p3.scalar;
        for (int i = 0; i < p.size; ++i)
            for (int j = 0; j < p.size; ++j)
                next.p(i, j) = alg.add(alg.scale(3.0, p2.p(i, j)), alg.scale(-2.0, p3.p(i, j)));
        p = std::move(next);
    }
    throw NotIdempotentError("newton_reidempotent did not converge");
}

std::vector<IdempotentMatrix<MatrixAlgebra>> idempotent_from_projection_path(
    const MatrixAlgebra& alg, PathKind kind, int steps, std::uint64_t seed = 0);

}  // namespace indexlab::cyclic

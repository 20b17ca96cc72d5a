#include <doctest.h>

#include <cmath>

#include "indexlab/cyclic.hpp"
#include "indexlab/groupcoh.hpp"
#include "indexlab/rng.hpp"
#include "indexlab/simplex.hpp"

using namespace indexlab;
using cyclic::ConvAlgebra;
using cyclic::CyclicCochain;
using cyclic::IdempotentMatrix;
using cyclic::MatrixAlgebra;
using cyclic::Unitized;

namespace {

Eigen::MatrixXd random_matrix(int n, Rng& rng) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    return m;
}

// Random reduced multilinear cochain: sums of rank-one functionals. Rest
// slots see only algebra parts, so reducedness is structural.
CyclicCochain<MatrixAlgebra> random_reduced_cochain(const MatrixAlgebra& alg, int degree,
                                                    Rng& rng) {
    struct Term {
        double unit_coeff;
        std::vector<Eigen::MatrixXd> weights;
    };
    std::vector<Term> terms;
    for (int t = 0; t < 3; ++t) {
        Term term;
        term.unit_coeff = rng.uniform(-1.0, 1.0);
        for (int s = 0; s <= degree; ++s) term.weights.push_back(random_matrix(alg.dim, rng));
        terms.push_back(std::move(term));
    }
    CyclicCochain<MatrixAlgebra> tau;
    tau.degree = degree;
    tau.eval = [terms](const Unitized<MatrixAlgebra>& a0,
                       std::span<const Eigen::MatrixXd> rest) {
        double acc = 0.0;
        for (const auto& term : terms) {
            double v = term.unit_coeff * a0.scalar +
                       (term.weights[0].transpose() * a0.part).trace();
            for (std::size_t s = 0; s < rest.size(); ++s)
                v *= (term.weights[s + 1].transpose() * rest[s]).trace();
            acc += v;
        }
        return acc;
    };
    return tau;
}

CyclicCochain<MatrixAlgebra> matrix_trace_cochain(const MatrixAlgebra& alg) {
    CyclicCochain<MatrixAlgebra> tau;
    tau.degree = 0;
    tau.eval = [dim = alg.dim](const Unitized<MatrixAlgebra>& a0,
                               std::span<const Eigen::MatrixXd>) {
        return a0.part.trace() + a0.scalar * dim;
    };
    return tau;
}

Unitized<MatrixAlgebra> pure_mat(Eigen::MatrixXd m) {
    return Unitized<MatrixAlgebra>{0.0, std::move(m)};
}

}  // namespace

TEST_CASE("hochschild b: trace is a 0-cocycle; b^2 = 0") {
    MatrixAlgebra alg{3};
    Rng rng(61);
    const auto tr = matrix_trace_cochain(alg);
    const auto btr = cyclic::hochschild_b(alg, tr);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::MatrixXd> rest{random_matrix(3, rng)};
        CHECK(std::abs(btr.eval(pure_mat(random_matrix(3, rng)), rest)) < 1e-12);
    }

    const auto tau = random_reduced_cochain(alg, 1, rng);
    const auto bbtau = cyclic::hochschild_b(alg, cyclic::hochschild_b(alg, tau));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::MatrixXd> rest{random_matrix(3, rng), random_matrix(3, rng),
                                          random_matrix(3, rng)};
        CHECK(std::abs(bbtau.eval(pure_mat(random_matrix(3, rng)), rest)) < 1e-9);
    }
}

TEST_CASE("connes B: B^2 = 0, bB + Bb = 0, reduced cyclic vanishing") {
    MatrixAlgebra alg{2};
    Rng rng(62);

    const auto tau3 = random_reduced_cochain(alg, 3, rng);
    const auto bb = cyclic::connes_B(alg, cyclic::connes_B(alg, tau3));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::MatrixXd> rest{random_matrix(2, rng)};
        CHECK(std::abs(bb.eval(pure_mat(random_matrix(2, rng)), rest)) < 1e-10);
    }

    const auto tau2 = random_reduced_cochain(alg, 2, rng);
    const auto bB = cyclic::hochschild_b(alg, cyclic::connes_B(alg, tau2));
    const auto Bb = cyclic::connes_B(alg, cyclic::hochschild_b(alg, tau2));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::MatrixXd> rest{random_matrix(2, rng), random_matrix(2, rng)};
        const auto a0 = pure_mat(random_matrix(2, rng));
        CHECK(std::abs(bB.eval(a0, rest) + Bb.eval(a0, rest)) < 1e-9);
    }

    // Reduced cyclic cochain: B kills it. Build a cyclic cochain by
    // symmetrizing a random one: tau_cyc = sum_j (-1)^{kj} (rot^j tau).
    const int k = 2;
    const auto raw = random_reduced_cochain(alg, k, rng);
    CyclicCochain<MatrixAlgebra> cyc;
    cyc.degree = k;
    cyc.eval = [raw, k](const Unitized<MatrixAlgebra>& a0,
                        std::span<const Eigen::MatrixXd> rest) {
        // Cyclic symmetrization over the k+1 slots; unit parts of rotated
        // slot-0 entries vanish for the reduced raw cochain.
        std::vector<Eigen::MatrixXd> cycle{a0.part};
        for (const auto& r : rest) cycle.push_back(r);
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) {
            std::vector<Eigen::MatrixXd> rot;
            for (int s = 0; s <= k; ++s)
                rot.push_back(cycle[static_cast<std::size_t>((s + j) % (k + 1))]);
            std::vector<Eigen::MatrixXd> rest_rot(rot.begin() + 1, rot.end());
            double term = raw.eval(Unitized<MatrixAlgebra>{0.0, rot[0]}, rest_rot);
            // slot-0 scalar contributes only in the unrotated term
            if (j == 0) {
                term += a0.scalar * 0.0;
            }
            acc += (k * j) % 2 == 0 ? term : -term;
        }
        return acc;
    };
    const auto Bcyc = cyclic::connes_B(alg, cyc);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Eigen::MatrixXd> rest{random_matrix(2, rng)};
        CHECK(std::abs(Bcyc.eval(pure_mat(random_matrix(2, rng)), rest)) < 1e-10);
    }
}

TEST_CASE("chern pairing at degree zero is the rank difference") {
    MatrixAlgebra alg{3};
    const auto tr = matrix_trace_cochain(alg);

    auto p = IdempotentMatrix<MatrixAlgebra>::zero(alg, 1);
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
    diag(0, 0) = diag(1, 1) = 1.0;
    p.p(0, 0) = diag;
    const auto q = IdempotentMatrix<MatrixAlgebra>::zero(alg, 1);

    CHECK(cyclic::chern_pairing(alg, p, q, tr) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cyclic::chern_pairing(alg, p, p, tr) == doctest::Approx(0.0).epsilon(1e-12));

    // Additivity under direct sums.
    auto p2 = IdempotentMatrix<MatrixAlgebra>::zero(alg, 2);
    p2.p(0, 0) = diag;
    Eigen::MatrixXd rank1 = Eigen::MatrixXd::Zero(3, 3);
    rank1(2, 2) = 1.0;
    p2.p(1, 1) = rank1;
    const auto q2 = IdempotentMatrix<MatrixAlgebra>::zero(alg, 2);
    CHECK(cyclic::chern_pairing(alg, p2, q2, tr) == doctest::Approx(3.0).epsilon(1e-9));

    // Integrality at degree zero.
    const double v = cyclic::chern_pairing(alg, p2, q2, tr);
    CHECK(std::abs(v - std::round(v)) < 1e-9);

    // Reject a non-idempotent.
    auto bad = p;
    bad.p(0, 0)(0, 1) = 0.3;
    CHECK_THROWS_AS(cyclic::chern_pairing(alg, bad, q, tr), NotIdempotentError);
}

TEST_CASE("pairing is constant along idempotent paths") {
    MatrixAlgebra alg{2};
    const auto tr = matrix_trace_cochain(alg);
    const auto q = IdempotentMatrix<MatrixAlgebra>::zero(alg, 2);

    for (auto kind : {cyclic::PathKind::Constant, cyclic::PathKind::Rotation,
                      cyclic::PathKind::PerturbNewton}) {
        const auto path = cyclic::idempotent_from_projection_path(alg, kind, 20, 5);
        REQUIRE(path.size() == 20);
        std::vector<double> values;
        for (const auto& p : path) {
            CHECK(cyclic::idempotency_defect(alg, p) <= 1e-10);
            values.push_back(cyclic::chern_pairing(alg, p, q, tr));
        }
        for (double v : values) CHECK(std::abs(v - values.front()) <= 1e-6);
    }
}

TEST_CASE("newton re-idempotentization contracts below defect 1/4") {
    MatrixAlgebra alg{2};
    Rng rng(63);
    auto p = IdempotentMatrix<MatrixAlgebra>::zero(alg, 1);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(2, 2);
    proj(0, 0) = 1.0;
    p.p(0, 0) = proj;
    // Perturb to a defect just under 1/4 and watch the defect contract.
    Eigen::MatrixXd noise = random_matrix(2, rng);
    p.p(0, 0) += 0.1 * (noise + noise.transpose());
    double defect = cyclic::idempotency_defect(alg, p);
    REQUIRE(defect < 0.25);
    auto cur = p;
    for (int it = 0; it < 8 && defect > 1e-13; ++it) {
        auto p2 = cyclic::matmul(alg, cur, cur);
        auto p3 = cyclic::matmul(alg, p2, cur);
        auto next = IdempotentMatrix<MatrixAlgebra>::zero(alg, 1);
        next.scalar = 3.0 * p2.scalar - 2.0 * p3.scalar;
        next.p(0, 0) = 3.0 * p2.p(0, 0) - 2.0 * p3.p(0, 0);
        const double next_defect = cyclic::idempotency_defect(alg, next);
        CHECK(next_defect < defect);
        cur = next;
        defect = next_defect;
    }
    CHECK(cyclic::idempotency_defect(alg, cyclic::newton_reidempotent(alg, p)) <= 1e-12);
}

TEST_CASE("hochschild b of tau^G vanishes for the closed cyclic area cocycle") {
    conv::LatticeGroup lat;
    lat.n = 2;
    lat.spacing = 0.5;
    lat.radius = 10;
    ConvAlgebra alg{lat};

    const auto model = geom::SymmetricSpaceModel::euclidean(2);
    const auto j = groupcoh::j_map(geom::InvariantForm::euclidean_volume(2), model,
                                   simplex::QuadratureRule::for_simplex(2, 4));
    const auto c = groupcoh::cyclic_symmetrize(j);

    CyclicCochain<ConvAlgebra> tau;
    tau.degree = 2;
    tau.eval = [c, alg](const Unitized<ConvAlgebra>& a0,
                        std::span<const conv::ConvElement> rest) {
        conv::ConvElement head = a0.part;
        if (a0.scalar != 0.0) {
            const auto unit = conv::ConvElement::delta_unit(head.lattice());
            for (std::size_t i = 0; i < head.raw().size(); ++i)
                head.raw()[i] += a0.scalar * unit.raw()[i];
        }
        std::vector<conv::ConvElement> args{head, rest[0], rest[1]};
        return conv::tau_g(c, args);
    };

    Rng rng(64);
    auto small_random = [&](int support) {
        conv::ConvElement e(lat);
        std::vector<int> m(2);
        for (std::int64_t idx = 0; idx < lat.site_count(); ++idx) {
            e.unflatten(idx, m);
            if (std::abs(m[0]) <= support && std::abs(m[1]) <= support)
                e.raw()[static_cast<std::size_t>(idx)] = rng.uniform(-1.0, 1.0);
        }
        return e;
    };

    const auto btau = cyclic::hochschild_b(alg, tau);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<conv::ConvElement> rest{small_random(2), small_random(2), small_random(2)};
        const auto a0 = cyclic::pure<ConvAlgebra>(small_random(2));
        CHECK(std::abs(btau.eval(a0, rest)) < 1e-8);
    }

    // Cyclicity of tau^G for the symmetrized cocycle, exact to 1e-10.
    const auto a = small_random(2);
    const auto b = small_random(2);
    const auto d = small_random(2);
    std::vector<conv::ConvElement> abc{a, b, d}, rot{d, a, b};
    CHECK(conv::tau_g(c, abc) == doctest::Approx(conv::tau_g(c, rot)).epsilon(1e-10));
}

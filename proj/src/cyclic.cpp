#include "indexlab/cyclic.hpp"

#include <cmath>

#include "indexlab/rng.hpp"

namespace indexlab::cyclic {

std::vector<IdempotentMatrix<MatrixAlgebra>> idempotent_from_projection_path(
    const MatrixAlgebra& alg, PathKind kind, int steps, std::uint64_t seed) {
    if (steps < 2) throw DomainError("idempotent path needs at least 2 steps");
    std::vector<IdempotentMatrix<MatrixAlgebra>> path;
    path.reserve(static_cast<std::size_t>(steps));
    Rng rng(seed);

    // Base idempotent: rank-1 projection inside the algebra part.
    IdempotentMatrix<MatrixAlgebra> base = IdempotentMatrix<MatrixAlgebra>::zero(alg, 2);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(alg.dim, alg.dim);
    proj(0, 0) = 1.0;
    base.p(0, 0) = proj;

    switch (kind) {
        case PathKind::Constant: {
            for (int t = 0; t < steps; ++t) path.push_back(base);
            break;
        }
        case PathKind::Rotation: {
            // p_t = R_t p R_t^{-1} on the 2x2 scalar part.
            IdempotentMatrix<MatrixAlgebra> p0 = IdempotentMatrix<MatrixAlgebra>::zero(alg, 2);
            p0.scalar << 1.0, 0.0, 0.0, 0.0;
            for (int t = 0; t < steps; ++t) {
                const double th = M_PI * t / (steps - 1);
                Eigen::Matrix2d r;
                r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
                IdempotentMatrix<MatrixAlgebra> pt = p0;
                pt.scalar = r * p0.scalar * r.transpose();
                path.push_back(std::move(pt));
            }
            break;
        }
        case PathKind::PerturbNewton: {
            for (int t = 0; t < steps; ++t) {
                const double amp = 0.05 * t / (steps - 1);
                IdempotentMatrix<MatrixAlgebra> pt = base;
                Eigen::MatrixXd noise(alg.dim, alg.dim);
                for (int i = 0; i < alg.dim; ++i)
                    for (int j = 0; j < alg.dim; ++j) noise(i, j) = rng.uniform(-1.0, 1.0);
                pt.p(0, 0) = base.p(0, 0) + amp * (noise + noise.transpose());
                path.push_back(newton_reidempotent(alg, pt, 1e-12));
            }
            break;
        }
    }
    return path;
}

}  // namespace indexlab::cyclic

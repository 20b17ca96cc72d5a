// Shared random fixtures for the test suites.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "indexlab/geom.hpp"
#include "indexlab/groupcoh.hpp"
#include "indexlab/rng.hpp"

namespace fixtures {

inline indexlab::geom::GroupElement random_element(const indexlab::geom::SymmetricSpaceModel& model,
                                                   indexlab::Rng& rng, double max_radius = 2.0) {
    const double r = rng.uniform(0.0, max_radius);
    return indexlab::groupcoh::random_shell_element(model, r, rng);
}

inline std::vector<indexlab::geom::GroupElement> random_tuple(
    const indexlab::geom::SymmetricSpaceModel& model, int count, indexlab::Rng& rng,
    double max_radius = 2.0) {
    std::vector<indexlab::geom::GroupElement> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(random_element(model, rng, max_radius));
    return out;
}

inline Eigen::VectorXd random_vector(int n, indexlab::Rng& rng, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * rng.uniform(-1.0, 1.0);
    return v;
}

}  // namespace fixtures

#include "indexlab/charforms.hpp"

#include <bit>
#include <cmath>

#include "indexlab/errors.hpp"

namespace indexlab::charforms {

namespace {

// Sign of merging two disjoint sorted index sets (bitmasks): (-1)^inversions.
int wedge_sign(unsigned a, unsigned b) {
    int sign = 1;
    for (unsigned bit = 0; bit < 16; ++bit) {
        if (!(b & (1u << bit))) continue;
        const unsigned higher_in_a = a >> (bit + 1);
        if (std::popcount(higher_in_a) % 2 == 1) sign = -sign;
    }
    return sign;
}

void check_dim(int n) {
    if (n < 1 || n > 4) throw DomainError("constant forms support 1 <= n <= 4");
}

// Common value of the curvature samples; throws if they disagree beyond 1e-9
// (invariance) or fail the skewness constraints.
template <class Mat>
std::map<std::pair<int, int>, Mat> invariant_blocks(
    const std::vector<std::map<std::pair<int, int>, Mat>>& per_sample, bool hermitian_skew) {
    std::map<std::pair<int, int>, Mat> common;
    for (std::size_t i = 0; i < per_sample.size(); ++i) {
        for (const auto& [ab, mat] : per_sample[i]) {
            if (ab.first >= ab.second)
                throw DomainError("curvature blocks must be indexed by a < b");
            const Mat skew_defect = hermitian_skew ? Mat(mat + mat.adjoint()) : Mat(mat + mat.transpose());
            if (skew_defect.cwiseAbs().maxCoeff() > 1e-9)
                throw DomainError("curvature block is not skew");
            auto it = common.find(ab);
            if (it == common.end()) {
                common.emplace(ab, mat);
            } else if (Mat(it->second - mat).cwiseAbs().maxCoeff() > 1e-9) {
                throw DomainError("curvature samples are not G-invariant");
            }
        }
    }
    return common;
}

// tr(R ^ R) as a constant 4-form.
ConstForm trace_square(int n, const std::map<std::pair<int, int>, Eigen::MatrixXd>& blocks) {
    ConstForm out = ConstForm::zero(n);
    for (const auto& [ab, m1] : blocks) {
        const unsigned mask1 = (1u << ab.first) | (1u << ab.second);
        for (const auto& [cd, m2] : blocks) {
            const unsigned mask2 = (1u << cd.first) | (1u << cd.second);
            if (mask1 & mask2) continue;
            out.c[mask1 | mask2] += wedge_sign(mask1, mask2) * (m1 * m2).trace();
        }
    }
    return out;
}

}  // namespace

ConstForm ConstForm::zero(int n) {
    check_dim(n);
    ConstForm f;
    f.n = n;
    return f;
}

ConstForm ConstForm::constant(int n, double value) {
    ConstForm f = zero(n);
    f.c[0] = value;
    return f;
}

ConstForm ConstForm::basis(int n, std::vector<int> axes, double coeff) {
    ConstForm f = zero(n);
    unsigned mask = 0;
    int sign = 1;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const int a = axes[i];
        if (a < 0 || a >= n) throw DomainError("basis axis out of range");
        const unsigned bit = 1u << a;
        if (mask & bit) return f;  // repeated axis wedges to zero
        sign *= wedge_sign(mask, bit);
        mask |= bit;
    }
    f.c[mask] = sign * coeff;
    return f;
}

bool ConstForm::homogeneous_of_degree(int k) const {
    for (unsigned mask = 0; mask < 16; ++mask)
        if (c[mask] != 0.0 && std::popcount(mask) != k) return false;
    return true;
}

ConstForm wedge(const ConstForm& a, const ConstForm& b) {
    if (a.n != b.n) throw DomainError("wedge: dimension mismatch");
    ConstForm out = ConstForm::zero(a.n);
    const unsigned top = 1u << a.n;
    for (unsigned ma = 0; ma < top; ++ma) {
        if (a.c[ma] == 0.0) continue;
        for (unsigned mb = 0; mb < top; ++mb) {
            if (b.c[mb] == 0.0 || (ma & mb)) continue;
            out.c[ma | mb] += wedge_sign(ma, mb) * a.c[ma] * b.c[mb];
        }
    }
    return out;
}

ConstForm add(const ConstForm& a, const ConstForm& b) {
    if (a.n != b.n) throw DomainError("add: dimension mismatch");
    ConstForm out = a;
    for (unsigned m = 0; m < 16; ++m) out.c[m] += b.c[m];
    return out;
}

ConstForm scale(double s, const ConstForm& a) {
    ConstForm out = a;
    for (auto& v : out.c) v *= s;
    return out;
}

geom::InvariantForm to_invariant_form(const ConstForm& f, int degree) {
    geom::InvariantForm out;
    out.degree = degree;
    const ConstForm copy = f;
    out.eval = [copy, degree](const geom::Point&, std::span<const geom::TangentVector> vs) {
        double total = 0.0;
        const unsigned top = 1u << copy.n;
        for (unsigned mask = 0; mask < top; ++mask) {
            if (copy.c[mask] == 0.0 || std::popcount(mask) != degree) continue;
            // det of the tangent components on the axes of the mask.
            Eigen::MatrixXd m(degree, degree);
            int row = 0;
            for (int axis = 0; axis < copy.n; ++axis) {
                if (!(mask & (1u << axis))) continue;
                for (int col = 0; col < degree; ++col)
                    m(row, col) = vs[static_cast<std::size_t>(col)].v[axis];
                ++row;
            }
            total += copy.c[mask] * m.determinant();
        }
        return total;
    };
    return out;
}

CurvatureData CurvatureData::flat(int n, int rank_e) {
    CurvatureData c;
    c.n = n;
    c.rank_e = rank_e;
    c.samples.resize(3);  // flat: empty block maps at a few sample points
    return c;
}

CharacteristicForm a_hat_form(const CurvatureData& c) {
    check_dim(c.n);
    std::vector<std::map<std::pair<int, int>, Eigen::MatrixXd>> riem;
    for (const auto& s : c.samples) riem.push_back(s.riemann);
    const auto blocks = invariant_blocks(riem, false);
    const ConstForm p1 = scale(-1.0 / (8.0 * M_PI * M_PI), trace_square(c.n, blocks));
    CharacteristicForm out{add(ConstForm::constant(c.n, 1.0), scale(-1.0 / 24.0, p1))};
    return out;
}

CharacteristicForm l_form(const CurvatureData& c) {
    check_dim(c.n);
    std::vector<std::map<std::pair<int, int>, Eigen::MatrixXd>> riem;
    for (const auto& s : c.samples) riem.push_back(s.riemann);
    const auto blocks = invariant_blocks(riem, false);
    const ConstForm p1 = scale(-1.0 / (8.0 * M_PI * M_PI), trace_square(c.n, blocks));
    CharacteristicForm out{add(ConstForm::constant(c.n, 1.0), scale(1.0 / 3.0, p1))};
    return out;
}

CharacteristicForm chern_character(const CurvatureData& c) {
    check_dim(c.n);
    std::vector<std::map<std::pair<int, int>, Eigen::MatrixXcd>> bund;
    for (const auto& s : c.samples) bund.push_back(s.bundle);
    const auto blocks = invariant_blocks(bund, true);

    ConstForm total = ConstForm::constant(c.n, static_cast<double>(c.rank_e));
    // First Chern term tr(i F / 2 pi).
    ConstForm ch1 = ConstForm::zero(c.n);
    for (const auto& [ab, f] : blocks) {
        const std::complex<double> tr = (std::complex<double>(0.0, 1.0) * f.trace()) /
                                        (2.0 * M_PI);
        if (std::abs(tr.imag()) > 1e-9)
            throw DomainError("chern_character: tr(iF) is not real");
        ch1.c[(1u << ab.first) | (1u << ab.second)] += tr.real();
    }
    total = add(total, ch1);

    // Second term (1/2) tr((iF/2pi)^2).
    ConstForm ch2 = ConstForm::zero(c.n);
    for (const auto& [ab, m1] : blocks) {
        const unsigned mask1 = (1u << ab.first) | (1u << ab.second);
        for (const auto& [cd, m2] : blocks) {
            const unsigned mask2 = (1u << cd.first) | (1u << cd.second);
            if (mask1 & mask2) continue;
            const std::complex<double> tr =
                (std::complex<double>(0.0, 1.0) * m1 * std::complex<double>(0.0, 1.0) * m2)
                    .trace() /
                (4.0 * M_PI * M_PI);
            if (std::abs(tr.imag()) > 1e-9)
                throw DomainError("chern_character: tr((iF)^2) is not real");
            ch2.c[mask1 | mask2] += 0.5 * wedge_sign(mask1, mask2) * tr.real();
        }
    }
    total = add(total, ch2);
    return CharacteristicForm{total};
}

CharacteristicForm wedge(const CharacteristicForm& a, const CharacteristicForm& b) {
    return CharacteristicForm{wedge(a.form, b.form)};
}

double higher_index_rhs(const CharacteristicForm& as, const proper::Cutoff& chi,
                        const ConstForm& alpha) {
    const int n = as.form.n;
    if (alpha.n != n) throw DomainError("higher_index_rhs: dimension mismatch");
    if (chi.action.n != n) throw DomainError("higher_index_rhs: cut-off dimension mismatch");
    bool alpha_zero = true;
    for (double v : alpha.c) alpha_zero = alpha_zero && v == 0.0;
    if (alpha_zero) return 0.0;
    const ConstForm total = wedge(as.form, alpha);
    const double top = total.c[static_cast<unsigned>(total.top_mask())];
    if (top == 0.0) {
        // Legitimate zero only if some graded pieces could have met the top
        // degree; otherwise the pairing is malformed.
        bool possible = false;
        for (unsigned ma = 0; ma < (1u << n); ++ma)
            for (unsigned mb = 0; mb < (1u << n); ++mb)
                if (as.form.c[ma] != 0.0 && alpha.c[mb] != 0.0 && !(ma & mb) &&
                    static_cast<int>(std::popcount(ma | mb)) == n)
                    possible = true;
        if (!possible)
            throw DegreeMismatchError("no graded piece completes the top degree");
    }
    return proper::invariant_integral(
        [top](const Eigen::VectorXd&, int) { return top; }, chi);
}

double higher_signature(const CharacteristicForm& l, const proper::Cutoff& chi,
                        const ConstForm& alpha) {
    return higher_index_rhs(l, chi, alpha);
}

double higher_a_hat(const CharacteristicForm& a_hat, const proper::Cutoff& chi,
                    const ConstForm& alpha) {
    return higher_index_rhs(a_hat, chi, alpha);
}

ConstForm numerical_exterior_derivative(
    int n, const std::function<double(const Eigen::VectorXd&, int axis)>& coeff,
    const Eigen::VectorXd& at, double step) {
    check_dim(n);
    auto partial = [&](int axis, int comp) {
        Eigen::VectorXd xp = at, xm = at;
        xp[axis] += step;
        xm[axis] -= step;
        return (coeff(xp, comp) - coeff(xm, comp)) / (2.0 * step);
    };
    // d(sum_b beta_b dx_b) = sum_{a<b} (d_a beta_b - d_b beta_a) dx_a ^ dx_b.
    ConstForm out = ConstForm::zero(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            out.c[(1u << a) | (1u << b)] = partial(a, b) - partial(b, a);
    return out;
}

}  // namespace indexlab::charforms

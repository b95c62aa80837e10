#include "covlab/conditional.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"
#include "covlab/stats.hpp"

namespace covlab {

namespace {

void check_pair(const SymMatrix& a, std::size_t i, std::size_t j) {
    if (i >= a.dim() || j >= a.dim())
        throw IndexOutOfRange("index pair (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside dimension " + std::to_string(a.dim()));
    if (i == j) throw IndexOutOfRange("index pair must be distinct");
}

std::vector<std::size_t> remaining(std::size_t d, std::size_t i, std::size_t j) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < d; ++k)
        if (k != i && k != j) rest.push_back(k);
    return rest;
}

SymMatrix invert2(const SymMatrix& m) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1);
    const double scale = std::max({std::abs(m(0, 0)), std::abs(m(1, 1)), std::abs(m(0, 1))});
    if (!(std::abs(det) > 1e-14 * scale * scale))
        throw SingularBlock("2x2 block is numerically singular");
    return SymMatrix{{m(1, 1) / det, -m(0, 1) / det}, {-m(0, 1) / det, m(0, 0) / det}};
}

}  // namespace

SymMatrix precision_block(const SymMatrix& a, std::size_t i, std::size_t j) {
    check_pair(a, i, j);
    const CholeskyLogdet chol = cholesky_logdet(a);
    Vector ei(a.dim(), 0.0);
    Vector ej(a.dim(), 0.0);
    ei[i] = 1.0;
    ej[j] = 1.0;
    const Vector ci = cholesky_solve(chol.factor, ei);
    const Vector cj = cholesky_solve(chol.factor, ej);
    return SymMatrix{{ci[i], 0.5 * (ci[j] + cj[i])}, {0.5 * (ci[j] + cj[i]), cj[j]}};
}

AlphaMatrix alpha_analytic(const SymMatrix& a, std::size_t i, std::size_t j) {
    return {i, j, invert2(precision_block(a, i, j))};
}

SymMatrix schur_conditional_covariance(const SymMatrix& a, std::size_t i, std::size_t j) {
    check_pair(a, i, j);
    const std::size_t pair[] = {i, j};
    SymMatrix out = a.submatrix(pair);
    const std::vector<std::size_t> rest = remaining(a.dim(), i, j);
    if (rest.empty()) return out;

    const CholeskyLogdet chol = cholesky_logdet(a.submatrix(rest));
    Vector col_i(rest.size());
    Vector col_j(rest.size());
    for (std::size_t k = 0; k < rest.size(); ++k) {
        col_i[k] = a(rest[k], i);
        col_j[k] = a(rest[k], j);
    }
    const Vector sol_i = cholesky_solve(chol.factor, col_i);
    const Vector sol_j = cholesky_solve(chol.factor, col_j);
    out.set(0, 0, out(0, 0) - dot(col_i, sol_i));
    out.set(0, 1, out(0, 1) - 0.5 * (dot(col_i, sol_j) + dot(col_j, sol_i)));
    out.set(1, 1, out(1, 1) - dot(col_j, sol_j));
    return out;
}

namespace {

struct SlabMoments {
    std::size_t proposals = 0;
    std::vector<std::array<RunningStats, 3>> raw;
    std::vector<std::array<RunningStats, 3>> conditional;

    void ensure(std::size_t widths) {
        if (raw.size() < widths) {
            raw.resize(widths);
            conditional.resize(widths);
        }
    }

    void merge(const SlabMoments& o) {
        ensure(o.raw.size());
        proposals += o.proposals;
        for (std::size_t e = 0; e < o.raw.size(); ++e)
            for (int k = 0; k < 3; ++k) {
                raw[e][k].merge(o.raw[e][k]);
                conditional[e][k].merge(o.conditional[e][k]);
            }
    }
};

SymMatrix from_triplet(double ii, double ij, double jj) { return SymMatrix{{ii, ij}, {ij, jj}}; }

}  // namespace

std::vector<AlphaEstimate> alpha_monte_carlo_sweep(const SymMatrix& a, std::size_t i,
                                                   std::size_t j, std::span<const double> epsilons,
                                                   std::size_t trials, const RngStream& rng,
                                                   ExecPolicy exec) {
    check_pair(a, i, j);
    const std::size_t d = a.dim();
    if (d > kMaxRejectionDim)
        throw InvalidParams("rejection conditioning limited to dimension <= " +
                            std::to_string(kMaxRejectionDim));
    for (double eps : epsilons)
        if (!(eps > 0.0)) throw InvalidParams("epsilon must be positive");

    const SymMatrix root = sym_sqrt(a);
    const std::vector<std::size_t> rest = remaining(d, i, j);

    // Acceptance depends on X only through its projection onto the span of
    // the conditioning rows of A^{1/2}; the orthogonal part is N(0, Id - Q)
    // independently of the event.
    SymMatrix q(d);
    if (!rest.empty()) {
        Matrix rows(d, rest.size());
        for (std::size_t c = 0; c < rest.size(); ++c)
            for (std::size_t r = 0; r < d; ++r) rows(r, c) = root(rest[c], r);
        q = projector_onto(orthonormalize_columns(rows));
    }
    Matrix pair_rows(2, d);
    for (std::size_t r = 0; r < d; ++r) {
        pair_rows(0, r) = root(i, r);
        pair_rows(1, r) = root(j, r);
    }
    const SymMatrix orth_part = congruence(pair_rows, SymMatrix::identity(d) - q);

    const std::size_t widths = epsilons.size();
    const SlabMoments total = run_blocks<SlabMoments>(
        trials, rng, exec, [&](RngStream& stream, std::size_t count, SlabMoments& acc) {
            acc.ensure(widths);
            Vector x(d);
            Vector y(d);
            Vector x_par(d);
            for (std::size_t t = 0; t < count; ++t) {
                for (double& v : x) v = stream.normal();
                for (std::size_t r = 0; r < d; ++r) y[r] = dot(root.matrix().row(r), x);
                ++acc.proposals;

                double slab = 0.0;
                for (std::size_t k : rest) slab = std::max(slab, std::abs(y[k]));

                bool projected = false;
                double ui = 0.0;
                double uj = 0.0;
                for (std::size_t e = 0; e < widths; ++e) {
                    if (!(slab < epsilons[e])) continue;
                    if (!projected) {
                        for (std::size_t r = 0; r < d; ++r) x_par[r] = dot(q.matrix().row(r), x);
                        ui = dot(pair_rows.row(0), x_par);
                        uj = dot(pair_rows.row(1), x_par);
                        projected = true;
                    }
                    acc.raw[e][0].add(y[i] * y[i]);
                    acc.raw[e][1].add(y[i] * y[j]);
                    acc.raw[e][2].add(y[j] * y[j]);
                    acc.conditional[e][0].add(ui * ui);
                    acc.conditional[e][1].add(ui * uj);
                    acc.conditional[e][2].add(uj * uj);
                }
            }
        });

    std::vector<AlphaEstimate> out;
    out.reserve(widths);
    for (std::size_t e = 0; e < widths; ++e) {
        const auto& raw = total.raw.at(e);
        const auto& cond = total.conditional.at(e);
        const std::size_t accepted = raw[0].count();
        if (accepted < kMinAcceptances)
            throw TooFewAcceptances("only " + std::to_string(accepted) + " of " +
                                    std::to_string(total.proposals) +
                                    " proposals accepted at epsilon " + std::to_string(epsilons[e]));
        AlphaEstimate est;
        est.epsilon = epsilons[e];
        est.accepted = accepted;
        est.proposals = total.proposals;
        est.raw = {i, j, from_triplet(raw[0].mean(), raw[1].mean(), raw[2].mean())};
        est.raw_se = {raw[0].standard_error(), raw[1].standard_error(), raw[2].standard_error()};
        est.conditional = {i, j,
                           from_triplet(cond[0].mean() + orth_part(0, 0),
                                        cond[1].mean() + orth_part(0, 1),
                                        cond[2].mean() + orth_part(1, 1))};
        est.conditional_se = {cond[0].standard_error(), cond[1].standard_error(),
                              cond[2].standard_error()};
        out.push_back(std::move(est));
    }
    return out;
}

AlphaEstimate alpha_monte_carlo(const SymMatrix& a, std::size_t i, std::size_t j, double epsilon,
                                std::size_t trials, const RngStream& rng, ExecPolicy exec) {
    const double eps[] = {epsilon};
    return alpha_monte_carlo_sweep(a, i, j, eps, trials, rng, exec).front();
}

SectionCovariance section_covariance(const SymMatrix& a) {
    const std::size_t d = a.dim();
    if (d < 2) throw InvalidParams("section covariance requires dimension >= 2");

    Matrix plane(d, 2);
    plane(0, 0) = 1.0;
    plane(1, 1) = 1.0;
    const Matrix range = range_basis(a);
    SectionCovariance out;
    out.rank = subspace_intersection_dim(plane, range);
    if (out.rank == 0) return out;

    const SymMatrix pinv = pseudo_inverse(a);
    const std::size_t e_idx[] = {0, 1};
    const SymMatrix form = pinv.submatrix(e_idx);

    if (out.rank == 2) {
        // Uniform on the solid ellipse {x : xᵀ M x ≤ 1} has covariance M⁻¹/4.
        out.matrix = 0.25 * invert2(form);
        return out;
    }

    // Rank 1: the section is a segment along the unit direction v spanning
    // E ∩ range(A), the top left singular vector of Eᵀ · range.
    const Matrix cross = plane.transposed() * range;
    const EigenDecomposition eig = jacobi_eigen(gram_of_rows(cross));
    const double v0 = eig.vectors(0, 1);
    const double v1 = eig.vectors(1, 1);
    const double quad = form(0, 0) * v0 * v0 + 2.0 * form(0, 1) * v0 * v1 + form(1, 1) * v1 * v1;
    const double half_length_sq = 1.0 / quad;
    const double vdir[] = {v0, v1};
    out.matrix = (half_length_sq / 3.0) * SymMatrix::outer(vdir);
    return out;
}

double kd_constant(std::size_t d) {
    if (d < 3) throw InvalidParams("K_d is defined for d >= 3");
    return 4.0;
}

}  // namespace covlab

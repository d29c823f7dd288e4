#include "bsmf/factorization.hpp"

#include <cmath>
#include <random>

namespace bsmf {

namespace {

void check_factor_shapes(const DenseMatrix& x, const FactorPair& f, const FitConfig& cfg) {
    if (f.u.rows() != x.rows() || f.u.cols() != cfg.k) {
        throw ShapeError("factors: U must be " + std::to_string(x.rows()) + "x" +
                         std::to_string(cfg.k) + ", got " + std::to_string(f.u.rows()) + "x" +
                         std::to_string(f.u.cols()));
    }
    if (f.m.rows() != x.cols() || f.m.cols() != cfg.k) {
        throw ShapeError("factors: M must be " + std::to_string(x.cols()) + "x" +
                         std::to_string(cfg.k) + ", got " + std::to_string(f.m.rows()) + "x" +
                         std::to_string(f.m.cols()));
    }
}

DenseMatrix effective_b(const FactorPair& f, const BeliefMixture& b, const FitConfig& cfg) {
    switch (cfg.mode) {
        case FitMode::bsmf:
            return b.dense();
        case FitMode::nmf:
            return DenseMatrix::identity(cfg.k);
        case FitMode::nmtf:
            if (!f.b_tilde) throw InputError("nmtf mode requires factors.b_tilde");
            if (f.b_tilde->rows() != cfg.k || f.b_tilde->cols() != cfg.k) {
                throw ShapeError("factors: b_tilde must be k x k");
            }
            return *f.b_tilde;
    }
    throw InputError("unknown fit mode");
}

// Nonzero entries of a dense matrix in row-major order. Skipping exact zeros
// leaves every partial sum bitwise unchanged, so results match the dense
// product.
struct CsrView {
    std::vector<std::size_t> start;
    std::vector<std::size_t> col;
    std::vector<double> val;

    static CsrView of(const DenseMatrix& x) {
        CsrView v;
        v.start.resize(x.rows() + 1, 0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            auto row = x.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] != 0.0) {
                    v.col.push_back(j);
                    v.val.push_back(row[j]);
                }
            }
            v.start[i + 1] = v.col.size();
        }
        return v;
    }

    static CsrView transpose_of(const DenseMatrix& x) {
        CsrView v;
        v.start.resize(x.cols() + 1, 0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            auto row = x.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] != 0.0) ++v.start[j + 1];
            }
        }
        for (std::size_t j = 0; j < x.cols(); ++j) v.start[j + 1] += v.start[j];
        v.col.resize(v.start.back());
        v.val.resize(v.start.back());
        std::vector<std::size_t> cursor(v.start.begin(), v.start.end() - 1);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            auto row = x.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] != 0.0) {
                    v.col[cursor[j]] = i;
                    v.val[cursor[j]] = row[j];
                    ++cursor[j];
                }
            }
        }
        return v;
    }

    // this * dense, where this is n_rows x (dense.rows()).
    DenseMatrix multiply(const DenseMatrix& dense, std::size_t n_rows) const {
        DenseMatrix out(n_rows, dense.cols());
        for (std::size_t i = 0; i < n_rows; ++i) {
            auto out_row = out.row(i);
            for (std::size_t t = start[i]; t < start[i + 1]; ++t) {
                const double v = val[t];
                auto d_row = dense.row(col[t]);
                for (std::size_t q = 0; q < d_row.size(); ++q) out_row[q] += v * d_row[q];
            }
        }
        return out;
    }
};

DenseMatrix scaled_regularized(const DenseMatrix& base, const DenseMatrix& neg,
                               const DenseMatrix& pos, double lambda1, double lambda2) {
    // -2*neg + 2*pos + 2*lambda1*base + lambda2
    DenseMatrix g(base.rows(), base.cols());
    for (std::size_t t = 0; t < g.data().size(); ++t) {
        g.data()[t] = -2.0 * neg.data()[t] + 2.0 * pos.data()[t] +
                      2.0 * lambda1 * base.data()[t] + lambda2;
    }
    return g;
}

void apply_step_constant(DenseMatrix& target, const DenseMatrix& grad, double eta) {
    for (std::size_t t = 0; t < target.data().size(); ++t) {
        target.data()[t] -= eta * grad.data()[t];
    }
}

// target -= (target / (2 * denom)) .* grad
void apply_step_multiplicative(DenseMatrix& target, const DenseMatrix& grad,
                               const DenseMatrix& denom) {
    for (std::size_t t = 0; t < target.data().size(); ++t) {
        const double step = target.data()[t] / (2.0 * denom.data()[t]);
        target.data()[t] -= step * grad.data()[t];
    }
}

void clip_inplace(DenseMatrix& m, double floor) {
    for (double& v : m.data()) {
        if (v < floor) v = floor;
    }
}

}  // namespace

void FitConfig::validate() const {
    if (k < 1) throw InputError("fit config: k must be >= 1");
    if (!(lambda1 >= 0.0)) throw InputError("fit config: lambda1 must be >= 0");
    if (!(lambda2 >= 0.0)) throw InputError("fit config: lambda2 must be >= 0");
    if (step_rule == StepRule::constant && !(eta > 0.0)) {
        throw InputError("fit config: eta must be positive");
    }
    if (step_rule == StepRule::multiplicative && lambda2 != 0.0) {
        throw InputError(
            "fit config: multiplicative steps require lambda2 = 0 (the adaptive "
            "step derivation does not cover the L1 term)");
    }
    if (!(eps_clip > 0.0)) throw InputError("fit config: eps_clip must be positive");
    if (!(tol > 0.0)) throw InputError("fit config: tol must be positive");
}

std::string to_string(FitMode mode) {
    switch (mode) {
        case FitMode::bsmf: return "bsmf";
        case FitMode::nmf: return "nmf";
        case FitMode::nmtf: return "nmtf";
    }
    return "?";
}

FitMode fit_mode_from_string(const std::string& name) {
    if (name == "bsmf") return FitMode::bsmf;
    if (name == "nmf") return FitMode::nmf;
    if (name == "nmtf") return FitMode::nmtf;
    throw InputError("unknown fit mode \"" + name + "\" (expected bsmf, nmf, or nmtf)");
}

double loss(const DenseMatrix& x, const FactorPair& f, const BeliefMixture& b,
            const FitConfig& cfg) {
    if (b.k() != cfg.k) throw ShapeError("loss: belief mixture k does not match config k");
    check_factor_shapes(x, f, cfg);
    const DenseMatrix beff = effective_b(f, b, cfg);
    const DenseMatrix ub = matmul(f.u, beff);
    const DenseMatrix recon = matmul_transposed(ub, f.m);
    double j = 0.0;
    for (std::size_t t = 0; t < x.data().size(); ++t) {
        const double r = x.data()[t] - recon.data()[t];
        j += r * r;
    }
    j += cfg.lambda1 * (frobenius_sq(f.u) + frobenius_sq(f.m));
    j += cfg.lambda2 * (l1_norm(f.u) + l1_norm(f.m));
    return j;
}

DenseMatrix grad_u(const DenseMatrix& x, const FactorPair& f, const BeliefMixture& b,
                   const FitConfig& cfg) {
    if (b.k() != cfg.k) throw ShapeError("grad_u: belief mixture k does not match config k");
    check_factor_shapes(x, f, cfg);
    const DenseMatrix beff = effective_b(f, b, cfg);
    const DenseMatrix xm = matmul(x, f.m);                          // |S| x K
    const DenseMatrix neg = matmul_transposed(xm, beff);            // X M B^T
    const DenseMatrix bmmb = matmul_transposed(matmul(beff, gram(f.m)), beff);
    const DenseMatrix pos = matmul(f.u, bmmb);                      // U B M^T M B^T
    return scaled_regularized(f.u, neg, pos, cfg.lambda1, cfg.lambda2);
}

DenseMatrix grad_m(const DenseMatrix& x, const FactorPair& f, const BeliefMixture& b,
                   const FitConfig& cfg) {
    if (b.k() != cfg.k) throw ShapeError("grad_m: belief mixture k does not match config k");
    check_factor_shapes(x, f, cfg);
    const DenseMatrix beff = effective_b(f, b, cfg);
    const DenseMatrix xtu = matmul(transpose(x), f.u);              // |C| x K
    const DenseMatrix neg = matmul(xtu, beff);                      // X^T U B
    const DenseMatrix buub = matmul(matmul(transpose(beff), gram(f.u)), beff);
    const DenseMatrix pos = matmul(f.m, buub);                      // M B^T U^T U B
    return scaled_regularized(f.m, neg, pos, cfg.lambda1, cfg.lambda2);
}

DenseMatrix grad_b_tilde(const DenseMatrix& x, const FactorPair& f, const FitConfig& cfg) {
    if (cfg.mode != FitMode::nmtf) {
        throw InputError("grad_b_tilde: only defined in nmtf mode");
    }
    if (!f.b_tilde) throw InputError("grad_b_tilde: factors.b_tilde is missing");
    check_factor_shapes(x, f, cfg);
    const DenseMatrix utxm = matmul(matmul(transpose(f.u), x), f.m);  // U^T X M
    const DenseMatrix pos = matmul(matmul(gram(f.u), *f.b_tilde), gram(f.m));
    DenseMatrix g(cfg.k, cfg.k);
    for (std::size_t t = 0; t < g.data().size(); ++t) {
        g.data()[t] = -2.0 * utxm.data()[t] + 2.0 * pos.data()[t];
    }
    return g;
}

std::pair<DenseMatrix, DenseMatrix> multiplicative_steps(const FactorPair& f,
                                                         const BeliefMixture& b,
                                                         const DenseMatrix& x) {
    FitConfig cfg;
    cfg.k = b.k();
    cfg.mode = f.b_tilde ? FitMode::nmtf : FitMode::bsmf;
    check_factor_shapes(x, f, cfg);
    const DenseMatrix beff = effective_b(f, b, cfg);
    const DenseMatrix bmmb = matmul_transposed(matmul(beff, gram(f.m)), beff);
    const DenseMatrix buub = matmul(matmul(transpose(beff), gram(f.u)), beff);
    DenseMatrix step_u = matmul(f.u, bmmb);
    DenseMatrix step_m = matmul(f.m, buub);
    for (std::size_t t = 0; t < step_u.data().size(); ++t) {
        step_u.data()[t] = f.u.data()[t] / (2.0 * step_u.data()[t]);
    }
    for (std::size_t t = 0; t < step_m.data().size(); ++t) {
        step_m.data()[t] = f.m.data()[t] / (2.0 * step_m.data()[t]);
    }
    return {std::move(step_u), std::move(step_m)};
}

FitResult fit(const DenseMatrix& x, const BeliefMixture& b, const FitConfig& cfg) {
    cfg.validate();
    if (b.k() != cfg.k) {
        throw InputError("fit: belief mixture has k=" + std::to_string(b.k()) +
                         " but config has k=" + std::to_string(cfg.k));
    }
    if (x.rows() == 0 || x.cols() == 0) throw InputError("fit: x is empty");
    for (double v : x.data()) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw InputError("fit: x entries must lie in [0, 1]");
        }
    }

    const std::size_t n_sources = x.rows();
    const std::size_t n_claims = x.cols();
    const std::size_t k = cfg.k;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_matrix = [&](std::size_t r, std::size_t c) {
        DenseMatrix m(r, c);
        for (double& v : m.data()) v = std::max(unit(rng), cfg.eps_clip);
        return m;
    };

    FactorPair f;
    f.u = random_matrix(n_sources, k);
    f.m = random_matrix(n_claims, k);
    if (cfg.mode == FitMode::nmtf) f.b_tilde = random_matrix(k, k);

    const DenseMatrix beff_fixed =
        cfg.mode == FitMode::nmf ? DenseMatrix::identity(k)
                                 : (cfg.mode == FitMode::bsmf ? b.dense() : DenseMatrix());
    auto beff = [&]() -> const DenseMatrix& {
        return cfg.mode == FitMode::nmtf ? *f.b_tilde : beff_fixed;
    };

    const CsrView xv = CsrView::of(x);
    const CsrView xtv = CsrView::transpose_of(x);
    const double x_frob_sq = frobenius_sq(x);

    // J via the trace expansion: ||X||^2 - 2 <X M, U B> + <B^T U^T U B, M^T M>
    // plus regularizers. Avoids forming the |S| x |C| reconstruction each
    // iteration.
    auto cached_loss = [&](const DenseMatrix& xm) {
        const DenseMatrix& be = beff();
        const DenseMatrix ub = matmul(f.u, be);
        const DenseMatrix buub = matmul(matmul(transpose(be), gram(f.u)), be);
        double j = x_frob_sq - 2.0 * dot(xm, ub) + dot(buub, gram(f.m));
        j += cfg.lambda1 * (frobenius_sq(f.u) + frobenius_sq(f.m));
        j += cfg.lambda2 * (l1_norm(f.u) + l1_norm(f.m));
        return j;
    };

    FitResult result;
    result.config = cfg;

    DenseMatrix xm = xv.multiply(f.m, n_sources);
    double j_prev = cached_loss(xm);
    result.loss_trace.push_back(j_prev);

    for (std::size_t sweep = 1; sweep <= cfg.max_iters; ++sweep) {
        {  // U step
            const DenseMatrix bmmb = matmul_transposed(matmul(beff(), gram(f.m)), beff());
            const DenseMatrix pos = matmul(f.u, bmmb);
            const DenseMatrix gu =
                scaled_regularized(f.u, matmul_transposed(xm, beff()), pos, cfg.lambda1,
                                   cfg.lambda2);
            if (cfg.step_rule == StepRule::constant) {
                apply_step_constant(f.u, gu, cfg.eta);
            } else {
                apply_step_multiplicative(f.u, gu, pos);
            }
            clip_inplace(f.u, cfg.eps_clip);
        }
        const DenseMatrix xtu = xtv.multiply(f.u, n_claims);
        const DenseMatrix utu = gram(f.u);
        {  // M step
            const DenseMatrix buub = matmul(matmul(transpose(beff()), utu), beff());
            const DenseMatrix pos = matmul(f.m, buub);
            const DenseMatrix gm = scaled_regularized(f.m, matmul(xtu, beff()), pos, cfg.lambda1,
                                                      cfg.lambda2);
            if (cfg.step_rule == StepRule::constant) {
                apply_step_constant(f.m, gm, cfg.eta);
            } else {
                apply_step_multiplicative(f.m, gm, pos);
            }
            clip_inplace(f.m, cfg.eps_clip);
        }
        if (cfg.mode == FitMode::nmtf) {  // B~ step
            const DenseMatrix utxm = matmul(transpose(xtu), f.m);
            const DenseMatrix pos = matmul(matmul(utu, *f.b_tilde), gram(f.m));
            DenseMatrix gb(k, k);
            for (std::size_t t = 0; t < gb.data().size(); ++t) {
                gb.data()[t] = -2.0 * utxm.data()[t] + 2.0 * pos.data()[t];
            }
            if (cfg.step_rule == StepRule::constant) {
                apply_step_constant(*f.b_tilde, gb, cfg.eta);
            } else {
                apply_step_multiplicative(*f.b_tilde, gb, pos);
            }
            clip_inplace(*f.b_tilde, cfg.eps_clip);
        }

        xm = xv.multiply(f.m, n_sources);
        const double j = cached_loss(xm);
        result.loss_trace.push_back(j);
        result.iterations_run = sweep;
        if (!std::isfinite(j)) {
            throw DivergenceError("fit: loss became non-finite at iteration " +
                                      std::to_string(sweep),
                                  sweep);
        }
        if (std::abs(j - j_prev) / std::max(j_prev, 1e-12) < cfg.tol) {
            result.converged = true;
            j_prev = j;
            break;
        }
        j_prev = j;
    }

    result.factors = std::move(f);
    return result;
}

}  // namespace bsmf

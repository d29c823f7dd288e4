#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsmf/belief.hpp"
#include "bsmf/matrix.hpp"

namespace bsmf {

/// bsmf: fixed belief mixture B. nmf: B is the identity. nmtf: B is a
/// learnable K x K matrix estimated alongside U and M.
enum class FitMode { bsmf, nmf, nmtf };

/// constant: fixed step size eta. multiplicative: elementwise adaptive steps
/// eta_U = U / (2 U B M^T M B^T), eta_M = M / (2 M B^T U^T U B), which with
/// zero regularization reduce gradient descent to the classic multiplicative
/// update rules.
enum class StepRule { constant, multiplicative };

struct FitConfig {
    std::size_t k = 4;
    FitMode mode = FitMode::bsmf;
    double lambda1 = 0.1;  // L2 weight
    double lambda2 = 0.0;  // L1 weight
    StepRule step_rule = StepRule::multiplicative;
    double eta = 1e-3;            // used by StepRule::constant
    double eps_clip = 1e-8;       // positivity floor applied after each update
    std::size_t max_iters = 300;
    double tol = 1e-6;            // relative loss-change convergence threshold
    std::uint64_t seed = 0;

    /// Multiplicative steps require lambda2 = 0; the adaptive step derivation
    /// does not cover the L1 term.
    void validate() const;
};

std::string to_string(FitMode mode);
FitMode fit_mode_from_string(const std::string& name);

/// Source-belief matrix U (|S| x K, u_ip ~ Pr(source i holds belief p)) and
/// claim-belief matrix M (|C| x K, m_jq ~ Pr(claim j espouses belief q)).
/// b_tilde is present in nmtf mode only.
struct FactorPair {
    DenseMatrix u;
    DenseMatrix m;
    std::optional<DenseMatrix> b_tilde;
};

struct FitResult {
    FactorPair factors;
    std::vector<double> loss_trace;  // initial loss followed by one value per iteration
    std::size_t iterations_run = 0;
    bool converged = false;
    FitConfig config;
};

/// J = ||X - U B_eff M^T||_F^2 + lambda1 (||U||_F^2 + ||M||_F^2)
///   + lambda2 (||U||_1 + ||M||_1),
/// where B_eff is b in bsmf mode, the identity in nmf mode, and f.b_tilde in
/// nmtf mode.
double loss(const DenseMatrix& x, const FactorPair& f, const BeliefMixture& b,
            const FitConfig& cfg);

/// grad_U = -2 X M B^T + 2 U B M^T M B^T + 2 lambda1 U + lambda2 1
DenseMatrix grad_u(const DenseMatrix& x, const FactorPair& f, const BeliefMixture& b,
                   const FitConfig& cfg);

/// grad_M = -2 X^T U B + 2 M B^T U^T U B + 2 lambda1 M + lambda2 1
DenseMatrix grad_m(const DenseMatrix& x, const FactorPair& f, const BeliefMixture& b,
                   const FitConfig& cfg);

/// grad_B~ = -2 U^T X M + 2 U^T U B~ M^T M. nmtf mode only.
DenseMatrix grad_b_tilde(const DenseMatrix& x, const FactorPair& f, const FitConfig& cfg);

/// Elementwise adaptive step-size matrices (eta_U, eta_M) for the current
/// factors; denominators stay positive because factors are floored at
/// eps_clip.
std::pair<DenseMatrix, DenseMatrix> multiplicative_steps(const FactorPair& f,
                                                         const BeliefMixture& b,
                                                         const DenseMatrix& x);

/// Iterative solver: initializes U, M (and B~ in nmtf mode) uniformly on
/// (0,1) from cfg.seed, then alternates update-and-clip sweeps until the
/// relative loss change drops below cfg.tol or max_iters is reached. Throws
/// DivergenceError if the loss becomes non-finite.
FitResult fit(const DenseMatrix& x, const BeliefMixture& b, const FitConfig& cfg);

}  // namespace bsmf

// Linearization pipeline for coorder-1 structures: exact potential recovery
// from the closed dual form, Morse/signature data, the symbolic Moser
// coefficient r_t(f) with its residual oracle, the radial flow with
// variational equations, and the numeric pullback verification
// Phi_1^* (k(f) Pi_l) = Pi_l.
#pragma once

#include <array>
#include <optional>
#include <string>

#include "nambu/nambu.hpp"
#include "nambu/ode.hpp"

namespace nambu {

// Exact data of the potential g with dg = iota_P (h mu_std), g(0) = 0.
struct PotentialData {
    Poly g;
    Poly h;
    Signature signature;
    RatMat congruence;            // C with C^T Hess(g)(0) C = diag, positives first
    std::vector<Rational> diag;
};

// Input to the Moser stage: the normal-form pair (k, f) delivered by the
// isochore Morse lemma, encoded as dimension, signature of f, and the
// univariate k with k(0) = 1.
struct MoserSpec {
    int n;
    Signature signature;
    Poly k;

    MoserSpec(int n_, Signature sig, Poly k_);

    Poly quadratic() const { return signature_quadratic(n, signature); }
    MultiVector linear_model() const { return type1_nondegenerate(n, signature); }
};

// r_t(f) in the symbol pair (f, t), together with the residual bookkeeping
// of the symbolic solve.  The sign-flipped denominator variant (with
// 1 + t(1-k(f)) in place of 1 + t(k(f)-1)) is evaluated under the same
// residual oracle and the outcome recorded.
struct MoserCoefficient {
    RationalFunc r;
    Poly own_residual;         // cleared Moser residual of r; identically zero
    Poly flipped_denominator;  // (n-2)(1+t(1-k(f))) - 2tf k'(f)
    Poly flipped_residual;     // cleared residual of that variant

    bool flipped_variant_solves() const { return flipped_residual.is_zero(); }
};

// The reduced radial system on t in [0, 1]: endpoint values plus the curve
// (t, c, dc/dc0, lambda, dlambda/dc0) sampled at every accepted step.
struct ScalarFlowResult {
    double c;            // f-value along the flow at t = 1
    double dc_dc0;
    double lambda;       // radial scaling factor at t = 1
    double dlambda_dc0;
    std::vector<std::array<double, 5>> samples;
};

// One verified point of the time-1 Moser flow.
struct FlowSample {
    std::vector<double> x0;
    double f0 = 0;
    double lambda = 1;
    double dlambda_dc = 0;
    std::vector<double> image;
    std::vector<std::vector<double>> jacobian;
    double jacobian_fd_error = 0;  // relative defect vs central differences
    double residual = -1;          // max-norm pullback defect; set by pullback_residual
};

// Recovers g by the radial homotopy and verifies dg equals the dual form
// exactly; throws on a non-closed dual form or a singular Hessian.
PotentialData potential_from(const NambuCandidate& c, const Poly& h);

// Solves the Moser equation L_{r E} Pi_t + d/dt Pi_t = 0 for r symbolically
// and certifies the solution through moser_residual; also evaluates the
// sign-flipped denominator variant under the same oracle.
MoserCoefficient derive_rt(const MoserSpec& spec);

// Scalar multiplier sigma(x, t) of Pi_l in the denominator-cleared Moser
// residual of the given r; the zero polynomial iff r solves the equation.
// Throws when the residual is not proportional to Pi_l.
Poly moser_residual(const MoserSpec& spec, const RationalFunc& r);

// Integrates c' = 2 r c, lambda' = r lambda and their variational equations
// on t in [0,1]; errors when the denominator of r changes sign en route.
ScalarFlowResult scalar_flow(const RationalFunc& r, double c0, double tol = 1e-10);

// Time-1 flow at x0: image = lambda x0, Jacobian = lambda I + (dlambda/dc)
// x0 grad(f)^T, cross-checked against central finite differences.
FlowSample flow_map(const MoserSpec& spec, const MoserCoefficient& rt,
                    const std::vector<double>& x0, double tol = 1e-10);
FlowSample flow_map(const MoserSpec& spec, const std::vector<double>& x0, double tol = 1e-10);

// Max-norm of Phi_1^*(k(f) Pi_l)(x0) - Pi_l(x0), computed through the
// (n-1)x(n-1) minors of the inverse Jacobian.  Fills sample.residual.
double pullback_residual(const MoserSpec& spec, FlowSample& sample);
double pullback_residual(const MoserSpec& spec, const std::vector<double>& x0, double tol = 1e-10);

// Unreduced cross-check: integrates x' = r_t(f(x)) x in full dimension.
std::vector<double> full_flow(const MoserSpec& spec, const MoserCoefficient& rt,
                              const std::vector<double>& x0, double tol = 1e-10);

struct LinearizeStage {
    std::string name;
    bool ok;
    std::string detail;
};

struct LinearizeOptions {
    std::optional<Poly> k;      // univariate; enables the Moser stage
    int samples = 27;
    double tol = 1e-10;         // ODE tolerance
    double box = 0.2;           // sample box |x|_inf <= box
    double residual_tol = 1e-7; // acceptance bound on the pullback defect
};

struct LinearizeReport {
    std::string verdict;  // "linearized" or the failing stage's label
    bool ok = false;
    std::vector<LinearizeStage> stages;
    std::optional<PotentialData> potential;
    std::optional<MoserCoefficient> moser;
    std::optional<DiffForm> unimodular_defect;
    double max_residual = -1;
    double max_jacobian_fd_error = -1;
    int samples_run = 0;
    double box_used = 0;
};

// Full Main Theorem pipeline: unimodularity, potential, Morse/signature, and
// (when k is supplied) the Moser stage with a grid of pullback samples.
LinearizeReport linearize_report(const NambuCandidate& c, const Poly& h,
                                 const LinearizeOptions& opt = {});

}  // namespace nambu

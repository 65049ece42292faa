#include "nambu/linearize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

namespace nambu {

namespace {

// Spatial differential of a coefficient in the extended ring Q[x_1..x_n, t]:
// the dt-component is deliberately omitted (t is the deformation parameter).
DiffForm spatial_differential(const Poly& p, int n_spatial) {
    DiffForm r(p.num_vars(), 1);
    for (int i = 0; i < n_spatial; ++i) {
        Poly d = p.diff(i);
        if (!d.is_zero()) r.add_term({i}, d);
    }
    return r;
}

MultiVector spatial_euler(int n_spatial, int n_total) {
    MultiVector e(n_total, 1);
    for (int i = 0; i < n_spatial; ++i) e.add_term({i}, Poly::variable(n_total, i));
    return e;
}

MultiVector coefficient_t_derivative(const MultiVector& p, int t_var) {
    MultiVector r(p.dim(), p.degree());
    for (const auto& [i, c] : p.comps()) {
        Poly d = c.diff(t_var);
        if (!d.is_zero()) r.add_term(i, d);
    }
    return r;
}

double det_small(std::vector<std::vector<double>> m) {
    int n = static_cast<int>(m.size());
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int i = c + 1; i < n; ++i)
            if (std::fabs(m[i][c]) > std::fabs(m[piv][c])) piv = i;
        if (m[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (int i = c + 1; i < n; ++i) {
            double f = m[i][c] / m[c][c];
            for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return d;
}

std::vector<std::vector<double>> invert_small(std::vector<std::vector<double>> m) {
    int n = static_cast<int>(m.size());
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int i = c + 1; i < n; ++i)
            if (std::fabs(m[i][c]) > std::fabs(m[piv][c])) piv = i;
        if (m[piv][c] == 0.0) throw std::domain_error("flow Jacobian is singular");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        double p = m[c][c];
        for (int j = 0; j < n; ++j) {
            m[c][j] /= p;
            inv[c][j] /= p;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0.0) continue;
            double f = m[i][c];
            for (int j = 0; j < n; ++j) {
                m[i][j] -= f * m[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

// Runs fn(i) for i in [0, count) on a few worker threads; each index is
// independent and results land in caller-owned slots.
void parallel_for(int count, const std::function<void(int)>& fn) {
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
    if (workers <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto body = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

MoserSpec::MoserSpec(int n_, Signature sig, Poly k_) : n(n_), signature(sig), k(std::move(k_)) {
    if (n < 3) throw std::invalid_argument("MoserSpec: need n >= 3");
    if (signature.pos + signature.neg != n)
        throw std::invalid_argument("MoserSpec: signature rank must equal n");
    if (k.num_vars() != 1) throw std::invalid_argument("MoserSpec: k must be univariate");
    if (k.coeff(Exponents{0}) != Rational(1))
        throw std::invalid_argument("MoserSpec: k(0) must equal 1");
}

PotentialData potential_from(const NambuCandidate& c, const Poly& h) {
    if (!c.vanishes_at_origin())
        throw std::invalid_argument("potential_from: structure must vanish at the origin");
    int n = c.dim();
    DiffForm omega = dual_form(c, VolumeDensity(n, h));
    if (!exterior_d(omega).is_zero())
        throw std::domain_error("potential_from: dual form is not closed for this density");
    Poly g = radial_potential(omega);
    if (differential(g) != omega)
        throw std::logic_error("potential_from: homotopy failed to invert d");

    RatMat hess(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) hess.at(i, j) = g.diff(i).diff(j).constant_term();
    CongruenceDiag cd = congruence_diagonalize(hess);
    if (cd.signature.rank() < n)
        throw std::domain_error("potential_from: singular Hessian (degenerate linear part)");
    return {std::move(g), h, cd.signature, std::move(cd.congruence), std::move(cd.diag)};
}

Poly moser_residual(const MoserSpec& spec, const RationalFunc& r) {
    int n = spec.n;
    int nv = n + 1;  // x_1..x_n plus t as an inert extra coordinate
    const int t_var = n;

    MultiVector pi_l = lift_ambient(spec.linear_model(), nv);
    Poly f = lift_vars(spec.quadratic(), nv);
    Poly t = Poly::variable(nv, t_var);
    Poly one = Poly::constant(nv, Rational(1));
    Poly kf = compose_univariate(spec.k, f);

    // Pi_t = (1 + t (k(f) - 1)) Pi_l.
    Poly interp = one + t * (kf - one);
    MultiVector pi_t = pi_l.scaled(interp);

    // Substitute the symbols (f, t) of r by the actual quadratic and t.
    if (r.num.num_vars() != 2)
        throw std::invalid_argument("moser_residual: r must live in the symbol pair (f, t)");
    Poly den_at_origin = substitute(r.den, {Poly::constant(1, Rational(0)), Poly::variable(1, 0)});
    if (den_at_origin.is_zero())
        throw std::invalid_argument("moser_residual: denominator vanishes identically at f = 0");
    Poly num = substitute(r.num, {f, t});
    Poly den = substitute(r.den, {f, t});

    MultiVector e = spatial_euler(n, nv);
    MultiVector lie_e = schouten(e, pi_t);
    MultiVector iota_dnum = contract_last(spatial_differential(num, n), pi_t);
    MultiVector iota_dden = contract_last(spatial_differential(den, n), pi_t);
    MultiVector dt_pi = coefficient_t_derivative(pi_t, t_var);

    // den^2 (L_{(num/den) E} Pi_t + d/dt Pi_t)
    //   = num den [E, Pi_t] - (den iota_{d num} Pi_t - num iota_{d den} Pi_t) ^ E
    //     + den^2 d/dt Pi_t.
    MultiVector cleared = lie_e.scaled(num * den);
    cleared -= wedge(iota_dnum.scaled(den) - iota_dden.scaled(num), e);
    cleared += dt_pi.scaled(den * den);

    // The residual must be a scalar multiple of Pi_l; extract the multiplier.
    for (const auto& [idx, coeff] : cleared.comps())
        for (int i : idx)
            if (i >= n) throw std::logic_error("moser_residual: t-index leaked into the bracket");

    auto first = pi_l.comps().begin();
    if (first == pi_l.comps().end()) throw std::logic_error("moser_residual: empty linear model");
    // Components of the nondegenerate model are +-x_i on the complement of i.
    Poly sigma(nv);
    Poly lead = cleared.component(first->first);
    if (!lead.is_zero()) {
        int var = -1;
        for (int i = 0; i < n; ++i) {
            bool in_tuple = false;
            for (int j : first->first) in_tuple |= (j == i);
            if (!in_tuple) { var = i; break; }
        }
        Poly quotient;
        try {
            quotient = lead.exact_divide_by_variable(var);
        } catch (const std::domain_error&) {
            throw std::domain_error("moser_residual: residual is not proportional to the linear model");
        }
        // first->second = eps * x_var with eps = +-1
        Rational eps = first->second.terms().begin()->second;
        sigma = quotient * eps.reciprocal();
    }
    if (pi_l.scaled(sigma) != cleared)
        throw std::domain_error("moser_residual: residual is not proportional to the linear model");
    return sigma;
}

MoserCoefficient derive_rt(const MoserSpec& spec) {
    int n = spec.n;

    // The reduction below rests on three exact identities of the concrete
    // normal-form pair; certify them before using the reduced solve.
    MultiVector pi_l = spec.linear_model();
    Poly f = spec.quadratic();
    MultiVector e = euler_field(n);
    if (lie_derivative(e, pi_l) != pi_l.scaled(Rational(2 - n)))
        throw std::logic_error("derive_rt: homogeneity identity L_E Pi_l = (2-n) Pi_l failed");
    MultiVector f0(n, 0);
    f0.add_term({}, f);
    if (!schouten(pi_l, f0).is_zero())
        throw std::logic_error("derive_rt: [Pi_l, f] = 0 failed");
    MultiVector ef = schouten(e, f0);
    MultiVector two_f(n, 0);
    two_f.add_term({}, f * Rational(2));
    if (ef != two_f) throw std::logic_error("derive_rt: E(f) = 2f failed");

    // Reduced symbolic solve in Q[f, t]: the residual of r E is
    // (r ((2-n) c + E(c)) + dc/dt) Pi_l with c = 1 + t (k(f)-1) and
    // E(c) = 2 t f k'(f), so r = (k-1) / ((n-2) c - 2 t f k'(f)).
    Poly fs = Poly::variable(2, 0);
    Poly ts = Poly::variable(2, 1);
    Poly one = Poly::constant(2, Rational(1));
    Poly kf = lift_vars(spec.k, 2);
    Poly kprime = lift_vars(spec.k.diff(0), 2);
    Poly c = one + ts * (kf - one);
    Poly num = kf - one;
    Poly den = c * Rational(n - 2) - ts * fs * kprime * Rational(2);

    RationalFunc r(num, den);
    Poly own = moser_residual(spec, r);
    if (!own.is_zero())
        throw std::logic_error("derive_rt: symbolic solve failed its own residual oracle");

    // Restriction to f = 0 must be the constant n - 2.
    Poly den0 = substitute(den, {Poly::constant(1, Rational(0)), Poly::variable(1, 0)});
    if (den0 != Poly::constant(1, Rational(n - 2)))
        throw std::logic_error("derive_rt: denominator at f = 0 is not n - 2");

    // Sign-flipped denominator variant, evaluated under the same oracle.
    Poly flipped_den = (one + ts * (one - kf)) * Rational(n - 2) - ts * fs * kprime * Rational(2);
    Poly flipped_res = moser_residual(spec, RationalFunc(num, flipped_den));

    return {std::move(r), std::move(own), std::move(flipped_den), std::move(flipped_res)};
}

ScalarFlowResult scalar_flow(const RationalFunc& r, double c0, double tol) {
    RationalFunc rc = r.partial(0);
    double den0 = r.eval_den(c0, 0.0);
    if (den0 == 0.0)
        throw OdeError("scalar_flow: Moser denominator vanishes at the starting point");
    double den_sign = den0 > 0 ? 1.0 : -1.0;

    auto deriv = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        double den = r.eval_den(y[0], t);
        if (!(den * den_sign > 0.0))
            throw OdeError(
                "scalar_flow: Moser denominator crossed zero on the trajectory (point outside "
                "the linearization neighborhood)");
        double rv = r.eval(y[0], t);
        double rcv = rc.eval(y[0], t);
        dy[0] = 2.0 * rv * y[0];
        dy[1] = 2.0 * y[1] * (rv + y[0] * rcv);
        dy[2] = rv * y[2];
        dy[3] = rcv * y[1] * y[2] + rv * y[3];
    };

    std::vector<double> y{c0, 1.0, 1.0, 0.0};
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-3;
    ScalarFlowResult out;
    integrate_adaptive(deriv, y, 0.0, 1.0, opt, [&](double t, const std::vector<double>& s) {
        out.samples.push_back({t, s[0], s[1], s[2], s[3]});
    });
    out.c = y[0];
    out.dc_dc0 = y[1];
    out.lambda = y[2];
    out.dlambda_dc0 = y[3];
    return out;
}

FlowSample flow_map(const MoserSpec& spec, const MoserCoefficient& rt,
                    const std::vector<double>& x0, double tol) {
    int n = spec.n;
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("flow_map: point dimension mismatch");
    Poly f = spec.quadratic();

    FlowSample s;
    s.x0 = x0;
    s.f0 = f.eval(x0);
    ScalarFlowResult sf = scalar_flow(rt.r, s.f0, tol);
    s.lambda = sf.lambda;
    s.dlambda_dc = sf.dlambda_dc0;
    s.image.resize(n);
    for (int i = 0; i < n; ++i) s.image[i] = sf.lambda * x0[i];

    std::vector<double> grad(n);
    for (int i = 0; i < n; ++i) grad[i] = (i < spec.signature.pos ? x0[i] : -x0[i]);
    s.jacobian.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        s.jacobian[i][i] = sf.lambda;
        for (int j = 0; j < n; ++j) s.jacobian[i][j] += sf.dlambda_dc0 * x0[i] * grad[j];
    }

    // Central-difference cross-check of the analytic Jacobian.
    double fd_tol = std::min(tol, 1e-12);
    double hstep = 1e-4;
    double defect = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(s.jacobian[i][j]));
    for (int j = 0; j < n; ++j) {
        std::vector<double> xp = x0, xm = x0;
        xp[j] += hstep;
        xm[j] -= hstep;
        double lp = scalar_flow(rt.r, f.eval(xp), fd_tol).lambda;
        double lm = scalar_flow(rt.r, f.eval(xm), fd_tol).lambda;
        for (int i = 0; i < n; ++i) {
            double fd = (lp * xp[i] - lm * xm[i]) / (2.0 * hstep);
            defect = std::max(defect, std::fabs(fd - s.jacobian[i][j]));
        }
    }
    s.jacobian_fd_error = defect / std::max(scale, 1e-30);
    return s;
}

FlowSample flow_map(const MoserSpec& spec, const std::vector<double>& x0, double tol) {
    return flow_map(spec, derive_rt(spec), x0, tol);
}

double pullback_residual(const MoserSpec& spec, FlowSample& sample) {
    int n = spec.n;
    MultiVector pi_l = spec.linear_model();
    Poly f = spec.quadratic();

    auto minv = invert_small(sample.jacobian);
    double kval = spec.k.eval(std::vector<double>{f.eval(sample.image)});

    auto pl_at_image = pi_l.eval(sample.image);
    auto pl_at_x0 = pi_l.eval(sample.x0);

    auto complement = [n](int i) {
        IndexTuple t;
        for (int k = 0; k < n; ++k)
            if (k != i) t.push_back(k);
        return t;
    };
    auto comp_value = [](const std::map<IndexTuple, double>& m, const IndexTuple& k) {
        auto it = m.find(k);
        return it == m.end() ? 0.0 : it->second;
    };

    double res = 0.0;
    for (int a = 0; a < n; ++a) {
        double pulled = 0.0;
        for (int b = 0; b < n; ++b) {
            // (n-1)x(n-1) minor of the inverse Jacobian, rows != a, cols != b.
            std::vector<std::vector<double>> sub(n - 1, std::vector<double>(n - 1));
            for (int i = 0, si = 0; i < n; ++i) {
                if (i == a) continue;
                for (int j = 0, sj = 0; j < n; ++j) {
                    if (j == b) continue;
                    sub[si][sj] = minv[i][j];
                    ++sj;
                }
                ++si;
            }
            double source = kval * comp_value(pl_at_image, complement(b));
            if (source != 0.0) pulled += det_small(sub) * source;
        }
        res = std::max(res, std::fabs(pulled - comp_value(pl_at_x0, complement(a))));
    }
    sample.residual = res;
    return res;
}

double pullback_residual(const MoserSpec& spec, const std::vector<double>& x0, double tol) {
    MoserCoefficient rt = derive_rt(spec);
    FlowSample s = flow_map(spec, rt, x0, tol);
    return pullback_residual(spec, s);
}

std::vector<double> full_flow(const MoserSpec& spec, const MoserCoefficient& rt,
                              const std::vector<double>& x0, double tol) {
    int n = spec.n;
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("full_flow: point dimension mismatch");
    Poly f = spec.quadratic();
    double den_sign = rt.r.eval_den(f.eval(x0), 0.0) > 0 ? 1.0 : -1.0;

    auto deriv = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        double c = f.eval(y);
        double den = rt.r.eval_den(c, t);
        if (!(den * den_sign > 0.0))
            throw OdeError("full_flow: Moser denominator crossed zero on the trajectory");
        double rv = rt.r.eval(c, t);
        for (int i = 0; i < n; ++i) dy[i] = rv * y[i];
    };

    std::vector<double> y = x0;
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-3;
    integrate_adaptive(deriv, y, 0.0, 1.0, opt);
    return y;
}

LinearizeReport linearize_report(const NambuCandidate& c, const Poly& h,
                                 const LinearizeOptions& opt) {
    LinearizeReport rep;
    int n = c.dim();

    if (c.coorder() != 1) {
        rep.verdict = "not coorder 1";
        rep.stages.push_back({"input", false, "pipeline requires coorder 1"});
        return rep;
    }
    if (n < 3) {
        rep.verdict = "dimension below 3";
        rep.stages.push_back({"input", false, "pipeline requires n >= 3"});
        return rep;
    }
    rep.stages.push_back({"input", true, "coorder-1 candidate accepted"});

    UnimodularVerdict uni = is_unimodular(c, h);
    if (!uni.unimodular) {
        rep.verdict = "not unimodular w.r.t. supplied volume";
        rep.unimodular_defect = uni.defect;
        rep.stages.push_back({"unimodular", false, "d iota_P (h mu_std) != 0"});
        return rep;
    }
    rep.stages.push_back({"unimodular", true, "d iota_P (h mu_std) = 0 exactly"});

    PotentialData pot{Poly(0), Poly(0), {}, RatMat(0, 0), {}};
    try {
        pot = potential_from(c, h);
    } catch (const std::domain_error& err) {
        rep.verdict = "degenerate linear part - Main Theorem inapplicable";
        rep.stages.push_back({"potential", false, err.what()});
        return rep;
    }
    rep.stages.push_back({"potential", true, "dg = iota_P (h mu_std) verified exactly"});
    rep.stages.push_back(
        {"morse_signature", true,
         "signature (" + std::to_string(pot.signature.pos) + "," +
             std::to_string(pot.signature.neg) + ")"});
    rep.potential = pot;

    if (!opt.k) {
        rep.verdict = "linearizable (Moser stage skipped: no k supplied)";
        rep.ok = true;
        return rep;
    }

    MoserCoefficient rt{RationalFunc(Poly::constant(2, Rational(0)), Poly::constant(2, Rational(1))),
                        Poly(0), Poly(0), Poly(0)};
    MoserSpec spec{n, pot.signature, *opt.k};
    try {
        rt = derive_rt(spec);
    } catch (const std::exception& err) {
        rep.verdict = "Moser coefficient derivation failed";
        rep.stages.push_back({"moser_derive", false, err.what()});
        return rep;
    }
    rep.stages.push_back({"moser_derive", true, "r_t(f) derived; residual identically zero"});
    rep.stages.push_back({"moser_flipped_denominator",
                          rt.flipped_variant_solves(),
                          rt.flipped_variant_solves()
                              ? "sign-flipped denominator also zeroes the residual"
                              : "sign-flipped denominator does NOT zero the residual"});
    rep.moser = rt;

    // Pullback sample sweep over a grid in the box |x|_inf <= box, shrinking
    // when the denominator of r blows up inside the box.
    int per_axis = std::max(2, static_cast<int>(std::lround(std::pow(
                                   static_cast<double>(std::max(opt.samples, 1)), 1.0 / n))));
    double box = opt.box;
    for (int attempt = 0; attempt < 4; ++attempt) {
        int total = 1;
        for (int i = 0; i < n; ++i) total *= per_axis;
        std::vector<double> residuals(total, 0.0);
        std::vector<double> fd_errors(total, 0.0);
        try {
            parallel_for(total, [&](int s) {
                std::vector<double> x0(n);
                int rem = s;
                for (int i = 0; i < n; ++i) {
                    int level = rem % per_axis;
                    rem /= per_axis;
                    x0[i] = -box + 2.0 * box * level / (per_axis - 1);
                }
                FlowSample fs = flow_map(spec, rt, x0, opt.tol);
                pullback_residual(spec, fs);
                residuals[s] = fs.residual;
                fd_errors[s] = fs.jacobian_fd_error;
            });
        } catch (const OdeError&) {
            box *= 0.5;  // shrink towards the guaranteed neighborhood
            continue;
        }
        rep.max_residual = *std::max_element(residuals.begin(), residuals.end());
        rep.max_jacobian_fd_error = *std::max_element(fd_errors.begin(), fd_errors.end());
        rep.samples_run = total;
        rep.box_used = box;
        break;
    }
    if (rep.samples_run == 0) {
        rep.verdict = "Moser flow blow-up inside every sample box";
        rep.stages.push_back({"pullback", false, "denominator of r_t vanished on all attempts"});
        return rep;
    }

    bool residual_ok = rep.max_residual <= opt.residual_tol;
    rep.stages.push_back({"pullback", residual_ok,
                          "max residual " + std::to_string(rep.max_residual) + " over " +
                              std::to_string(rep.samples_run) + " samples"});
    if (!residual_ok) {
        rep.verdict = "pullback residual above tolerance";
        return rep;
    }
    rep.verdict = "linearized";
    rep.ok = true;
    return rep;
}

}  // namespace nambu

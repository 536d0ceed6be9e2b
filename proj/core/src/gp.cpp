#include "noma/gp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace noma::gp {

namespace {

constexpr double kDefaultLower = 1e-12;
constexpr double kDefaultUpper = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dim(int want, int got, const char* what) {
    if (want != got)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(got) + " vs " + std::to_string(want) + ")");
}

std::vector<double> log_vec(const std::vector<double>& q, const char* what) {
    std::vector<double> y(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q[i] > 0.0)) throw std::domain_error(std::string(what) + ": point must be strictly positive");
        y[i] = std::log(q[i]);
    }
    return y;
}

/// Log-sum-exp view of a posynomial: value, gradient and Hessian of
/// ln f(e^y) as functions of y. Hessian is PSD.
struct LseFn {
    Eigen::MatrixXd A;  // terms x dim, exponent rows
    Eigen::VectorXd c;  // ln coefficients
    int slack_index = -1;  // phase-1: value is lse(y) - y[slack_index]

    mutable Eigen::VectorXd s_, w_;

    static LseFn from(const Posynomial& p, int dim, int ambient_dim) {
        LseFn f;
        const int t = static_cast<int>(p.terms.size());
        f.A.setZero(t, ambient_dim);
        f.c.resize(t);
        for (int k = 0; k < t; ++k) {
            const Monomial& m = p.terms[k];
            if (!(m.coeff > 0.0)) throw std::invalid_argument("posynomial coefficient must be > 0");
            check_dim(dim, m.dimension(), "posynomial term");
            for (int i = 0; i < dim; ++i) f.A(k, i) = m.exponents[i];
            f.c(k) = std::log(m.coeff);
        }
        return f;
    }

    double value(const Eigen::VectorXd& y) const {
        s_ = c + A * y;
        const double mx = s_.maxCoeff();
        double sum = 0.0;
        for (int k = 0; k < s_.size(); ++k) sum += std::exp(s_(k) - mx);
        double v = mx + std::log(sum);
        if (slack_index >= 0) v -= y(slack_index);
        return v;
    }

    double value_grad(const Eigen::VectorXd& y, Eigen::VectorXd& grad) const {
        s_ = c + A * y;
        const double mx = s_.maxCoeff();
        w_ = (s_.array() - mx).exp();
        const double sum = w_.sum();
        w_ /= sum;
        grad.noalias() = A.transpose() * w_;
        double v = mx + std::log(sum);
        if (slack_index >= 0) {
            v -= y(slack_index);
            grad(slack_index) -= 1.0;
        }
        return v;
    }

    double value_grad_hess(const Eigen::VectorXd& y, Eigen::VectorXd& grad,
                           Eigen::MatrixXd& hess) const {
        const int dim = static_cast<int>(A.cols());
        if (A.rows() == 1) {  // monomial: linear in y, zero curvature
            hess.setZero(dim, dim);
            return value_grad(y, grad);
        }
        const double v = value_grad(y, grad);
        hess.setZero(dim, dim);
        for (int k = 0; k < A.rows(); ++k) {
            const double w = w_(k);
            for (int i = 0; i < dim; ++i) {
                const double wa = w * A(k, i);
                for (int j = 0; j <= i; ++j) hess(i, j) += wa * A(k, j);
            }
        }
        Eigen::VectorXd g = A.transpose() * w_;  // softmax mean of exponent rows
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) {
                hess(i, j) -= g(i) * g(j);
                hess(j, i) = hess(i, j);
            }
        return v;
    }
};

struct BarrierSetup {
    int dim = 0;
    const LseFn* objective = nullptr;     // nullptr -> linear objective
    Eigen::VectorXd linear_objective;     // used when objective == nullptr
    std::vector<LseFn> ineq;              // f_i(y) <= 0
    Eigen::VectorXd ylo, yhi;
    Eigen::MatrixXd aeq;                  // may have zero rows
    Eigen::VectorXd beq;
};

struct BarrierOutcome {
    Eigen::VectorXd y;
    int newton_iterations = 0;
    bool converged = false;
    double stationarity = 0.0;
    Eigen::VectorXd eq_dual;
};

bool strictly_inside(const BarrierSetup& p, const Eigen::VectorXd& y) {
    for (int i = 0; i < p.dim; ++i)
        if (!(y(i) > p.ylo(i)) || !(y(i) < p.yhi(i))) return false;
    for (const auto& f : p.ineq)
        if (!(f.value(y) < 0.0)) return false;
    return true;
}

double objective_value(const BarrierSetup& p, const Eigen::VectorXd& y) {
    return p.objective ? p.objective->value(y) : p.linear_objective.dot(y);
}

/// Barrier value/grad/Hessian at y for parameter t. Returns +inf when y
/// is outside the domain.
double barrier_eval(const BarrierSetup& p, const Eigen::VectorXd& y, double t,
                    Eigen::VectorXd* grad, Eigen::MatrixXd* hess,
                    Eigen::VectorXd& tmp_grad, Eigen::MatrixXd& tmp_hess) {
    double val = 0.0;
    if (grad) grad->setZero(p.dim);
    if (hess) hess->setZero(p.dim, p.dim);

    if (p.objective) {
        double v;
        if (hess) {
            v = p.objective->value_grad_hess(y, tmp_grad, tmp_hess);
            *hess += t * tmp_hess;
        } else if (grad) {
            v = p.objective->value_grad(y, tmp_grad);
        } else {
            v = p.objective->value(y);
        }
        if (grad) *grad += t * tmp_grad;
        val += t * v;
    } else {
        val += t * p.linear_objective.dot(y);
        if (grad) *grad += t * p.linear_objective;
    }

    for (const auto& f : p.ineq) {
        double v;
        if (hess) {
            v = f.value_grad_hess(y, tmp_grad, tmp_hess);
        } else if (grad) {
            v = f.value_grad(y, tmp_grad);
        } else {
            v = f.value(y);
        }
        if (!(v < 0.0)) return kInf;
        val -= std::log(-v);
        if (grad) *grad += tmp_grad / (-v);
        if (hess) {
            *hess += tmp_hess / (-v);
            hess->noalias() += tmp_grad * tmp_grad.transpose() / (v * v);
        }
    }

    for (int i = 0; i < p.dim; ++i) {
        const double a = y(i) - p.ylo(i);
        const double b = p.yhi(i) - y(i);
        if (!(a > 0.0) || !(b > 0.0)) return kInf;
        val -= std::log(a) + std::log(b);
        if (grad) (*grad)(i) += -1.0 / a + 1.0 / b;
        if (hess) (*hess)(i, i) += 1.0 / (a * a) + 1.0 / (b * b);
    }
    return val;
}

/// Minimizes t*f0 + barrier over the affine set aeq*y = beq with damped
/// Newton, increasing t until the duality-gap bound meets tol.
BarrierOutcome barrier_minimize(const BarrierSetup& p, Eigen::VectorXd y, double tol,
                                int max_newton, double early_exit_obj_below = -kInf,
                                double t_start = 1.0) {
    BarrierOutcome out;
    const int neq = static_cast<int>(p.aeq.rows());
    const double m_barrier = static_cast<double>(p.ineq.size() + 2 * p.dim);
    const double t_target = m_barrier / std::max(tol, 1e-14);
    const double mu = 30.0;

    Eigen::VectorXd grad(p.dim), tmp_grad(p.dim), dy(p.dim), cand(p.dim);
    Eigen::MatrixXd hess(p.dim, p.dim), tmp_hess(p.dim, p.dim);
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(neq);

    double t = t_start < 0.0 ? std::max(1.0, t_target / mu)
                             : std::clamp(t_start, 1.0, t_target);
    bool done_last_stage = false;
    int total_newton = 0;

    if (!std::isfinite(barrier_eval(p, y, 1.0, nullptr, nullptr, tmp_grad, tmp_hess)))
        throw GpError("barrier: start point outside the domain");

    while (!done_last_stage) {
        if (t >= t_target) done_last_stage = true;
        for (int it = 0; it < 80; ++it) {
            if (total_newton >= max_newton) {
                out.y = y;
                out.newton_iterations = total_newton;
                out.converged = false;
                out.eq_dual = nu;
                return out;
            }
            const double val = barrier_eval(p, y, t, &grad, &hess, tmp_grad, tmp_hess);
            if (!std::isfinite(val)) break;  // boundary roundoff; keep the last iterate

            // Mild Tikhonov term keeps near-boundary Hessians factorable.
            const double reg = 1e-12 * (1.0 + hess.diagonal().maxCoeff());
            hess.diagonal().array() += reg;

            double decrement = 0.0;
            for (int attempt = 0; attempt < 2; ++attempt) {
                if (neq == 0) {
                    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
                    dy = ldlt.solve(-grad);
                } else {
                    Eigen::MatrixXd kkt(p.dim + neq, p.dim + neq);
                    kkt.setZero();
                    kkt.topLeftCorner(p.dim, p.dim) = hess;
                    kkt.topRightCorner(p.dim, neq) = p.aeq.transpose();
                    kkt.bottomLeftCorner(neq, p.dim) = p.aeq;
                    Eigen::VectorXd rhs(p.dim + neq);
                    rhs.head(p.dim) = -grad;
                    rhs.tail(neq) = p.beq - p.aeq * y;
                    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
                    dy = sol.head(p.dim);
                    nu = sol.tail(neq);
                }
                decrement = -grad.dot(dy);
                if (std::isfinite(decrement) && decrement >= 0.0) break;
                // Non-descent direction from a degenerate factorization.
                hess.diagonal().array() += 1e-6 * (1.0 + hess.diagonal().maxCoeff());
            }
            ++total_newton;
            if (!std::isfinite(decrement) || decrement < 0.0) break;
            if (decrement * 0.5 < 1e-11) break;

            double alpha = 1.0;
            bool stepped = false;
            for (int ls = 0; ls < 60; ++ls) {
                cand = y + alpha * dy;
                const double cand_val =
                    barrier_eval(p, cand, t, nullptr, nullptr, tmp_grad, tmp_hess);
                if (std::isfinite(cand_val) && cand_val <= val - 0.01 * alpha * decrement) {
                    y = cand;
                    stepped = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!stepped) break;  // numerically stuck; accept current point

            if (objective_value(p, y) < early_exit_obj_below) {
                out.y = y;
                out.newton_iterations = total_newton;
                out.converged = true;
                out.eq_dual = nu;
                return out;
            }
        }
        if (!done_last_stage) t = std::min(t * mu, t_target);
    }

    // KKT residual with the barrier's implicit multipliers, scaled by 1/t.
    barrier_eval(p, y, t, &grad, nullptr, tmp_grad, tmp_hess);
    Eigen::VectorXd res = grad;
    if (neq > 0) res += p.aeq.transpose() * (nu * t);
    out.stationarity = res.lpNorm<Eigen::Infinity>() / t;
    out.y = y;
    out.newton_iterations = total_newton;
    out.converged = true;
    out.eq_dual = nu;
    return out;
}

struct FoldedProblem {
    int dim = 0;
    Posynomial objective;
    std::vector<Posynomial> ineq;  // <= 1
    std::vector<Monomial> eq;
    std::vector<double> lower, upper;
};

/// Normalizes a GpProblem whose ratio denominators are all monomial into
/// pure posynomial form.
FoldedProblem fold(const GpProblem& prob) {
    if (prob.dimension < 1) throw std::invalid_argument("GpProblem: dimension must be >= 1");
    FoldedProblem f;
    f.dim = prob.dimension;
    if (!std::holds_alternative<Posynomial>(prob.objective))
        throw std::invalid_argument("solve_gp: ratio objective requires solve_condensation");
    f.objective = std::get<Posynomial>(prob.objective);
    if (f.objective.terms.empty()) throw std::invalid_argument("solve_gp: empty objective");
    check_dim(f.dim, f.objective.dimension(), "objective");

    for (const auto& rc : prob.constraints) {
        if (rc.num.terms.empty()) throw std::invalid_argument("constraint: empty numerator");
        check_dim(f.dim, rc.num.dimension(), "constraint numerator");
        if (rc.den.terms.empty()) throw std::invalid_argument("constraint: empty denominator");
        if (!rc.den.is_monomial())
            throw std::invalid_argument(
                "solve_gp: non-monomial constraint denominator requires solve_condensation");
        check_dim(f.dim, rc.den.dimension(), "constraint denominator");
        Posynomial folded = rc.num;
        folded *= reciprocal(rc.den.terms.front());
        f.ineq.push_back(std::move(folded));
    }
    for (const auto& m : prob.eq_constraints) {
        check_dim(f.dim, m.dimension(), "equality constraint");
        if (!(m.coeff > 0.0)) throw std::invalid_argument("equality: coefficient must be > 0");
        f.eq.push_back(m);
    }

    f.lower = prob.lower.empty() ? std::vector<double>(f.dim, kDefaultLower) : prob.lower;
    f.upper = prob.upper.empty() ? std::vector<double>(f.dim, kDefaultUpper) : prob.upper;
    if (static_cast<int>(f.lower.size()) != f.dim || static_cast<int>(f.upper.size()) != f.dim)
        throw std::invalid_argument("GpProblem: bound size mismatch");
    for (int i = 0; i < f.dim; ++i) {
        if (!(f.lower[i] > 0.0)) throw std::invalid_argument("GpProblem: lower bounds must be > 0");
        if (!(f.upper[i] > f.lower[i]))
            throw std::invalid_argument("GpProblem: upper bounds must exceed lower bounds");
    }
    return f;
}

}  // namespace

Posynomial Posynomial::constant(double value, int dim) {
    if (!(value > 0.0)) throw std::invalid_argument("Posynomial::constant: value must be > 0");
    Posynomial p;
    p.terms.push_back(Monomial{value, std::vector<double>(dim, 0.0)});
    return p;
}

Posynomial Posynomial::variable(int index, int dim, double coeff) {
    if (index < 0 || index >= dim) throw std::invalid_argument("Posynomial::variable: bad index");
    if (!(coeff > 0.0)) throw std::invalid_argument("Posynomial::variable: coeff must be > 0");
    Posynomial p;
    Monomial m{coeff, std::vector<double>(dim, 0.0)};
    m.exponents[index] = 1.0;
    p.terms.push_back(std::move(m));
    return p;
}

Posynomial& Posynomial::operator+=(const Monomial& m) {
    if (!terms.empty()) check_dim(dimension(), m.dimension(), "Posynomial::operator+=");
    terms.push_back(m);
    return *this;
}

Posynomial& Posynomial::operator+=(const Posynomial& p) {
    for (const auto& m : p.terms) *this += m;
    return *this;
}

Posynomial& Posynomial::operator*=(const Monomial& m) {
    for (auto& t : terms) {
        check_dim(t.dimension(), m.dimension(), "Posynomial::operator*=");
        t.coeff *= m.coeff;
        for (int i = 0; i < m.dimension(); ++i) t.exponents[i] += m.exponents[i];
    }
    return *this;
}

Posynomial operator*(const Posynomial& a, const Posynomial& b) {
    Posynomial out;
    out.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            check_dim(ta.dimension(), tb.dimension(), "Posynomial::operator*");
            Monomial m{ta.coeff * tb.coeff, ta.exponents};
            for (int i = 0; i < tb.dimension(); ++i) m.exponents[i] += tb.exponents[i];
            out.terms.push_back(std::move(m));
        }
    }
    return out;
}

Monomial reciprocal(const Monomial& m) {
    if (!(m.coeff > 0.0)) throw std::invalid_argument("reciprocal: coefficient must be > 0");
    Monomial r{1.0 / m.coeff, m.exponents};
    for (auto& e : r.exponents) e = -e;
    return r;
}

RatioConstraint RatioConstraint::upper_bound(Posynomial p) {
    const int dim = p.dimension();
    return RatioConstraint{std::move(p), Posynomial::constant(1.0, dim)};
}

double evaluate(const Monomial& m, const std::vector<double>& q) {
    check_dim(m.dimension(), static_cast<int>(q.size()), "evaluate(Monomial)");
    if (!(m.coeff > 0.0)) throw std::invalid_argument("evaluate: coefficient must be > 0");
    const auto y = log_vec(q, "evaluate");
    double s = std::log(m.coeff);
    for (std::size_t i = 0; i < q.size(); ++i) s += m.exponents[i] * y[i];
    return std::exp(s);
}

double evaluate(const Posynomial& p, const std::vector<double>& q) {
    if (p.terms.empty()) throw std::invalid_argument("evaluate: empty posynomial");
    const auto y = log_vec(q, "evaluate");
    double mx = -kInf;
    std::vector<double> s(p.terms.size());
    for (std::size_t k = 0; k < p.terms.size(); ++k) {
        const Monomial& m = p.terms[k];
        check_dim(m.dimension(), static_cast<int>(q.size()), "evaluate(Posynomial)");
        if (!(m.coeff > 0.0)) throw std::invalid_argument("evaluate: coefficient must be > 0");
        double v = std::log(m.coeff);
        for (std::size_t i = 0; i < q.size(); ++i) v += m.exponents[i] * y[i];
        s[k] = v;
        mx = std::max(mx, v);
    }
    double sum = 0.0;
    for (double v : s) sum += std::exp(v - mx);
    return std::exp(mx + std::log(sum));
}

Monomial condense(const Posynomial& den, const std::vector<double>& q0) {
    if (den.terms.empty()) throw std::invalid_argument("condense: empty posynomial");
    if (den.is_monomial()) return den.terms.front();
    const int dim = den.dimension();
    check_dim(dim, static_cast<int>(q0.size()), "condense");
    const auto y0 = log_vec(q0, "condense");

    std::vector<double> s(den.terms.size());
    double mx = -kInf;
    for (std::size_t k = 0; k < den.terms.size(); ++k) {
        double v = std::log(den.terms[k].coeff);
        for (int i = 0; i < dim; ++i) v += den.terms[k].exponents[i] * y0[i];
        s[k] = v;
        mx = std::max(mx, v);
    }
    double sum = 0.0;
    for (double v : s) sum += std::exp(v - mx);
    const double ln_den = mx + std::log(sum);

    Monomial out{1.0, std::vector<double>(dim, 0.0)};
    for (std::size_t k = 0; k < den.terms.size(); ++k) {
        const double w = std::exp(s[k] - ln_den);
        for (int i = 0; i < dim; ++i) out.exponents[i] += w * den.terms[k].exponents[i];
    }
    double ln_lambda = ln_den;
    for (int i = 0; i < dim; ++i) ln_lambda -= out.exponents[i] * y0[i];
    out.coeff = std::exp(ln_lambda);
    return out;
}

double log_rate_approx(double x, int terms) {
    if (!(x > -1.0)) throw std::domain_error("log_rate_approx: x must be > -1");
    if (terms != 1 && terms != 2) throw std::invalid_argument("log_rate_approx: terms must be 1 or 2");
    const double z = x / (2.0 + x);
    double r = 2.0 * z;
    if (terms == 2) r += (2.0 / 3.0) * z * z * z;
    return r;
}

GpResult solve_gp(const GpProblem& prob, double tol, int max_iter, double t_start) {
    const FoldedProblem f = fold(prob);
    const int dim = f.dim;

    BarrierSetup setup;
    setup.dim = dim;
    LseFn obj = LseFn::from(f.objective, dim, dim);
    setup.objective = &obj;
    for (const auto& g : f.ineq) setup.ineq.push_back(LseFn::from(g, dim, dim));
    setup.ylo.resize(dim);
    setup.yhi.resize(dim);
    for (int i = 0; i < dim; ++i) {
        setup.ylo(i) = std::log(f.lower[i]);
        setup.yhi(i) = std::log(f.upper[i]);
    }
    const int neq = static_cast<int>(f.eq.size());
    setup.aeq.setZero(neq, dim);
    setup.beq.resize(neq);
    for (int r = 0; r < neq; ++r) {
        for (int i = 0; i < dim; ++i) setup.aeq(r, i) = f.eq[r].exponents[i];
        setup.beq(r) = -std::log(f.eq[r].coeff);
    }

    Eigen::VectorXd y0(dim);
    if (prob.initial) {
        check_dim(dim, static_cast<int>(prob.initial->size()), "initial point");
        const auto yv = log_vec(*prob.initial, "initial point");
        for (int i = 0; i < dim; ++i) y0(i) = yv[i];
    } else {
        y0 = 0.5 * (setup.ylo + setup.yhi);
    }
    // Nudge strictly inside the box.
    for (int i = 0; i < dim; ++i) {
        const double pad = 1e-9 * (setup.yhi(i) - setup.ylo(i));
        y0(i) = std::clamp(y0(i), setup.ylo(i) + pad, setup.yhi(i) - pad);
    }
    if (neq > 0) {
        // Minimum-norm correction onto the affine set.
        Eigen::VectorXd r = setup.beq - setup.aeq * y0;
        y0 += setup.aeq.transpose() *
              (setup.aeq * setup.aeq.transpose()).fullPivLu().solve(r);
    }

    int newton_budget = max_iter;
    GpResult result;

    if (!strictly_inside(setup, y0)) {
        // Phase 1: minimize a shared slack s with f_i(y) - s <= 0.
        BarrierSetup p1;
        p1.dim = dim + 1;
        p1.linear_objective.setZero(dim + 1);
        p1.linear_objective(dim) = 1.0;
        for (const auto& g : f.ineq) {
            LseFn fn = LseFn::from(g, dim, dim + 1);
            fn.slack_index = dim;
            p1.ineq.push_back(std::move(fn));
        }
        double smax = 0.0;
        for (auto& fn : p1.ineq) {
            Eigen::VectorXd probe(dim + 1);
            probe.head(dim) = y0;
            probe(dim) = 0.0;
            smax = std::max(smax, fn.value(probe));
        }
        p1.ylo.resize(dim + 1);
        p1.yhi.resize(dim + 1);
        p1.ylo.head(dim) = setup.ylo;
        p1.yhi.head(dim) = setup.yhi;
        p1.ylo(dim) = -std::abs(smax) - 100.0;
        p1.yhi(dim) = std::abs(smax) + 10.0;
        p1.aeq.setZero(neq, dim + 1);
        p1.aeq.leftCols(dim) = setup.aeq;
        p1.beq = setup.beq;

        Eigen::VectorXd z0(dim + 1);
        z0.head(dim) = y0;
        z0(dim) = smax + 1.0;
        for (int i = 0; i < dim; ++i) {
            const double pad = 1e-7 * (setup.yhi(i) - setup.ylo(i));
            z0(i) = std::clamp(z0(i), setup.ylo(i) + pad, setup.yhi(i) - pad);
        }

        BarrierOutcome ph1 = barrier_minimize(p1, z0, 1e-6, newton_budget, -1e-6);
        newton_budget -= ph1.newton_iterations;
        result.newton_iterations += ph1.newton_iterations;
        if (ph1.y(dim) >= 0.0)
            throw GpError("solve_gp: problem is infeasible (phase-1 slack " +
                          std::to_string(ph1.y(dim)) + ")");
        y0 = ph1.y.head(dim);
        if (newton_budget <= 0) {
            result.q.resize(dim);
            for (int i = 0; i < dim; ++i) result.q[i] = std::exp(y0(i));
            result.objective = evaluate(f.objective, result.q);
            result.converged = false;
            return result;
        }
    }

    BarrierOutcome ph2 = barrier_minimize(setup, y0, tol, newton_budget, -kInf, t_start);
    result.newton_iterations += ph2.newton_iterations;
    result.q.resize(dim);
    for (int i = 0; i < dim; ++i) result.q[i] = std::exp(ph2.y(i));
    result.objective = evaluate(f.objective, result.q);
    result.stationarity = ph2.stationarity;
    result.converged = ph2.converged;
    return result;
}

namespace {

CondensationResult condensation_single_start(const GpProblem& prob,
                                             const std::vector<double>& q_init,
                                             const CondensationOptions& opts);

}  // namespace

CondensationResult solve_condensation(const GpProblem& prob, const std::vector<double>& q_init,
                                      const CondensationOptions& opts) {
    if (prob.dimension < 1) throw std::invalid_argument("solve_condensation: bad dimension");
    check_dim(prob.dimension, static_cast<int>(q_init.size()), "solve_condensation init");
    for (double v : q_init)
        if (!(v > 0.0)) throw std::domain_error("solve_condensation: q_init must be positive");

    // Tiny box-only ratio problems are cheap to sweep and can be
    // multimodal; recover the global valley with a coarse multi-start.
    // Constrained problems keep the caller's single start.
    const bool tiny_box_only = prob.dimension <= 2 && prob.constraints.empty() &&
                               prob.eq_constraints.empty();
    if (!tiny_box_only) return condensation_single_start(prob, q_init, opts);

    std::vector<double> lo = prob.lower.empty()
                                 ? std::vector<double>(prob.dimension, 1e-12)
                                 : prob.lower;
    std::vector<double> hi = prob.upper.empty()
                                 ? std::vector<double>(prob.dimension, 1e12)
                                 : prob.upper;
    std::vector<std::vector<double>> starts{q_init};
    std::vector<double> point(prob.dimension);
    const int probes = 3;
    for (int mask = 0; mask < (probes == 3 ? (prob.dimension == 1 ? 3 : 9) : 1); ++mask) {
        int rem = mask;
        for (int d = 0; d < prob.dimension; ++d) {
            const int sel = rem % probes;
            rem /= probes;
            const double frac = 0.25 + 0.25 * sel;  // quarter points in log space
            point[d] = lo[d] * std::pow(hi[d] / lo[d], frac);
        }
        starts.push_back(point);
    }

    CondensationResult best;
    std::vector<CondensationTraceRow> best_trace;
    bool have = false;
    long total_newton = 0;
    for (const auto& start : starts) {
        CondensationOptions local = opts;
        std::vector<CondensationTraceRow> trace;
        local.trace = opts.trace ? &trace : nullptr;
        CondensationResult res;
        try {
            res = condensation_single_start(prob, start, local);
        } catch (const GpError&) {
            if (&start == &starts.front()) throw;  // the caller's start must work
            continue;
        }
        total_newton += res.newton_iterations;
        if (!have || res.objective < best.objective) {
            have = true;
            best = res;
            best_trace = std::move(trace);
        }
    }
    best.newton_iterations = total_newton;
    if (opts.trace)
        opts.trace->insert(opts.trace->end(), best_trace.begin(), best_trace.end());
    return best;
}

namespace {

CondensationResult condensation_single_start(const GpProblem& prob,
                                             const std::vector<double>& q_init,
                                             const CondensationOptions& opts) {

    const bool ratio_obj = std::holds_alternative<PosyRatio>(prob.objective);
    const Posynomial* num = nullptr;
    const Posynomial* den = nullptr;
    if (ratio_obj) {
        num = &std::get<PosyRatio>(prob.objective).num;
        den = &std::get<PosyRatio>(prob.objective).den;
        if (num->terms.empty() || den->terms.empty())
            throw std::invalid_argument("solve_condensation: empty ratio objective");
    } else {
        num = &std::get<Posynomial>(prob.objective);
    }

    auto true_objective = [&](const std::vector<double>& q) {
        double v = evaluate(*num, q);
        if (den) v /= evaluate(*den, q);
        return v;
    };

    bool exact = !den || den->is_monomial();
    for (const auto& rc : prob.constraints)
        if (!rc.den.is_monomial()) exact = false;

    CondensationResult out;
    std::vector<double> q = q_init;
    double prev_obj = true_objective(q);

    const int max_outer = exact ? 1 : opts.max_outer;
    for (int k = 1; k <= max_outer; ++k) {
        GpProblem sub;
        sub.dimension = prob.dimension;
        sub.lower = prob.lower;
        sub.upper = prob.upper;
        sub.eq_constraints = prob.eq_constraints;
        sub.initial = q;

        Posynomial obj = *num;
        if (den) obj *= reciprocal(condense(*den, q));
        sub.objective = std::move(obj);

        for (const auto& rc : prob.constraints) {
            if (rc.den.is_monomial()) {
                sub.constraints.push_back(rc);
            } else {
                Posynomial folded = rc.num;
                Monomial hat = condense(rc.den, q);
                sub.constraints.push_back(
                    RatioConstraint{std::move(folded), Posynomial{{hat}}});
            }
        }

        // Later iterates start near the optimum; skip the early centering.
        const double t_start = k == 1 ? 1.0 : -1.0;
        GpResult inner = solve_gp(sub, opts.inner_tol, opts.inner_max_iter, t_start);
        out.newton_iterations += inner.newton_iterations;

        const double slack = 1e3 * opts.inner_tol * (1.0 + std::abs(prev_obj));
        double new_obj = true_objective(inner.q);
        if (new_obj > prev_obj + slack && t_start < 0.0) {
            // Warm start went astray; redo this step from a cold barrier.
            inner = solve_gp(sub, opts.inner_tol, opts.inner_max_iter, 1.0);
            out.newton_iterations += inner.newton_iterations;
            new_obj = true_objective(inner.q);
        }
        if (new_obj > prev_obj + slack)
            throw GpError("solve_condensation: objective increased (" + std::to_string(prev_obj) +
                          " -> " + std::to_string(new_obj) + "), inner solve failed");

        double step = 0.0;
        for (int i = 0; i < prob.dimension; ++i)
            step = std::max(step, std::abs(inner.q[i] - q[i]));

        q = inner.q;
        prev_obj = std::min(prev_obj, new_obj);
        out.iterations = k;
        if (opts.trace) opts.trace->push_back({k, new_obj, step});
        if (exact || step <= opts.eps) {
            out.converged = true;
            break;
        }
    }

    out.q = std::move(q);
    out.objective = true_objective(out.q);
    return out;
}

}  // namespace

}  // namespace noma::gp

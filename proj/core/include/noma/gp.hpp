#ifndef NOMA_GP_HPP
#define NOMA_GP_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace noma::gp {

struct GpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// coeff * prod_i q_i^exponents[i], coeff > 0.
struct Monomial {
    double coeff = 1.0;
    std::vector<double> exponents;

    int dimension() const { return static_cast<int>(exponents.size()); }
};

/// Sum of monomials over strictly positive variables.
struct Posynomial {
    std::vector<Monomial> terms;

    int dimension() const { return terms.empty() ? 0 : terms.front().dimension(); }
    bool is_monomial() const { return terms.size() == 1; }

    static Posynomial constant(double value, int dim);
    static Posynomial variable(int index, int dim, double coeff = 1.0);

    Posynomial& operator+=(const Monomial& m);
    Posynomial& operator+=(const Posynomial& p);
    /// Multiplies every term by the monomial (used to divide by a
    /// condensed denominator via its reciprocal).
    Posynomial& operator*=(const Monomial& m);
};

Posynomial operator*(const Posynomial& a, const Posynomial& b);
Monomial reciprocal(const Monomial& m);

/// Ratio of two posynomials; the pre-condensation objective form.
struct PosyRatio {
    Posynomial num;
    Posynomial den;
};

/// num(q)/den(q) <= 1. A plain posynomial-<= 1 constraint is the special
/// case den == 1; a non-monomial den is condensed once per outer
/// iteration of solve_condensation.
struct RatioConstraint {
    Posynomial num;
    Posynomial den;

    static RatioConstraint upper_bound(Posynomial p);  // p <= 1
};

struct GpProblem {
    int dimension = 0;
    std::variant<Posynomial, PosyRatio> objective;  // minimized
    std::vector<RatioConstraint> constraints;       // num/den <= 1
    std::vector<Monomial> eq_constraints;           // == 1
    std::vector<double> lower;                      // positive box; defaulted when empty
    std::vector<double> upper;
    std::optional<std::vector<double>> initial;     // strictly positive start
};

double evaluate(const Monomial& m, const std::vector<double>& q);
double evaluate(const Posynomial& p, const std::vector<double>& q);

/// Best monomial fit of `den` at q0 (the AM-GM underestimator):
/// a_i = q_i/den * d(den)/d(q_i), lambda = den(q0)/prod q0^a. Exact and
/// gradient-matching at q0, <= den everywhere on the positive orthant.
Monomial condense(const Posynomial& den, const std::vector<double>& q0);

/// ln(1+x) series head: 2[z + z^3/3 + ...] with z = x/(2+x); `terms` is
/// 1 or 2. Natural-log units.
double log_rate_approx(double x, int terms);

struct GpResult {
    std::vector<double> q;
    double objective = 0.0;
    int newton_iterations = 0;
    double stationarity = 0.0;
    bool converged = false;
};

/// Inner solver: posynomial objective, ratio constraints with monomial
/// denominators only. Solved as the log-transformed convex program with a
/// barrier/Newton method; `tol` bounds both the duality gap and the
/// first-order stationarity residual. Throws GpError when infeasible;
/// returns converged=false with the best iterate when max_iter is hit.
/// `t_start` seeds the barrier parameter (warm starts skip the early
/// centering stages).
GpResult solve_gp(const GpProblem& prob, double tol = 1e-8, int max_iter = 600,
                  double t_start = 1.0);

struct CondensationTraceRow {
    int iteration = 0;
    double objective = 0.0;
    double step_norm = 0.0;
};

struct CondensationOptions {
    double eps = 1e-4;  // sup-norm tolerance on the iterate step
    int max_outer = 50;
    double inner_tol = 1e-8;
    int inner_max_iter = 600;
    std::vector<CondensationTraceRow>* trace = nullptr;
};

struct CondensationResult {
    std::vector<double> q;
    double objective = 0.0;  // true num/den (or posynomial value) at q
    int iterations = 0;      // outer iterations
    long newton_iterations = 0;
    bool converged = false;
};

/// Single condensation: every non-monomial denominator (objective and
/// constraints) is replaced by its condensed monomial at the current
/// iterate, the resulting GP is solved, and the point is re-expanded
/// until the iterate stalls. The true ratio objective is non-increasing
/// across iterations; a material increase raises GpError.
CondensationResult solve_condensation(const GpProblem& prob, const std::vector<double>& q_init,
                                      const CondensationOptions& opts = {});

}  // namespace noma::gp

#endif

#include "noma/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "noma/rates.hpp"

namespace noma {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// --- small helpers -------------------------------------------------------

std::vector<int> decode_order(const Scenario& scen, int sc, const std::vector<int>& members) {
    std::vector<int> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return stronger_on_sc(scen, sc, members[a], members[b]);
    });
    return order;
}

/// 1-D polynomial product of coefficient arrays.
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

gp::Posynomial poly_to_posynomial(const std::vector<double>& coeffs) {
    gp::Posynomial p;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] > 0.0)
            p += gp::Monomial{coeffs[j], {static_cast<double>(j)}};
    }
    return p;
}

/// SINRs along the decode order for a fixed split (sorted powers).
std::vector<double> sorted_sinrs(const std::vector<double>& gains_sorted,
                                 const std::vector<double>& powers_sorted, double noise,
                                 double gap = 1.0) {
    std::vector<double> s(gains_sorted.size());
    double interference = 0.0;
    for (std::size_t k = 0; k < gains_sorted.size(); ++k) {
        s[k] = gap * powers_sorted[k] * gains_sorted[k] /
               (noise + interference * gains_sorted[k]);
        interference += powers_sorted[k];
    }
    return s;
}

double sorted_rate_bits(const std::vector<double>& gains_sorted,
                        const std::vector<double>& powers_sorted, double noise, double gap = 1.0) {
    double rate = 0.0;
    for (double x : sorted_sinrs(gains_sorted, powers_sorted, noise, gap))
        rate += std::log1p(x) / kLn2;
    return rate;
}

double sorted_true_ee(const std::vector<double>& gains_sorted,
                      const std::vector<double>& powers_sorted, double noise, double p_c,
                      double gap = 1.0) {
    const double total = std::accumulate(powers_sorted.begin(), powers_sorted.end(), 0.0);
    const double rate = sorted_rate_bits(gains_sorted, powers_sorted, noise, gap);
    if (rate == 0.0) return 0.0;
    return rate / (p_c + total);
}

/// FTPA split made strictly interior: strict decode-order power gaps and
/// total slightly below the target so barrier starts are feasible.
std::vector<double> interior_ftpa(const std::vector<double>& gains_sorted, double alpha,
                                  double total) {
    auto p = ftpa_split(gains_sorted, alpha, total);
    for (std::size_t k = 1; k < p.size(); ++k)
        if (p[k] <= p[k - 1]) p[k] = p[k - 1] * (1.0 + 1e-7);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    const double scale = total * (1.0 - 1e-9) / sum;
    for (auto& x : p) x *= scale;
    return p;
}

// --- shared per-subchannel GP (variables p_0..p_{k-1}, t_0..t_{k-1}) ----

struct PerScSolveOutput {
    std::vector<double> powers_sorted;
    int iterations = 0;
    long newton_iterations = 0;
    bool gp_failed = false;
    std::string error;
};

/// One-term series constraint t_k * v_k / (2 u_k) <= 1, built directly in
/// monomial form. For the two-term series the denominator is posynomial
/// and gets condensed per outer iteration. `gap` scales the own-signal
/// terms (capacity-gapped SINR).
void push_rate_constraints(gp::GpProblem& prob, const std::vector<double>& gains_sorted,
                           double noise, int log_terms, int dim, int p_base, int t_base,
                           double gap) {
    const int k = static_cast<int>(gains_sorted.size());
    for (int i = 0; i < k; ++i) {
        const double g = gains_sorted[i];
        if (log_terms == 1) {
            gp::Posynomial lhs;
            {
                gp::Monomial m{noise / (gap * g), std::vector<double>(dim, 0.0)};
                m.exponents[t_base + i] = 1.0;
                m.exponents[p_base + i] = -1.0;
                lhs += m;
            }
            for (int j = 0; j < i; ++j) {
                gp::Monomial m{1.0 / gap, std::vector<double>(dim, 0.0)};
                m.exponents[t_base + i] = 1.0;
                m.exponents[p_base + j] = 1.0;
                m.exponents[p_base + i] = -1.0;
                lhs += m;
            }
            {
                gp::Monomial m{0.5, std::vector<double>(dim, 0.0)};
                m.exponents[t_base + i] = 1.0;
                lhs += m;
            }
            prob.constraints.push_back(gp::RatioConstraint::upper_bound(std::move(lhs)));
        } else {
            // v_i = 2 noise + sum_{j<i} 2 g p_j + gap g p_i ; u_i = gap g p_i
            gp::Posynomial v = gp::Posynomial::constant(2.0 * noise, dim);
            for (int j = 0; j < i; ++j) v += gp::Posynomial::variable(p_base + j, dim, 2.0 * g).terms[0];
            v += gp::Posynomial::variable(p_base + i, dim, gap * g).terms[0];
            gp::Monomial u{gap * g, std::vector<double>(dim, 0.0)};
            u.exponents[p_base + i] = 1.0;

            gp::Posynomial v2 = v * v;
            gp::Posynomial num = v2 * v;  // t * v^3 below
            gp::Monomial t{1.0, std::vector<double>(dim, 0.0)};
            t.exponents[t_base + i] = 1.0;
            num *= t;

            gp::Posynomial den = v2;
            den *= u;
            for (auto& term : den.terms) term.coeff *= 2.0;
            gp::Monomial u3 = u;
            u3.coeff = (2.0 / 3.0) * u.coeff * u.coeff * u.coeff;
            for (int d = 0; d < dim; ++d) u3.exponents[d] = 3.0 * u.exponents[d];
            den += u3;
            prob.constraints.push_back(gp::RatioConstraint{std::move(num), std::move(den)});
        }
    }
}

PerScSolveOutput per_sc_solve_sorted(const std::vector<double>& gains_sorted, double noise,
                                     double p_c, double cap, double init_total, double alpha,
                                     double gap, const PowerOptions& opts) {
    const int k = static_cast<int>(gains_sorted.size());
    const int dim = 2 * k;
    PerScSolveOutput out;

    gp::GpProblem prob;
    prob.dimension = dim;
    prob.lower.assign(dim, 1e-30);
    prob.upper.assign(dim, 4.0);
    for (int i = 0; i < k; ++i) {
        prob.lower[i] = cap * 1e-12;
        prob.upper[i] = cap;
    }

    // objective: minimize (p_c + sum p) / (sum t)
    gp::PosyRatio obj;
    if (p_c > 0.0) obj.num += gp::Posynomial::constant(p_c, dim);
    for (int i = 0; i < k; ++i) obj.num += gp::Posynomial::variable(i, dim).terms[0];
    for (int i = 0; i < k; ++i) obj.den += gp::Posynomial::variable(k + i, dim).terms[0];
    prob.objective = std::move(obj);

    push_rate_constraints(prob, gains_sorted, noise, opts.log_terms, dim, 0, k, gap);

    // total power cap
    {
        gp::Posynomial budget;
        for (int i = 0; i < k; ++i) budget += gp::Posynomial::variable(i, dim, 1.0 / cap).terms[0];
        prob.constraints.push_back(gp::RatioConstraint::upper_bound(std::move(budget)));
    }
    // SIC ordering: stronger gain -> strictly lower power (adjacent pairs)
    for (int i = 0; i + 1 < k; ++i) {
        gp::Monomial m{1.0, std::vector<double>(dim, 0.0)};
        m.exponents[i] = 1.0;
        m.exponents[i + 1] = -1.0;
        prob.constraints.push_back(gp::RatioConstraint::upper_bound(gp::Posynomial{{m}}));
    }

    std::vector<double> q0(dim);
    const auto p0 = interior_ftpa(gains_sorted, alpha, std::min(init_total, cap) * (1.0 - 1e-6));
    const auto x0 = sorted_sinrs(gains_sorted, p0, noise, gap);
    for (int i = 0; i < k; ++i) {
        q0[i] = std::max(p0[i], prob.lower[i] * 2.0);
        q0[k + i] = std::clamp(gp::log_rate_approx(x0[i], opts.log_terms) * (1.0 - 1e-6),
                               2e-30, 3.999);
    }

    gp::CondensationOptions copts;
    copts.eps = opts.eps;
    copts.max_outer = opts.max_outer;
    copts.inner_tol = opts.inner_tol;
    copts.inner_max_iter = opts.inner_max_iter;
    copts.trace = opts.trace;

    try {
        auto res = gp::solve_condensation(prob, q0, copts);
        out.powers_sorted.assign(res.q.begin(), res.q.begin() + k);
        out.iterations = res.iterations;
        out.newton_iterations = res.newton_iterations;
    } catch (const gp::GpError& e) {
        out.gp_failed = true;
        out.error = e.what();
        out.powers_sorted = p0;
    }
    return out;
}

}  // namespace

// --- SubchannelEeProblem --------------------------------------------------

void SubchannelEeProblem::validate() const {
    if (member_gains.empty()) throw std::invalid_argument("SubchannelEeProblem: no members");
    if (member_gains.size() != gamma.size())
        throw std::invalid_argument("SubchannelEeProblem: gamma size mismatch");
    double sum = 0.0;
    for (double w : gamma) {
        if (!(w > 0.0)) throw std::invalid_argument("SubchannelEeProblem: gamma must be > 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::invalid_argument("SubchannelEeProblem: gamma must sum to 1");
    for (double g : member_gains)
        if (!(g > 0.0)) throw std::invalid_argument("SubchannelEeProblem: gains must be > 0");
    if (!(p_cap > 0.0)) throw std::invalid_argument("SubchannelEeProblem: p_cap must be > 0");
    if (p_c < 0.0 || !(noise > 0.0))
        throw std::invalid_argument("SubchannelEeProblem: bad p_c or noise");
    if (log_terms != 1 && log_terms != 2)
        throw std::invalid_argument("SubchannelEeProblem: log_terms must be 1 or 2");
    if (!(sinr_gap > 0.0) || sinr_gap > 1.0)
        throw std::invalid_argument("SubchannelEeProblem: sinr_gap must be in (0, 1]");
}

namespace {

struct SortedCd {
    std::vector<double> gains;   // decode order
    std::vector<double> gamma;   // decode order
    std::vector<double> a, c;    // per-user series: rate_m = a_m p / (1 + c_m p)
    std::vector<double> cpoly, dpoly;  // summed series as C(p)/D(p)
};

SortedCd build_cd(const SubchannelEeProblem& prob) {
    SortedCd out;
    const std::size_t k = prob.member_gains.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (prob.member_gains[a] != prob.member_gains[b])
            return prob.member_gains[a] > prob.member_gains[b];
        return a < b;
    });
    for (std::size_t idx : order) {
        out.gains.push_back(prob.member_gains[idx]);
        out.gamma.push_back(prob.gamma[idx]);
    }

    // One-term series per user: 2 x_m/(2+x_m) = a_m p / (1 + c_m p) with
    // x_m = gap gamma_m g_m p / (sigma^2 + g_m p sum_{j<m} gamma_j).
    double gamma_ahead = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double own = prob.sinr_gap * out.gamma[i] * out.gains[i] / prob.noise;
        const double interf = out.gains[i] * gamma_ahead / prob.noise;
        out.a.push_back(own);
        out.c.push_back(interf + own / 2.0);
        gamma_ahead += out.gamma[i];
    }

    // Common denominator: C/D = sum_m a_m p prod_{l!=m}(1+c_l p) over
    // prod_m (1+c_m p); cubes of the factors for the two-term series.
    const int power = prob.log_terms == 1 ? 1 : 3;
    std::vector<std::vector<double>> factor(k);
    for (std::size_t i = 0; i < k; ++i) {
        factor[i] = {1.0, out.c[i]};
        if (power == 3) factor[i] = poly_mul(poly_mul(factor[i], {1.0, out.c[i]}), {1.0, out.c[i]});
    }
    std::vector<double> d{1.0};
    for (std::size_t i = 0; i < k; ++i) d = poly_mul(d, factor[i]);
    std::vector<double> csum{0.0};
    for (std::size_t m = 0; m < k; ++m) {
        std::vector<double> term;
        if (prob.log_terms == 1) {
            term = {0.0, out.a[m]};  // a_m p
        } else {
            // a_m p (1+c_m p)^2 + a_m^3 p^3 / 12
            term = poly_mul({0.0, out.a[m]}, poly_mul({1.0, out.c[m]}, {1.0, out.c[m]}));
            term.resize(std::max<std::size_t>(term.size(), 4), 0.0);
            term[3] += out.a[m] * out.a[m] * out.a[m] / 12.0;
        }
        for (std::size_t l = 0; l < k; ++l)
            if (l != m) term = poly_mul(term, factor[l]);
        if (term.size() > csum.size()) csum.resize(term.size(), 0.0);
        for (std::size_t j = 0; j < term.size(); ++j) csum[j] += term[j];
    }
    out.cpoly = std::move(csum);
    out.dpoly = std::move(d);
    return out;
}

}  // namespace

double subchannel_ee_at(const SubchannelEeProblem& prob, double p_n) {
    prob.validate();
    if (p_n <= 0.0) return 0.0;
    const SortedCd cd = build_cd(prob);
    std::vector<double> powers(cd.gamma.size());
    for (std::size_t i = 0; i < powers.size(); ++i) powers[i] = cd.gamma[i] * p_n;
    return sorted_rate_bits(cd.gains, powers, prob.noise, prob.sinr_gap) / (prob.p_c + p_n);
}

double subchannel_ee_approx_at(const SubchannelEeProblem& prob, double p_n) {
    prob.validate();
    if (p_n <= 0.0) return 0.0;
    const SortedCd cd = build_cd(prob);
    std::vector<double> powers(cd.gamma.size());
    for (std::size_t i = 0; i < powers.size(); ++i) powers[i] = cd.gamma[i] * p_n;
    double rate = 0.0;
    for (double x : sorted_sinrs(cd.gains, powers, prob.noise, prob.sinr_gap))
        rate += gp::log_rate_approx(x, prob.log_terms);
    return rate / (prob.p_c + p_n);
}

SubchannelEeResult solve_subchannel_ee(const SubchannelEeProblem& prob, const PowerOptions& opts) {
    prob.validate();
    SubchannelEeResult out;
    const SortedCd cd = build_cd(prob);

    // maximize C/((p_c+p) D)  ->  minimize (p_c + p) D / C
    const std::vector<double> num = poly_mul({prob.p_c, 1.0}, cd.dpoly);
    const std::vector<double>& den = cd.cpoly;

    gp::GpProblem gpp;
    gpp.dimension = 1;
    gpp.objective = gp::PosyRatio{poly_to_posynomial(num), poly_to_posynomial(den)};
    gpp.lower = {prob.p_cap * 1e-12};
    gpp.upper = {prob.p_cap};

    double p0 = prob.p_init > 0.0 ? prob.p_init : prob.p_cap * 0.5;
    p0 = std::clamp(p0, gpp.lower[0] * 2.0, prob.p_cap * (1.0 - 1e-9));

    gp::CondensationOptions copts;
    copts.eps = opts.eps;
    copts.max_outer = opts.max_outer;
    copts.inner_tol = opts.inner_tol;
    copts.inner_max_iter = opts.inner_max_iter;
    copts.trace = opts.trace;

    bool solved = false;
    try {
        auto res = gp::solve_condensation(gpp, {p0}, copts);
        out.p_n = res.q[0];
        out.iterations = res.iterations;
        out.newton_iterations = res.newton_iterations;
        solved = true;
    } catch (const gp::GpError&) {
        solved = false;
    }

    if (!solved) {
        // Golden-section on the same series objective over [lo, cap].
        out.used_fallback = true;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = gpp.lower[0], b = prob.p_cap;
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = subchannel_ee_approx_at(prob, x1);
        double f2 = subchannel_ee_approx_at(prob, x2);
        for (int it = 0; it < 120; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = subchannel_ee_approx_at(prob, x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = subchannel_ee_approx_at(prob, x1);
            }
        }
        out.p_n = 0.5 * (a + b);
    }

    out.ee = subchannel_ee_at(prob, out.p_n);
    return out;
}

// --- per-subchannel multi-variable GP -------------------------------------

PerScResult per_sc_gp_allocate(int sc, const std::vector<int>& members, double p_n_cap,
                               const Scenario& scen, const PowerOptions& opts) {
    if (members.empty()) throw std::invalid_argument("per_sc_gp_allocate: empty member set");
    if (!(p_n_cap > 0.0)) throw std::invalid_argument("per_sc_gp_allocate: p_n_cap must be > 0");

    const auto order = decode_order(scen, sc, members);
    const int k = static_cast<int>(members.size());
    std::vector<double> gains_sorted(k);
    for (int i = 0; i < k; ++i) gains_sorted[i] = scen.gain(members[order[i]], sc);
    const double noise = scen.noise[sc];
    const double gap = opts.use_gap ? scen.sinr_gap : 1.0;

    PerScResult out;
    auto solve = per_sc_solve_sorted(gains_sorted, noise, scen.p_c_w, p_n_cap,
                                     std::min(p_n_cap, scen.equal_split_power()),
                                     scen.ftpa_alpha, gap, opts);
    out.stats.newton_iterations = solve.newton_iterations;
    out.stats.condensation_iterations = solve.iterations;
    out.stats.ftpa_fallback = solve.gp_failed;

    // FTPA split at the one-variable optimum: the fallback when the
    // multi-variable solve fails, and a safety-net candidate otherwise
    // (skipped in ranking-only use unless the solver failed).
    std::vector<std::vector<double>> candidates;
    candidates.push_back(solve.powers_sorted);
    const double solver_total =
        std::accumulate(solve.powers_sorted.begin(), solve.powers_sorted.end(), 0.0);
    if (!solve.gp_failed && solver_total > 0.0)
        candidates.push_back(ftpa_split(gains_sorted, scen.ftpa_alpha, solver_total));
    if (!opts.lean || solve.gp_failed) {
        SubchannelEeProblem restricted;
        restricted.sc = sc;
        restricted.member_gains = gains_sorted;
        restricted.gamma = ftpa_weights(gains_sorted, scen.ftpa_alpha);
        restricted.p_c = scen.p_c_w;
        restricted.noise = noise;
        restricted.p_cap = p_n_cap;
        restricted.p_init = std::min(p_n_cap, scen.equal_split_power());
        restricted.log_terms = opts.log_terms;
        restricted.sinr_gap = gap;
        const auto one_dim = solve_subchannel_ee(restricted, opts);
        out.stats.newton_iterations += one_dim.newton_iterations;
        if (one_dim.p_n > 0.0)
            candidates.push_back(ftpa_split(gains_sorted, scen.ftpa_alpha, one_dim.p_n));
    }

    std::size_t best = 0;
    double best_ee = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double ee = sorted_true_ee(gains_sorted, candidates[i], noise, scen.p_c_w, gap);
        if (ee > best_ee) {
            best_ee = ee;
            best = i;
        }
    }
    if (best != 0 && !solve.gp_failed) out.stats.init_guard = true;

    out.powers.assign(k, 0.0);
    for (int i = 0; i < k; ++i) out.powers[order[i]] = candidates[best][i];
    return out;
}

// --- joint allocation ------------------------------------------------------

namespace {

struct SlotIndex {
    int sc;
    int member;  // user id
};

PowerResult assemble(const Assignment& asg, const Scenario& scen,
                     const std::vector<SlotIndex>& slots, const std::vector<double>& powers,
                     AllocStats stats) {
    PowerResult out;
    out.alloc = PowerAllocation(scen.num_subchannels);
    for (std::size_t s = 0; s < slots.size(); ++s)
        out.alloc.set(slots[s].member, slots[s].sc, powers[s]);
    out.stats = stats;
    (void)asg;
    return out;
}

double alloc_true_ee(const Assignment& asg, const PowerAllocation& alloc, const Scenario& scen,
                     bool use_gap) {
    return total_ee(asg, alloc, scen, use_gap);
}

}  // namespace

PowerResult joint_gp_allocate(const Assignment& asg, const Scenario& scen,
                              const PowerOptions& opts) {
    AllocStats stats;
    std::vector<int> active;
    for (int n = 0; n < scen.num_subchannels; ++n)
        if (!asg.members(n).empty()) active.push_back(n);

    PowerResult result;
    result.alloc = PowerAllocation(scen.num_subchannels);
    if (active.empty()) return result;

    const auto floors = rate_floors(asg, scen, opts.use_gap);
    bool any_floor = false;
    for (double f : floors.p_n_min)
        if (f > 0.0) any_floor = true;

    // Equal-split FTPA start; also the reference point for the EE guard.
    PowerAllocation init_alloc(scen.num_subchannels);
    const double p_share = scen.equal_split_power();
    for (int n : active) {
        const auto& mem = asg.members(n);
        std::vector<double> gains(mem.size());
        for (std::size_t i = 0; i < mem.size(); ++i) gains[i] = scen.gain(mem[i], n);
        const auto split = ftpa_split(gains, scen.ftpa_alpha, p_share);
        for (std::size_t i = 0; i < mem.size(); ++i) init_alloc.set(mem[i], n, split[i]);
    }

    bool solved = false;
    if (!any_floor) {
        // Budget-slack fast path: the objective is separable, so the
        // per-subchannel optima are jointly optimal whenever they fit.
        PowerAllocation decomposed(scen.num_subchannels);
        double total = 0.0;
        for (int n : active) {
            const auto& mem = asg.members(n);
            auto sol = per_sc_gp_allocate(n, mem, scen.p_max_w, scen, opts);
            stats.newton_iterations += sol.stats.newton_iterations;
            stats.condensation_iterations =
                std::max(stats.condensation_iterations, sol.stats.condensation_iterations);
            if (sol.stats.ftpa_fallback) stats.ftpa_fallback = true;
            for (std::size_t i = 0; i < mem.size(); ++i)
                decomposed.set(mem[i], n, sol.powers[i]);
            total += decomposed.sc_total(n);
        }
        if (total <= scen.p_max_w) {
            result.alloc = std::move(decomposed);
            solved = true;
        }
    }

    if (!solved) {
        // Coupled condensation over all slots with per-slot rate (t) and
        // efficiency (e) auxiliaries; single condensation on the
        // objective denominator sum(e).
        stats.coupled_solve = true;
        std::vector<SlotIndex> slots;
        std::vector<int> sc_first_slot(scen.num_subchannels, -1);
        for (int n : active) {
            const auto& mem = asg.members(n);
            const auto order = decode_order(scen, n, mem);
            sc_first_slot[n] = static_cast<int>(slots.size());
            for (std::size_t i = 0; i < mem.size(); ++i)
                slots.push_back({n, mem[order[i]]});
        }
        const int S = static_cast<int>(slots.size());
        const int dim = 3 * S;
        const int t_base = S, e_base = 2 * S;

        gp::GpProblem prob;
        prob.dimension = dim;
        prob.lower.assign(dim, 1e-30);
        prob.upper.assign(dim, 4.0);
        for (int s = 0; s < S; ++s) {
            prob.lower[s] = scen.p_max_w * 1e-15;
            prob.upper[s] = scen.p_max_w;
            prob.upper[e_base + s] = 1e15;
        }

        gp::PosyRatio obj;
        obj.num = gp::Posynomial::constant(1.0, dim);
        for (int s = 0; s < S; ++s) obj.den += gp::Posynomial::variable(e_base + s, dim).terms[0];
        prob.objective = std::move(obj);

        for (int n : active) {
            const int base = sc_first_slot[n];
            const int kn = static_cast<int>(asg.members(n).size());
            std::vector<double> gains_sorted(kn);
            for (int i = 0; i < kn; ++i) gains_sorted[i] = scen.gain(slots[base + i].member, n);

            // per-slot t <= series rate; indices offset into the slot block
            {
                gp::GpProblem tmp;
                tmp.dimension = dim;
                push_rate_constraints(tmp, gains_sorted, scen.noise[n], opts.log_terms, dim,
                                      base, t_base + base,
                                      opts.use_gap ? scen.sinr_gap : 1.0);
                for (auto& c : tmp.constraints) prob.constraints.push_back(std::move(c));
            }
            // e * (p_c + p_n) / t <= 1 per slot (exact: monomial denominator)
            for (int i = 0; i < kn; ++i) {
                gp::Posynomial num;
                if (scen.p_c_w > 0.0) {
                    gp::Monomial m{scen.p_c_w, std::vector<double>(dim, 0.0)};
                    m.exponents[e_base + base + i] = 1.0;
                    num += m;
                }
                for (int j = 0; j < kn; ++j) {
                    gp::Monomial m{1.0, std::vector<double>(dim, 0.0)};
                    m.exponents[e_base + base + i] = 1.0;
                    m.exponents[base + j] = 1.0;
                    num += m;
                }
                gp::Monomial t{1.0, std::vector<double>(dim, 0.0)};
                t.exponents[t_base + base + i] = 1.0;
                prob.constraints.push_back(gp::RatioConstraint{std::move(num), gp::Posynomial{{t}}});
            }
            // SIC ordering
            for (int i = 0; i + 1 < kn; ++i) {
                gp::Monomial m{1.0, std::vector<double>(dim, 0.0)};
                m.exponents[base + i] = 1.0;
                m.exponents[base + i + 1] = -1.0;
                prob.constraints.push_back(gp::RatioConstraint::upper_bound(gp::Posynomial{{m}}));
            }
            // per-subchannel floor
            if (floors.p_n_min[n] > 0.0) {
                gp::Posynomial den;
                for (int j = 0; j < kn; ++j)
                    den += gp::Posynomial::variable(base + j, dim).terms[0];
                prob.constraints.push_back(
                    gp::RatioConstraint{gp::Posynomial::constant(floors.p_n_min[n], dim), den});
            }
        }
        // BS budget
        {
            gp::Posynomial budget;
            for (int s = 0; s < S; ++s)
                budget += gp::Posynomial::variable(s, dim, 1.0 / scen.p_max_w).terms[0];
            prob.constraints.push_back(gp::RatioConstraint::upper_bound(std::move(budget)));
        }

        std::vector<double> q0(dim);
        for (int n : active) {
            const int base = sc_first_slot[n];
            const int kn = static_cast<int>(asg.members(n).size());
            std::vector<double> gains_sorted(kn);
            for (int i = 0; i < kn; ++i) gains_sorted[i] = scen.gain(slots[base + i].member, n);
            const auto p0 = interior_ftpa(gains_sorted, scen.ftpa_alpha, p_share * (1.0 - 1e-6));
            const auto x0 =
                sorted_sinrs(gains_sorted, p0, scen.noise[n], opts.use_gap ? scen.sinr_gap : 1.0);
            double total0 = std::accumulate(p0.begin(), p0.end(), 0.0);
            for (int i = 0; i < kn; ++i) {
                q0[base + i] = std::max(p0[i], prob.lower[base + i] * 2.0);
                const double t = std::clamp(
                    gp::log_rate_approx(x0[i], opts.log_terms) * (1.0 - 1e-6), 2e-30, 3.999);
                q0[t_base + base + i] = t;
                q0[e_base + base + i] =
                    std::clamp(t / (scen.p_c_w + total0) * (1.0 - 1e-6), 2e-30, 1e14);
            }
        }

        gp::CondensationOptions copts;
        copts.eps = opts.eps;
        copts.max_outer = opts.max_outer;
        copts.inner_tol = opts.inner_tol;
        copts.inner_max_iter = opts.inner_max_iter;
        copts.trace = opts.trace;

        try {
            auto res = gp::solve_condensation(prob, q0, copts);
            stats.newton_iterations += res.newton_iterations;
            stats.condensation_iterations += res.iterations;
            std::vector<double> powers(res.q.begin(), res.q.begin() + S);
            result = assemble(asg, scen, slots, powers, stats);
        } catch (const gp::GpError&) {
            stats.ftpa_fallback = true;
            result.alloc = init_alloc;
            result.stats = stats;
            return result;
        }
    }

    // Exact-log EE must not regress below the equal-split FTPA start.
    if (!any_floor && alloc_true_ee(asg, result.alloc, scen, opts.use_gap) <
                          alloc_true_ee(asg, init_alloc, scen, opts.use_gap)) {
        stats.init_guard = true;
        result.alloc = init_alloc;
    }
    result.stats = stats;
    return result;
}

// --- greedy EEM ------------------------------------------------------------

double EemMatrix::level(int row, double p_max) const {
    return std::min((row + 1) * delta, p_max);
}

namespace {

SubchannelEeProblem sc_problem(const Assignment& asg, const Scenario& scen, int n, double cap,
                               const PowerOptions& opts) {
    SubchannelEeProblem prob;
    prob.sc = n;
    const auto& mem = asg.members(n);
    prob.member_gains.resize(mem.size());
    for (std::size_t i = 0; i < mem.size(); ++i) prob.member_gains[i] = scen.gain(mem[i], n);
    prob.gamma = ftpa_weights(prob.member_gains, scen.ftpa_alpha);
    prob.p_c = scen.p_c_w;
    prob.noise = scen.noise[n];
    prob.p_cap = cap;
    prob.p_init = std::min(cap, scen.equal_split_power());
    prob.log_terms = opts.log_terms;
    prob.sinr_gap = opts.use_gap ? scen.sinr_gap : 1.0;
    return prob;
}

}  // namespace

EemMatrix build_eem_matrix(const Assignment& asg, const Scenario& scen, double delta,
                           const PowerOptions& opts) {
    if (!(delta > 0.0)) throw std::invalid_argument("build_eem_matrix: delta must be > 0");
    EemMatrix eem;
    eem.delta = delta;
    eem.rows = static_cast<int>(std::floor(scen.p_max_w / delta)) + 1;
    eem.cols = scen.num_subchannels;
    eem.values.assign(static_cast<std::size_t>(eem.rows) * eem.cols, 0.0);
    eem.marked.assign(eem.values.size(), 0);

    for (int n = 0; n < scen.num_subchannels; ++n) {
        if (asg.members(n).empty()) continue;  // zero rows stay zero
        double prev = 0.0;
        for (int r = 0; r < eem.rows; ++r) {
            const double cap = eem.level(r, scen.p_max_w);
            auto res = solve_subchannel_ee(sc_problem(asg, scen, n, cap, opts), opts);
            eem.values[static_cast<std::size_t>(r) * eem.cols + n] = res.ee - prev;
            prev = res.ee;
        }
    }
    return eem;
}

PowerResult greedy_eem_allocate(const Assignment& asg, const Scenario& scen, double delta,
                                const PowerOptions& opts) {
    if (!(delta > 0.0)) throw std::invalid_argument("greedy_eem_allocate: delta must be > 0");
    AllocStats stats;
    PowerResult out;
    out.alloc = PowerAllocation(scen.num_subchannels);

    std::vector<int> active;
    for (int n = 0; n < scen.num_subchannels; ++n)
        if (!asg.members(n).empty()) active.push_back(n);
    if (active.empty()) return out;

    // Phase 1: unconstrained (budget-capped) per-subchannel optima.
    std::vector<double> p_star(scen.num_subchannels, 0.0);
    double total = 0.0;
    for (int n : active) {
        auto res = solve_subchannel_ee(sc_problem(asg, scen, n, scen.p_max_w, opts), opts);
        stats.newton_iterations += res.newton_iterations;
        if (res.used_fallback) stats.ftpa_fallback = true;
        p_star[n] = res.p_n;
        total += res.p_n;
    }

    std::vector<double> p_final(scen.num_subchannels, 0.0);
    if (total <= scen.p_max_w) {
        p_final = p_star;
    } else {
        // Phase 2: spend p_max by highest marginal EE per delta step.
        EemMatrix eem = build_eem_matrix(asg, scen, delta, opts);
        double spent = 0.0;
        while (spent < scen.p_max_w - 1e-12) {
            int best_r = -1, best_n = -1;
            double best_v = 0.0;
            for (int r = 0; r < eem.rows; ++r) {
                for (int n : active) {
                    if (eem.is_marked(r, n)) continue;
                    const double v = eem.value(r, n);
                    if (v > best_v) {
                        best_v = v;
                        best_r = r;
                        best_n = n;
                    }
                }
            }
            if (best_r < 0) {
                stats.eem_early_stop = true;
                break;
            }
            eem.mark(best_r, best_n);
            const double lvl = eem.level(best_r, scen.p_max_w);
            if (lvl <= p_final[best_n]) continue;  // stale lower level
            const double inc = lvl - p_final[best_n];
            if (spent + inc >= scen.p_max_w) {
                p_final[best_n] += scen.p_max_w - spent;
                spent = scen.p_max_w;
                break;
            }
            p_final[best_n] = lvl;
            spent += inc;
        }
    }

    for (int n : active) {
        if (p_final[n] <= 0.0) continue;
        const auto& mem = asg.members(n);
        std::vector<double> gains(mem.size());
        for (std::size_t i = 0; i < mem.size(); ++i) gains[i] = scen.gain(mem[i], n);
        const auto split = ftpa_split(gains, scen.ftpa_alpha, p_final[n]);
        for (std::size_t i = 0; i < mem.size(); ++i) out.alloc.set(mem[i], n, split[i]);
    }
    out.stats = stats;
    return out;
}

PowerResult baseline_full_power(const Assignment& asg, const Scenario& scen) {
    PowerResult out;
    out.alloc = PowerAllocation(scen.num_subchannels);
    std::vector<int> active;
    for (int n = 0; n < scen.num_subchannels; ++n)
        if (!asg.members(n).empty()) active.push_back(n);
    if (active.empty()) return out;

    // Full BS power spread over the occupied subchannels (p_max/N when the
    // matching fills every subchannel).
    const double share = scen.p_max_w / static_cast<double>(active.size());
    for (int n : active) {
        const auto& mem = asg.members(n);
        std::vector<double> gains(mem.size());
        for (std::size_t i = 0; i < mem.size(); ++i) gains[i] = scen.gain(mem[i], n);
        const auto split = ftpa_split(gains, scen.ftpa_alpha, share);
        for (std::size_t i = 0; i < mem.size(); ++i) out.alloc.set(mem[i], n, split[i]);
    }
    return out;
}

RateFloorResult rate_floors(const Assignment& asg, const Scenario& scen, bool use_gap) {
    RateFloorResult out;
    out.p_n_min.assign(scen.num_subchannels, 0.0);
    for (int m = 0; m < scen.num_users; ++m) {
        const double want = scen.min_rates[m];
        if (want <= 0.0) continue;
        const auto& scs = asg.subchannels(m);
        if (scs.empty()) {
            out.infeasible_users.push_back(m);
            continue;
        }
        const double per_slot = want / static_cast<double>(scs.size());
        bool feasible = true;
        for (int n : scs) {
            const auto& mem = asg.members(n);
            std::vector<double> gains(mem.size());
            for (std::size_t i = 0; i < mem.size(); ++i) gains[i] = scen.gain(mem[i], n);
            const auto gamma = ftpa_weights(gains, scen.ftpa_alpha);
            double own = 0.0, ahead = 0.0;
            for (std::size_t i = 0; i < mem.size(); ++i) {
                if (mem[i] == m) own = gamma[i];
                else if (stronger_on_sc(scen, n, mem[i], m)) ahead += gamma[i];
            }
            const double g = scen.gain(m, n);
            // Required raw SINR, undoing the gap when rates are gapped.
            const double snr_need =
                (std::pow(2.0, per_slot) - 1.0) / (use_gap ? scen.sinr_gap : 1.0);
            const double margin = own - snr_need * ahead;
            if (margin <= 0.0) {
                feasible = false;
                break;
            }
            const double p_need = snr_need * scen.noise[n] / (g * margin);
            out.p_n_min[n] = std::max(out.p_n_min[n], p_need);
        }
        if (!feasible) out.infeasible_users.push_back(m);
    }
    return out;
}

}  // namespace noma

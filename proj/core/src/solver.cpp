#include "subgrowth/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "subgrowth/quadrature.hpp"

namespace subgrowth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interp_grid(const std::vector<double>& ts, const std::vector<double>& xs,
                   std::size_t last, double q) {
    if (q <= ts.front()) return xs.front();
    if (q >= ts[last]) return xs[last];
    auto it = std::upper_bound(ts.begin(), ts.begin() + last + 1, q);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    const double w = (q - ts[i]) / (ts[i + 1] - ts[i]);
    return xs[i] + w * (xs[i + 1] - xs[i]);
}

}  // namespace

History History::constant(double value, double tau) {
    if (!(value > 0.0)) throw std::invalid_argument("history: constant must be positive");
    History h;
    h.tau = tau;
    h.psi = [value](double) { return value; };
    return h;
}

double History::operator()(double t) const {
    if (!psi) throw std::invalid_argument("history: psi not set");
    if (t > 1e-12 || t < -tau - 1e-9 * (1.0 + tau))
        throw std::invalid_argument("history: t outside [-tau, 0]");
    const double v = psi(std::min(t, 0.0));
    if (!(v > 0.0)) throw std::runtime_error("history: psi must be strictly positive");
    return v;
}

double Solution::value_at(double t) const {
    if (times.empty()) throw std::logic_error("solution: empty");
    if (t < -1e-12 || t > times.back() * (1.0 + 1e-9))
        throw std::invalid_argument("solution: time outside the mesh");
    return interp_grid(times, values, times.size() - 1, t);
}

double Solution::derivative_at(double t) const {
    if (times.empty()) throw std::logic_error("solution: empty");
    if (t < -1e-12 || t > times.back() * (1.0 + 1e-9))
        throw std::invalid_argument("solution: time outside the mesh");
    return interp_grid(times, derivatives, times.size() - 1, t);
}

ExpKernelStep exp_kernel_step(double theta, double scale, double h) {
    if (!(theta > 0.0) || !(h > 0.0))
        throw std::invalid_argument("exp_kernel_step: theta and h must be positive");
    ExpKernelStep s;
    const double E = std::exp(-theta * h);
    s.decay = E;
    // Product trapezoid: integrate e^{-theta(h-v)} against the linear
    // interpolant of f between the step endpoints, exactly.
    const double total = (1.0 - E) / theta;                        // weight of 1
    const double ramp = (1.0 - E * (1.0 + theta * h)) / (theta * theta * h);  // weight of v/h
    s.w_new = scale * ramp;
    s.w_old = scale * (total - ramp);
    return s;
}

Solution solve_ode(const Nonlinearity& nl, double mass, double psi0,
                   const std::vector<double>& checkpoints) {
    if (!(mass > 0.0)) throw std::invalid_argument("solve_ode: mass must be positive");
    if (!(psi0 > 0.0)) throw std::invalid_argument("solve_ode: psi0 must be positive");
    GrowthTransform gt(nl);
    const double F0 = gt.F(psi0);
    Solution sol;
    sol.total_mass = mass;
    for (double t : checkpoints) {
        const double y = gt.F_inverse(mass * t + F0);
        sol.times.push_back(t);
        sol.values.push_back(y);
        sol.derivatives.push_back(mass * eval_f(nl, y));
    }
    return sol;
}

VolterraForm convert_dde_to_volterra(const Measure& mu1, const Nonlinearity& nl,
                                     const History& history) {
    double tau = 0.0;
    for (const auto& a : mu1.atoms()) tau = std::max(tau, a.location);
    for (const auto& d : mu1.densities()) {
        if (d.kind != DensityComponent::Kind::Tabulated)
            throw std::invalid_argument(
                "convert_dde_to_volterra: bounded-delay densities must be tabulated");
        tau = std::max(tau, d.grid.back());
    }
    if (mu1.support_bound()) tau = std::max(tau, *mu1.support_bound());
    VolterraForm out;
    out.kernel = mu1;
    Measure m = mu1;  // captured copy keeps the forcing self-contained
    Nonlinearity f = nl;
    History psi = history;
    out.forcing = [m, f, psi, tau](double t) {
        if (t < 0.0 || t >= tau) return 0.0;
        double h = 0.0;
        for (const auto& a : m.atoms())
            if (a.location > t) h += a.mass * eval_f(f, psi(t - a.location));
        for (const auto& d : m.densities()) {
            const double lo = std::max(t, d.grid.front());
            const double hi = d.grid.back();
            if (lo < hi)
                h += adaptive_simpson(
                    [&](double s) { return d.value(s) * eval_f(f, psi(t - s)); }, lo, hi,
                    1e-12);
        }
        return h;
    };
    return out;
}

Solution solve_fde_multi(const std::vector<MultiNonlinearTerm>& terms, const History& history,
                         const SolverOptions& opts, std::function<double(double)> forcing) {
    if (terms.empty()) throw std::invalid_argument("solve: at least one term required");
    bool any_positive = false;
    for (const auto& t : terms)
        if (t.lambda_weight > 0.0) any_positive = true;
    if (!any_positive)
        throw std::invalid_argument("solve: at least one term needs a positive weight");

    struct ExpState {
        const DensityComponent* comp;
        double I = 0.0;
        ExpKernelStep w;
    };
    struct TermCtx {
        const MultiNonlinearTerm* term;
        std::vector<double> fv;
        double fmax = 0.0;
        std::vector<ExpState> exps;
        std::vector<const DensityComponent*> direct2;
        std::vector<const DensityComponent*> dens1;
        double horizon = kInf;  // truncation window for direct2
    };

    MeshPlan plan = opts.mesh;
    std::vector<TermCtx> ctx;
    double M = 0.0;
    bool mass_finite = true;
    for (const auto& term : terms) {
        TermCtx c;
        c.term = &term;
        if (term.mu1) {
            for (const auto& a : term.mu1->atoms())
                if (a.location > 0.0) plan.align.push_back(a.location);
            for (const auto& d : term.mu1->densities()) {
                if (d.kind != DensityComponent::Kind::Tabulated)
                    throw std::invalid_argument(
                        "solve: bounded-delay densities must be tabulated");
                c.dens1.push_back(&d);
            }
        }
        if (term.mu2) {
            for (const auto& a : term.mu2->atoms())
                if (a.location > 0.0) plan.align.push_back(a.location);
            for (const auto& d : term.mu2->densities()) {
                if (d.kind == DensityComponent::Kind::Exponential)
                    c.exps.push_back({&d, 0.0, {}});
                else
                    c.direct2.push_back(&d);
            }
            if (!term.mu2->finite()) {
                if (!opts.allow_infinite_mass)
                    throw std::invalid_argument(
                        "solve: infinite-mass kernel requires allow_infinite_mass");
            } else if (!c.direct2.empty() && opts.eps_tail > 0.0) {
                const double S = term.mu2->truncation_horizon(opts.eps_tail);
                if (S > 0.0) c.horizon = S;
            }
        }
        if (term.lambda_weight > 0.0) {
            double m = 0.0;
            if (term.mu1) {
                const Mass mm = term.mu1->total_mass();
                m += mm.value;
            }
            if (term.mu2) {
                const Mass mm = term.mu2->total_mass();
                if (!mm.finite) mass_finite = false;
                m += mm.value;
            }
            M += term.lambda_weight * m;
        }
        ctx.push_back(std::move(c));
    }

    const std::vector<double> times = build_mesh(plan);
    const std::size_t N = times.size();

    Solution sol;
    sol.times = times;
    sol.values.reserve(N);
    sol.derivatives.reserve(N);
    sol.total_mass = mass_finite ? M : kInf;
    sol.mass_finite = mass_finite;

    const double x0 = history(0.0);
    sol.values.push_back(x0);
    for (auto& c : ctx) {
        c.fv.reserve(N);
        c.fv.push_back(eval_f(c.term->nonlinearity, x0));
        c.fmax = c.fv.back();
    }

    // State lookup across trajectory and history; q in (t_last, t_pending]
    // interpolates toward the trial value of the step being built.
    double pending_t = 0.0, pending_x = x0;
    std::size_t last = 0;
    auto state_at = [&](double q) -> double {
        if (q <= 0.0) return history(q);
        if (q >= times[last]) {
            if (pending_t <= times[last]) return sol.values[last];
            const double w = (q - times[last]) / (pending_t - times[last]);
            return sol.values[last] + std::min(w, 1.0) * (pending_x - sol.values[last]);
        }
        return interp_grid(times, sol.values, last, q);
    };

    // Initial right-hand side: mu2 contributes nothing at t=0 except an atom
    // at the origin; mu1 reads the history.
    {
        double d0 = forcing ? forcing(0.0) : 0.0;
        for (auto& c : ctx) {
            const auto& nl = c.term->nonlinearity;
            if (c.term->mu1) {
                for (const auto& a : c.term->mu1->atoms())
                    d0 += a.mass * eval_f(nl, a.location == 0.0 ? x0 : history(-a.location));
                for (const auto* d : c.dens1)
                    d0 += adaptive_simpson(
                        [&](double s) { return d->value(s) * eval_f(nl, history(-s)); },
                        d->grid.front(), d->grid.back(), 1e-12);
            }
            if (c.term->mu2)
                for (const auto& a : c.term->mu2->atoms())
                    if (a.location == 0.0) d0 += a.mass * c.fv[0];
        }
        sol.derivatives.push_back(d0);
    }

    struct PendingAtom {
        std::size_t k;
        double mass;
        double q;
    };
    std::vector<double> coef(ctx.size());
    std::vector<PendingAtom> pend;

    for (std::size_t n = 0; n + 1 < N; ++n) {
        const double t_new = times[n + 1];
        const double h = t_new - times[n];
        last = n;
        double base = forcing ? forcing(t_new) : 0.0;
        std::fill(coef.begin(), coef.end(), 0.0);
        pend.clear();

        for (std::size_t k = 0; k < ctx.size(); ++k) {
            auto& c = ctx[k];
            const auto& nl = c.term->nonlinearity;
            auto atom_contrib = [&](double loc, double mass) {
                if (loc == 0.0) {
                    coef[k] += mass;
                    return;
                }
                const double q = t_new - loc;
                if (q > times[n] * (1.0 + 1e-12) && q > times[n])
                    pend.push_back({k, mass, q});
                else
                    base += mass * eval_f(nl, state_at(q));
            };

            if (c.term->mu1) {
                for (const auto& a : c.term->mu1->atoms()) atom_contrib(a.location, a.mass);
                for (const auto* d : c.dens1) {
                    const double g1 = d->grid.back();
                    const double s_hi = std::min(g1, t_new);
                    if (s_hi > 0.0) {
                        const double m0 = d->interval_mass(0.0, std::min(h, s_hi));
                        base += 0.5 * m0 * c.fv[n];
                        coef[k] += 0.5 * m0;
                        for (std::size_t j = n; j-- > 0;) {
                            const double s_a = t_new - times[j + 1];
                            if (s_a >= s_hi) break;
                            const double s_b_raw = t_new - times[j];
                            const double s_b = std::min(s_b_raw, s_hi);
                            const double mass = d->interval_mass(s_a, s_b);
                            if (mass == 0.0) continue;
                            double f_lo;  // f at the earlier time t_new - s_b
                            if (s_b == s_b_raw)
                                f_lo = c.fv[j];
                            else
                                f_lo = eval_f(nl, state_at(t_new - s_b));
                            base += 0.5 * mass * (f_lo + c.fv[j + 1]);
                        }
                    }
                    if (t_new < g1)
                        base += adaptive_simpson(
                            [&](double s) {
                                return d->value(s) * eval_f(nl, history(t_new - s));
                            },
                            t_new, g1, 1e-12);
                }
            }

            if (c.term->mu2) {
                for (const auto& a : c.term->mu2->atoms()) {
                    if (a.location > t_new * (1.0 + 1e-12)) continue;
                    atom_contrib(std::min(a.location, t_new), a.mass);
                }
                for (auto& e : c.exps) {
                    e.w = exp_kernel_step(e.comp->theta, e.comp->scale, h);
                    base += e.w.decay * e.I + e.w.w_old * c.fv[n];
                    coef[k] += e.w.w_new;
                }
                for (const auto* d : c.direct2) {
                    const double m0 = d->interval_mass(0.0, h);
                    base += 0.5 * m0 * c.fv[n];
                    coef[k] += 0.5 * m0;
                    for (std::size_t j = n; j-- > 0;) {
                        const double s_a = t_new - times[j + 1];
                        if (s_a > c.horizon) break;
                        const double mass = d->interval_mass(s_a, t_new - times[j]);
                        if (mass != 0.0) base += 0.5 * mass * (c.fv[j] + c.fv[j + 1]);
                    }
                }
            }
        }

        auto rhs = [&](double xg) {
            pending_x = xg;
            double d = base;
            for (std::size_t k = 0; k < ctx.size(); ++k)
                if (coef[k] != 0.0) d += coef[k] * eval_f(ctx[k].term->nonlinearity, xg);
            for (const auto& p : pend)
                d += p.mass * eval_f(ctx[p.k].term->nonlinearity, state_at(p.q));
            return d;
        };

        pending_t = t_new;
        const double d_n = sol.derivatives[n];
        const double x_pred = sol.values[n] + h * d_n;
        if (!(x_pred > 0.0)) throw std::runtime_error("solve: predictor lost positivity");
        const double d_pred = rhs(x_pred);
        double x_new = sol.values[n] + 0.5 * h * (d_n + d_pred);
        if (!(x_new > 0.0) || !std::isfinite(x_new))
            throw std::runtime_error("solve: state must stay positive");
        if (x_new < sol.values[n] * (1.0 - 1e-12))
            throw std::runtime_error("solve: state must be nondecreasing");
        x_new = std::max(x_new, sol.values[n]);
        double d_new = rhs(x_new);
        if (d_new < -1e-9 * (1.0 + std::abs(d_n)))
            throw std::runtime_error("solve: right-hand side went negative");
        d_new = std::max(d_new, 0.0);

        sol.values.push_back(x_new);
        sol.derivatives.push_back(d_new);
        for (auto& c : ctx) {
            const double f_new = eval_f(c.term->nonlinearity, x_new);
            c.fv.push_back(f_new);
            c.fmax = std::max(c.fmax, f_new);
            for (auto& e : c.exps) e.I = e.w.decay * e.I + e.w.w_old * c.fv[n] + e.w.w_new * f_new;
        }
    }

    for (const auto& c : ctx) {
        if (c.horizon < kInf && c.horizon < times.back()) {
            sol.truncation_horizon = std::max(sol.truncation_horizon, c.horizon);
            for (const auto* d : c.direct2)
                sol.tail_error_bound += d->tail(c.horizon) * c.fmax * times.back();
        }
    }
    return sol;
}

Solution solve_fde(const Measure& mu1, const Measure& mu2, const Nonlinearity& nl,
                   const History& history, const SolverOptions& opts) {
    MultiNonlinearTerm term;
    term.mu1 = mu1.empty() ? nullptr : &mu1;
    term.mu2 = mu2.empty() ? nullptr : &mu2;
    term.nonlinearity = nl;
    term.lambda_weight = 1.0;
    return solve_fde_multi({term}, history, opts);
}

ConvergenceReport richardson_verify(const Solution& coarse, const Solution& fine,
                                    const std::vector<double>& probe_times,
                                    const Solution* finest) {
    ConvergenceReport rep;
    std::vector<double> ratios;
    for (double t : probe_times) {
        const double xc = coarse.value_at(t);
        const double xf = fine.value_at(t);
        const double dev = std::abs(xc - xf) / std::abs(xf);
        rep.times.push_back(t);
        rep.deviations.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
        if (finest) {
            const double xq = finest->value_at(t);
            const double dev2 = std::abs(xf - xq) / std::abs(xq);
            if (dev2 > 0.0 && dev > 0.0) ratios.push_back(std::log2(dev / dev2));
        }
    }
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        rep.estimated_order = ratios[ratios.size() / 2];
    }
    return rep;
}

}  // namespace subgrowth

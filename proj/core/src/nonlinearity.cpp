#include "subgrowth/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subgrowth/spiky.hpp"

namespace subgrowth {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("nonlinearity: missing parameter '" + key + "'");
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Nonlinearity make_power(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("power: beta must lie in (0,1)");
    Nonlinearity nl;
    nl.name = "power";
    nl.f = [beta](double x) { return std::pow(x, beta); };
    nl.asymptote = nl.f;
    nl.asymptote_is_self = true;
    nl.asym_class = AsymptoteClass::SmoothSublinear;
    nl.rv_index = beta;
    const double q = 1.0 - beta;
    nl.closed_F = [q](double x) { return (std::pow(x, q) - 1.0) / q; };
    nl.closed_F_inv = [q](double y) { return std::pow(1.0 + q * y, 1.0 / q); };
    return nl;
}

Nonlinearity make_power_log(double beta, double alpha) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("power-log: beta must lie in (0,1)");
    // Shift inside the log keeps the evaluator positive and strictly
    // increasing down to x = 0 without changing the asymptote.
    const double c = std::exp(1.0 + std::max(0.0, -alpha) / beta);
    Nonlinearity nl;
    nl.name = "power-log";
    nl.f = [beta, alpha, c](double x) {
        return std::pow(x, beta) * std::pow(std::log(c + x), alpha);
    };
    nl.asymptote = nl.f;
    nl.asymptote_is_self = true;
    nl.asym_class = AsymptoteClass::SmoothSublinear;
    nl.rv_index = beta;
    return nl;
}

Nonlinearity make_x_over_log(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("x-over-log: alpha must be positive");
    const double c = std::exp(alpha + 1.0);
    Nonlinearity nl;
    nl.name = "x-over-log";
    nl.f = [alpha, c](double x) { return (c + x) / std::pow(std::log(c + x), alpha); };
    nl.asymptote = nl.f;
    nl.asymptote_is_self = true;
    nl.asym_class = AsymptoteClass::SmoothSublinear;
    nl.rv_index = 1.0;
    return nl;
}

Nonlinearity make_exp_decay(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("exp-decay: alpha must be positive");
    Nonlinearity nl;
    nl.name = "exp-decay";
    // Floor keeps the evaluator positive once e^{-alpha x} underflows.
    nl.f = [alpha](double x) { return std::max(std::exp(-alpha * x), 1e-300); };
    nl.asymptote = nl.f;
    nl.asymptote_is_self = true;
    nl.asym_class = AsymptoteClass::Decreasing;
    const double ea = std::exp(alpha);
    nl.closed_F = [alpha, ea](double x) { return (std::exp(alpha * x) - ea) / alpha; };
    nl.closed_F_inv = [alpha, ea](double y) { return std::log(alpha * y + ea) / alpha; };
    return nl;
}

Nonlinearity make_power_decay(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("power-decay: beta must be positive");
    Nonlinearity nl;
    nl.name = "power-decay";
    nl.f = [beta](double x) { return std::pow(1.0 + x, -beta); };
    nl.asymptote = nl.f;
    nl.asymptote_is_self = true;
    nl.asym_class = AsymptoteClass::Decreasing;
    nl.rv_index = -beta;
    const double p = 1.0 + beta;
    const double c0 = std::pow(2.0, p);
    nl.closed_F = [p, c0](double x) { return (std::pow(1.0 + x, p) - c0) / p; };
    nl.closed_F_inv = [p, c0](double y) { return std::pow(c0 + p * y, 1.0 / p) - 1.0; };
    return nl;
}

Nonlinearity make_rv_osc() {
    Nonlinearity nl;
    nl.name = "rv-osc";
    nl.f = [](double x) {
        const double u = std::cbrt(std::log(2.0 + x));
        return std::exp(u * std::cos(u));
    };
    nl.rv_index = 0.0;
    return nl;
}

Nonlinearity make_exp_sqrt_log() {
    Nonlinearity nl;
    nl.name = "exp-sqrt-log";
    nl.f = [](double x) { return std::exp(std::sqrt(std::log(std::exp(1.0) + x))); };
    nl.asymptote = nl.f;
    nl.asymptote_is_self = true;
    nl.asym_class = AsymptoteClass::SmoothSublinear;
    nl.rv_index = 0.0;
    nl.lower_bound = std::exp(1.0);
    return nl;
}

Nonlinearity make_constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("constant: value must be positive");
    Nonlinearity nl;
    nl.name = "constant";
    nl.f = [c](double) { return c; };
    nl.rv_index = 0.0;
    nl.closed_F = [c](double x) { return (x - 1.0) / c; };
    nl.closed_F_inv = [c](double y) { return 1.0 + c * y; };
    return nl;
}

Nonlinearity make_spiky_registry(const std::map<std::string, double>& params) {
    const double p = get_param(params, "eta_power", 0.5);
    const double h = get_param(params, "h", 1.0);
    const double wb = get_param(params, "w_base", 4.0);
    const double f0 = get_param(params, "f0", 1.0);
    SpikySpec spec;
    spec.eta = [p](double x) { return std::pow(1.0 + x, -p); };
    if (p == 1.0) {
        spec.eta_antiderivative = [](double x) { return std::log1p(x); };
    } else {
        const double q = 1.0 - p;
        spec.eta_antiderivative = [q](double x) { return (std::pow(1.0 + x, q) - 1.0) / q; };
    }
    spec.spike_heights = [h](std::size_t) { return h; };
    spec.spike_widths = [wb](std::size_t n) { return std::pow(wb, -static_cast<double>(n)); };
    spec.f_at_zero = f0;
    return build_spiky(spec);
}

}  // namespace

double eval_f(const Nonlinearity& nl, double x) {
    if (x < 0.0) throw std::invalid_argument("eval_f: x must be nonnegative");
    const double y = nl.f(x);
    if (!std::isfinite(y) || (x > 0.0 && !(y > 0.0)) || y < 0.0)
        throw std::runtime_error("eval_f: nonlinearity '" + nl.name +
                                 "' produced a nonpositive value");
    return y;
}

Nonlinearity make_nonlinearity(const std::string& name,
                               const std::map<std::string, double>& params) {
    if (name == "power") return make_power(get_param(params, "beta"));
    if (name == "power-log")
        return make_power_log(get_param(params, "beta"), get_param(params, "alpha"));
    if (name == "x-over-log") return make_x_over_log(get_param(params, "alpha"));
    if (name == "exp-decay") return make_exp_decay(get_param(params, "alpha"));
    if (name == "power-decay") return make_power_decay(get_param(params, "beta"));
    if (name == "rv-osc") return make_rv_osc();
    if (name == "exp-sqrt-log") return make_exp_sqrt_log();
    if (name == "constant") return make_constant(get_param(params, "c", 1.0));
    if (name == "spiky") return make_spiky_registry(params);
    throw std::invalid_argument("unknown nonlinearity '" + name + "'");
}

std::vector<double> check_fasym(const Nonlinearity& nl, const std::vector<double>& probes) {
    if (!nl.has_asymptote())
        throw std::invalid_argument("check_fasym: nonlinearity has no asymptote");
    std::vector<double> ratios;
    ratios.reserve(probes.size());
    for (double x : probes) ratios.push_back(eval_f(nl, x) / nl.asymptote(x));
    return ratios;
}

RvIndexEstimate rv_index_estimate(const Nonlinearity& nl, const std::vector<double>& x_probes,
                                  const std::vector<double>& lambdas) {
    RvIndexEstimate out;
    std::vector<double> all;
    std::vector<double> per_probe;
    for (double x : x_probes) {
        std::vector<double> here;
        for (double lam : lambdas) {
            const double fx = nl.f(x);
            const double flx = nl.f(lam * x);
            if (!std::isfinite(fx) || !std::isfinite(flx) || fx <= 0.0 || flx <= 0.0) {
                ++out.rejected;
                continue;
            }
            here.push_back(std::log(flx / fx) / std::log(lam));
        }
        if (!here.empty()) {
            per_probe.push_back(median(here));
            all.insert(all.end(), here.begin(), here.end());
        }
    }
    if (all.empty()) {
        out.is_rv = false;
        return out;
    }
    out.index = median(all);
    const auto [mn, mx] = std::minmax_element(per_probe.begin(), per_probe.end());
    if (std::abs(out.index) > 50.0 || (*mx - *mn) > 5.0) out.is_rv = false;
    return out;
}

}  // namespace subgrowth

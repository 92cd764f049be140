#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace subgrowth {

enum class AsymptoteClass { None, SmoothSublinear, Decreasing };

/// Positive continuous nonlinearity f with optional metadata: the smooth
/// asymptote phi and its monotonicity class, the regular-variation index, and
/// closed forms of the growth transform when known.
struct Nonlinearity {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> asymptote;  // null when no asymptote is known
    bool asymptote_is_self = false;           // phi and f are the same map
    AsymptoteClass asym_class = AsymptoteClass::None;
    std::optional<double> rv_index;
    std::function<double(double)> closed_F;
    std::function<double(double)> closed_F_inv;
    std::optional<double> lower_bound;

    bool has_asymptote() const { return static_cast<bool>(asymptote); }
};

/// Evaluates f(x). x = 0 is allowed (continuous extension); a nonpositive
/// value at x > 0 is an invariant violation and throws.
double eval_f(const Nonlinearity& nl, double x);

/// Builds a registry member from its name and parameters.
/// Names: power(beta), power-log(beta, alpha), x-over-log(alpha),
/// exp-decay(alpha), power-decay(beta), rv-osc, exp-sqrt-log, constant(c),
/// spiky(eta_power: eta(x)=(1+x)^-p, h, w_base: w_n=w_base^-n, f0).
Nonlinearity make_nonlinearity(const std::string& name,
                               const std::map<std::string, double>& params = {});

/// f(x)/phi(x) at each probe point; the harness asserts convergence to 1.
std::vector<double> check_fasym(const Nonlinearity& nl, const std::vector<double>& probes);

struct RvIndexEstimate {
    double index = 0.0;      // median of log(f(lambda x)/f(x)) / log(lambda)
    bool is_rv = true;       // false when the log-ratios diverge across probes
    std::size_t rejected = 0;  // probes dropped due to overflow
};

/// Median log-ratio estimate of the regular-variation index over a grid of
/// probes and scale factors lambda.
RvIndexEstimate rv_index_estimate(const Nonlinearity& nl, const std::vector<double>& x_probes,
                                  const std::vector<double>& lambdas = {2.0, 4.0, 8.0});

class Measure;

/// One summand of the multi-nonlinearity right-hand side: a measure, the
/// nonlinearity it drives, and the weight lambda of the shared asymptote.
struct MultiNonlinearTerm {
    const Measure* mu1 = nullptr;  // bounded-support part, may be null
    const Measure* mu2 = nullptr;  // half-line part, may be null
    Nonlinearity nonlinearity;
    double lambda_weight = 0.0;
};

}  // namespace subgrowth

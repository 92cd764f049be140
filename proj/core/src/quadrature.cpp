#include "subgrowth/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subgrowth {

namespace {

struct Panel {
    double a, fa, m, fm, b, fb, s;
};

double simpson(double a, double fa, double m, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
               int max_depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double sl = simpson(p.a, p.fa, lm, flm, p.m, p.fm);
    const double sr = simpson(p.m, p.fm, rm, frm, p.b, p.fb);
    const double err = sl + sr - p.s;
    if (std::abs(err) <= 15.0 * tol) return sl + sr + err / 15.0;
    if (depth >= max_depth)
        throw std::runtime_error("adaptive_simpson: no convergence on [" +
                                 std::to_string(p.a) + ", " + std::to_string(p.b) +
                                 "], residual " + std::to_string(err));
    return recurse(f, {p.a, p.fa, lm, flm, p.m, p.fm, sl}, 0.5 * tol, depth + 1, max_depth) +
           recurse(f, {p.m, p.fm, rm, frm, p.b, p.fb, sr}, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    Panel root{a, fa, m, fm, b, fb, simpson(a, fa, m, fm, b, fb)};
    return sign * recurse(f, root, tol, 0, max_depth);
}

}  // namespace subgrowth

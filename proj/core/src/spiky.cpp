#include "subgrowth/spiky.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subgrowth/quadrature.hpp"

namespace subgrowth {

namespace {

class SpikyImpl {
public:
    explicit SpikyImpl(SpikySpec spec) : spec_(std::move(spec)) {
        if (!spec_.eta || !spec_.spike_heights || !spec_.spike_widths)
            throw std::invalid_argument("spiky: eta, spike_heights and spike_widths are required");
        if (!(spec_.f_at_zero > 0.0))
            throw std::invalid_argument("spiky: f(0) must be positive");
        f_at_int_.push_back(spec_.f_at_zero);
        phi_at_int_.push_back(0.0);
        for (std::size_t n = 1; n <= 256; ++n) validate_spike(n);
    }

    double phi(double x) const {
        if (spec_.eta_antiderivative) return spec_.eta_antiderivative(x);
        std::lock_guard<std::mutex> lock(mu_);
        return phi_locked(x);
    }

    double eval(double x) const {
        if (x < 0.0) throw std::invalid_argument("spiky eval: x must be nonnegative");
        std::lock_guard<std::mutex> lock(mu_);
        const double n_real = std::floor(x);
        if (n_real < 1.0) return f_at_int_[0] + phi_locked(x);
        if (tail_offset_ && n_real >= static_cast<double>(tail_start_))
            return *tail_offset_ + phi_locked(x);
        const std::size_t n = static_cast<std::size_t>(n_real);
        ensure(n);
        if (tail_offset_ && n >= tail_start_) return *tail_offset_ + phi_locked(x);
        return segment_locked(n, x);
    }

private:
    void validate_spike(std::size_t n) const {
        const double h = spec_.spike_heights(n);
        const double w = spec_.spike_widths(n);
        const double eta_n = spec_.eta(static_cast<double>(n));
        if (!(h > eta_n))
            throw std::invalid_argument("spiky: spike height must exceed eta at n=" +
                                        std::to_string(n));
        if (!(w > 0.0) || !(w < 1.0))
            throw std::invalid_argument("spiky: spike width must lie in (0,1) at n=" +
                                        std::to_string(n));
    }

    double phi_locked(double x) const {
        if (spec_.eta_antiderivative) return spec_.eta_antiderivative(x);
        // Chain unit-interval quadrature so large x stays cheap and repeatable.
        const std::size_t n = static_cast<std::size_t>(std::floor(x));
        while (phi_at_int_.size() <= n) {
            const double a = static_cast<double>(phi_at_int_.size() - 1);
            phi_at_int_.push_back(phi_at_int_.back() +
                                  adaptive_simpson(spec_.eta, a, a + 1.0, 1e-13));
        }
        const double base = static_cast<double>(n);
        return phi_at_int_[n] + adaptive_simpson(spec_.eta, base, x, 1e-13);
    }

    // Piecewise value inside [n, n+1], valid once f(n) is cached.
    double segment_locked(std::size_t n, double x) const {
        const double nd = static_cast<double>(n);
        const double fn = f_at_int_[n];
        const double w = spec_.spike_widths(n);
        const double h = spec_.spike_heights(n);
        const double eta_n = spec_.eta(nd);
        const double eta_nw = spec_.eta(nd + w);
        const double d = x - nd;
        if (d <= 0.5 * w) return fn + d * eta_n + (h - eta_n) / w * d * d;
        const double f_mid = fn + 0.25 * w * eta_n + 0.25 * h * w;
        if (d <= w) {
            const double e = d - 0.5 * w;
            return f_mid + h * e + (eta_nw - h) / w * e * e;
        }
        const double f_nw = f_mid + 0.25 * h * w + 0.25 * w * eta_nw;
        return f_nw + (phi_locked(x) - phi_locked(nd + w));
    }

    void ensure(std::size_t n) const {
        if (n >= kMaxCached)
            throw std::runtime_error("spiky: breakpoint cache limit exceeded");
        while (f_at_int_.size() <= n && !tail_offset_) {
            const std::size_t k = f_at_int_.size() - 1;  // extend across [k, k+1]
            if (k >= 1) validate_spike(k);
            double next;
            if (k == 0) {
                next = f_at_int_[0] + phi_locked(1.0);
            } else {
                next = segment_locked(k, static_cast<double>(k) + 1.0);
            }
            f_at_int_.push_back(next);
            if (k >= 1) {
                // Once the spike corrections underflow relative to f, the
                // remainder of the curve is a pure shift of phi.
                const double w = spec_.spike_widths(k);
                const double h = spec_.spike_heights(k);
                const double bump = w * (h + spec_.eta(static_cast<double>(k)));
                if (bump < 1e-18 * next) {
                    ++negligible_run_;
                    if (negligible_run_ >= 4) {
                        tail_start_ = k + 1;
                        tail_offset_ = next - phi_locked(static_cast<double>(k + 1));
                    }
                } else {
                    negligible_run_ = 0;
                }
            }
        }
    }

    static constexpr std::size_t kMaxCached = std::size_t{1} << 22;

    SpikySpec spec_;
    mutable std::mutex mu_;
    mutable std::vector<double> f_at_int_;
    mutable std::vector<double> phi_at_int_;
    mutable std::size_t negligible_run_ = 0;
    mutable std::size_t tail_start_ = 0;
    mutable std::optional<double> tail_offset_;
};

}  // namespace

Nonlinearity build_spiky(const SpikySpec& spec) {
    auto impl = std::make_shared<SpikyImpl>(spec);
    Nonlinearity nl;
    nl.name = "spiky";
    nl.f = [impl](double x) { return impl->eval(x); };
    nl.asymptote = [impl](double x) { return impl->phi(x); };
    nl.asym_class = AsymptoteClass::SmoothSublinear;
    return nl;
}

}  // namespace subgrowth

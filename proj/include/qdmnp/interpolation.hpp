#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qdmnp {

/// Shape-preserving piecewise cubic Hermite interpolant with Steffen's node
/// slopes. Exact on linear data, monotone on every interval, and C1 so its
/// analytic derivative is well defined everywhere. Away from extrema the node
/// slope is the three-point parabolic slope, clipped only where the secants
/// differ by more than a factor of three.
template <typename Scalar>
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::span<const Scalar> x, std::span<const Scalar> y)
        : x_(x.begin(), x.end()), y_(y.begin(), y.end()), d_(x.size(), Scalar(0)) {
        const std::size_t n = x_.size();
        if (n < 2) return;
        std::vector<Scalar> h(n - 1), delta(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = x_[k + 1] - x_[k];
            delta[k] = (y_[k + 1] - y_[k]) / h[k];
        }
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= Scalar(0)) continue;
            const Scalar p = (delta[k - 1] * h[k] + delta[k] * h[k - 1]) / (h[k - 1] + h[k]);
            const Scalar m = std::min({std::abs(delta[k - 1]), std::abs(delta[k]), Scalar(0.5) * std::abs(p)});
            d_[k] = std::copysign(2 * m, delta[k]);
        }
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    std::size_t size() const noexcept { return x_.size(); }
    const std::vector<Scalar>& nodes() const noexcept { return x_; }
    const std::vector<Scalar>& values() const noexcept { return y_; }
    const std::vector<Scalar>& slopes() const noexcept { return d_; }

    Scalar operator()(Scalar t) const {
        const std::size_t k = interval(t);
        const Scalar h = x_[k + 1] - x_[k];
        const Scalar s = (t - x_[k]) / h;
        const Scalar s2 = s * s, s3 = s2 * s;
        const Scalar h00 = 2 * s3 - 3 * s2 + 1;
        const Scalar h10 = s3 - 2 * s2 + s;
        const Scalar h01 = -2 * s3 + 3 * s2;
        const Scalar h11 = s3 - s2;
        return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
    }

    Scalar derivative(Scalar t) const {
        const std::size_t k = interval(t);
        const Scalar h = x_[k + 1] - x_[k];
        const Scalar s = (t - x_[k]) / h;
        const Scalar s2 = s * s;
        const Scalar dh00 = (6 * s2 - 6 * s) / h;
        const Scalar dh10 = 3 * s2 - 4 * s + 1;
        const Scalar dh01 = (-6 * s2 + 6 * s) / h;
        const Scalar dh11 = 3 * s2 - 2 * s;
        return dh00 * y_[k] + dh10 * d_[k] + dh01 * y_[k + 1] + dh11 * d_[k + 1];
    }

private:
    // One-sided parabolic slope, clipped to keep the end interval monotone.
    static Scalar end_slope(Scalar h0, Scalar h1, Scalar m0, Scalar m1) {
        const Scalar p = m0 * (1 + h0 / (h0 + h1)) - m1 * h0 / (h0 + h1);
        if (p * m0 <= Scalar(0)) return Scalar(0);
        if (std::abs(p) > 2 * std::abs(m0)) return 2 * m0;
        return p;
    }

    std::size_t interval(Scalar t) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(k, x_.size() - 2);
    }

    std::vector<Scalar> x_, y_, d_;
};

}  // namespace qdmnp

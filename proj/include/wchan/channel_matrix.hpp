// Transition matrices for a bank of n parallel binary channels whose states
// flip independently with probability alpha per transmission slot.
//
// The receiver only sees the number of "good" channels, so the aggregate
// state space is {0, 1, ..., n} and the one-slot transition matrix A_n is
// (n+1)x(n+1), row-stochastic and centrally symmetric.  Both A_n and its
// inverse have closed forms; the inverse is the sign-alternating companion
// of A_n scaled by (1-2*alpha)^-n, which exists for every alpha != 1/2.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "wchan/matrix.hpp"

namespace wchan {

/// Thrown when alpha is too close to 1/2 for the closed-form inverse.
struct singular_alpha : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown by the elimination-based inverse when a pivot collapses.
struct numerically_singular : std::domain_error {
    using std::domain_error::domain_error;
};

/// Channel bank description: n parallel binary channels, each flipping
/// good<->bad with probability alpha during one slot.
class ChannelParams {
  public:
    static constexpr int max_channels = 30;

    ChannelParams(int n, double alpha) : n_(n), alpha_(alpha) {
        if (n < 1 || n > max_channels)
            throw std::invalid_argument("ChannelParams: n must be in [1, " +
                                        std::to_string(max_channels) + "], got " + std::to_string(n));
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("ChannelParams: alpha must be in [0, 1], got " +
                                        std::to_string(alpha));
    }

    int n() const { return n_; }
    double alpha() const { return alpha_; }

    /// Number of aggregate weight states, n + 1.
    int states() const { return n_ + 1; }

  private:
    int n_;
    double alpha_;
};

namespace detail {

// Exact binomial coefficient; stays within int64 for n <= 62.
inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i; // divides exactly at every step
    }
    return result;
}

inline void check_weight(const ChannelParams& params, int w, const char* what) {
    if (w < 0 || w > params.n())
        throw std::out_of_range(std::string(what) + " weight out of [0, n]");
}

} // namespace detail

/// One-slot probability of moving from `w_from` good channels to `w_to`.
///
/// Summed over s = number of good channels that go bad; the remaining
/// w_to - w_from + s bad channels must come good.  Binomial coefficients are
/// exact integers and the powers of alpha are built by repeated
/// multiplication, both carried in extended precision until the final
/// rounding, so entries land within an ulp of the exact value.
inline double entry(const ChannelParams& params, int w_from, int w_to) {
    detail::check_weight(params, w_from, "entry: source");
    detail::check_weight(params, w_to, "entry: target");

    const int n = params.n();
    const long double alpha = params.alpha();
    const long double beta = 1.0L - alpha;

    // pow_a[t] = alpha^t, pow_b[t] = (1-alpha)^t, with 0^0 = 1.
    long double pow_a[ChannelParams::max_channels + 1];
    long double pow_b[ChannelParams::max_channels + 1];
    pow_a[0] = pow_b[0] = 1.0L;
    for (int t = 1; t <= n; ++t) {
        pow_a[t] = pow_a[t - 1] * alpha;
        pow_b[t] = pow_b[t - 1] * beta;
    }

    const int a = w_from;
    const int b = w_to;
    const int s_lo = std::max(a - b, 0);
    const int s_hi = std::min(a, n - b);

    long double sum = 0.0L;
    for (int s = s_lo; s <= s_hi; ++s) {
        const int flips = b - a + 2 * s; // channels that change state
        const long double ways = static_cast<long double>(detail::binomial(a, s)) *
                                 static_cast<long double>(detail::binomial(n - a, b - a + s));
        sum += ways * (pow_a[flips] * pow_b[n - flips]);
    }
    return static_cast<double>(sum);
}

/// Dense one-slot transition matrix over weight states.
class TransitionMatrix {
  public:
    TransitionMatrix(ChannelParams params, Mat entries)
        : params_(params), entries_(std::move(entries)) {}

    const ChannelParams& params() const { return params_; }
    const Mat& entries() const { return entries_; }
    int size() const { return params_.states(); }
    double operator()(int w_from, int w_to) const { return entries_(w_from, w_to); }

  private:
    ChannelParams params_;
    Mat entries_;
};

/// Closed-form inverse of a TransitionMatrix (signed, not stochastic).
class InverseMatrix {
  public:
    InverseMatrix(ChannelParams params, Mat entries)
        : params_(params), entries_(std::move(entries)) {}

    const ChannelParams& params() const { return params_; }
    const Mat& entries() const { return entries_; }
    int size() const { return params_.states(); }
    double operator()(int i, int j) const { return entries_(i, j); }

  private:
    ChannelParams params_;
    Mat entries_;
};

inline TransitionMatrix build_matrix(const ChannelParams& params) {
    const int m = params.states();
    Mat entries(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) entries(a, b) = entry(params, a, b);
    return TransitionMatrix(params, std::move(entries));
}

/// Sign-alternating companion A*: entry (i, j) of A times (-1)^(i+j).
/// Satisfies A * A_star = (1-2*alpha)^n * I.
inline Mat signed_companion(const TransitionMatrix& matrix) {
    const int m = matrix.size();
    Mat star(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) star(i, j) = ((i + j) % 2 == 0) ? matrix(i, j) : -matrix(i, j);
    return star;
}

/// Guard on |1 - 2*alpha| below which the inverse is treated as singular.
inline constexpr double singularity_guard = 1e-9;

/// Closed-form inverse: the signed companion divided by (1-2*alpha)^n.
/// Throws singular_alpha when |1-2*alpha| < singularity_guard.
inline InverseMatrix build_inverse(const ChannelParams& params) {
    const double one_minus_2a = 1.0 - 2.0 * params.alpha();
    if (std::abs(one_minus_2a) < singularity_guard)
        throw singular_alpha("build_inverse: alpha = " + std::to_string(params.alpha()) +
                             " is within the singularity guard around 1/2");

    long double scale_l = 1.0L;
    for (int t = 0; t < params.n(); ++t) scale_l *= static_cast<long double>(one_minus_2a);
    const double scale = static_cast<double>(scale_l);

    Mat inv = signed_companion(build_matrix(params));
    const int m = params.states();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) inv(i, j) /= scale;
    return InverseMatrix(params, std::move(inv));
}

/// Inverse by pivoted Gaussian elimination on the numeric entries.  Shares
/// nothing with the closed form; the test suites use it as an independent
/// reference.  Throws numerically_singular when a pivot falls below 1e-13.
inline Mat numeric_inverse_oracle(const TransitionMatrix& matrix) {
    constexpr double pivot_floor = 1e-13;
    const int m = matrix.size();

    Mat work = matrix.entries();
    Mat inv = Mat::identity(m);

    for (int col = 0; col < m; ++col) {
        int pivot_row = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(work(r, col)) > std::abs(work(pivot_row, col))) pivot_row = r;
        const double pivot = work(pivot_row, col);
        if (std::abs(pivot) < pivot_floor)
            throw numerically_singular("numeric_inverse_oracle: pivot " + std::to_string(pivot) +
                                       " in column " + std::to_string(col));
        if (pivot_row != col) {
            for (int c = 0; c < m; ++c) {
                std::swap(work(pivot_row, c), work(col, c));
                std::swap(inv(pivot_row, c), inv(col, c));
            }
        }
        const double inv_pivot = 1.0 / pivot;
        for (int c = 0; c < m; ++c) {
            work(col, c) *= inv_pivot;
            inv(col, c) *= inv_pivot;
        }
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const double factor = work(r, col);
            if (factor == 0.0) continue;
            for (int c = 0; c < m; ++c) {
                work(r, c) -= factor * work(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }
    return inv;
}

/// Every row sums to 1 within `tol`.
inline bool is_row_stochastic(const TransitionMatrix& matrix, double tol = 1e-12) {
    const int m = matrix.size();
    for (int i = 0; i < m; ++i) {
        long double sum = 0.0L;
        for (int j = 0; j < m; ++j) {
            const double v = matrix(i, j);
            if (v < 0.0 || v > 1.0) return false;
            sum += v;
        }
        if (std::abs(static_cast<double>(sum - 1.0L)) > tol) return false;
    }
    return true;
}

/// entries[i][j] == entries[n-i][n-j], bit-exact.
inline bool is_centrally_symmetric(const TransitionMatrix& matrix) {
    const int m = matrix.size();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (matrix(i, j) != matrix(m - 1 - i, m - 1 - j)) return false;
    return true;
}

} // namespace wchan

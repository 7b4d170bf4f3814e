// Closed-form channel capacity for an invertible square channel matrix.
//
// Working in the output distribution q (p and q are linked by q = A^T p and
// the inverse restores p), the first-order optimality system for
// max_p I(X;Y) collapses to closed forms:
//
//   h_i  = sum_k A[i][k] log2 A[i][k]          (negated row entropy, bits)
//   K_j  = sum_i Ainv[j][i] h_i
//   nu*  = log2( sum_j 2^(K_j - 1) )
//   q*_j = 2^(K_j - nu* - 1)
//   p*   = q*^T Ainv
//
// q* is always a genuine distribution; p* may leave [0, 1], in which case
// the stationary value is only an upper bound on capacity and the solution
// is flagged InvalidInput.  All logarithms are base 2, capacities in bits.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "wchan/channel_matrix.hpp"
#include "wchan/matrix.hpp"

namespace wchan {

/// Thrown when an input distribution has negative mass or does not sum to 1.
struct invalid_distribution : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Validity { Valid, InvalidInput };
enum class CapacityRole { Exact, UpperBound };

/// Tolerance band around [0, 1] inside which p* entries are accepted as
/// floating-point residue rather than genuine constraint violations.
inline constexpr double validity_guard = 1e-9;

struct MutualInformationBreakdown {
    double h_y;         // output entropy H(Y), bits
    double h_y_given_x; // conditional entropy H(Y|X), bits
    double i_xy;        // mutual information, bits
};

struct CapacitySolution {
    ChannelParams params;
    std::vector<double> k_vector; // K_j, bits
    double nu_star;             // normalization multiplier, bits
    std::vector<double> q_star; // optimal output distribution
    std::vector<double> p_star; // recovered input, possibly outside [0, 1]
    double capacity_bits;
    Validity validity;
    CapacityRole capacity_role;
};

namespace detail {

// Entries below this are treated as exact zeros in entropy sums.
inline constexpr double entropy_floor = 1e-300;

inline double xlog2x(double x) {
    return (x > entropy_floor) ? x * std::log2(x) : 0.0;
}

// h_i = sum_k A[i][k] log2 A[i][k], one value per input state.  Always <= 0.
inline std::vector<double> row_log_weights(const TransitionMatrix& matrix) {
    const int m = matrix.size();
    std::vector<double> h(m);
    for (int i = 0; i < m; ++i) {
        long double acc = 0.0L;
        for (int k = 0; k < m; ++k) acc += xlog2x(matrix(i, k));
        h[i] = static_cast<double>(acc);
    }
    return h;
}

} // namespace detail

/// H(Y), H(Y|X) and their difference I(X;Y) for input distribution `p`,
/// all in bits with the 0*log(0) = 0 convention.
inline MutualInformationBreakdown mutual_information(const TransitionMatrix& matrix,
                                                     std::span<const double> p) {
    const int m = matrix.size();
    if (static_cast<int>(p.size()) != m)
        throw invalid_distribution("mutual_information: p has wrong length");
    long double total = 0.0L;
    for (double pi : p) {
        if (pi < 0.0) throw invalid_distribution("mutual_information: negative probability");
        total += pi;
    }
    if (std::abs(static_cast<double>(total - 1.0L)) > 1e-9)
        throw invalid_distribution("mutual_information: p does not sum to 1");

    MutualInformationBreakdown out{};
    long double h_y = 0.0L;
    for (int j = 0; j < m; ++j) {
        long double qj = 0.0L;
        for (int i = 0; i < m; ++i) qj += static_cast<long double>(p[i]) * matrix(i, j);
        h_y -= detail::xlog2x(static_cast<double>(qj));
    }
    long double h_yx = 0.0L;
    const std::vector<double> h = detail::row_log_weights(matrix);
    for (int i = 0; i < m; ++i) h_yx -= static_cast<long double>(p[i]) * h[i];

    out.h_y = static_cast<double>(h_y);
    out.h_y_given_x = static_cast<double>(h_yx);
    out.i_xy = out.h_y - out.h_y_given_x;
    // I(X;Y) >= 0 always holds exactly; zero-capacity channels can round a
    // hair below it, and that residue is snapped back to zero.
    if (out.i_xy < 0.0 && out.i_xy > -1e-12) out.i_xy = 0.0;
    return out;
}

/// K_j = sum_i Ainv[j][i] h_i.  Palindromic for centrally symmetric A.
inline std::vector<double> k_vector(const TransitionMatrix& matrix, const InverseMatrix& inverse) {
    const int m = matrix.size();
    const std::vector<double> h = detail::row_log_weights(matrix);
    std::vector<double> k(m);
    for (int j = 0; j < m; ++j) {
        long double acc = 0.0L;
        for (int i = 0; i < m; ++i) acc += static_cast<long double>(inverse(j, i)) * h[i];
        k[j] = static_cast<double>(acc);
    }
    return k;
}

/// Valid iff every entry lies in [-validity_guard, 1 + validity_guard].
inline Validity classify_validity(std::span<const double> p_star) {
    for (double pi : p_star)
        if (pi < -validity_guard || pi > 1.0 + validity_guard) return Validity::InvalidInput;
    return Validity::Valid;
}

/// Clamp guard-band residue to [0, 1] and renormalize.  Precondition: the
/// vector already classifies as Valid.
inline std::vector<double> clamp_to_simplex(std::span<const double> p_star) {
    std::vector<double> p(p_star.begin(), p_star.end());
    long double total = 0.0L;
    for (double& pi : p) {
        if (pi < 0.0) pi = 0.0;
        if (pi > 1.0) pi = 1.0;
        total += pi;
    }
    for (double& pi : p) pi = static_cast<double>(pi / total);
    return p;
}

/// Stationary point of the capacity program, evaluated in closed form.
///
/// capacity_bits is the objective at the stationary point,
/// -sum_j q*_j log2 q*_j + sum_i p*_i h_i; when p* is a genuine
/// distribution this equals I(X;Y) at p* and the solution is exact,
/// otherwise it is an upper bound on the true capacity.
inline CapacitySolution solve_closed_form(const TransitionMatrix& matrix,
                                          const InverseMatrix& inverse) {
    const int m = matrix.size();
    const std::vector<double> h = detail::row_log_weights(matrix);
    std::vector<double> k = wchan::k_vector(matrix, inverse);

    // nu* = log2 sum_j 2^(K_j - 1), evaluated relative to max K_j so the
    // exponentials stay in range.
    double k_max = k[0];
    for (double kj : k) k_max = std::max(k_max, kj);
    long double z = 0.0L;
    for (double kj : k) z += std::exp2(static_cast<long double>(kj - k_max));
    const double nu_star = k_max - 1.0 + static_cast<double>(std::log2(z));

    std::vector<double> q(m);
    for (int j = 0; j < m; ++j) q[j] = std::exp2(k[j] - nu_star - 1.0);

    // p*^T = q*^T Ainv
    std::vector<double> p(m);
    for (int i = 0; i < m; ++i) {
        long double acc = 0.0L;
        for (int j = 0; j < m; ++j) acc += static_cast<long double>(q[j]) * inverse(j, i);
        p[i] = static_cast<double>(acc);
    }

    const Validity validity = classify_validity(p);

    long double value = 0.0L;
    for (int j = 0; j < m; ++j) value -= detail::xlog2x(q[j]);
    for (int i = 0; i < m; ++i) value += static_cast<long double>(p[i]) * h[i];

    CapacitySolution sol{matrix.params(),
                         std::move(k),
                         nu_star,
                         std::move(q),
                         std::move(p),
                         static_cast<double>(value),
                         validity,
                         validity == Validity::Valid ? CapacityRole::Exact
                                                     : CapacityRole::UpperBound};
    return sol;
}

/// max_j | K_j - (1 + log2 q*_j) - nu* |, in bits.  Zero up to rounding at
/// a genuine stationary point.
inline double stationarity_residual(const TransitionMatrix& matrix, const InverseMatrix& inverse,
                                    const CapacitySolution& solution) {
    const std::vector<double> k = wchan::k_vector(matrix, inverse);
    double worst = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double r = k[j] - (1.0 + std::log2(solution.q_star[j])) - solution.nu_star;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace wchan

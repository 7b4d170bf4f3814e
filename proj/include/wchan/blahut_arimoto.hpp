// Blahut-Arimoto capacity iteration, used as the ground-truth reference for
// the closed-form solver.  Alternating maximization with the standard
// capacity bracket: given p, c_i = sum_j A[i][j] log2(A[i][j]/q_j) with
// q = A^T p; then log2(sum_i p_i 2^c_i) <= C <= max_i c_i, and the update
// p_i <- p_i 2^c_i / Z tightens the bracket monotonically.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wchan/channel_matrix.hpp"

namespace wchan {

struct BAConfig {
    double tolerance_bits = 1e-10; // bracket width at which to stop
    int max_iterations = 100000;
    bool record_trace = false; // keep per-iteration brackets (tests)
};

struct BABracket {
    double lower;
    double upper;
};

struct BAResult {
    double capacity_bits = 0.0;
    std::vector<double> p_opt;
    int iterations = 0;
    bool converged = false;
    std::vector<BABracket> trace; // filled when record_trace is set
};

/// Runs the iteration from the uniform input until the capacity bracket is
/// narrower than config.tolerance_bits.  Never throws on slow convergence:
/// the best iterate comes back with converged = false.
inline BAResult blahut_arimoto(const TransitionMatrix& matrix, const BAConfig& config = {}) {
    if (config.tolerance_bits < 1e-14)
        throw std::invalid_argument("blahut_arimoto: tolerance_bits must be >= 1e-14");
    if (config.max_iterations < 1 || config.max_iterations > 1000000)
        throw std::invalid_argument("blahut_arimoto: max_iterations must be in [1, 1e6]");

    const int m = matrix.size();
    std::vector<double> p(m, 1.0 / m);
    std::vector<double> q(m), c(m), boost(m);

    BAResult result;
    result.p_opt = p;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        for (int j = 0; j < m; ++j) {
            long double qj = 0.0L;
            for (int i = 0; i < m; ++i) qj += static_cast<long double>(p[i]) * matrix(i, j);
            q[j] = static_cast<double>(qj);
        }

        double upper = -1.0 / 0.0;
        for (int i = 0; i < m; ++i) {
            long double ci = 0.0L;
            for (int j = 0; j < m; ++j) {
                const double a = matrix(i, j);
                if (a <= 0.0) continue; // 0 log 0 = 0; zero columns never reach here
                ci += static_cast<long double>(a) * (std::log2(a) - std::log2(q[j]));
            }
            c[i] = static_cast<double>(ci);
            upper = std::max(upper, c[i]);
        }

        long double z = 0.0L;
        for (int i = 0; i < m; ++i) {
            boost[i] = std::exp2(c[i]);
            z += static_cast<long double>(p[i]) * boost[i];
        }
        const double lower = static_cast<double>(std::log2(z));

        if (config.record_trace) result.trace.push_back({lower, upper});
        result.iterations = iter;
        result.capacity_bits = 0.5 * (lower + upper);

        // p update (also the final reported input when we stop here)
        for (int i = 0; i < m; ++i) p[i] = static_cast<double>(p[i] * boost[i] / z);
        long double norm = 0.0L;
        for (double pi : p) norm += pi;
        for (double& pi : p) pi = static_cast<double>(pi / norm);
        result.p_opt = p;

        if (upper - lower <= config.tolerance_bits) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace wchan

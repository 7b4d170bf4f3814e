// Command-line front end for the weight-state channel library.
//
// Subcommands:
//   matrix    print a transition matrix or its closed-form inverse
//   capacity  solve one (n, alpha) point, closed form next to the iteration
//   sweep     scan an (n, alpha) grid into CSV, one record per point
//   simulate  Monte Carlo check of the transition matrix
//
// Exit codes: 0 success, 2 usage or parameter error, 3 mathematical
// singularity (alpha within the guard around 1/2).
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wchan/wchan.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_singular = 3;

// Machine formats carry 17 significant digits so every double round-trips.
std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

const char* validity_name(wchan::Validity v) {
    return v == wchan::Validity::Valid ? "Valid" : "InvalidInput";
}

void print_table(std::ostream& out, const wchan::Mat& m) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%12.6f", m(i, j));
            out << buf;
        }
        out << "\n";
    }
}

void print_csv(std::ostream& out, const wchan::Mat& m) {
    out << "w_from,w_to,value\n";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out << i << "," << j << "," << fmt17(m(i, j)) << "\n";
}

void print_json(std::ostream& out, int n, double alpha, const wchan::Mat& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    nlohmann::ordered_json doc;
    doc["n"] = n;
    doc["alpha"] = alpha;
    doc["entries"] = rows;
    out << doc.dump(2) << "\n";
}

void print_vector(std::ostream& out, const char* label, const std::vector<double>& v) {
    out << label;
    for (double x : v) out << " " << fmt_human(x);
    out << "\n";
}

int run_matrix(int n, double alpha, bool inverse, const std::string& format) {
    wchan::ChannelParams params(n, alpha);
    const wchan::Mat entries =
        inverse ? build_inverse(params).entries() : build_matrix(params).entries();
    if (format == "csv")
        print_csv(std::cout, entries);
    else if (format == "json")
        print_json(std::cout, n, alpha, entries);
    else
        print_table(std::cout, entries);
    return exit_ok;
}

int run_capacity(int n, double alpha) {
    wchan::ChannelParams params(n, alpha);
    const wchan::TransitionMatrix matrix = build_matrix(params);
    const wchan::InverseMatrix inverse = build_inverse(params);
    const wchan::CapacitySolution sol = solve_closed_form(matrix, inverse);
    const wchan::BAResult ba = blahut_arimoto(matrix);
    const double residual = stationarity_residual(matrix, inverse, sol);
    const double min_p = *std::min_element(sol.p_star.begin(), sol.p_star.end());

    std::ostream& out = std::cout;
    out << "n      = " << n << "\n";
    out << "alpha  = " << fmt_human(alpha) << "\n";
    print_vector(out, "K      =", sol.k_vector);
    out << "nu_star = " << fmt_human(sol.nu_star) << "\n";
    print_vector(out, "q_star =", sol.q_star);
    print_vector(out, "p_star =", sol.p_star);
    out << "capacity_closed_bits = " << fmt_human(sol.capacity_bits)
        << (sol.capacity_role == wchan::CapacityRole::Exact ? "  (exact)" : "  (upper bound)")
        << "\n";
    out << "capacity_ba_bits     = " << fmt_human(ba.capacity_bits)
        << (ba.converged ? "" : "  (not converged)") << "\n";
    out << "validity = " << validity_name(sol.validity) << "\n";
    out << "min_p_star = " << fmt_human(min_p) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", residual);
    out << "stationarity_residual = " << buf << "\n";
    return exit_ok;
}

struct SweepRecord {
    int n = 0;
    double alpha = 0.0;
    double capacity_closed_bits = 0.0;
    double capacity_ba_bits = 0.0;
    wchan::Validity validity = wchan::Validity::Valid;
    double min_p_star = 0.0;
    double stationarity_residual_bits = 0.0;
};

SweepRecord sweep_point(int n, double alpha) {
    wchan::ChannelParams params(n, alpha);
    const wchan::TransitionMatrix matrix = build_matrix(params);
    const wchan::InverseMatrix inverse = build_inverse(params);
    const wchan::CapacitySolution sol = solve_closed_form(matrix, inverse);
    const wchan::BAResult ba = blahut_arimoto(matrix);
    SweepRecord rec;
    rec.n = n;
    rec.alpha = alpha;
    rec.capacity_closed_bits = sol.capacity_bits;
    rec.capacity_ba_bits = ba.capacity_bits;
    rec.validity = sol.validity;
    rec.min_p_star = *std::min_element(sol.p_star.begin(), sol.p_star.end());
    rec.stationarity_residual_bits = stationarity_residual(matrix, inverse, sol);
    return rec;
}

unsigned worker_count(std::size_t total) {
    unsigned threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("WCHAN_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) threads = static_cast<unsigned>(parsed);
    }
    if (threads < 1) threads = 1;
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
}

int run_sweep(int n_max, double alpha_min, double alpha_max, double alpha_step,
              const std::string& out_path) {
    if (n_max < 1 || n_max > wchan::ChannelParams::max_channels) {
        std::cerr << "sweep: n_max must be in [1, " << wchan::ChannelParams::max_channels
                  << "]\n";
        return exit_usage;
    }
    if (!(alpha_min > 0.0) || !(alpha_step > 0.0) || !(alpha_min <= alpha_max) ||
        !(alpha_max < 0.5) || std::abs(1.0 - 2.0 * alpha_max) < wchan::singularity_guard) {
        std::cerr << "sweep: need 0 < alpha_min <= alpha_max < 0.5 (outside the singularity "
                     "guard) and alpha_step > 0\n";
        return exit_usage;
    }

    const std::size_t steps =
        static_cast<std::size_t>((alpha_max - alpha_min) / alpha_step + 1e-9) + 1;
    if (steps > 100000) {
        std::cerr << "sweep: grid has " << steps << " alpha values; refine the step\n";
        return exit_usage;
    }

    // grid order is n outer, alpha inner; records land in their slots by
    // index, so the emitted order never depends on scheduling
    std::vector<SweepRecord> records(static_cast<std::size_t>(n_max) * steps);
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (;;) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= records.size()) return;
            const int n = static_cast<int>(idx / steps) + 1;
            const double alpha = alpha_min + static_cast<double>(idx % steps) * alpha_step;
            records[idx] = sweep_point(n, alpha);
        }
    };
    const unsigned threads = worker_count(records.size());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "sweep: cannot open " << out_path << " for writing\n";
            return exit_usage;
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    out << "n,alpha,capacity_closed_bits,capacity_ba_bits,validity,min_p_star,"
           "stationarity_residual\n";
    for (const SweepRecord& rec : records)
        out << rec.n << "," << fmt17(rec.alpha) << "," << fmt17(rec.capacity_closed_bits) << ","
            << fmt17(rec.capacity_ba_bits) << "," << validity_name(rec.validity) << ","
            << fmt17(rec.min_p_star) << "," << fmt17(rec.stationarity_residual_bits) << "\n";
    return exit_ok;
}

int run_simulate(int n, double alpha, std::int64_t trials, std::uint64_t seed) {
    wchan::SimConfig cfg{wchan::ChannelParams(n, alpha), trials, seed};
    const wchan::SimEstimate est = simulate_transitions(cfg);
    std::cout << "n = " << n << "\n";
    std::cout << "alpha = " << fmt_human(alpha) << "\n";
    std::cout << "trials_per_state = " << trials << "\n";
    std::cout << "seed = " << seed << "\n";
    std::cout << "empirical:\n";
    print_table(std::cout, est.empirical);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", est.max_abs_deviation);
    std::cout << "max_abs_deviation = " << buf << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight-state channel matrices, capacity and simulation"};
    app.require_subcommand(1);

    int matrix_n = 0;
    double matrix_alpha = 0.0;
    bool matrix_inverse = false;
    std::string matrix_format = "table";
    CLI::App* matrix_cmd =
        app.add_subcommand("matrix", "print a transition matrix or its inverse");
    matrix_cmd->add_option("n", matrix_n, "number of channels")->required();
    matrix_cmd->add_option("alpha", matrix_alpha, "per-slot flip probability")->required();
    matrix_cmd->add_flag("--inverse", matrix_inverse, "print the closed-form inverse");
    matrix_cmd->add_option("--format", matrix_format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    int cap_n = 0;
    double cap_alpha = 0.0;
    CLI::App* capacity_cmd =
        app.add_subcommand("capacity", "solve one point, closed form next to the iteration");
    capacity_cmd->add_option("n", cap_n, "number of channels")->required();
    capacity_cmd->add_option("alpha", cap_alpha, "per-slot flip probability")->required();

    int sweep_n_max = 0;
    double sweep_alpha_min = 0.0, sweep_alpha_max = 0.0, sweep_alpha_step = 0.0;
    std::string sweep_out;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "scan an (n, alpha) grid into CSV");
    sweep_cmd->add_option("n_max", sweep_n_max, "largest channel count")->required();
    sweep_cmd->add_option("alpha_min", sweep_alpha_min, "first alpha")->required();
    sweep_cmd->add_option("alpha_max", sweep_alpha_max, "last alpha")->required();
    sweep_cmd->add_option("alpha_step", sweep_alpha_step, "alpha increment")->required();
    sweep_cmd->add_option("--out", sweep_out, "write CSV to this file instead of stdout");

    int sim_n = 0;
    double sim_alpha = 0.0;
    std::int64_t sim_trials = 0;
    std::uint64_t sim_seed = 42;
    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "Monte Carlo check of the transition matrix");
    sim_cmd->add_option("n", sim_n, "number of channels")->required();
    sim_cmd->add_option("alpha", sim_alpha, "per-slot flip probability")->required();
    sim_cmd->add_option("trials", sim_trials, "trials per starting state")->required();
    // accepted positionally or as --seed; when both appear the later one wins
    sim_cmd->add_option("seed,--seed", sim_seed, "PRNG seed (default 42)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*matrix_cmd) return run_matrix(matrix_n, matrix_alpha, matrix_inverse, matrix_format);
        if (*capacity_cmd) return run_capacity(cap_n, cap_alpha);
        if (*sweep_cmd)
            return run_sweep(sweep_n_max, sweep_alpha_min, sweep_alpha_max, sweep_alpha_step,
                             sweep_out);
        if (*sim_cmd) return run_simulate(sim_n, sim_alpha, sim_trials, sim_seed);
    } catch (const wchan::singular_alpha& e) {
        std::cerr << e.what() << "\n";
        return exit_singular;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    } catch (const std::out_of_range& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

#pragma once

// Recovery-probability sweeps over (scheme, k) grids. Every trial derives its
// instance seed from (seed_base, k, trial) alone, so trials are independent,
// schemes in one sweep see the same instances, and aggregation does not
// depend on execution order or worker count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rwl1/distributions.hpp"
#include "rwl1/errors.hpp"
#include "rwl1/instance.hpp"
#include "rwl1/merit.hpp"
#include "rwl1/rng.hpp"
#include "rwl1/solver.hpp"

namespace rwl1 {

struct SchemeRun {
    WeightScheme scheme;
    SolverConfig config;
};

struct SweepSpec {
    DistributionSpec dist = dist::Normal{};
    std::size_t m = 50;
    std::size_t n = 200;
    std::vector<std::size_t> k_values;
    std::vector<SchemeRun> schemes;
    std::size_t trials = 20;
    std::uint64_t seed_base = 42;
    double success_tol = 1e-4;

    void validate() const {
        rwl1::validate(dist);
        if (trials < 1) throw InputError("sweep: trials must be at least 1");
        if (k_values.empty()) throw InputError("sweep: no k values");
        if (schemes.empty()) throw InputError("sweep: no schemes");
        if (m >= n) throw InputError("sweep: need m < n");
        if (!(success_tol > 0.0)) throw InputError("sweep: success_tol must be positive");
        std::vector<std::size_t> ks = k_values;
        std::sort(ks.begin(), ks.end());
        if (std::adjacent_find(ks.begin(), ks.end()) != ks.end()) {
            throw InputError("sweep: duplicate k value");
        }
        for (std::size_t k : ks) {
            if (k < 1 || k > m) throw InputError("sweep: k = " + std::to_string(k) + " outside [1, m]");
        }
        for (const auto& s : schemes) s.config.validate();
    }
};

struct TrialRecord {
    bool success = false;
    std::size_t iterations = 0;
    std::size_t pivots = 0;
    double wall_ms = 0.0;
    std::string failure;  // empty unless the solver raised

    friend bool operator==(const TrialRecord& a, const TrialRecord& b) {
        return a.success == b.success && a.iterations == b.iterations && a.pivots == b.pivots &&
               a.failure == b.failure;
    }
};

struct CellRecord {
    std::string distribution;
    std::string scheme;
    std::string p;  // empty when the scheme has no p
    std::string q;
    std::string eps_rule;
    std::size_t k = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double mean_iters = 0.0;
    double mean_pivots = 0.0;
    double wall_ms = 0.0;
    std::vector<std::string> failures;

    friend bool operator==(const CellRecord& a, const CellRecord& b) {
        return a.distribution == b.distribution && a.scheme == b.scheme && a.p == b.p &&
               a.q == b.q && a.eps_rule == b.eps_rule && a.k == b.k && a.trials == b.trials &&
               a.successes == b.successes && a.success_rate == b.success_rate &&
               a.mean_iters == b.mean_iters && a.mean_pivots == b.mean_pivots &&
               a.failures == b.failures;
    }
};

struct SweepResult {
    std::vector<CellRecord> cells;  // sorted by (scheme index, k)

    const CellRecord* find(const std::string& scheme, std::size_t k) const {
        for (const auto& c : cells) {
            if (c.scheme == scheme && c.k == k) return &c;
        }
        return nullptr;
    }
};

inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string describe_eps_rule(const EpsilonSchedule& s) {
    switch (s.rule) {
    case EpsilonRule::Fixed: return "fixed:" + format_real(s.eps0);
    case EpsilonRule::Halving: return "halving:" + format_real(s.eps0);
    case EpsilonRule::CWBRule: return "cwb:" + format_real(s.cwb_floor);
    }
    return "unknown";
}

inline bool is_success(const DenseVector& x_hat, const DenseVector& x_true, double success_tol) {
    if (x_hat.size() != x_true.size()) throw InputError("is_success: length mismatch");
    if (!(success_tol > 0.0)) throw InputError("is_success: success_tol must be positive");
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
        if (std::abs(x_hat[i] - x_true[i]) > success_tol) return false;
    }
    return true;
}

inline std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t k, std::size_t trial_index) {
    const std::uint64_t packed = (static_cast<std::uint64_t>(k) << 32) ^
                                 static_cast<std::uint64_t>(trial_index);
    return seed_base ^ splitmix64_hash(packed);
}

/// Runs one recovery attempt on a given instance; solver errors become failed records.
inline TrialRecord run_trial_on(const ProblemInstance& inst, const SchemeRun& run,
                                double success_tol) {
    TrialRecord rec;
    const auto start = std::chrono::steady_clock::now();
    try {
        const ReweightedResult res = reweighted_l1(inst.a, inst.b, run.scheme, run.config);
        rec.success = is_success(res.x_hat, inst.x_true, success_tol);
        rec.iterations = res.iterations_used;
        rec.pivots = res.total_pivots;
    } catch (const SolverError& e) {
        rec.failure = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const InputError& e) {
        rec.failure = std::string("input: ") + e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
    return rec;
}

inline TrialRecord run_trial(const SweepSpec& spec, std::size_t scheme_index, std::size_t k,
                             std::size_t trial_index) {
    if (scheme_index >= spec.schemes.size()) throw InputError("run_trial: scheme index out of range");
    if (trial_index >= spec.trials) throw InputError("run_trial: trial index out of range");
    const ProblemInstance inst =
        make_instance(spec.dist, spec.m, spec.n, k, trial_seed(spec.seed_base, k, trial_index));
    return run_trial_on(inst, spec.schemes[scheme_index], spec.success_tol);
}

inline SweepResult sweep(const SweepSpec& spec, std::size_t workers = 1) {
    spec.validate();
    std::vector<std::size_t> ks = spec.k_values;
    std::sort(ks.begin(), ks.end());

    struct Task {
        std::size_t scheme;
        std::size_t k;
        std::size_t trial;
    };
    std::vector<Task> tasks;
    tasks.reserve(spec.schemes.size() * ks.size() * spec.trials);
    for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
        for (std::size_t k : ks) {
            for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({s, k, t});
        }
    }

    std::vector<TrialRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            try {
                records[i] = run_trial(spec, tasks[i].scheme, tasks[i].k, tasks[i].trial);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, tasks.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    SweepResult result;
    const std::string dist_name = distribution_name(spec.dist);
    std::size_t cursor = 0;
    for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
        const auto& run = spec.schemes[s];
        for (std::size_t k : ks) {
            CellRecord cell;
            cell.distribution = dist_name;
            cell.scheme = to_string(run.scheme.tag());
            cell.p = run.scheme.uses_p() ? format_real(run.scheme.p()) : "";
            cell.q = run.scheme.uses_q() ? format_real(run.scheme.q()) : "";
            cell.eps_rule = describe_eps_rule(run.config.schedule);
            cell.k = k;
            cell.trials = spec.trials;
            double iters = 0.0;
            double pivots = 0.0;
            for (std::size_t t = 0; t < spec.trials; ++t, ++cursor) {
                const TrialRecord& r = records[cursor];
                if (r.success) ++cell.successes;
                iters += static_cast<double>(r.iterations);
                pivots += static_cast<double>(r.pivots);
                cell.wall_ms += r.wall_ms;
                if (!r.failure.empty()) cell.failures.push_back(r.failure);
            }
            const double trials = static_cast<double>(spec.trials);
            cell.success_rate = static_cast<double>(cell.successes) / trials;
            cell.mean_iters = iters / trials;
            cell.mean_pivots = pivots / trials;
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader =
    "distribution,scheme,p,q,eps_rule,k,trials,successes,success_rate,mean_iters,mean_pivots,wall_ms";

/// Writes one row per cell. Wall time is emitted only when `include_timing`
/// is set; otherwise the column is 0 so repeated runs are byte-identical.
inline void write_sweep_csv(std::ostream& out, const SweepResult& result, bool include_timing = false) {
    out << kSweepCsvHeader << '\n';
    for (const auto& c : result.cells) {
        out << c.distribution << ',' << c.scheme << ',' << c.p << ',' << c.q << ',' << c.eps_rule
            << ',' << c.k << ',' << c.trials << ',' << c.successes << ','
            << format_real(c.success_rate) << ',' << format_real(c.mean_iters) << ','
            << format_real(c.mean_pivots) << ','
            << (include_timing ? format_real(std::round(c.wall_ms * 1000.0) / 1000.0) : "0") << '\n';
    }
}

inline std::string sweep_csv_string(const SweepResult& result, bool include_timing = false) {
    std::ostringstream out;
    write_sweep_csv(out, result, include_timing);
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

template <class T>
T parse_number(const std::string& text, std::size_t line, const char* column) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ParseError("line " + std::to_string(line) + ": column '" + column +
                         "' is not a number: '" + text + "'");
    }
    return value;
}

} // namespace detail

/// Parses a sweep CSV; rejects header-only files.
inline std::vector<CellRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("line 1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepCsvHeader) throw ParseError("line 1: unexpected header");
    std::vector<CellRecord> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 12) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 12 fields, got " +
                             std::to_string(f.size()));
        }
        CellRecord c;
        c.distribution = f[0];
        c.scheme = f[1];
        c.p = f[2];
        c.q = f[3];
        c.eps_rule = f[4];
        if (!c.p.empty()) detail::parse_number<double>(c.p, lineno, "p");
        if (!c.q.empty()) detail::parse_number<double>(c.q, lineno, "q");
        c.k = detail::parse_number<std::size_t>(f[5], lineno, "k");
        c.trials = detail::parse_number<std::size_t>(f[6], lineno, "trials");
        c.successes = detail::parse_number<std::size_t>(f[7], lineno, "successes");
        c.success_rate = detail::parse_number<double>(f[8], lineno, "success_rate");
        c.mean_iters = detail::parse_number<double>(f[9], lineno, "mean_iters");
        c.mean_pivots = detail::parse_number<double>(f[10], lineno, "mean_pivots");
        c.wall_ms = detail::parse_number<double>(f[11], lineno, "wall_ms");
        if (c.successes > c.trials || !(c.success_rate >= 0.0 && c.success_rate <= 1.0)) {
            throw ParseError("line " + std::to_string(lineno) + ": inconsistent success counts");
        }
        rows.push_back(std::move(c));
    }
    if (rows.empty()) throw ParseError("line " + std::to_string(lineno) + ": no data rows");
    return rows;
}

} // namespace rwl1

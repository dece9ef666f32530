#pragma once

#include "hdqkd/protocol_stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdqkd {

struct SourceModel {
    double pair_rate = 0.0;              // signal pairs/s entering detection
    double pair_gen_probability = 9e-5;  // |eta|^2 per pump window, informational
    double coincidence_window = 5e-9;    // tau, seconds
};

/// Uniform background light on every detector channel.
struct NoiseInjection {
    double singles_rate = 0.0;  // counts/s per channel
    int channels_per_side = 0;
};

struct CoincidenceTable {
    int d = 0;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
    double duration = 0.0;
    std::string basis_label;

    std::int64_t total() const { return counts.sum(); }

    std::string to_csv() const;
    static CoincidenceTable from_csv(std::istream& in);
    std::string to_json() const;
    static CoincidenceTable from_json(const std::string& text);
};

struct CountEstimates {
    std::vector<ErrorVector> per_block;
    std::vector<double> weights;
    double tscs = 0.0;  // same-subspace coincidences per second
    double tcs = 0.0;   // total coincidences per second
};

/// Total accidental coincidence rate over all detector pairs:
/// C = 2 (d S) (d S) tau.
double accidental_coincidence_rate(int d, double singles_rate, double tau);

/// Added accidental coincidences/s A with A/(clean_tcs + A) = p,
/// returned divided by d (the NOISE metric).
double noise_fraction_to_added_coincidences(double p, double clean_tcs, int d);

/// Per-channel singles rate that produces a given total accidental rate.
double singles_rate_for_accidentals(double accidental_total, int d, double tau);

/// Poisson/multinomial realization of a run: signal pairs distributed over
/// cells by P, accidentals uniform over all d^2 cells. Deterministic per
/// seed, independent of thread count. The run is split into fixed shards
/// with derived seeds; the parallel version distributes shards over OpenMP
/// threads, the serial version loops over them in order.
CoincidenceTable simulate_run(const JointDistribution& p, const SourceModel& src,
                              const NoiseInjection& noise, double duration,
                              std::uint64_t seed);
CoincidenceTable simulate_run_serial(const JointDistribution& p,
                                     const SourceModel& src,
                                     const NoiseInjection& noise, double duration,
                                     std::uint64_t seed);

/// Empirical frequencies -> post-selection -> per-block error vectors.
CountEstimates estimate_from_counts(const CoincidenceTable& table,
                                    const SubspacePartition& part);

} // namespace hdqkd

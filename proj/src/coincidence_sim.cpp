#include "hdqkd/coincidence_sim.hpp"

#include "json.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdqkd {

double accidental_coincidence_rate(int d, double singles_rate, double tau) {
    if (d < 1 || singles_rate < 0.0 || tau < 0.0)
        throw std::invalid_argument("accidental_coincidence_rate: invalid input");
    const double side = d * singles_rate;
    return 2.0 * side * side * tau;
}

double noise_fraction_to_added_coincidences(double p, double clean_tcs, int d) {
    if (p < 0.0 || p >= 1.0)
        throw std::invalid_argument("noise_fraction_to_added_coincidences: p in [0,1) required");
    if (clean_tcs <= 0.0)
        throw std::invalid_argument("noise_fraction_to_added_coincidences: clean_tcs must be > 0");
    const double added = p * clean_tcs / (1.0 - p);
    return added / d;
}

double singles_rate_for_accidentals(double accidental_total, int d, double tau) {
    if (accidental_total < 0.0 || d < 1 || tau <= 0.0)
        throw std::invalid_argument("singles_rate_for_accidentals: invalid input");
    return std::sqrt(accidental_total / (2.0 * tau)) / d;
}

namespace {

constexpr int kShards = 64;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Multinomial sample by conditional binomials, added onto `counts`.
void add_multinomial(CountMatrix& counts, const Eigen::MatrixXd& probs,
                     std::int64_t n, std::mt19937_64& rng) {
    const int d = static_cast<int>(probs.rows());
    double remaining_prob = 1.0;
    std::int64_t remaining = n;
    for (int i = 0; i < d && remaining > 0; ++i) {
        for (int j = 0; j < d && remaining > 0; ++j) {
            if (i == d - 1 && j == d - 1) {
                counts(i, j) += remaining;
                remaining = 0;
                break;
            }
            const double q = std::min(1.0, std::max(0.0, probs(i, j) / remaining_prob));
            std::binomial_distribution<std::int64_t> bin(remaining, q);
            const std::int64_t c = bin(rng);
            counts(i, j) += c;
            remaining -= c;
            remaining_prob -= probs(i, j);
            if (remaining_prob <= 0.0) {
                counts(d - 1, d - 1) += remaining;
                remaining = 0;
            }
        }
    }
}

CountMatrix simulate_shard(const JointDistribution& p, double signal_mean,
                           double accidental_mean, std::uint64_t shard_seed) {
    const int d = p.d;
    CountMatrix counts = CountMatrix::Zero(d, d);
    std::mt19937_64 rng(shard_seed);
    if (signal_mean > 0.0) {
        std::poisson_distribution<std::int64_t> pois(signal_mean);
        add_multinomial(counts, p.probs, pois(rng), rng);
    }
    if (accidental_mean > 0.0) {
        std::poisson_distribution<std::int64_t> pois(accidental_mean);
        const Eigen::MatrixXd uniform =
            Eigen::MatrixXd::Constant(d, d, 1.0 / (static_cast<double>(d) * d));
        add_multinomial(counts, uniform, pois(rng), rng);
    }
    return counts;
}

void validate_run_inputs(const JointDistribution& p, const SourceModel& src,
                         const NoiseInjection& noise, double duration) {
    if (p.d < 2 || std::abs(p.probs.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("simulate_run: distribution not normalized");
    if (duration <= 0.0)
        throw std::invalid_argument("simulate_run: duration must be positive");
    if (src.pair_rate < 0.0 || noise.singles_rate < 0.0)
        throw std::invalid_argument("simulate_run: negative rate");
}

} // namespace

CoincidenceTable simulate_run_serial(const JointDistribution& p,
                                     const SourceModel& src,
                                     const NoiseInjection& noise, double duration,
                                     std::uint64_t seed) {
    validate_run_inputs(p, src, noise, duration);
    const double acc =
        accidental_coincidence_rate(p.d, noise.singles_rate, src.coincidence_window);
    CoincidenceTable table;
    table.d = p.d;
    table.duration = duration;
    table.counts = CountMatrix::Zero(p.d, p.d);
    for (int s = 0; s < kShards; ++s)
        table.counts += simulate_shard(p, src.pair_rate * duration / kShards,
                                       acc * duration / kShards,
                                       splitmix64(seed + static_cast<std::uint64_t>(s)));
    return table;
}

CoincidenceTable simulate_run(const JointDistribution& p, const SourceModel& src,
                              const NoiseInjection& noise, double duration,
                              std::uint64_t seed) {
    validate_run_inputs(p, src, noise, duration);
    const double acc =
        accidental_coincidence_rate(p.d, noise.singles_rate, src.coincidence_window);
    std::vector<CountMatrix> shard_counts(kShards);
#pragma omp parallel for schedule(static)
    for (int s = 0; s < kShards; ++s)
        shard_counts[s] = simulate_shard(p, src.pair_rate * duration / kShards,
                                         acc * duration / kShards,
                                         splitmix64(seed + static_cast<std::uint64_t>(s)));
    CoincidenceTable table;
    table.d = p.d;
    table.duration = duration;
    table.counts = CountMatrix::Zero(p.d, p.d);
    for (const auto& c : shard_counts)
        table.counts += c;
    return table;
}

CountEstimates estimate_from_counts(const CoincidenceTable& table,
                                    const SubspacePartition& part) {
    if (part.d != table.d)
        throw std::invalid_argument("estimate_from_counts: partition dimension mismatch");
    if (table.total() <= 0)
        throw std::domain_error("estimate_from_counts: empty table");

    const int k = part.k;
    std::vector<std::int64_t> block_counts(part.block_count(), 0);
    std::int64_t same_subspace = 0;
    for (int m = 0; m < part.block_count(); ++m) {
        for (int a : part.blocks[m])
            for (int b : part.blocks[m])
                block_counts[m] += table.counts(a, b);
        same_subspace += block_counts[m];
    }
    if (same_subspace == 0)
        throw std::domain_error("estimate_from_counts: no same-subspace counts");

    CountEstimates est;
    est.tcs = static_cast<double>(table.total()) / table.duration;
    est.tscs = static_cast<double>(same_subspace) / table.duration;
    for (int m = 0; m < part.block_count(); ++m) {
        est.weights.push_back(static_cast<double>(block_counts[m]) / same_subspace);
        ErrorVector e;
        e.e.assign(k, 0.0);
        if (block_counts[m] > 0)
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    e.e[(b - a + k) % k] +=
                        static_cast<double>(table.counts(part.blocks[m][a],
                                                         part.blocks[m][b])) /
                        block_counts[m];
        est.per_block.push_back(std::move(e));
    }
    return est;
}

std::string CoincidenceTable::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "d,duration,basis_label\n"
       << d << ',' << duration << ',' << basis_label << '\n';
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
            os << (j ? "," : "") << counts(i, j);
        os << '\n';
    }
    return os.str();
}

CoincidenceTable CoincidenceTable::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("d,duration,basis_label", 0) != 0)
        throw std::runtime_error("CoincidenceTable: missing CSV header");
    if (!std::getline(in, line))
        throw std::runtime_error("CoincidenceTable: truncated CSV");
    CoincidenceTable t;
    {
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        t.d = std::stoi(field);
        std::getline(ls, field, ',');
        t.duration = std::stod(field);
        std::getline(ls, t.basis_label);
    }
    if (t.d < 1)
        throw std::runtime_error("CoincidenceTable: invalid dimension");
    t.counts = CountMatrix::Zero(t.d, t.d);
    for (int i = 0; i < t.d; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("CoincidenceTable: truncated CSV body");
        std::istringstream ls(line);
        std::string field;
        for (int j = 0; j < t.d; ++j) {
            if (!std::getline(ls, field, ','))
                throw std::runtime_error("CoincidenceTable: short CSV row");
            t.counts(i, j) = std::stoll(field);
        }
    }
    return t;
}

std::string CoincidenceTable::to_json() const {
    nlohmann::json j;
    j["d"] = d;
    j["duration"] = duration;
    j["basis_label"] = basis_label;
    auto rows = nlohmann::json::array();
    for (int i = 0; i < d; ++i) {
        auto row = nlohmann::json::array();
        for (int jx = 0; jx < d; ++jx)
            row.push_back(counts(i, jx));
        rows.push_back(std::move(row));
    }
    j["counts"] = std::move(rows);
    return j.dump(2);
}

CoincidenceTable CoincidenceTable::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CoincidenceTable t;
    t.d = j.at("d").get<int>();
    t.duration = j.at("duration").get<double>();
    t.basis_label = j.at("basis_label").get<std::string>();
    t.counts = CountMatrix::Zero(t.d, t.d);
    for (int i = 0; i < t.d; ++i)
        for (int jx = 0; jx < t.d; ++jx)
            t.counts(i, jx) = j.at("counts").at(i).at(jx).get<std::int64_t>();
    return t;
}

} // namespace hdqkd

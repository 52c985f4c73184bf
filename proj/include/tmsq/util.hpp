#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tmsq {

// Run fn(i) for i in [0, n) on a small thread pool. Work items must be
// independent; callers collect results through pre-sized buffers indexed
// by i, so the output order is deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads = 0);

// Deterministic uniform draws for property-style tests. The standard
// distributions are implementation-defined, so map raw 64-bit draws
// ourselves: (x >> 11) * 2^-53 in [0, 1).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // log-uniform over [lo, hi], lo > 0
    double log_uniform(double lo, double hi);

  private:
    std::mt19937_64 eng_;
};

// hex SHA-256 of a file's bytes; throws tmsq::Error if unreadable
std::string sha256_file(const std::string& path);

// shortest round-trip decimal for a double; NaN prints as "nan"
std::string format_double(double x);

// Minimal CSV emitter: one header row, then %.17g-style numeric cells.
class CsvWriter {
  public:
    CsvWriter(std::string path, std::vector<std::string> header);
    void row(const std::vector<double>& cells);
    // mixed row for id columns
    void row_raw(const std::vector<std::string>& cells);
    void close(); // flush + close; also done by destructor
    ~CsvWriter();

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::size_t width_ = 0;
    std::string buf_;
    bool closed_ = false;
};

} // namespace tmsq

// Sweep orchestration: run configuration, the deterministic parallel sweep
// over squarefree twists, Erdos-Kac empirics, CNC density tables, the exact
// identity check, and CSV/JSON emission.
//
// Work is partitioned over |d| blocks; workers are pure and a single merge
// in block order makes the output byte-identical for any thread count.
#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "selk/cncdescent.hpp"
#include "selk/curve.hpp"
#include "selk/jacobisums.hpp"
#include "selk/localdescent.hpp"
#include "selk/selmerq.hpp"

namespace selk::harness {

using numtheory::i64;

// Exit codes: 0 success, 1 I/O error, 2 config error, 3 threshold failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCheckFailed = 3;

struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& what)
      : std::runtime_error("config error in '" + f + "': " + what), field(std::move(f)) {}
};

struct RunConfig {
  i64 a1 = 0, a2 = 1, a3 = -1;  // congruent number curve
  i64 theta = -3;
  i64 range_max = 1000;
  i64 gamma_num = 5, gamma_den = 4;
  int threads = 0;  // 0 = hardware concurrency
  bool exact_g = false;
  bool json = false;
  std::string out;  // empty = stdout

  void validate() const;
  curve::CurveData make_curve() const;
  int effective_threads() const;
};

// Plain-text key=value file; '#' starts a comment. Keys mirror the fields:
// a1 a2 a3 theta range_max gamma threads exact_g json out.
void load_config_file(const std::string& path, RunConfig& cfg);

struct SweepRecord {
  i64 d = 0;
  int omega0 = 0, omega1 = 0, omega2 = 0, omega_ek = 0;
  std::uint64_t s_d_size = 1;
  int sel_ctilde_dim = 0;
  int g_surrogate = 0;
  std::optional<int> g_exact;
  std::optional<double> ek_stat;
};

// All records for squarefree |d| <= range_max, ascending by |d| with the
// negative twist first.
std::vector<SweepRecord> sweep_records(const RunConfig& cfg);

// Single-threaded recomputation of one record (used for spot re-verification).
SweepRecord recompute_record(const RunConfig& cfg, i64 d);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);

struct EkReport {
  std::size_t n = 0;
  double mean = 0, variance = 0, skewness = 0, kurtosis = 0;
  double ks_distance = 0;
  // 32 buckets of width 0.25 on [-4, 4] plus open tails.
  std::array<long long, 32> buckets{};
  long long tail_lo = 0, tail_hi = 0;
};

EkReport ek_report(const std::vector<SweepRecord>& records);
double normal_cdf(double z);

// Independent Mertens-type oracle: sum of 1/(p+1) over P2 primes p <= x.
double mertens_p2_sum(const curve::CurveData& c, i64 x);

// Subcommand drivers; each returns a process exit code.
int run_sweep(const RunConfig& cfg);
int run_ek_stats(const RunConfig& cfg);
int run_cnc_densities(const RunConfig& cfg);
int run_identity_check(const RunConfig& cfg, const std::vector<i64>& xs);
int run_selmer_of_d(const RunConfig& cfg, i64 d);

}  // namespace selk::harness

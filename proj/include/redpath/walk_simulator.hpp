#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "redpath/free_group.hpp"
#include "redpath/moments.hpp"

namespace redpath {

/// Per-replicate random stream. The engine state depends only on the master
/// seed and the replicate index, so replicate k draws the same letters
/// whatever the thread layout.
class StepStream {
 public:
  StepStream(std::uint64_t master_seed, std::uint64_t replicate);

  /// Uniform over the 2d letters. Throws std::invalid_argument for d < 1.
  Letter draw(int d);

 private:
  std::mt19937_64 engine_;
};

Letter step_sampler(int d, StepStream& stream);

/// Coupling observables after k steps.
struct Checkpoint {
  std::int64_t k = 0;
  std::int64_t S = 0;       // sum of the +-1 increments X_i
  std::int64_t L = 0;       // reduced length
  std::int64_t D = 0;       // L - S
  std::int64_t R = 0;       // #{0 <= j <= k : L_j = 0}
  std::int64_t R_prev = 0;  // same count up to k-1 (0 at k = 0)
  std::int64_t T = 0;       // turns of the reduced word
  std::int64_t min_S = 0;   // min_{0 <= j <= k} S_j
};

struct WalkTrace {
  int d = 2;
  std::int64_t n = 0;
  std::vector<Checkpoint> records;
};

/// Incremental walk on the free group. When the word is empty the letter
/// e_1^{-1} plays the cancelling role, so X_i = -1 has probability 1/(2d) at
/// every step.
class Walker {
 public:
  explicit Walker(int d);

  /// Consumes one letter and returns the increment X in {+1, -1}.
  int step(Letter x);

  Checkpoint state() const;
  const ReducedWord& word() const { return word_; }
  std::int64_t turns() const { return T_; }
  std::int64_t length() const { return static_cast<std::int64_t>(word_.size()); }

 private:
  int d_;
  ReducedWord word_;
  std::int64_t k_ = 0, S_ = 0, D_ = 0, R_ = 1, R_prev_ = 0, T_ = 0, min_S_ = 0;
};

/// Powers of two below n, followed by n.
std::vector<std::int64_t> default_checkpoints(std::int64_t n);

/// Throws std::invalid_argument for d < 2 or n < 1; checkpoints outside
/// [0, n] are rejected, duplicates collapse.
WalkTrace run_walk(int d, std::int64_t n, std::uint64_t seed, std::span<const std::int64_t> checkpoints,
                   std::uint64_t replicate = 0);

/// Same chain driven by a fixed letter sequence; n is the sequence length.
WalkTrace run_forced(int d, std::span<const Letter> steps, std::span<const std::int64_t> checkpoints);

enum class Observable : int { S = 0, L, D, R, T, min_S };
inline constexpr std::size_t kObservableCount = 6;
std::string_view observable_name(Observable o);
double observable_value(const Checkpoint& c, Observable o);

struct MomentSummary {
  int d = 2;
  std::int64_t n = 0;
  std::int64_t replicates = 0;
  std::int64_t merges = 0;
  std::vector<std::int64_t> checkpoints;
  /// moments[i][obs] for checkpoint i.
  std::vector<std::array<RunningMoments, kObservableCount>> moments;

  const RunningMoments& at(std::size_t checkpoint_index, Observable o) const {
    return moments[checkpoint_index][static_cast<std::size_t>(o)];
  }
  /// Throws std::invalid_argument if layouts differ.
  void merge(const MomentSummary& other);
};

MomentSummary run_ensemble(int d, std::int64_t n, std::int64_t replicates, std::uint64_t seed,
                           std::span<const std::int64_t> checkpoints, int threads = 1);

/// Final-time observables of independent replicates, in replicate order.
struct EndpointSample {
  std::vector<std::int64_t> S, L, D, R_prev, T;
};

EndpointSample sample_endpoints(int d, std::int64_t n, std::int64_t replicates, std::uint64_t seed,
                                int threads = 1);

/// Rescaled centred turn process W_t = (T_{tn} - mu t n) / (sigma sqrt(n)),
/// linear between integer times.
struct PathSample {
  int d = 2;
  std::int64_t n = 0;
  double sigma = 0.0;
  double drift = 0.0;
  std::vector<double> grid;                 // t_j = j / m, j = 0..m
  std::vector<std::vector<double>> values;  // values[replicate][j]
  std::vector<double> sup;                  // sup over t in [0,1] per replicate
};

/// Requires m >= 2 and n >= m.
PathSample sample_functional(int d, std::int64_t n, int m, std::int64_t replicates, std::uint64_t seed,
                             int threads = 1);

}  // namespace redpath

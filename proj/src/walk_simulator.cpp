#include "redpath/walk_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "redpath/limit_laws.hpp"
#include "redpath/parallel.hpp"

namespace redpath {

namespace {

std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32),
                    0x72656470u};
  return std::mt19937_64(seq);
}

void require_walk_args(int d, std::int64_t n) {
  if (d < 2) throw std::invalid_argument("d must be >= 2, got " + std::to_string(d));
  if (n < 1) throw std::invalid_argument("n must be >= 1, got " + std::to_string(n));
}

std::vector<std::int64_t> normalized_checkpoints(std::span<const std::int64_t> checkpoints, std::int64_t n) {
  std::vector<std::int64_t> cps(checkpoints.begin(), checkpoints.end());
  if (cps.empty()) cps = default_checkpoints(n);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (cps.front() < 0 || cps.back() > n) {
    throw std::invalid_argument("checkpoints must lie in [0, n]");
  }
  return cps;
}

template <typename NextLetter>
WalkTrace trace_walk(int d, std::int64_t n, const std::vector<std::int64_t>& cps, NextLetter&& next) {
  WalkTrace trace{d, n, {}};
  trace.records.reserve(cps.size());
  Walker walker(d);
  auto cp = cps.begin();
  if (cp != cps.end() && *cp == 0) {
    trace.records.push_back(walker.state());
    ++cp;
  }
  for (std::int64_t k = 1; k <= n && cp != cps.end(); ++k) {
    walker.step(next());
    if (*cp == k) {
      trace.records.push_back(walker.state());
      ++cp;
    }
  }
  return trace;
}

}  // namespace

StepStream::StepStream(std::uint64_t master_seed, std::uint64_t replicate)
    : engine_(make_engine(master_seed, replicate)) {}

Letter StepStream::draw(int d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  std::uniform_int_distribution<int> pick(0, 2 * d - 1);
  return Letter::from_code(pick(engine_));
}

Letter step_sampler(int d, StepStream& stream) { return stream.draw(d); }

Walker::Walker(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
}

int Walker::step(Letter x) {
  if (x.index() > d_) throw std::invalid_argument("letter " + x.str() + " out of range");
  int X = 0;
  if (word_.empty()) {
    X = (x == inv(1)) ? -1 : 1;
    word_.push(x);
    if (X < 0) D_ += 2;
  } else {
    const Letter last = word_.back();
    X = word_.push(x);
    if (X > 0) {
      if (last.index() != x.index()) ++T_;
    } else if (!word_.empty() && word_.back().index() != last.index()) {
      --T_;
    }
  }
  ++k_;
  S_ += X;
  min_S_ = std::min(min_S_, S_);
  R_prev_ = R_;
  if (word_.empty()) ++R_;
  return X;
}

Checkpoint Walker::state() const {
  return Checkpoint{k_, S_, length(), D_, R_, R_prev_, T_, min_S_};
}

std::vector<std::int64_t> default_checkpoints(std::int64_t n) {
  std::vector<std::int64_t> cps;
  for (std::int64_t p = 1; p < n; p *= 2) cps.push_back(p);
  cps.push_back(n);
  return cps;
}

WalkTrace run_walk(int d, std::int64_t n, std::uint64_t seed, std::span<const std::int64_t> checkpoints,
                   std::uint64_t replicate) {
  require_walk_args(d, n);
  const auto cps = normalized_checkpoints(checkpoints, n);
  StepStream stream(seed, replicate);
  return trace_walk(d, n, cps, [&] { return stream.draw(d); });
}

WalkTrace run_forced(int d, std::span<const Letter> steps, std::span<const std::int64_t> checkpoints) {
  const auto n = static_cast<std::int64_t>(steps.size());
  require_walk_args(d, n);
  validate_letters(steps, d);
  const auto cps = normalized_checkpoints(checkpoints, n);
  std::size_t i = 0;
  return trace_walk(d, n, cps, [&] { return steps[i++]; });
}

std::string_view observable_name(Observable o) {
  switch (o) {
    case Observable::S: return "S";
    case Observable::L: return "L";
    case Observable::D: return "D";
    case Observable::R: return "R";
    case Observable::T: return "T";
    case Observable::min_S: return "minS";
  }
  return "?";
}

double observable_value(const Checkpoint& c, Observable o) {
  switch (o) {
    case Observable::S: return static_cast<double>(c.S);
    case Observable::L: return static_cast<double>(c.L);
    case Observable::D: return static_cast<double>(c.D);
    case Observable::R: return static_cast<double>(c.R);
    case Observable::T: return static_cast<double>(c.T);
    case Observable::min_S: return static_cast<double>(c.min_S);
  }
  return 0.0;
}

void MomentSummary::merge(const MomentSummary& other) {
  if (other.replicates == 0) return;
  if (replicates == 0) {
    const auto m = merges;
    *this = other;
    merges += m;
    return;
  }
  if (d != other.d || n != other.n || checkpoints != other.checkpoints) {
    throw std::invalid_argument("cannot merge summaries with different layouts");
  }
  for (std::size_t i = 0; i < moments.size(); ++i) {
    for (std::size_t o = 0; o < kObservableCount; ++o) moments[i][o].merge(other.moments[i][o]);
  }
  replicates += other.replicates;
  merges += other.merges + 1;
}

MomentSummary run_ensemble(int d, std::int64_t n, std::int64_t replicates, std::uint64_t seed,
                           std::span<const std::int64_t> checkpoints, int threads) {
  require_walk_args(d, n);
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const auto cps = normalized_checkpoints(checkpoints, n);

  auto blocks = run_blocks(replicates, threads, [&](std::int64_t begin, std::int64_t end) {
    MomentSummary s{d, n, 0, 0, cps, std::vector<std::array<RunningMoments, kObservableCount>>(cps.size())};
    for (std::int64_t r = begin; r < end; ++r) {
      const auto trace = run_walk(d, n, seed, cps, static_cast<std::uint64_t>(r));
      for (std::size_t i = 0; i < trace.records.size(); ++i) {
        for (std::size_t o = 0; o < kObservableCount; ++o) {
          s.moments[i][o].add(observable_value(trace.records[i], static_cast<Observable>(o)));
        }
      }
      ++s.replicates;
    }
    return s;
  });

  MomentSummary total{d, n, 0, 0, cps, std::vector<std::array<RunningMoments, kObservableCount>>(cps.size())};
  for (const auto& b : blocks) total.merge(b);
  return total;
}

EndpointSample sample_endpoints(int d, std::int64_t n, std::int64_t replicates, std::uint64_t seed, int threads) {
  require_walk_args(d, n);
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const std::int64_t final_only[] = {n};

  auto blocks = run_blocks(replicates, threads, [&](std::int64_t begin, std::int64_t end) {
    std::vector<Checkpoint> out;
    out.reserve(static_cast<std::size_t>(end - begin));
    for (std::int64_t r = begin; r < end; ++r) {
      out.push_back(run_walk(d, n, seed, final_only, static_cast<std::uint64_t>(r)).records.back());
    }
    return out;
  });

  EndpointSample sample;
  for (const auto& b : blocks) {
    for (const auto& c : b) {
      sample.S.push_back(c.S);
      sample.L.push_back(c.L);
      sample.D.push_back(c.D);
      sample.R_prev.push_back(c.R_prev);
      sample.T.push_back(c.T);
    }
  }
  return sample;
}

PathSample sample_functional(int d, std::int64_t n, int m, std::int64_t replicates, std::uint64_t seed,
                             int threads) {
  require_walk_args(d, n);
  if (m < 2) throw std::invalid_argument("grid size m must be >= 2");
  if (n < m) throw std::invalid_argument("n must be >= grid size m");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");

  const auto c = constants(d);
  PathSample out;
  out.d = d;
  out.n = n;
  out.sigma = std::sqrt(c.varslope_T);
  out.drift = c.drift_T;
  for (int j = 0; j <= m; ++j) out.grid.push_back(static_cast<double>(j) / m);

  const double scale = 1.0 / (out.sigma * std::sqrt(static_cast<double>(n)));
  struct Replicate {
    std::vector<double> values;
    double sup;
  };

  auto blocks = run_blocks(replicates, threads, [&](std::int64_t begin, std::int64_t end) {
    std::vector<Replicate> res;
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (std::int64_t r = begin; r < end; ++r) {
      StepStream stream(seed, static_cast<std::uint64_t>(r));
      Walker walker(d);
      w[0] = 0.0;
      double sup = 0.0;
      for (std::int64_t k = 1; k <= n; ++k) {
        walker.step(stream.draw(d));
        w[static_cast<std::size_t>(k)] =
            (static_cast<double>(walker.turns()) - out.drift * static_cast<double>(k)) * scale;
        sup = std::max(sup, w[static_cast<std::size_t>(k)]);
      }
      Replicate rep{std::vector<double>(static_cast<std::size_t>(m) + 1), sup};
      for (int j = 0; j <= m; ++j) {
        const std::int64_t lo = static_cast<std::int64_t>(j) * n / m;
        const std::int64_t rem = static_cast<std::int64_t>(j) * n % m;
        double v = w[static_cast<std::size_t>(lo)];
        if (rem != 0) {
          const double frac = static_cast<double>(rem) / m;
          v += frac * (w[static_cast<std::size_t>(lo) + 1] - v);
        }
        rep.values[static_cast<std::size_t>(j)] = v;
      }
      res.push_back(std::move(rep));
    }
    return res;
  });

  for (auto& b : blocks) {
    for (auto& rep : b) {
      out.values.push_back(std::move(rep.values));
      out.sup.push_back(rep.sup);
    }
  }
  return out;
}

}  // namespace redpath

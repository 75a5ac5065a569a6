#include "redpath/free_group.hpp"

#include <stdexcept>

namespace redpath {

Letter::Letter(int index, int sign) : index_(index), sign_(sign) {
  if (index < 1) throw std::invalid_argument("letter index must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
}

std::string Letter::str() const {
  auto s = "e" + std::to_string(index_);
  if (sign_ < 0) s += "^-1";
  return s;
}

Letter gen(int index) { return Letter(index, 1); }
Letter inv(int index) { return Letter(index, -1); }

void validate_letters(std::span<const Letter> letters, int d) {
  if (d < 1) throw std::invalid_argument("number of generators d must be >= 1");
  for (const auto& x : letters) {
    if (x.index() > d) {
      throw std::invalid_argument("letter " + x.str() + " out of range for d=" + std::to_string(d));
    }
  }
}

int ReducedWord::push(Letter x) {
  if (!letters_.empty() && letters_.back().cancels(x)) {
    letters_.pop_back();
    return -1;
  }
  letters_.push_back(x);
  return +1;
}

std::string ReducedWord::str() const {
  std::string s;
  for (const auto& x : letters_) {
    if (!s.empty()) s += ' ';
    s += x.str();
  }
  return s;
}

ReducedWord reduce(std::span<const Letter> steps) {
  ReducedWord w;
  w.letters_.reserve(steps.size());
  for (const auto& x : steps) w.push(x);
  return w;
}

ReducedWord push_step(ReducedWord w, Letter x) {
  w.push(x);
  return w;
}

std::size_t turn_count(const ReducedWord& w) {
  std::size_t turns = 0;
  for (std::size_t j = 1; j < w.size(); ++j) {
    if (w[j - 1].index() != w[j].index()) ++turns;
  }
  return turns;
}

Pattern::Pattern(std::vector<Letter> ls, MatchMode m) : letters(std::move(ls)), mode(m) {
  if (letters.empty()) throw std::invalid_argument("pattern must be nonempty");
}

namespace {

bool matches_at(const ReducedWord& w, std::size_t pos, const Pattern& p) {
  if (pos + p.letters.size() > w.size()) return false;
  for (std::size_t k = 0; k < p.letters.size(); ++k) {
    const auto& a = w[pos + k];
    const auto& b = p.letters[k];
    if (p.mode == MatchMode::by_index ? a.index() != b.index() : a != b) return false;
  }
  return true;
}

}  // namespace

std::size_t pattern_count(const ReducedWord& w, std::span<const Pattern> patterns) {
  std::size_t count = 0;
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (const auto& p : patterns) {
      if (matches_at(w, pos, p)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::vector<Pattern> turn_patterns(int d) {
  std::vector<Pattern> out;
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) {
      if (i != j) out.emplace_back(std::vector<Letter>{gen(i), gen(j)}, MatchMode::by_index);
    }
  }
  return out;
}

AxisPath reduce_axis(std::span<const AxisSegment> path) {
  AxisPath out;
  out.reserve(path.size());
  for (const auto& seg : path) {
    if (seg.r == 0.0) continue;
    if (!out.empty() && out.back().index == seg.index) {
      out.back().r += seg.r;
      if (out.back().r == 0.0) out.pop_back();
    } else {
      out.push_back(seg);
    }
  }
  return out;
}

bool is_reduced_axis(std::span<const AxisSegment> path) {
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k].r == 0.0) return false;
    if (k > 0 && path[k - 1].index == path[k].index) return false;
  }
  return true;
}

AxisPath reverse_axis(std::span<const AxisSegment> path) {
  AxisPath out(path.rbegin(), path.rend());
  for (auto& seg : out) seg.r = -seg.r;
  return out;
}

std::vector<double> axis_endpoint(std::span<const AxisSegment> path, int d) {
  std::vector<double> end(static_cast<std::size_t>(d), 0.0);
  for (const auto& seg : path) {
    if (seg.index < 1 || seg.index > d) throw std::invalid_argument("segment index out of range");
    end[static_cast<std::size_t>(seg.index - 1)] += seg.r;
  }
  return end;
}

}  // namespace redpath

#include "mds/sampling.hpp"

#include <algorithm>
#include <limits>

namespace mds {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleRng::SampleRng(std::uint64_t master_seed, std::uint64_t index)
    : engine_(splitmix64(master_seed ^ splitmix64(index))) {}

double SampleRng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

CirclePoint SampleRng::point() { return CirclePoint(uniform(0.0, kTwoPi)); }

CirclePoint SampleRng::point_in(const Arc& arc, double margin) {
  const double len = arc.length();
  if (len <= 2.0 * margin) {
    return arc.at(0.5 * len);
  }
  return arc.at(uniform(margin, len - margin));
}

template <std::size_t N>
std::optional<Tuple<N>> draw_sorted_tuple(SampleRng& rng, double gap, int& rejected, int attempts) {
  for (int a = 0; a < attempts; ++a) {
    Tuple<N> q;
    for (auto& p : q) {
      p = rng.point();
    }
    std::sort(q.begin(), q.end(), [](CirclePoint x, CirclePoint y) { return x.theta() < y.theta(); });
    if (min_gap(q) >= gap) {
      return q;
    }
    ++rejected;
  }
  return std::nullopt;
}

template std::optional<Tuple<3>> draw_sorted_tuple<3>(SampleRng&, double, int&, int);
template std::optional<Tuple<4>> draw_sorted_tuple<4>(SampleRng&, double, int&, int);
template std::optional<Tuple<5>> draw_sorted_tuple<5>(SampleRng&, double, int&, int);
template std::optional<Tuple<6>> draw_sorted_tuple<6>(SampleRng&, double, int&, int);
template std::optional<Tuple<7>> draw_sorted_tuple<7>(SampleRng&, double, int&, int);

CheckSummary summarize(std::span<const SampleOutcome> outcomes) {
  CheckSummary s;
  s.samples = outcomes.size();
  s.min_value = std::numeric_limits<double>::infinity();
  s.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    s.skipped += static_cast<std::size_t>(o.rejected);
    if (!o.tested) {
      ++s.skipped;
      continue;
    }
    ++s.tested;
    s.min_value = std::min(s.min_value, o.value);
    s.max_value = std::max(s.max_value, o.value);
    if (o.violation) {
      if (!s.first_violation) {
        s.first_violation = i;
        s.first_witness = o.witness;
      }
      ++s.violations;
    }
  }
  if (s.tested == 0) {
    s.min_value = s.max_value = 0.0;
  }
  return s;
}

std::vector<double> angles_of(std::span<const CirclePoint> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back(p.theta());
  }
  return out;
}

} // namespace mds

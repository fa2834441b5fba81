#pragma once

// Finite checks of x E y <=> f(x) F f(y), and eventual equality on the
// eventually periodic binary sequences.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "vnlab/catalog.hpp"
#include "vnlab/crossed.hpp"
#include "vnlab/error.hpp"
#include "vnlab/mekler.hpp"

namespace vnlab {

// ---------------------------------------------------------------- E0

/// prefix followed by period repeated forever.
struct EventuallyPeriodicBits {
  std::string prefix;
  std::string period;

  EventuallyPeriodicBits(std::string pre, std::string per) : prefix(std::move(pre)), period(std::move(per)) {
    if (period.empty()) throw InputError("period must be nonempty");
    for (char c : prefix + period)
      if (c != '0' && c != '1') throw InputError("bits must be '0' or '1'");
  }

  char at(std::size_t i) const { return i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()]; }
  std::string str() const { return prefix + "(" + period + ")"; }
  friend bool operator==(const EventuallyPeriodicBits&, const EventuallyPeriodicBits&) = default;
};

/// Agreement on a window of lcm of the periods from the longer prefix on.
inline bool e0_equivalent(const EventuallyPeriodicBits& x, const EventuallyPeriodicBits& y) {
  const std::size_t start = std::max(x.prefix.size(), y.prefix.size());
  const std::size_t window = std::lcm(x.period.size(), y.period.size());
  for (std::size_t i = start; i < start + window; ++i)
    if (x.at(i) != y.at(i)) return false;
  return true;
}

/// Complete invariant for E0: with L the primitive period length, the block
/// x[kL, kL + L) for any kL past the prefix. Two sequences are eventually
/// equal iff these blocks coincide.
inline std::string e0_canonical_tail(const EventuallyPeriodicBits& x) {
  const std::string& p = x.period;
  std::size_t prim = p.size();
  for (std::size_t d = 1; d <= p.size(); ++d) {
    if (p.size() % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < p.size() && ok; ++i) ok = p[i] == p[i - d];
    if (ok) {
      prim = d;
      break;
    }
  }
  const std::size_t start = (x.prefix.size() + prim - 1) / prim * prim;
  std::string block;
  for (std::size_t i = start; i < start + prim; ++i) block.push_back(x.at(i));
  return block;
}

/// Every sequence with |prefix| <= max_prefix and 1 <= |period| <= max_period.
inline std::vector<EventuallyPeriodicBits> all_eventually_periodic(std::size_t max_prefix, std::size_t max_period) {
  const auto words = [](std::size_t len) {
    std::vector<std::string> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << len); ++m) {
      std::string s(len, '0');
      for (std::size_t i = 0; i < len; ++i)
        if ((m >> i) & 1U) s[i] = '1';
      out.push_back(s);
    }
    return out;
  };
  std::vector<EventuallyPeriodicBits> out;
  for (std::size_t a = 0; a <= max_prefix; ++a)
    for (const auto& pre : words(a))
      for (std::size_t b = 1; b <= max_period; ++b)
        for (const auto& per : words(b)) out.emplace_back(pre, per);
  return out;
}

// ---------------------------------------------------------------- reductions

struct Counterexample {
  enum class Side {
    EOnly,  // x E y but not f(x) F f(y)
    FOnly,  // f(x) F f(y) but not x E y
  };
  std::size_t first = 0;
  std::size_t second = 0;
  Side side = Side::EOnly;
  std::string description;
};

struct ReductionReport {
  static constexpr std::size_t kMaxCounterexamples = 32;
  bool holds = true;
  std::size_t pairs_checked = 0;
  std::size_t total_counterexamples = 0;
  std::vector<Counterexample> counterexamples;  // first kMaxCounterexamples
};

/// Checks every unordered pair i < j of samples.
template <class Sample, class Image>
ReductionReport verify_reduction(const std::vector<Sample>& samples,
                                 const std::function<bool(const Sample&, const Sample&)>& e_relation,
                                 const std::function<Image(const Sample&)>& map,
                                 const std::function<bool(const Image&, const Image&)>& f_relation,
                                 const std::function<std::string(const Sample&)>& describe = {}) {
  ReductionReport r;
  std::vector<Image> images;
  images.reserve(samples.size());
  for (const auto& s : samples) images.push_back(map(s));
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      ++r.pairs_checked;
      const bool e = e_relation(samples[i], samples[j]);
      const bool f = f_relation(images[i], images[j]);
      if (e == f) continue;
      ++r.total_counterexamples;
      if (r.counterexamples.size() < ReductionReport::kMaxCounterexamples) {
        Counterexample c{i, j, e ? Counterexample::Side::EOnly : Counterexample::Side::FOnly, {}};
        if (describe) c.description = describe(samples[i]) + " | " + describe(samples[j]);
        r.counterexamples.push_back(std::move(c));
      }
    }
  r.holds = r.total_counterexamples == 0;
  return r;
}

// ---------------------------------------------------------------- wired instances

/// Graphs on at most max_n vertices passing the niceness predicate.
inline std::vector<SimpleGraph> nice_graphs(std::size_t max_n,
                                            const std::function<bool(const SimpleGraph&)>& nice = [](const SimpleGraph& g) {
                                              return is_nice(g);
                                            }) {
  std::vector<SimpleGraph> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    for (auto& g : all_graphs(n))
      if (nice(g)) out.push_back(std::move(g));
  return out;
}

/// (graphs, isomorphism) -> (Mekler fingerprints at p, equality).
inline ReductionReport mekler_fingerprint_reduction(const std::vector<SimpleGraph>& graphs, std::uint32_t p = 3) {
  return verify_reduction<SimpleGraph, GroupFingerprint>(
      graphs, [](const SimpleGraph& a, const SimpleGraph& b) { return graph_iso(a, b).has_value(); },
      [p](const SimpleGraph& g) { return fingerprint(MeklerGroup(g, p)); },
      [](const GroupFingerprint& a, const GroupFingerprint& b) { return a == b; },
      [](const SimpleGraph& g) { return g.str(); });
}

/// (actions, orbit equivalence) -> (Cartan invariants of crossed products, equality).
inline ReductionReport feldman_moore_reduction(const std::vector<FiniteAction>& actions, const Caps& caps = {}) {
  return verify_reduction<FiniteAction, OrbitSignature>(
      actions, [](const FiniteAction& a, const FiniteAction& b) { return orbit_equivalent(a, b); },
      [&caps](const FiniteAction& a) { return cartan_invariant(crossed_product(a, caps)); },
      [](const OrbitSignature& a, const OrbitSignature& b) { return a == b; },
      [](const FiniteAction& a) { return a.name(); });
}

/// (eventually periodic bits, E0) -> (canonical tails, equality).
inline ReductionReport e0_reduction(const std::vector<EventuallyPeriodicBits>& xs) {
  return verify_reduction<EventuallyPeriodicBits, std::string>(
      xs, [](const auto& a, const auto& b) { return e0_equivalent(a, b); },
      [](const EventuallyPeriodicBits& x) { return e0_canonical_tail(x); },
      [](const std::string& a, const std::string& b) { return a == b; },
      [](const EventuallyPeriodicBits& x) { return x.str(); });
}

}  // namespace vnlab

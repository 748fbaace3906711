#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "crlab/common.hpp"

namespace crlab {

using TrialEngine = boost::random::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream key for trial `index` under master seed `seed`.
inline std::uint64_t trial_key(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline TrialEngine trial_engine(std::uint64_t seed, std::uint64_t index) {
  return TrialEngine(trial_key(seed, index));
}

// Complex Gaussian with E|a|^2 = 1.
inline cdouble complex_normal(TrialEngine& eng) {
  boost::random::normal_distribution<double> g(0.0, std::sqrt(0.5));
  const double re = g(eng);
  const double im = g(eng);
  return {re, im};
}

}  // namespace crlab

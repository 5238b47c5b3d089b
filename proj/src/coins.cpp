#include "flowfactory/coins.hpp"

#include <algorithm>
#include <numeric>

#include "flowfactory/error.hpp"

namespace flowfactory {

SimulatedCoins::SimulatedCoins(const InteriorPoint& biases, std::uint64_t seed)
    : counts_(biases.size(), 0), stream_(seed) {
  num_.reserve(biases.size());
  den_.reserve(biases.size());
  for (EdgeId e = 0; e < biases.size(); ++e) {
    const Rational& p = biases[e];
    if (p < 0 || p > 1) fail(ErrorCode::InvalidInstance, "bias of edge " + std::to_string(e) + " outside [0,1]");
    num_.push_back(p.get_num());
    den_.push_back(p.get_den());
  }
  const bool small = std::all_of(den_.begin(), den_.end(), [](const BigInt& d) { return d.fits_ulong_p(); });
  if (small) {
    for (EdgeId e = 0; e < den_.size(); ++e) {
      small_num_.push_back(num_[e].get_ui());
      small_den_.push_back(den_[e].get_ui());
    }
  }
}

bool SimulatedCoins::flip(EdgeId e) {
  if (e >= counts_.size()) fail(ErrorCode::InvalidInstance, "no coin for edge " + std::to_string(e));
  ++counts_[e];
  if (!small_den_.empty()) return stream_.below(small_den_[e]) < small_num_[e];
  return stream_.bernoulli(num_[e], den_[e]);
}

std::uint64_t SimulatedCoins::total_flips() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

bool RecordingCoins::flip(EdgeId e) {
  bool bit = inner_.flip(e);
  tape_.push_back({e, bit});
  return bit;
}

bool ReplayCoins::flip(EdgeId e) {
  if (position_ >= tape_.size()) fail(ErrorCode::IdentityViolated, "coin tape exhausted");
  const TapeRecord& rec = tape_[position_++];
  if (rec.edge != e) {
    fail(ErrorCode::IdentityViolated, "tape position " + std::to_string(position_ - 1) + " recorded edge " +
                                          std::to_string(rec.edge) + ", sampler asked for " + std::to_string(e));
  }
  return rec.bit;
}

}  // namespace flowfactory

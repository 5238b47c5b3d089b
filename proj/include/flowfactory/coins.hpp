#pragma once

#include <cstdint>
#include <vector>

#include "flowfactory/graph.hpp"
#include "flowfactory/io.hpp"
#include "flowfactory/random.hpp"

namespace flowfactory {

/// The only channel to the unknown biases: one bit per call, i.i.d. per edge.
class CoinSource {
 public:
  virtual ~CoinSource() = default;
  virtual bool flip(EdgeId e) = 0;
};

/// Test harness coins with fixed rational biases. The biases cannot be read
/// back; a flip is an exact Bernoulli(num/den) draw from its own stream.
class SimulatedCoins final : public CoinSource {
 public:
  SimulatedCoins(const InteriorPoint& biases, std::uint64_t seed);

  bool flip(EdgeId e) override;

  std::size_t coin_count() const { return counts_.size(); }
  std::uint64_t flip_count(EdgeId e) const { return counts_.at(e); }
  std::uint64_t total_flips() const;

 private:
  std::vector<BigInt> num_;
  std::vector<BigInt> den_;
  std::vector<std::uint64_t> small_num_;  // copies when every den fits 64 bits
  std::vector<std::uint64_t> small_den_;
  std::vector<std::uint64_t> counts_;
  UniformSource stream_;
};

/// Forwards to another source and keeps the consumed tape.
class RecordingCoins final : public CoinSource {
 public:
  explicit RecordingCoins(CoinSource& inner) : inner_(inner) {}

  bool flip(EdgeId e) override;
  const std::vector<TapeRecord>& tape() const { return tape_; }

 private:
  CoinSource& inner_;
  std::vector<TapeRecord> tape_;
};

/// Plays back a recorded tape. Knows nothing about biases; asking for a
/// different edge than recorded, or past the end, is an IdentityViolated.
class ReplayCoins final : public CoinSource {
 public:
  explicit ReplayCoins(std::vector<TapeRecord> tape) : tape_(std::move(tape)) {}

  bool flip(EdgeId e) override;
  bool exhausted() const { return position_ == tape_.size(); }

 private:
  std::vector<TapeRecord> tape_;
  std::size_t position_ = 0;
};

/// Presents a sub-polytope's edge ids on top of the parent's coins.
class RemappedCoins final : public CoinSource {
 public:
  RemappedCoins(CoinSource& inner, std::vector<EdgeId> to_parent)
      : inner_(inner), to_parent_(std::move(to_parent)) {}

  bool flip(EdgeId e) override { return inner_.flip(to_parent_.at(e)); }

 private:
  CoinSource& inner_;
  std::vector<EdgeId> to_parent_;
};

}  // namespace flowfactory

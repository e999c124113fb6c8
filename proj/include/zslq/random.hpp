#pragma once

#include <cstdint>
#include <random>

#include "zslq/model.hpp"

namespace zslq {

/// Seeded Gaussian source. Each run owns several independent streams, one per
/// role (disturbance, exploration, initialization), derived from the run seed
/// and a stream tag so that changing one role never shifts another.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  double normal() { return normal_(engine_); }
  Vector normal(Eigen::Index size);

  static constexpr const char* kEngineName = "mt19937_64/seed_seq(seed,stream)";

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

enum class StreamTag : std::uint64_t {
  kDisturbance = 1,
  kExploration = 2,
  kInitialization = 3,
};

}  // namespace zslq

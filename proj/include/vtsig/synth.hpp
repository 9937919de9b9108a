#pragma once

#include <cstdint>
#include <filesystem>

namespace vtsig {

// Synthetic two-class dataset in which the classes differ only by frame
// order: subjects come in pairs sharing identical per-turn, per-dimension
// value multisets; the class-1 subject's frames are sorted ascending, the
// class-0 subject's are shuffled. Order-free statistics are therefore
// identically distributed across classes while order-sensitive aggregators
// can separate them. The severity score mixes the class label with an
// order-free per-pair shape nuisance so that correlation-based selection has
// something to find for every aggregator.
struct SynthParams {
  std::size_t n_subjects = 60;  // even; pairs of (class 1, class 0)
  std::size_t turns_per_subject = 10;
  std::size_t frames_per_turn = 30;
  std::size_t dim = 3;
  std::uint64_t seed = 0;
};

/// Writes manifest.json plus matrices/ under out_dir; returns the manifest
/// path. The written dataset ingests with zero warnings.
std::filesystem::path synth_generate(const SynthParams& params,
                                     const std::filesystem::path& out_dir);

}  // namespace vtsig

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dtel/core.hpp"
#include "dtel/rng.hpp"

namespace dtel {

enum class StreamFamily { sea, rot, cir, sin, sta };
// A: the more dramatic drift schedule, G: the gentler one.
enum class DriftVariant { A, G };

std::string_view family_name(StreamFamily family);

// Piecewise-constant concept schedule; the last segment absorbs any
// remainder when the step count does not divide evenly.
template <class Setting>
struct DriftSchedule {
  std::vector<Setting> segments;
  std::size_t chunks_per_segment = 1;

  std::size_t segment_of(std::size_t step) const {
    return std::min(step / chunks_per_segment, segments.size() - 1);
  }
  const Setting& at(std::size_t step) const { return segments[segment_of(step)]; }
};

enum class Connective { conj, disj };

// label = (color == color_value) <op> (shape == shape_value).
struct StaggerRule {
  std::size_t color = 0;  // index into {R, B, G}
  Connective op = Connective::conj;
  std::size_t shape = 0;  // index into {C, S, T}

  bool operator()(std::size_t color_code, std::size_t shape_code) const;
};

struct DriftStreamConfig {
  StreamFamily family = StreamFamily::sea;
  DriftVariant variant = DriftVariant::A;
  std::size_t chunk_size = 200;
  std::size_t n_steps = 120;
  double noise_rate = 0.10;
  // Whether test chunks receive the same label noise as train chunks.
  bool test_noise = false;
  std::uint64_t seed = 1;

  // Preset name such as "SEA200A".
  std::string name() const;
  void validate() const;
  // Parses "<FAMILY><chunk size><A|G>", e.g. "ROT500G". Throws InputError.
  static DriftStreamConfig from_preset(std::string_view preset, std::uint64_t seed = 1);
};

// The fifteen named streams of the benchmark table.
std::vector<std::string> standard_presets();

struct ChunkPair {
  Chunk train;
  Chunk test;
};

std::shared_ptr<const Schema> stream_schema(StreamFamily family);

DriftSchedule<double> sea_schedule(DriftVariant variant, std::size_t n_steps);
DriftSchedule<double> cir_schedule(DriftVariant variant, std::size_t n_steps);
DriftSchedule<StaggerRule> sta_schedule(DriftVariant variant, std::size_t n_steps);
// Per-step increment of the cumulative angle for ROT and SIN.
double angle_increment(DriftVariant variant);

// Concept rules; label 1 on the "<=" side.
Label sea_label(double x1, double x2, double theta);
Label cir_label(double x1, double x2, double radius);
Label sin_label(double x1, double x2, double theta);
// Rotation of (x1, x2) about (cx, cy) by `angle`.
std::pair<double, double> rotate_point(double x1, double x2, double angle, double cx = 0.0, double cy = 0.0);

// Cluster radius of the ROT source data.
inline constexpr double kRotClusterSigma = 0.15;
inline constexpr std::size_t kRotClasses = 6;

// Families whose test chunks are noisy by default (CIR, SIN, STA).
bool default_test_noise(StreamFamily family);

// Clean train/test chunks for one step, then label noise on the train chunk
// (and on the test chunk when config.test_noise is set).
// Each (config.seed, step) names its own random sub-stream.
ChunkPair gen_sea(const DriftStreamConfig& config, std::size_t step);
ChunkPair gen_rot(const DriftStreamConfig& config, std::size_t step);
ChunkPair gen_cir(const DriftStreamConfig& config, std::size_t step);
ChunkPair gen_sin(const DriftStreamConfig& config, std::size_t step);
ChunkPair gen_sta(const DriftStreamConfig& config, std::size_t step);
ChunkPair generate_step(const DriftStreamConfig& config, std::size_t step);

// Replaces the labels of floor(rate * |chunk|) uniformly chosen instances by
// a uniformly chosen different label.
Chunk add_noise(const Chunk& chunk, double rate, SeededRng& rng);

std::vector<ChunkPair> make_stream(const DriftStreamConfig& config);

// The noise-free label the concept active at `step` assigns to `instance`.
Label concept_label(const DriftStreamConfig& config, std::size_t step, const Instance& instance);

}  // namespace dtel

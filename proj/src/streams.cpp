#include "dtel/streams.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace dtel {

namespace {

constexpr std::size_t kColorR = 0, kColorB = 1, kColorG = 2;
constexpr std::size_t kShapeC = 0, kShapeS = 1, kShapeT = 2;

template <class Setting>
DriftSchedule<Setting> even_schedule(std::vector<Setting> segments, std::size_t n_steps) {
  const std::size_t per = std::max<std::size_t>(1, n_steps / segments.size());
  return {std::move(segments), per};
}

struct StepRngs {
  SeededRng train;
  SeededRng test;
  SeededRng noise;
  SeededRng test_noise;
};

StepRngs step_rngs(const DriftStreamConfig& config, std::size_t step) {
  const SeededRng base = SeededRng(config.seed).fork(step);
  return {base.fork(0), base.fork(1), base.fork(2), base.fork(3)};
}

template <class Draw>
ChunkPair generate_pair(const DriftStreamConfig& config, std::size_t step, Draw draw) {
  config.validate();
  auto rngs = step_rngs(config, step);
  const auto schema = stream_schema(config.family);
  Chunk train{step, schema, {}};
  Chunk test{step, schema, {}};
  train.instances.reserve(config.chunk_size);
  test.instances.reserve(config.chunk_size);
  for (std::size_t i = 0; i < config.chunk_size; ++i) train.instances.push_back(draw(rngs.train));
  for (std::size_t i = 0; i < config.chunk_size; ++i) test.instances.push_back(draw(rngs.test));
  ChunkPair pair;
  pair.train = add_noise(train, config.noise_rate, rngs.noise);
  pair.test = config.test_noise ? add_noise(test, config.noise_rate, rngs.test_noise) : std::move(test);
  return pair;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view family_name(StreamFamily family) {
  switch (family) {
    case StreamFamily::sea: return "SEA";
    case StreamFamily::rot: return "ROT";
    case StreamFamily::cir: return "CIR";
    case StreamFamily::sin: return "SIN";
    case StreamFamily::sta: return "STA";
  }
  return "?";
}

bool default_test_noise(StreamFamily family) {
  return family == StreamFamily::cir || family == StreamFamily::sin || family == StreamFamily::sta;
}

bool StaggerRule::operator()(std::size_t color_code, std::size_t shape_code) const {
  const bool a = color_code == color;
  const bool b = shape_code == shape;
  return op == Connective::conj ? (a && b) : (a || b);
}

std::string DriftStreamConfig::name() const {
  return std::string(family_name(family)) + std::to_string(chunk_size) + (variant == DriftVariant::A ? "A" : "G");
}

void DriftStreamConfig::validate() const {
  if (chunk_size < 1) throw InputError("chunk size must be positive");
  if (n_steps < 1) throw InputError("step count must be positive");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw InputError("noise rate must lie in [0, 1]");
}

DriftStreamConfig DriftStreamConfig::from_preset(std::string_view preset, std::uint64_t seed) {
  const std::string p = upper(preset);
  if (p.size() < 5) throw InputError("bad stream preset '" + std::string(preset) + "'");
  DriftStreamConfig cfg;
  const std::string fam = p.substr(0, 3);
  if (fam == "SEA")
    cfg.family = StreamFamily::sea;
  else if (fam == "ROT")
    cfg.family = StreamFamily::rot;
  else if (fam == "CIR")
    cfg.family = StreamFamily::cir;
  else if (fam == "SIN")
    cfg.family = StreamFamily::sin;
  else if (fam == "STA")
    cfg.family = StreamFamily::sta;
  else
    throw InputError("unknown stream family in '" + std::string(preset) + "'");

  const char v = p.back();
  if (v != 'A' && v != 'G') throw InputError("stream preset must end in A or G: '" + std::string(preset) + "'");
  cfg.variant = v == 'A' ? DriftVariant::A : DriftVariant::G;

  const std::string digits = p.substr(3, p.size() - 4);
  std::size_t size = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), size);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || size == 0)
    throw InputError("bad chunk size in preset '" + std::string(preset) + "'");
  cfg.chunk_size = size;
  cfg.test_noise = default_test_noise(cfg.family);
  cfg.seed = seed;
  return cfg;
}

std::vector<std::string> standard_presets() {
  std::vector<std::string> out;
  for (const char* fam : {"SEA", "ROT", "CIR", "SIN", "STA"})
    for (const char* suffix : {"200A", "200G", "500G"}) out.push_back(std::string(fam) + suffix);
  return out;
}

std::shared_ptr<const Schema> stream_schema(StreamFamily family) {
  static const auto numeric = [](std::size_t n, std::size_t classes) {
    auto s = std::make_shared<Schema>();
    s->features.assign(n, FeatureDescriptor::numeric());
    s->num_classes = classes;
    return std::shared_ptr<const Schema>(std::move(s));
  };
  static const std::shared_ptr<const Schema> sea = numeric(3, 2);
  static const std::shared_ptr<const Schema> rot = numeric(2, kRotClasses);
  static const std::shared_ptr<const Schema> cir = numeric(3, 2);
  static const std::shared_ptr<const Schema> sin = numeric(2, 2);
  static const std::shared_ptr<const Schema> sta = [] {
    auto s = std::make_shared<Schema>();
    s->features = {FeatureDescriptor::categorical({"R", "B", "G"}), FeatureDescriptor::categorical({"C", "S", "T"}),
                   FeatureDescriptor::categorical({"S", "M", "L"})};
    s->num_classes = 2;
    return std::shared_ptr<const Schema>(std::move(s));
  }();
  switch (family) {
    case StreamFamily::sea: return sea;
    case StreamFamily::rot: return rot;
    case StreamFamily::cir: return cir;
    case StreamFamily::sin: return sin;
    case StreamFamily::sta: return sta;
  }
  throw std::logic_error("unknown stream family");
}

DriftSchedule<double> sea_schedule(DriftVariant variant, std::size_t n_steps) {
  if (variant == DriftVariant::A) return even_schedule<double>({10, 7, 3, 7, 10, 13, 16, 13}, n_steps);
  return even_schedule<double>({10, 8, 6, 8, 10, 12, 14, 12}, n_steps);
}

DriftSchedule<double> cir_schedule(DriftVariant variant, std::size_t n_steps) {
  if (variant == DriftVariant::A) return even_schedule<double>({3, 2, 1, 2, 3, 4, 5, 4}, n_steps);
  return even_schedule<double>({3, 2.5, 2, 2.5, 3, 3.5, 4, 3.5}, n_steps);
}

DriftSchedule<StaggerRule> sta_schedule(DriftVariant variant, std::size_t n_steps) {
  using C = Connective;
  if (variant == DriftVariant::A) {
    return even_schedule<StaggerRule>({{kColorR, C::conj, kShapeC},
                                       {kColorB, C::disj, kShapeC},
                                       {kColorG, C::disj, kShapeS},
                                       {kColorG, C::conj, kShapeT},
                                       {kColorG, C::disj, kShapeC},
                                       {kColorR, C::disj, kShapeS}},
                                      n_steps);
  }
  return even_schedule<StaggerRule>({{kColorR, C::conj, kShapeC},
                                     {kColorB, C::conj, kShapeC},
                                     {kColorB, C::disj, kShapeC},
                                     {kColorB, C::disj, kShapeS},
                                     {kColorB, C::conj, kShapeS},
                                     {kColorG, C::conj, kShapeS}},
                                    n_steps);
}

double angle_increment(DriftVariant variant) {
  return variant == DriftVariant::A ? std::numbers::pi / 30.0 : std::numbers::pi / 60.0;
}

Label sea_label(double x1, double x2, double theta) { return x1 + x2 <= theta ? 1 : 0; }

Label cir_label(double x1, double x2, double radius) { return x1 * x1 + x2 * x2 <= radius * radius ? 1 : 0; }

Label sin_label(double x1, double x2, double theta) { return std::sin(x1 + theta) <= x2 ? 1 : 0; }

std::pair<double, double> rotate_point(double x1, double x2, double angle, double cx, double cy) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double dx = x1 - cx;
  const double dy = x2 - cy;
  return {dx * c - dy * s + cx, dx * s + dy * c + cy};
}

ChunkPair gen_sea(const DriftStreamConfig& config, std::size_t step) {
  const double theta = sea_schedule(config.variant, config.n_steps).at(step);
  return generate_pair(config, step, [theta](SeededRng& rng) {
    Instance inst;
    inst.values = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
    inst.label = sea_label(inst.values[0], inst.values[1], theta);
    return inst;
  });
}

ChunkPair gen_rot(const DriftStreamConfig& config, std::size_t step) {
  const double angle = static_cast<double>(step) * angle_increment(config.variant);
  return generate_pair(config, step, [angle](SeededRng& rng) {
    const auto cls = static_cast<Label>(rng.below(kRotClasses));
    const double center = static_cast<double>(cls) * std::numbers::pi / 3.0;
    const double x1 = std::cos(center) + kRotClusterSigma * rng.normal();
    const double x2 = std::sin(center) + kRotClusterSigma * rng.normal();
    const auto [r1, r2] = rotate_point(x1, x2, angle);
    return Instance{{r1, r2}, cls};
  });
}

ChunkPair gen_cir(const DriftStreamConfig& config, std::size_t step) {
  const double radius = cir_schedule(config.variant, config.n_steps).at(step);
  return generate_pair(config, step, [radius](SeededRng& rng) {
    Instance inst;
    inst.values = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    inst.label = cir_label(inst.values[0], inst.values[1], radius);
    return inst;
  });
}

ChunkPair gen_sin(const DriftStreamConfig& config, std::size_t step) {
  const double theta = static_cast<double>(step) * angle_increment(config.variant);
  return generate_pair(config, step, [theta](SeededRng& rng) {
    Instance inst;
    inst.values = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    inst.label = sin_label(inst.values[0], inst.values[1], theta);
    return inst;
  });
}

ChunkPair gen_sta(const DriftStreamConfig& config, std::size_t step) {
  const StaggerRule rule = sta_schedule(config.variant, config.n_steps).at(step);
  return generate_pair(config, step, [rule](SeededRng& rng) {
    Instance inst;
    const auto color = rng.below(3);
    const auto shape = rng.below(3);
    const auto size = rng.below(3);
    inst.values = {static_cast<double>(color), static_cast<double>(shape), static_cast<double>(size)};
    inst.label = rule(color, shape) ? 1 : 0;
    return inst;
  });
}

ChunkPair generate_step(const DriftStreamConfig& config, std::size_t step) {
  switch (config.family) {
    case StreamFamily::sea: return gen_sea(config, step);
    case StreamFamily::rot: return gen_rot(config, step);
    case StreamFamily::cir: return gen_cir(config, step);
    case StreamFamily::sin: return gen_sin(config, step);
    case StreamFamily::sta: return gen_sta(config, step);
  }
  throw std::logic_error("unknown stream family");
}

Chunk add_noise(const Chunk& chunk, double rate, SeededRng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("noise rate must lie in [0, 1]");
  Chunk out = chunk;
  const std::size_t n = chunk.size();
  const auto flips = static_cast<std::size_t>(std::floor(rate * static_cast<double>(n) + 1e-9));
  if (flips == 0) return out;
  const std::size_t k = chunk.schema->num_classes;
  // Partial Fisher-Yates: the first `flips` slots are a uniform subset.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < flips; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
    auto& label = out.instances[order[i]].label;
    label = static_cast<Label>((label + 1 + rng.below(k - 1)) % k);
  }
  return out;
}

std::vector<ChunkPair> make_stream(const DriftStreamConfig& config) {
  config.validate();
  std::vector<ChunkPair> stream;
  stream.reserve(config.n_steps);
  for (std::size_t step = 0; step < config.n_steps; ++step) stream.push_back(generate_step(config, step));
  return stream;
}

Label concept_label(const DriftStreamConfig& config, std::size_t step, const Instance& instance) {
  const auto& v = instance.values;
  switch (config.family) {
    case StreamFamily::sea: return sea_label(v[0], v[1], sea_schedule(config.variant, config.n_steps).at(step));
    case StreamFamily::cir: return cir_label(v[0], v[1], cir_schedule(config.variant, config.n_steps).at(step));
    case StreamFamily::sin:
      return sin_label(v[0], v[1], static_cast<double>(step) * angle_increment(config.variant));
    case StreamFamily::sta:
      return sta_schedule(config.variant, config.n_steps)
                     .at(step)(static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]))
                 ? 1
                 : 0;
    case StreamFamily::rot:
      throw std::logic_error("ROT labels are cluster memberships, not a rule of the features");
  }
  throw std::logic_error("unknown stream family");
}

}  // namespace dtel

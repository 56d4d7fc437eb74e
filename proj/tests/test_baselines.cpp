#include "doctest.h"
#include "dtel/baselines.hpp"
#include "dtel/learner.hpp"
#include "dtel/streams.hpp"
#include "support.hpp"

using namespace dtel;
using fixtures::line;

namespace {

TreePtr constant_tree(Label y, std::shared_ptr<const Schema> schema) {
  std::vector<std::uint32_t> counts(schema->num_classes, 0);
  counts[y] = 1;
  std::vector<TreeNode> nodes{TreeNode{0, make_leaf(counts)}};
  return std::make_shared<const Tree>(std::move(nodes), schema, StoppingParams{}, 0);
}

}  // namespace

TEST_CASE("majority vote ties go to the lowest class") {
  const std::vector<Label> v{1, 0, 1, 0};
  CHECK(majority_vote(v, 2) == 0);
  const std::vector<Label> w{2, 2, 1};
  CHECK(majority_vote(w, 3) == 2);
}

TEST_CASE("sea warm-up appends") {
  const auto chunk = line({{1, 0}, {2, 1}});
  SeaEnsemble sea;
  sea.capacity = 3;
  const auto next = sea_process_chunk(sea, chunk, {});
  CHECK(next.models.size() == 1);
}

TEST_CASE("sea keeps the ensemble when no replacement helps") {
  std::vector<std::vector<Label>> archived{{0, 1, 1}, {0, 1, 1}, {0, 1, 1}};
  const std::vector<Label> fresh{0, 1, 1};
  const std::vector<Label> labels{0, 1, 0};
  CHECK_FALSE(sea_select_replacement(archived, fresh, labels, 2).has_value());
}

TEST_CASE("sea replaces the model that is always wrong") {
  std::vector<Label> labels{0, 1, 0, 1, 1, 0, 0, 1, 1, 0};
  std::vector<Label> wrong;
  for (Label y : labels) wrong.push_back(1 - y);
  std::vector<Label> noisy = labels;
  noisy[0] = 1;
  noisy[5] = 1;
  std::vector<Label> noisy2 = labels;
  noisy2[3] = 0;
  std::vector<std::vector<Label>> archived{noisy, wrong, noisy2};
  const auto got = sea_select_replacement(archived, labels, labels, 2);
  CHECK(got == oracle::sea_replacement(archived, labels, labels, 2));
  REQUIRE(got.has_value());
  CHECK(*got == 1);
}

TEST_CASE("sea replacement matches brute force") {
  SeededRng rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + rng.below(9);
    const std::size_t n = 5 + rng.below(30);
    const std::size_t k = 2 + rng.below(2);
    std::vector<Label> labels(n);
    for (auto& y : labels) y = static_cast<Label>(rng.below(k));
    auto noisy = [&](double p) {
      std::vector<Label> v = labels;
      for (auto& y : v)
        if (rng.uniform() < p) y = static_cast<Label>(rng.below(k));
      return v;
    };
    std::vector<std::vector<Label>> archived;
    for (std::size_t i = 0; i < m; ++i) archived.push_back(noisy(rng.uniform()));
    const auto fresh = noisy(0.3);
    CHECK(sea_select_replacement(archived, fresh, labels, k) == oracle::sea_replacement(archived, fresh, labels, k));
  }
}

TEST_CASE("sea moves the replacement to the newest slot") {
  const auto chunk = line({{1, 0}, {2, 0}, {8, 1}, {9, 1}});
  SeaEnsemble sea;
  sea.capacity = 3;
  const auto a = constant_tree(0, chunk.schema), b = constant_tree(1, chunk.schema), c = constant_tree(0, chunk.schema);
  sea.models = {a, b, c};
  const auto next = sea_process_chunk(sea, chunk, {});
  REQUIRE(next.models.size() == 3);
  CHECK(next.models[0] == b);
  CHECK(next.models[1] == c);
  CHECK(next.models[2]->serialize() == train_cart(chunk, {}).serialize());
}

TEST_CASE("ablations agree with full DTEL where transfer cannot matter") {
  SeededRng rng(12);
  const auto chunk = fixtures::random_consistent_chunk(fixtures::numeric_schema(2), 80, rng, 0, false);
  DtelConfig cfg;
  cfg.archive_capacity = 3;
  Archive full, ablated;
  full.capacity = ablated.capacity = 3;
  for (std::size_t t = 0; t < 5; ++t) {
    Chunk c = chunk;
    c.index = t;
    auto a = process_chunk(full, c, cfg);
    auto b = dtel_no_transfer(ablated, c, cfg);
    for (const auto& x : c) CHECK(a.ensemble.predict(x).label == b.ensemble.predict(x).label);
    full = std::move(a.archive);
    ablated = std::move(b.archive);
  }

  const auto first = line({{1, 0}, {2, 1}});
  Archive empty;
  CHECK(dtel_accuracy_archive(empty, first, {}).ensemble.members.size() == 1);
  CHECK(dtel_no_transfer(empty, first, {}).archive.size() == 1);
}

TEST_CASE("transfer helps after an abrupt label inversion") {
  // Two concepts on the same inputs, switching every 5 chunks.
  SeededRng rng(5);
  const auto schema = fixtures::numeric_schema(2);
  auto make = [&](std::size_t t) {
    std::vector<Instance> xs;
    const bool flip = (t / 5) % 2 == 1;
    for (int i = 0; i < 100; ++i) {
      const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
      const bool y = (a + b > 0) != flip;
      xs.push_back({{a, b}, static_cast<Label>(y)});
    }
    return fixtures::chunk_of(schema, xs, t);
  };
  DtelConfig cfg;
  cfg.archive_capacity = 6;
  Archive a, b;
  a.capacity = b.capacity = 6;
  double acc_full = 0, acc_ablated = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    const auto train = make(t);
    const auto test = make(t);
    auto sa = process_chunk(a, train, cfg);
    auto sb = dtel_no_transfer(b, train, cfg);
    for (const auto& x : test) {
      acc_full += sa.ensemble.predict(x).label == x.label;
      acc_ablated += sb.ensemble.predict(x).label == x.label;
    }
    a = std::move(sa.archive);
    b = std::move(sb.archive);
  }
  CHECK(acc_full > acc_ablated);
}

TEST_CASE("learner registry") {
  CHECK(registered_learners() == std::vector<std::string>{"dtel", "dtel-no-transfer", "dtel-acc-archive", "sea"});
  CHECK(is_registered_learner("sea"));
  CHECK_FALSE(is_registered_learner("aue2"));
  CHECK_THROWS_AS(make_learner("aue2", {}), InputError);
  DtelConfig bad;
  bad.epsilon = -1;
  CHECK_THROWS_AS(make_learner("dtel", bad), InputError);

  const auto chunk = line({{1, 0}, {2, 0}, {8, 1}, {9, 1}});
  for (const auto& name : registered_learners()) {
    auto learner = make_learner(name, {});
    CHECK(learner->name() == name);
    learner->update(chunk);
    for (const auto& x : chunk) CHECK(learner->predict(x) == x.label);
  }
}

TEST_CASE("every learner respects the archive capacity") {
  auto stream_cfg = DriftStreamConfig::from_preset("STA200A", 2);
  stream_cfg.n_steps = 10;
  const auto stream = make_stream(stream_cfg);
  DtelConfig cfg;
  cfg.archive_capacity = 3;
  SeaEnsemble sea;
  sea.capacity = 3;
  Archive d, n, acc;
  d.capacity = n.capacity = acc.capacity = 3;
  for (const auto& pair : stream) {
    sea = sea_process_chunk(sea, pair.train, cfg);
    d = process_chunk(d, pair.train, cfg).archive;
    n = dtel_no_transfer(n, pair.train, cfg).archive;
    acc = dtel_accuracy_archive(acc, pair.train, cfg).archive;
    CHECK(sea.models.size() <= 3);
    CHECK(d.size() <= 3);
    CHECK(n.size() <= 3);
    CHECK(acc.size() <= 3);
  }
}

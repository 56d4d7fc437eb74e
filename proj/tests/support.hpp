#pragma once

// Fixture builders and straight-line reference implementations used by the
// unit tests and the acceptance runner. The references deliberately avoid
// the library's own helpers so that agreement means something.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "dtel/cart.hpp"
#include "dtel/core.hpp"
#include "dtel/diversity.hpp"
#include "dtel/rng.hpp"

namespace fixtures {

using dtel::Chunk;
using dtel::Instance;
using dtel::Label;
using dtel::Schema;

inline std::shared_ptr<const Schema> numeric_schema(std::size_t features, std::size_t classes = 2) {
  auto s = std::make_shared<Schema>();
  s->features.assign(features, dtel::FeatureDescriptor::numeric());
  s->num_classes = classes;
  return s;
}

inline std::shared_ptr<const Schema> categorical_schema(std::vector<std::size_t> arities, std::size_t classes = 2) {
  auto s = std::make_shared<Schema>();
  for (auto a : arities) {
    std::vector<std::string> symbols;
    for (std::size_t i = 0; i < a; ++i) symbols.push_back("c" + std::to_string(i));
    s->features.push_back(dtel::FeatureDescriptor::categorical(symbols));
  }
  s->num_classes = classes;
  return s;
}

inline Chunk chunk_of(std::shared_ptr<const Schema> schema, std::vector<Instance> instances, std::size_t index = 0) {
  return Chunk{index, std::move(schema), std::move(instances)};
}

// 1-D numeric chunk from (value, label) pairs.
inline Chunk line(std::vector<std::pair<double, Label>> points, std::size_t classes = 2, std::size_t index = 0) {
  std::vector<Instance> xs;
  for (auto [v, y] : points) xs.push_back({{v}, y});
  return chunk_of(numeric_schema(1, classes), std::move(xs), index);
}

// Random schema with 1-4 features, a mix of numeric and small categorical.
inline std::shared_ptr<const Schema> random_schema(dtel::SeededRng& rng, std::size_t classes) {
  auto s = std::make_shared<Schema>();
  const std::size_t nf = 1 + rng.below(4);
  for (std::size_t f = 0; f < nf; ++f) {
    if (rng.uniform() < 0.4) {
      // Mostly small domains; occasionally one beyond the exhaustive limit.
      const std::size_t arity = rng.uniform() < 0.15 ? 8 : 2 + rng.below(4);
      std::vector<std::string> symbols;
      for (std::size_t i = 0; i < arity; ++i) symbols.push_back("v" + std::to_string(i));
      s->features.push_back(dtel::FeatureDescriptor::categorical(symbols));
    } else {
      s->features.push_back(dtel::FeatureDescriptor::numeric());
    }
  }
  s->num_classes = classes;
  return s;
}

// Random feature vector. Numeric values sit on a coarse grid so that equal
// values (and hence threshold ties) show up often.
inline std::vector<double> random_values(const Schema& schema, dtel::SeededRng& rng, bool coarse = true) {
  std::vector<double> v;
  for (const auto& fd : schema.features) {
    if (fd.is_categorical())
      v.push_back(static_cast<double>(rng.below(fd.domain.size())));
    else
      v.push_back(coarse ? static_cast<double>(rng.below(7)) * 0.5 : rng.uniform(-3.0, 3.0));
  }
  return v;
}

// Random chunk with labels drawn independently per distinct feature vector,
// so identical vectors always share a label (label-consistent).
inline Chunk random_consistent_chunk(std::shared_ptr<const Schema> schema, std::size_t n, dtel::SeededRng& rng,
                                     std::size_t index = 0, bool coarse = true) {
  std::vector<Instance> xs;
  for (std::size_t i = 0; i < n; ++i) {
    auto values = random_values(*schema, rng, coarse);
    auto it = std::find_if(xs.begin(), xs.end(), [&](const Instance& x) { return x.values == values; });
    const Label y = it != xs.end() ? it->label : static_cast<Label>(rng.below(schema->num_classes));
    xs.push_back({std::move(values), y});
  }
  return chunk_of(std::move(schema), std::move(xs), index);
}

inline bool label_consistent(const Chunk& chunk) {
  for (std::size_t i = 0; i < chunk.size(); ++i)
    for (std::size_t j = i + 1; j < chunk.size(); ++j)
      if (chunk[i].values == chunk[j].values && chunk[i].label != chunk[j].label) return false;
  return true;
}

inline double training_accuracy(const dtel::Tree& tree, const Chunk& chunk) {
  std::size_t ok = 0;
  for (const auto& x : chunk) ok += tree.predict(x) == x.label;
  return static_cast<double>(ok) / static_cast<double>(chunk.size());
}

inline dtel::CorrectnessVector bits(std::vector<bool> b, std::size_t id, std::size_t origin) {
  return dtel::CorrectnessVector{std::move(b), id, origin};
}

inline std::vector<bool> random_bits(std::size_t n, dtel::SeededRng& rng, double p_true = 0.5) {
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rng.uniform() < p_true;
  return b;
}

}  // namespace fixtures

namespace oracle {

using dtel::Chunk;
using dtel::CorrectnessVector;
using dtel::Instance;
using dtel::Label;
using dtel::Schema;

inline double q(const std::vector<bool>& a, const std::vector<bool>& b) {
  double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && b[k]) n11 += 1;
    if (!a[k] && !b[k]) n00 += 1;
    if (a[k] && !b[k]) n10 += 1;
    if (!a[k] && b[k]) n01 += 1;
  }
  const double den = n11 * n00 + n01 * n10;
  if (den == 0) return 0.0;
  return (n11 * n00 - n01 * n10) / den;
}

// Mean over ordered pairs i != j.
inline double div(const std::vector<std::vector<bool>>& vs) {
  double sum = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j) {
        sum += q(vs[i], vs[j]);
        pairs += 1;
      }
  return 1.0 - sum / pairs;
}

// Tries every removal. Among removals whose remainder diversity is within
// `tol` of the best, the oldest origin goes first and the new model last.
inline std::size_t select_removal(const std::vector<CorrectnessVector>& cands, double tol = 1e-12) {
  std::vector<double> d(cands.size());
  for (std::size_t r = 0; r < cands.size(); ++r) {
    std::vector<std::vector<bool>> rest;
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (i != r) rest.push_back(cands[i].bits);
    d[r] = div(rest);
  }
  const double best = *std::max_element(d.begin(), d.end());
  std::optional<std::size_t> pick;
  for (std::size_t r = 0; r < cands.size(); ++r) {
    if (best - d[r] > tol) continue;
    if (!pick) {
      pick = r;
      continue;
    }
    const auto& a = cands[r];
    const auto& b = cands[*pick];
    if (a.is_new()) continue;
    if (b.is_new() || a.origin_chunk_index < b.origin_chunk_index) pick = r;
  }
  return *pick;
}

inline double mse_model(const dtel::Tree& tree, const Chunk& chunk) {
  double s = 0;
  for (const auto& x : chunk) {
    const double p = tree.posterior(x)[x.label];
    s += (1 - p) * (1 - p);
  }
  return s / chunk.size();
}

inline double mse_random(const Chunk& chunk) {
  std::vector<double> count(chunk.schema->num_classes, 0.0);
  for (const auto& x : chunk) count[x.label] += 1;
  double s = 0;
  for (double c : count) {
    const double p = c / chunk.size();
    s += p * (1 - p) * (1 - p);
  }
  return s;
}

inline double weight_adapted(double mse_r, double mse_i, double eps) { return 1 / (mse_r + mse_i + eps); }
inline double weight_new(double mse_r, double eps) { return 1 / (mse_r + eps); }

// Full majority-vote accuracy of a member list, ties to the lowest class.
inline std::size_t vote_correct(const std::vector<std::vector<Label>>& members, const std::vector<Label>& labels,
                                std::size_t classes) {
  std::size_t ok = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    std::vector<int> votes(classes, 0);
    for (const auto& m : members) votes[m[k]]++;
    Label best = 0;
    for (Label c = 1; c < classes; ++c)
      if (votes[c] > votes[best]) best = c;
    ok += best == labels[k];
  }
  return ok;
}

// SEA replacement by brute force: rebuild each candidate ensemble from scratch.
inline std::optional<std::size_t> sea_replacement(const std::vector<std::vector<Label>>& archived,
                                                  const std::vector<Label>& fresh, const std::vector<Label>& labels,
                                                  std::size_t classes) {
  const std::size_t base = vote_correct(archived, labels, classes);
  std::optional<std::size_t> pick;
  std::size_t best = base;
  for (std::size_t i = 0; i < archived.size(); ++i) {
    auto trial = archived;
    trial[i] = fresh;
    const std::size_t c = vote_correct(trial, labels, classes);
    if (c > best) {
      best = c;
      pick = i;
    }
  }
  return pick;
}

// Exhaustive split search. The score of a split is n * weighted child Gini,
// i.e. sum over children of (n_c^2 - sum_y c_y^2) / n_c, compared as exact
// fractions. Returns the winning candidate under the tie rule: lowest
// feature, then lowest threshold, then lowest mask.
struct Split {
  std::size_t feature = 0;
  bool categorical = false;
  double threshold = 0;
  std::uint64_t mask = 0;
  // score = num / den
  long double num = 0;
  long double den = 1;
  std::vector<bool> goes_left;
};

__extension__ using wide = __int128;

struct Frac {
  wide num;
  wide den;
};

inline Frac child_score(const std::vector<std::int64_t>& counts) {
  std::int64_t n = 0;
  std::int64_t sq = 0;
  for (auto c : counts) {
    n += c;
    sq += c * c;
  }
  return {static_cast<wide>(n * n - sq), static_cast<wide>(n)};
}

inline std::optional<Split> best_split(const Schema& schema, const std::vector<const Instance*>& xs) {
  std::optional<Split> best;
  std::optional<Frac> best_score;
  auto consider = [&](Split cand) {
    std::vector<std::int64_t> l(schema.num_classes, 0), r(schema.num_classes, 0);
    std::size_t nl = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (cand.goes_left[k]) {
        ++l[xs[k]->label];
        ++nl;
      } else {
        ++r[xs[k]->label];
      }
    }
    if (nl == 0 || nl == xs.size()) return;
    const Frac a = child_score(l);
    const Frac b = child_score(r);
    const Frac total{a.num * b.den + b.num * a.den, a.den * b.den};
    if (best_score && !(total.num * best_score->den < best_score->num * total.den)) return;
    best_score = total;
    best = std::move(cand);
  };

  for (std::size_t f = 0; f < schema.num_features(); ++f) {
    const auto& fd = schema.features[f];
    if (!fd.is_categorical()) {
      std::vector<double> vals;
      for (auto* x : xs) vals.push_back(x->values[f]);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        Split s;
        s.feature = f;
        s.threshold = (vals[i] + vals[i + 1]) / 2;
        for (auto* x : xs) s.goes_left.push_back(x->values[f] <= s.threshold);
        consider(std::move(s));
      }
      continue;
    }
    std::uint64_t present = 0;
    for (auto* x : xs) present |= 1ULL << static_cast<std::uint64_t>(x->values[f]);
    if (fd.domain.size() <= dtel::kExhaustiveSubsetLimit) {
      for (std::uint64_t m = 1; m < (1ULL << fd.domain.size()); ++m) {
        if ((m & ~present) != 0 || m == present) continue;
        Split s;
        s.feature = f;
        s.categorical = true;
        s.mask = m;
        for (auto* x : xs) s.goes_left.push_back((m >> static_cast<std::uint64_t>(x->values[f])) & 1ULL);
        consider(std::move(s));
      }
    } else {
      for (std::uint64_t c = 0; c < fd.domain.size(); ++c) {
        if (!((present >> c) & 1ULL)) continue;
        Split s;
        s.feature = f;
        s.categorical = true;
        s.mask = 1ULL << c;
        for (auto* x : xs) s.goes_left.push_back(static_cast<std::uint64_t>(x->values[f]) == c);
        consider(std::move(s));
      }
    }
  }
  if (best) {
    best->num = static_cast<long double>(best_score->num);
    best->den = static_cast<long double>(best_score->den);
  }
  return best;
}

// Whether the library split routes every sample the same way as the oracle.
inline bool same_partition(const dtel::SplitCandidate& got, const Split& want, const std::vector<const Instance*>& xs) {
  if (got.feature != want.feature) return false;
  dtel::InternalNode node{got.feature, got.test, 0, 0};
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (node.goes_left(*xs[k]) != want.goes_left[k]) return false;
  return true;
}

// Walks `tree` with the samples reaching each node and checks the split
// chosen at every internal node against the exhaustive search.
inline bool tree_matches_oracle(const dtel::Tree& tree, const std::vector<const Instance*>& root_samples) {
  std::function<bool(std::size_t, const std::vector<const Instance*>&)> walk =
      [&](std::size_t i, const std::vector<const Instance*>& xs) {
        const auto& node = tree.node(i);
        if (node.is_leaf()) return true;
        const auto& split = node.internal();
        const auto want = best_split(tree.schema(), xs);
        if (!want) return false;
        dtel::SplitCandidate got{split.feature, split.test, 0.0};
        if (!same_partition(got, *want, xs)) return false;
        std::vector<const Instance*> l, r;
        for (auto* x : xs) (split.goes_left(*x) ? l : r).push_back(x);
        return walk(split.left, l) && walk(split.right, r);
      };
  return walk(0, root_samples);
}

// Walks source and adapted trees together. Wherever the source has a split,
// the adapted tree must carry the same split; source leaves that received no
// instance must be copied verbatim.
inline bool preserves_structure(const dtel::Tree& source, std::size_t s, const dtel::Tree& adapted, std::size_t a,
                         const std::vector<const Instance*>& routed) {
  const auto& sn = source.node(s);
  const auto& an = adapted.node(a);
  if (sn.depth != an.depth) return false;
  if (sn.is_leaf()) {
    if (routed.empty()) return an.is_leaf() && an.leaf().class_counts == sn.leaf().class_counts &&
                               an.leaf().predicted_label == sn.leaf().predicted_label;
    return true;
  }
  if (an.is_leaf()) return false;
  const auto& ss = sn.internal();
  const auto& as = an.internal();
  if (ss.feature != as.feature || ss.test != as.test) return false;
  std::vector<const Instance*> l, r;
  for (auto* x : routed) (ss.goes_left(*x) ? l : r).push_back(x);
  return preserves_structure(source, ss.left, adapted, as.left, l) &&
         preserves_structure(source, ss.right, adapted, as.right, r);
}

}  // namespace oracle

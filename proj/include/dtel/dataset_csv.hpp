#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtel/eval.hpp"
#include "dtel/streams.hpp"

namespace dtel {

// A stream loaded from the dataset CSV format:
//
//   step,role,f0,...,fk,label
//
// role is "train" or "test"; numeric values are decimal text, categorical
// values are symbols, labels are class indices or symbols.
struct Dataset {
  std::shared_ptr<const Schema> schema;
  std::vector<Chunk> train;  // ascending step order
  std::vector<Chunk> test;   // empty, or one chunk per train chunk

  bool has_test() const { return !test.empty(); }
  std::vector<ChunkPair> pairs() const;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

void write_dataset_csv(std::ostream& out, std::span<const ChunkPair> stream);
// Train-only layout for prequential streams.
void write_dataset_csv(std::ostream& out, std::span<const Chunk> chunks);

// Reads the dataset CSV. With `known` the columns are parsed against that
// schema. Without it the schema is inferred: a column is numeric when every
// value parses as a finite number, otherwise categorical with symbols in
// first-seen order; labels that are all non-negative integers keep their
// value as class index, other label sets are indexed in first-seen order.
// Missing values (empty or "?") are rejected. Throws InputError.
Dataset read_dataset_csv(std::istream& in, const Schema* known = nullptr);
Dataset read_dataset_file(const std::string& path, const Schema* known = nullptr);

// Per-step results:  run_id,algorithm,stream,step,accuracy,seconds
// seconds is left empty when `with_timing` is false.
struct ResultRow {
  std::size_t run_id = 0;
  std::string algorithm;
  std::string stream;
  std::size_t step = 0;
  double accuracy = 0.0;
  std::optional<double> seconds;
};

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_csv(std::istream& in);

// Per-cell summaries:  algorithm,stream,mean,std,chunks
void write_summary_csv(std::ostream& out, std::span<const RunResult> runs);

// Writes `contents` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace dtel

#include "dtel/dataset_csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dtel {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

struct RawRow {
  std::size_t line;
  std::uint64_t step;
  bool test;
  std::vector<std::string> values;
  std::string label;
};

void write_instance(std::ostream& out, const Schema& schema, const Instance& inst) {
  for (std::size_t f = 0; f < inst.values.size(); ++f) {
    const auto& fd = schema.features[f];
    if (fd.is_categorical())
      out << fd.domain[static_cast<std::size_t>(inst.values[f])];
    else
      out << format_double(inst.values[f]);
    out << ',';
  }
  out << inst.label << '\n';
}

void write_header(std::ostream& out, const Schema& schema) {
  out << "step,role";
  for (std::size_t f = 0; f < schema.num_features(); ++f) out << ",f" << f;
  out << ",label\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<ChunkPair> Dataset::pairs() const {
  if (!has_test()) throw InputError("dataset has no test rows");
  std::vector<ChunkPair> out;
  out.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) out.push_back({train[i], test[i]});
  return out;
}

void write_dataset_csv(std::ostream& out, std::span<const ChunkPair> stream) {
  if (stream.empty()) return;
  const Schema& schema = *stream.front().train.schema;
  write_header(out, schema);
  for (const auto& pair : stream) {
    for (const auto& inst : pair.train) {
      out << pair.train.index << ",train,";
      write_instance(out, schema, inst);
    }
    for (const auto& inst : pair.test) {
      out << pair.test.index << ",test,";
      write_instance(out, schema, inst);
    }
  }
}

void write_dataset_csv(std::ostream& out, std::span<const Chunk> chunks) {
  if (chunks.empty()) return;
  const Schema& schema = *chunks.front().schema;
  write_header(out, schema);
  for (const auto& chunk : chunks) {
    for (const auto& inst : chunk) {
      out << chunk.index << ",train,";
      write_instance(out, schema, inst);
    }
  }
}

Dataset read_dataset_csv(std::istream& in, const Schema* known) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("dataset is empty");
  const auto header = split_fields(line);
  if (header.size() < 4 || header[0] != "step" || header[1] != "role" || header.back() != "label")
    fail(1, "header must be step,role,<features...>,label");
  const std::size_t num_features = header.size() - 3;
  if (known && known->num_features() != num_features) fail(1, "feature count does not match schema");

  std::vector<RawRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size()) fail(line_no, "expected " + std::to_string(header.size()) + " fields");
    for (const auto& f : fields)
      if (f.empty() || f == "?") fail(line_no, "missing value");
    const auto step = parse_uint(fields[0]);
    if (!step) fail(line_no, "bad step '" + fields[0] + "'");
    if (fields[1] != "train" && fields[1] != "test") fail(line_no, "role must be train or test");
    RawRow row{line_no, *step, fields[1] == "test", {}, fields.back()};
    row.values.assign(fields.begin() + 2, fields.end() - 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("dataset has no rows");

  auto schema = std::make_shared<Schema>();
  std::vector<std::map<std::string, std::size_t>> symbol_index(num_features);
  std::map<std::string, Label> label_index;
  bool integer_labels = true;

  if (known) {
    *schema = *known;
    for (std::size_t f = 0; f < num_features; ++f)
      for (std::size_t c = 0; c < known->features[f].domain.size(); ++c) symbol_index[f][known->features[f].domain[c]] = c;
  } else {
    schema->features.resize(num_features);
    for (std::size_t f = 0; f < num_features; ++f) {
      bool numeric = true;
      for (const auto& r : rows)
        if (!parse_double(r.values[f])) {
          numeric = false;
          break;
        }
      if (numeric) continue;
      auto& fd = schema->features[f];
      fd.kind = FeatureKind::categorical;
      for (const auto& r : rows) {
        if (symbol_index[f].emplace(r.values[f], fd.domain.size()).second) fd.domain.push_back(r.values[f]);
      }
    }
    std::uint64_t max_label = 0;
    std::vector<std::string> label_order;
    for (const auto& r : rows) {
      const auto v = parse_uint(r.label);
      if (!v) integer_labels = false;
      else max_label = std::max(max_label, *v);
      if (label_index.emplace(r.label, static_cast<Label>(label_order.size())).second) label_order.push_back(r.label);
    }
    schema->num_classes = integer_labels ? static_cast<std::size_t>(max_label + 1) : label_order.size();
    schema->validate();
  }

  std::map<std::uint64_t, std::pair<std::vector<Instance>, std::vector<Instance>>> by_step;
  for (const auto& r : rows) {
    Instance inst;
    inst.values.resize(num_features);
    for (std::size_t f = 0; f < num_features; ++f) {
      if (schema->features[f].is_categorical()) {
        auto it = symbol_index[f].find(r.values[f]);
        if (it == symbol_index[f].end()) fail(r.line, "unknown symbol '" + r.values[f] + "'");
        inst.values[f] = static_cast<double>(it->second);
      } else {
        const auto v = parse_double(r.values[f]);
        if (!v) fail(r.line, "bad number '" + r.values[f] + "'");
        inst.values[f] = *v;
      }
    }
    if (known || integer_labels) {
      const auto v = parse_uint(r.label);
      if (!v || *v >= schema->num_classes) fail(r.line, "bad label '" + r.label + "'");
      inst.label = static_cast<Label>(*v);
    } else {
      inst.label = label_index.at(r.label);
    }
    auto& slot = by_step[r.step];
    (r.test ? slot.second : slot.first).push_back(std::move(inst));
  }

  Dataset ds;
  ds.schema = schema;
  bool any_test = false;
  for (const auto& [step, parts] : by_step) any_test = any_test || !parts.second.empty();
  for (auto& [step, parts] : by_step) {
    if (parts.first.empty()) throw InputError("step " + std::to_string(step) + " has no train rows");
    if (any_test && parts.second.empty()) throw InputError("step " + std::to_string(step) + " has no test rows");
    ds.train.push_back(Chunk{static_cast<std::size_t>(step), schema, std::move(parts.first)});
    if (any_test) ds.test.push_back(Chunk{static_cast<std::size_t>(step), schema, std::move(parts.second)});
  }
  return ds;
}

Dataset read_dataset_file(const std::string& path, const Schema* known) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_dataset_csv(in, known);
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "run_id,algorithm,stream,step,accuracy,seconds\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.algorithm << ',' << r.stream << ',' << r.step << ',' << format_double(r.accuracy)
        << ',';
    if (r.seconds) out << format_double(*r.seconds);
    out << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_fields(line).size() != 6) throw InputError("results file has a bad header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 6) fail(line_no, "expected 6 fields");
    const auto run_id = parse_uint(f[0]);
    const auto step = parse_uint(f[3]);
    const auto acc = parse_double(f[4]);
    if (!run_id || !step || !acc) fail(line_no, "malformed result row");
    ResultRow r{static_cast<std::size_t>(*run_id), f[1], f[2], static_cast<std::size_t>(*step), *acc, std::nullopt};
    if (!f[5].empty()) r.seconds = parse_double(f[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, std::span<const RunResult> runs) {
  out << "algorithm,stream,mean,std,chunks\n";
  for (const auto& run : runs) {
    const auto s = summarize(run);
    out << run.algorithm << ',' << run.stream << ',' << format_double(s.mean) << ',' << format_double(s.stddev) << ','
        << run.per_chunk_accuracy.size() << '\n';
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dtel

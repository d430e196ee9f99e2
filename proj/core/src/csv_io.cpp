#include "eegdep/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "eegdep/errors.hpp"

namespace eegdep {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double_field(const std::string& field, std::size_t row, std::size_t col) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ", column " +
                                           std::to_string(col) + ": not a number: '" + field +
                                           "'");
  }
  return value;
}

long parse_int_field(const std::string& field, std::size_t row, std::size_t col) {
  long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ", column " +
                                           std::to_string(col) + ": not an integer: '" + field +
                                           "'");
  }
  return value;
}

Label parse_label_field(const std::string& field, std::size_t row) {
  try {
    return parse_label(field);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ", column 2: " +
                                           e.raw_message());
  }
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  return out;
}

// getline that tolerates CRLF input.
bool next_line(std::ifstream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  validate_dataset(ds);
  const auto& layout = *ds.layout;

  std::vector<const Epoch*> order;
  order.reserve(ds.epochs.size());
  for (const auto& e : ds.epochs) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Epoch* a, const Epoch* b) {
    if (a->subject_id != b->subject_id) return a->subject_id < b->subject_id;
    return a->epoch_index < b->epoch_index;
  });

  auto out = open_for_write(path);
  out << "subject_id,label,epoch_index,sample_index";
  for (const auto& name : layout.names()) out << ',' << name;
  out << '\n';
  for (const Epoch* e : order) {
    const std::size_t len = e->n_samples();
    for (std::size_t t = 0; t < len; ++t) {
      out << e->subject_id << ',' << label_name(e->label) << ',' << e->epoch_index << ',' << t;
      for (std::size_t ch = 0; ch < e->n_channels(); ++ch) {
        out << ',' << format_double(e->samples[ch][t]);
      }
      out << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

Dataset load_epochs_csv(const std::string& path, double fs) {
  auto in = open_for_read(path);
  const auto& layout = ChannelLayout::canonical16();

  std::string line;
  if (!next_line(in, line)) throw Error(ErrorCode::SchemaError, "empty file: " + path);
  {
    std::string expected = "subject_id,label,epoch_index,sample_index";
    for (const auto& name : layout.names()) expected += "," + name;
    if (line != expected) {
      throw Error(ErrorCode::SchemaError, "epoch CSV header mismatch in " + path);
    }
  }
  const std::size_t n_fields = 4 + layout.size();

  Dataset ds;
  ds.layout = &layout;
  ds.provenance = {ProvenanceKind::File, path, 0, 0};

  std::unordered_set<std::string> closed_subjects;
  Epoch* cur = nullptr;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != n_fields) {
      const std::string where =
          fields.size() > 3 ? "epoch " + fields[0] + "/" + fields[2] : "row " + std::to_string(row);
      throw Error(ErrorCode::SchemaError,
                  where + " has " +
                      std::to_string(fields.size() > 4 ? fields.size() - 4 : 0) +
                      " channel columns, expected " + std::to_string(layout.size()));
    }
    const std::string& subject = fields[0];
    const Label label = parse_label_field(fields[1], row);
    const long epoch_index = parse_int_field(fields[2], row, 3);
    const long sample_index = parse_int_field(fields[3], row, 4);

    const bool new_epoch = cur == nullptr || cur->subject_id != subject ||
                           cur->epoch_index != static_cast<int>(epoch_index);
    if (new_epoch) {
      if (cur != nullptr && cur->subject_id != subject) {
        closed_subjects.insert(cur->subject_id);
        if (closed_subjects.count(subject)) {
          throw Error(ErrorCode::SchemaError,
                      "subject " + subject + " reappears at row " + std::to_string(row) +
                          "; rows must be grouped by subject");
        }
      }
      if (cur != nullptr && cur->subject_id == subject &&
          static_cast<int>(epoch_index) <= cur->epoch_index) {
        throw Error(ErrorCode::SchemaError, "epoch_index not increasing at row " +
                                                std::to_string(row) + " for subject " + subject);
      }
      if (sample_index != 0) {
        throw Error(ErrorCode::SchemaError, "epoch " + subject + "/" +
                                                std::to_string(epoch_index) +
                                                " does not start at sample_index 0");
      }
      ds.epochs.emplace_back();
      cur = &ds.epochs.back();
      cur->subject_id = subject;
      cur->label = label;
      cur->fs = fs;
      cur->epoch_index = static_cast<int>(epoch_index);
      cur->samples.assign(layout.size(), {});
    } else {
      if (cur->label != label) {
        throw Error(ErrorCode::SchemaError,
                    "label changes inside epoch " + subject + "/" + std::to_string(epoch_index));
      }
      if (sample_index != static_cast<long>(cur->samples[0].size())) {
        throw Error(ErrorCode::SchemaError, "non-consecutive sample_index at row " +
                                                std::to_string(row) + " in epoch " + subject +
                                                "/" + std::to_string(epoch_index));
      }
    }
    for (std::size_t ch = 0; ch < layout.size(); ++ch) {
      cur->samples[ch].push_back(parse_double_field(fields[4 + ch], row, 5 + ch));
    }
  }
  if (ds.epochs.empty()) {
    throw Error(ErrorCode::InsufficientData, "no epoch rows in " + path);
  }

  const std::size_t len = ds.epochs.front().n_samples();
  for (const auto& e : ds.epochs) {
    if (e.n_samples() != len) {
      throw Error(ErrorCode::SchemaError, "epoch " + e.subject_id + "/" +
                                              std::to_string(e.epoch_index) + " has " +
                                              std::to_string(e.n_samples()) +
                                              " samples, expected " + std::to_string(len));
    }
  }
  validate_dataset(ds);
  return ds;
}

void write_feature_csv(const FeatureTable& table, const std::string& path) {
  auto out = open_for_write(path);
  out << "subject_id,label,epoch_index";
  for (const auto& name : table.feature_names) out << ',' << name;
  out << '\n';
  for (Eigen::Index r = 0; r < table.n_rows(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    out << table.subject_ids[i] << ',' << label_name(table.labels[i]) << ','
        << table.epoch_indices[i];
    for (Eigen::Index c = 0; c < table.n_features(); ++c) {
      out << ',' << format_double(table.values(r, c));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

FeatureTable load_feature_csv(const std::string& path) {
  auto in = open_for_read(path);

  std::string line;
  if (!next_line(in, line)) throw Error(ErrorCode::SchemaError, "empty file: " + path);
  auto header = split_line(line);
  if (header.size() < 4 || header[0] != "subject_id" || header[1] != "label" ||
      header[2] != "epoch_index") {
    throw Error(ErrorCode::SchemaError, "feature CSV header mismatch in " + path);
  }

  FeatureTable table;
  table.feature_names.assign(header.begin() + 3, header.end());
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : table.feature_names) {
      if (!seen.insert(name).second) {
        throw Error(ErrorCode::SchemaError, "duplicate feature column: " + name);
      }
    }
  }
  const std::size_t n_fields = header.size();

  std::vector<std::vector<double>> rows;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != n_fields) {
      throw Error(ErrorCode::SchemaError, "row " + std::to_string(row) + " has " +
                                              std::to_string(fields.size()) +
                                              " fields, expected " + std::to_string(n_fields));
    }
    table.subject_ids.push_back(fields[0]);
    table.labels.push_back(parse_label_field(fields[1], row));
    table.epoch_indices.push_back(static_cast<int>(parse_int_field(fields[2], row, 3)));
    std::vector<double> values(n_fields - 3);
    for (std::size_t c = 3; c < n_fields; ++c) {
      values[c - 3] = parse_double_field(fields[c], row, c + 1);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::InsufficientData, "no feature rows in " + path);

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(n_fields - 3));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c + 3 < n_fields; ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

void write_connectivity_csv(const Eigen::MatrixXd& matrix, const ChannelLayout& layout,
                            const std::string& path) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  if (matrix.rows() != n || matrix.cols() != n) {
    throw Error(ErrorCode::ArityMismatch, "connectivity matrix shape does not match layout");
  }
  auto out = open_for_write(path);
  out << "channel";
  for (const auto& name : layout.names()) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    out << layout.names()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_double(matrix(i, j));
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace eegdep

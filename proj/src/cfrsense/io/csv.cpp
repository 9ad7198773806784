#include "cfrsense/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cfrsense/error.hpp"

namespace cfrsense::io {

namespace {

std::string format_int(long v) { return std::to_string(v); }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

long parse_int(const std::string& field, std::size_t line_no, const std::string& name) {
  if (field.empty()) throw parse_error(name + ": empty integer field", line_no);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(field.c_str(), &end, 10);
  if (errno != 0 || end != field.c_str() + field.size())
    throw parse_error(name + ": bad integer '" + field + "'", line_no);
  if (v < 0) throw parse_error(name + ": negative id '" + field + "'", line_no);
  return v;
}

double parse_real(const std::string& field, std::size_t line_no, const std::string& name) {
  if (field.empty()) throw parse_error(name + ": empty numeric field", line_no);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size())
    throw parse_error(name + ": bad number '" + field + "'", line_no);
  if (!std::isfinite(v))
    throw data_error(name + ": non-finite value '" + field + "' (line " +
                     std::to_string(line_no) + ")");
  return v;
}

Label parse_label(const std::string& field, std::size_t line_no, const std::string& name) {
  if (field == "hydrated") return Label::hydrated;
  if (field == "dehydrated") return Label::dehydrated;
  throw parse_error(name + ": unknown label '" + field + "'", line_no);
}

void ensure_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw data_error("refusing to write non-finite " + what);
}

// Reads one line; strips a trailing '\r' so CRLF inputs still parse.
bool get_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string cfr_csv_header(std::size_t n_subcarriers) {
  std::string h = "subject_id,session_id,frame_index,label";
  char buf[24];
  for (std::size_t k = 0; k < n_subcarriers; ++k) {
    std::snprintf(buf, sizeof(buf), ",h%02zu_re,h%02zu_im", k, k);
    h += buf;
  }
  return h;
}

std::string examples_csv_header(std::size_t n_features) {
  std::string h = "subject_id,session_id,window_index,label";
  char buf[12];
  for (std::size_t k = 0; k < n_features; ++k) {
    std::snprintf(buf, sizeof(buf), ",f%02zu", k);
    h += buf;
  }
  return h;
}

CfrCsvWriter::CfrCsvWriter(std::ostream& out, std::size_t n_subcarriers)
    : out_(out), n_subcarriers_(n_subcarriers) {
  out_ << cfr_csv_header(n_subcarriers_) << '\n';
}

void CfrCsvWriter::write(const CfrSnapshot& s) {
  if (s.h.size() != n_subcarriers_)
    throw data_error("cfr csv: snapshot width " + std::to_string(s.h.size()) +
                     " does not match header width " + std::to_string(n_subcarriers_));
  std::string row = format_int(s.subject_id);
  row += ',';
  row += format_int(s.session_id);
  row += ',';
  row += format_int(s.frame_index);
  row += ',';
  row += label_name(s.label);
  for (const auto& c : s.h) {
    ensure_finite(c.real(), "CFR value");
    ensure_finite(c.imag(), "CFR value");
    row += ',';
    row += format_g9(c.real());
    row += ',';
    row += format_g9(c.imag());
  }
  row += '\n';
  out_ << row;
}

void write_cfr_csv(const std::vector<CfrSnapshot>& snapshots, std::ostream& out) {
  const std::size_t width = snapshots.empty() ? 64 : snapshots.front().h.size();
  CfrCsvWriter w(out, width);
  for (const auto& s : snapshots) w.write(s);
}

void write_cfr_csv(const std::vector<CfrSnapshot>& snapshots, const std::string& path) {
  auto out = open_out(path);
  write_cfr_csv(snapshots, out);
  if (!out) throw data_error("failed writing '" + path + "'");
}

std::vector<CfrSnapshot> read_cfr_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!get_line(in, line)) throw parse_error(name + ": missing header", 1);

  const std::size_t n_cols = split_fields(line).size();
  if (n_cols < 6 || (n_cols - 4) % 2 != 0)
    throw parse_error(name + ": malformed header", 1);
  const std::size_t n_sub = (n_cols - 4) / 2;
  if (line != cfr_csv_header(n_sub)) throw parse_error(name + ": malformed header", 1);

  std::vector<CfrSnapshot> out;
  std::size_t line_no = 1;
  while (get_line(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto fields = split_fields(line);
    if (fields.size() != n_cols)
      throw parse_error(name + ": expected " + std::to_string(n_cols) + " fields, got " +
                            std::to_string(fields.size()),
                        line_no);
    CfrSnapshot s;
    s.subject_id = static_cast<std::uint32_t>(parse_int(fields[0], line_no, name));
    s.session_id = static_cast<std::uint32_t>(parse_int(fields[1], line_no, name));
    s.frame_index = static_cast<std::uint64_t>(parse_int(fields[2], line_no, name));
    s.label = parse_label(fields[3], line_no, name);
    s.h.resize(n_sub);
    for (std::size_t k = 0; k < n_sub; ++k)
      s.h[k] = {parse_real(fields[4 + 2 * k], line_no, name),
                parse_real(fields[5 + 2 * k], line_no, name)};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CfrSnapshot> read_cfr_csv(const std::string& path) {
  auto in = open_in(path);
  return read_cfr_csv(in, path);
}

void write_examples_csv(const std::vector<LabeledExample>& examples, std::ostream& out) {
  const std::size_t width = examples.empty() ? 64 : examples.front().features.size();
  out << examples_csv_header(width) << '\n';
  for (const auto& ex : examples) {
    if (ex.features.size() != width)
      throw data_error("examples csv: mixed feature lengths");
    std::string row = format_int(ex.subject_id);
    row += ',';
    row += format_int(ex.session_id);
    row += ',';
    row += format_int(ex.window_index);
    row += ',';
    row += label_name(ex.label);
    for (double f : ex.features) {
      ensure_finite(f, "feature");
      row += ',';
      row += format_g9(f);
    }
    row += '\n';
    out << row;
  }
}

void write_examples_csv(const std::vector<LabeledExample>& examples, const std::string& path) {
  auto out = open_out(path);
  write_examples_csv(examples, out);
  if (!out) throw data_error("failed writing '" + path + "'");
}

std::vector<LabeledExample> read_examples_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!get_line(in, line)) throw parse_error(name + ": missing header", 1);

  const std::size_t n_cols = split_fields(line).size();
  if (n_cols < 5) throw parse_error(name + ": malformed header", 1);
  const std::size_t n_feat = n_cols - 4;
  if (line != examples_csv_header(n_feat)) throw parse_error(name + ": malformed header", 1);

  std::vector<LabeledExample> out;
  std::size_t line_no = 1;
  while (get_line(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto fields = split_fields(line);
    if (fields.size() != n_cols)
      throw parse_error(name + ": expected " + std::to_string(n_cols) + " fields, got " +
                            std::to_string(fields.size()),
                        line_no);
    LabeledExample ex;
    ex.subject_id = static_cast<int>(parse_int(fields[0], line_no, name));
    ex.session_id = static_cast<int>(parse_int(fields[1], line_no, name));
    ex.window_index = static_cast<int>(parse_int(fields[2], line_no, name));
    ex.label = parse_label(fields[3], line_no, name);
    ex.features.resize(n_feat);
    for (std::size_t k = 0; k < n_feat; ++k)
      ex.features[k] = parse_real(fields[4 + k], line_no, name);
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> read_examples_csv(const std::string& path) {
  auto in = open_in(path);
  return read_examples_csv(in, path);
}

}  // namespace cfrsense::io

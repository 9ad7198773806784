#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cfrsense/cfr.hpp"
#include "cfrsense/preprocess.hpp"

namespace cfrsense::io {

// Shortest of %.9g: nine significant digits, enough to restore doubles well
// below every tolerance used downstream.
std::string format_g9(double v);

std::string cfr_csv_header(std::size_t n_subcarriers);
std::string examples_csv_header(std::size_t n_features);

// Streaming row-by-row writer so multi-minute simulations never hold a whole
// session in memory. Header goes out on construction.
class CfrCsvWriter {
 public:
  CfrCsvWriter(std::ostream& out, std::size_t n_subcarriers);
  void write(const CfrSnapshot& snapshot);

 private:
  std::ostream& out_;
  std::size_t n_subcarriers_;
};

void write_cfr_csv(const std::vector<CfrSnapshot>& snapshots, std::ostream& out);
void write_cfr_csv(const std::vector<CfrSnapshot>& snapshots, const std::string& path);
std::vector<CfrSnapshot> read_cfr_csv(std::istream& in, const std::string& name = "<stream>");
std::vector<CfrSnapshot> read_cfr_csv(const std::string& path);

void write_examples_csv(const std::vector<LabeledExample>& examples, std::ostream& out);
void write_examples_csv(const std::vector<LabeledExample>& examples, const std::string& path);
std::vector<LabeledExample> read_examples_csv(std::istream& in,
                                              const std::string& name = "<stream>");
std::vector<LabeledExample> read_examples_csv(const std::string& path);

}  // namespace cfrsense::io

#ifndef HOMFLOW_IO_HPP
#define HOMFLOW_IO_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace homflow {

// RFC-4180-style CSV with floats fixed to 17 significant digits so reruns
// are byte-identical.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_row_values(const std::vector<double>& values);
  std::string str() const;
  void write_file(const std::string& path) const;
  static std::string format_double(double v);
  static std::string quote(const std::string& cell);

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// worker pool over independent indices; results land in input order
void parallel_for_ordered(long count, const std::function<void(long)>& body);
int configured_threads();

} // namespace homflow

#endif

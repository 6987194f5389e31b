#pragma once

#include <string>
#include <vector>

namespace slicecount::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool points = false;  // markers instead of a polyline
};

// Log-log chart; nonpositive values are skipped. Returns false if the file
// could not be written.
bool write_loglog_svg(const std::string& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series);

}  // namespace slicecount::cli
